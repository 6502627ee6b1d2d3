#include <gtest/gtest.h>

#include "papsim/pap_control.hpp"

using namespace papsim;

TEST (Bda, BlocksBadGroupUpToRetryLimitMinusOne)
{
  BdaState bda (7);
  for (int i = 0; i < 6; ++i)
    EXPECT_EQ (bda.on_uplink_data (1, ChannelStatus::Bad), AckDecision::Block) << i;
  EXPECT_EQ (bda.blocked_streak (1), 6);
  EXPECT_EQ (bda.on_uplink_data (1, ChannelStatus::Bad), AckDecision::Ack);
  EXPECT_EQ (bda.blocked_streak (1), 0);
  EXPECT_EQ (bda.peak_streak (), 6);
}

TEST (Bda, StreakOfFiveBlocksOnceMore)
{
  BdaState bda (7);
  for (int i = 0; i < 5; ++i)
    bda.on_uplink_data (1, ChannelStatus::Bad);
  EXPECT_EQ (bda.on_uplink_data (1, ChannelStatus::Bad), AckDecision::Block);
  EXPECT_EQ (bda.blocked_streak (1), 6);
}

TEST (Bda, GoodGroupIsAlwaysAcked)
{
  BdaState bda;
  for (int i = 0; i < 20; ++i)
    EXPECT_EQ (bda.on_uplink_data (3, ChannelStatus::Good), AckDecision::Ack);
  EXPECT_EQ (bda.blocked_total (), 0u);
}

TEST (Bda, ApTransmissionReleasesBlockedSources)
{
  BdaState bda;
  bda.on_uplink_data (1, ChannelStatus::Bad);
  bda.on_uplink_data (2, ChannelStatus::Bad);
  bda.on_ap_transmit ();
  EXPECT_TRUE (bda.released (1));
  EXPECT_TRUE (bda.released (2));
  EXPECT_EQ (bda.on_uplink_data (1, ChannelStatus::Bad), AckDecision::Ack);
  EXPECT_FALSE (bda.released (1));
  // Next frame of that source starts a fresh streak.
  EXPECT_EQ (bda.on_uplink_data (1, ChannelStatus::Bad), AckDecision::Block);
}

TEST (Bda, LastAllowedAttemptIsAcked)
{
  BdaState bda (7);
  EXPECT_EQ (bda.on_uplink_data (1, ChannelStatus::Bad, 6), AckDecision::Ack);
  EXPECT_EQ (bda.on_uplink_data (1, ChannelStatus::Bad, 5), AckDecision::Block);
}

// Any attempt sequence of one frame (retry_count 0..6) gets acked by the
// 7th attempt, whatever the interleaving of AP transmissions.
TEST (Bda, NeverCausesRetryLimitDrop)
{
  RngStream rng (17);
  BdaState bda (7);
  for (int frame = 0; frame < 5000; ++frame)
    {
      bool acked = false;
      for (int retry = 0; retry < 7 && !acked; ++retry)
        {
          if (rng () % 3 == 0)
            bda.on_ap_transmit ();
          acked = bda.on_uplink_data (1, ChannelStatus::Bad, retry) == AckDecision::Ack;
          ASSERT_LE (bda.blocked_streak (1), 6);
        }
      ASSERT_TRUE (acked) << "frame " << frame;
    }
}

TEST (Classifier, OracleKeepsConfiguredLabel)
{
  ChannelStatusMap m (ClassifierMode::Oracle);
  m.configure (4, ChannelStatus::Bad);
  EXPECT_EQ (m.status (4), ChannelStatus::Bad);
  m.classify_update (4, DeliveryOutcome::Delivered);
  EXPECT_EQ (m.status (4), ChannelStatus::Bad);
  EXPECT_EQ (m.status (99), ChannelStatus::Good);
}

TEST (Classifier, EstimatorFlipsAfterThresholds)
{
  ChannelStatusMap m (ClassifierMode::Estimator, EstimatorThresholds{3, 2});
  m.configure (4, ChannelStatus::Bad);
  EXPECT_EQ (m.status (4), ChannelStatus::Good);
  m.classify_update (4, DeliveryOutcome::ChannelLoss);
  m.classify_update (4, DeliveryOutcome::ChannelLoss);
  EXPECT_EQ (m.status (4), ChannelStatus::Good);
  m.classify_update (4, DeliveryOutcome::Collided); // ignored
  m.classify_update (4, DeliveryOutcome::ChannelLoss);
  EXPECT_EQ (m.status (4), ChannelStatus::Bad);
  m.classify_update (4, DeliveryOutcome::Delivered);
  EXPECT_EQ (m.status (4), ChannelStatus::Bad);
  m.classify_update (4, DeliveryOutcome::Delivered);
  EXPECT_EQ (m.status (4), ChannelStatus::Good);
}

TEST (Classifier, CollisionsAloneNeverMarkBad)
{
  ChannelStatusMap m (ClassifierMode::Estimator);
  for (int i = 0; i < 50; ++i)
    m.classify_update (2, DeliveryOutcome::Collided);
  EXPECT_EQ (m.status (2), ChannelStatus::Good);
}
