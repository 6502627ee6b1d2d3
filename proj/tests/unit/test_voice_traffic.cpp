#include <gtest/gtest.h>

#include <cmath>

#include "papsim/voice_traffic.hpp"

using namespace papsim;

TEST (VoiceCodec, PayloadSizes)
{
  VoiceCodec c;
  EXPECT_EQ (c.payload_bytes (), 80);
  EXPECT_EQ (c.sdu_bytes (), 120);
  c.framing_interval = SimTime::from_ms (40);
  EXPECT_EQ (c.payload_bytes (), 160);
  EXPECT_EQ (c.sdu_bytes (), 200);
}

TEST (VoiceCodec, NonIntegralFrameThrows)
{
  VoiceCodec c;
  c.framing_interval = SimTime::from_seconds (0.0015); // 48 bits = 6 bytes: fine
  EXPECT_EQ (c.payload_bytes (), 6);
  c.framing_interval = SimTime::from_seconds (0.0001); // 3.2 bits
  EXPECT_THROW (c.payload_bytes (), NonIntegralPayload);
}

TEST (OnOffSource, OneSecondSpurtEmitsFiftyFrames)
{
  VoiceSession s;
  OnOffVoiceSource src (VoiceCodec{}, s, RngStream (1));
  src.start_spurt (SimTime (), 50);
  int frames = 0;
  SimTime last;
  while (true)
    {
      const VoiceEvent ev = src.next_event ();
      if (ev.kind != VoiceEventKind::EmitFrame)
        {
          EXPECT_EQ (ev.at, SimTime::from_seconds (1));
          break;
        }
      if (frames > 0)
        {
          EXPECT_EQ (ev.at - last, SimTime::from_ms (20));
        }
      last = ev.at;
      ++frames;
      src.advance ();
    }
  EXPECT_EQ (frames, 50);
  src.advance ();
  EXPECT_FALSE (src.on ());
}

namespace {

double
frames_per_second (SimTime fi, std::uint64_t seed, double horizon_s)
{
  VoiceCodec codec;
  codec.framing_interval = fi;
  VoiceSession s;
  OnOffVoiceSource src (codec, s, make_stream (seed, "traffic", {0}));
  src.start (SimTime ());
  const SimTime end = SimTime::from_seconds (horizon_s);
  std::int64_t frames = 0;
  for (VoiceEvent ev = src.next_event (); ev.at < end; ev = src.next_event ())
    {
      frames += ev.kind == VoiceEventKind::EmitFrame;
      src.advance ();
    }
  return static_cast<double> (frames) / horizon_s;
}

} // namespace

// Renewal-reward: rate = activity / FI.
TEST (OnOffSource, LongRunRateMatchesActivity)
{
  for (int fi_ms : {20, 40})
    {
      double sum = 0;
      for (std::uint64_t seed = 1; seed <= 10; ++seed)
        sum += frames_per_second (SimTime::from_ms (fi_ms), seed, 600.0);
      const double expected = 0.8 * 1000.0 / fi_ms;
      EXPECT_NEAR (sum / 10 / expected, 1.0, 0.02) << "fi " << fi_ms;
    }
}

TEST (OnOffSource, SameSeedSameSchedule)
{
  EXPECT_EQ (frames_per_second (SimTime::from_ms (20), 5, 100.0), frames_per_second (SimTime::from_ms (20), 5, 100.0));
  EXPECT_NE (frames_per_second (SimTime::from_ms (20), 5, 100.0), frames_per_second (SimTime::from_ms (20), 6, 100.0));
}
