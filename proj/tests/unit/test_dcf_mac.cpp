#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "papsim/dcf_mac.hpp"

using namespace papsim;

namespace {

constexpr int kSdu = 120;

Frame
sdu_to (StationId dst, SimTime born, int session = 0, std::uint32_t seq = 0)
{
  Frame f;
  f.dst = dst;
  f.session = session;
  f.sdu_seq = seq;
  f.sdu_bytes = kSdu;
  f.born_at = born;
  return f;
}

struct Net
{
  explicit Net (MacConfig cfg = {}, LossModel loss = {}, std::uint64_t seed = 1) : net (sched, cfg, loss, seed) {}
  Scheduler sched;
  DcfNetwork net;
};

MacConfig
no_backoff ()
{
  MacConfig c;
  c.cw_min = 1;
  c.cw_max = 1;
  return c;
}

} // namespace

TEST (MacConfig, DataDurationAt11Mbps)
{
  MacConfig c;
  EXPECT_EQ (c.data_duration (120).ns (), 192000 + 113455);
  EXPECT_EQ (c.ack_duration ().ns (), 192000 + 56000);
}

// One frame, empty network, zero backoff: DIFS, DATA, then propagation.
TEST (Dcf, SingleHopDelayIsClosedForm)
{
  Net n (no_backoff ());
  auto &a = n.net.add_station (StationRole::Terminal);
  auto &b = n.net.add_station (StationRole::Terminal);
  SimTime got;
  b.hooks ().deliver_up = [&] (const Frame &, SimTime at) { got = at; };
  a.enqueue_sdu (sdu_to (b.id (), SimTime ()));
  n.sched.run_until (SimTime::from_ms (10));
  const MacConfig &c = n.net.config ();
  EXPECT_EQ (got, c.difs + c.data_duration (kSdu) + c.prop_delay);
  EXPECT_EQ (a.counters ().successes, 1u);
  EXPECT_EQ (a.counters ().stray_acks, 0u);
}

// Relay through an AP: the second hop waits for the first hop's ACK and a
// fresh DIFS.
TEST (Dcf, TwoHopDelayIsClosedForm)
{
  Net n (no_backoff ());
  auto &ap = n.net.add_station (StationRole::AccessPoint);
  auto &src = n.net.add_station (StationRole::Terminal);
  auto &dst = n.net.add_station (StationRole::Terminal);
  ap.hooks ().deliver_up = [&] (const Frame &f, SimTime) {
    Frame r = f;
    r.dst = dst.id ();
    ap.enqueue_sdu (r);
  };
  SimTime got;
  dst.hooks ().deliver_up = [&] (const Frame &, SimTime at) { got = at; };
  src.enqueue_sdu (sdu_to (ap.id (), SimTime ()));
  n.sched.run_until (SimTime::from_ms (10));
  const MacConfig &c = n.net.config ();
  const SimTime d = c.data_duration (kSdu) + c.prop_delay;
  const SimTime a = c.ack_duration () + c.prop_delay;
  EXPECT_EQ (got, c.difs + d + c.sifs + a + c.difs + d);
}

TEST (Dcf, QueueIsFifo)
{
  Net n;
  auto &a = n.net.add_station (StationRole::Terminal);
  auto &b = n.net.add_station (StationRole::Terminal);
  std::vector<std::uint32_t> order;
  b.hooks ().deliver_up = [&] (const Frame &f, SimTime) { order.push_back (f.sdu_seq); };
  for (std::uint32_t i = 0; i < 50; ++i)
    a.enqueue_sdu (sdu_to (b.id (), SimTime (), 0, i));
  n.sched.run_until (SimTime::from_seconds (1));
  ASSERT_EQ (order.size (), 50u);
  for (std::uint32_t i = 0; i < 50; ++i)
    EXPECT_EQ (order[i], i);
}

TEST (Dcf, LosslessFramesAreNeverDropped)
{
  Net n;
  auto &a = n.net.add_station (StationRole::Terminal);
  auto &b = n.net.add_station (StationRole::Terminal);
  for (int i = 0; i < 10000; ++i)
    a.enqueue_sdu (sdu_to (b.id (), SimTime ()));
  n.sched.run_until (SimTime::from_seconds (60));
  EXPECT_EQ (a.counters ().successes, 10000u);
  EXPECT_EQ (a.counters ().drops, 0u);
  EXPECT_TRUE (a.queue ().empty ());
}

TEST (Dcf, DeadLinkDropsAfterSevenAttempts)
{
  LossModel loss;
  loss.set_flr (1, 1.0);
  Net n ({}, loss);
  auto &a = n.net.add_station (StationRole::Terminal);
  auto &b = n.net.add_station (StationRole::Terminal);
  std::vector<TraceRecord> drops;
  n.net.add_trace_sink ([&] (const TraceRecord &r) {
    if (r.kind == TraceKind::Drop)
      drops.push_back (r);
  });
  a.enqueue_sdu (sdu_to (b.id (), SimTime ()));
  n.sched.run_until (SimTime::from_seconds (1));
  EXPECT_EQ (a.counters ().attempts, 7u);
  ASSERT_EQ (drops.size (), 1u);
  EXPECT_EQ (drops[0].frame.retry_count, 6);
  EXPECT_EQ (a.policy ().cw (), 31); // reset for the next head
}

// A frame stuck on a dead link holds back the good frame queued behind it.
TEST (Dcf, HeadOfLineBlocking)
{
  LossModel loss;
  loss.set_flr (1, 1.0);
  Net n ({}, loss);
  auto &ap = n.net.add_station (StationRole::AccessPoint);
  auto &bad = n.net.add_station (StationRole::Terminal);
  auto &good = n.net.add_station (StationRole::Terminal);
  SimTime good_rx;
  good.hooks ().deliver_up = [&] (const Frame &, SimTime at) { good_rx = at; };
  SimTime bad_drop;
  n.net.add_trace_sink ([&] (const TraceRecord &r) {
    if (r.kind == TraceKind::Drop)
      bad_drop = r.at;
  });
  (void) bad;
  ap.enqueue_sdu (sdu_to (1, SimTime ()));
  ap.enqueue_sdu (sdu_to (good.id (), SimTime ()));
  n.sched.run_until (SimTime::from_seconds (1));
  ASSERT_GT (bad_drop, SimTime ());
  EXPECT_GT (good_rx, bad_drop);
  // Seven failed cycles cost at least seven DATA times plus timeouts.
  const MacConfig &c = n.net.config ();
  EXPECT_GE (bad_drop, (c.data_duration (kSdu) + c.ack_timeout ()) * 7);
}

TEST (Dcf, DuplicateDataIsAckedButNotDeliveredTwice)
{
  Net n;
  auto &a = n.net.add_station (StationRole::Terminal);
  auto &b = n.net.add_station (StationRole::Terminal);
  int up = 0;
  b.hooks ().deliver_up = [&] (const Frame &, SimTime) { ++up; };
  Frame f = sdu_to (b.id (), SimTime ());
  f.kind = FrameKind::Data;
  f.src = a.id ();
  f.seq = 7;
  b.on_data_received (f, SimTime ());
  n.sched.run_until (SimTime::from_ms (1));
  b.on_data_received (f, n.sched.now ());
  n.sched.run_until (SimTime::from_ms (2));
  EXPECT_EQ (up, 1);
  EXPECT_EQ (b.counters ().duplicates, 1u);
}

TEST (Dcf, BlockedDataGetsNoAck)
{
  Net n;
  auto &a = n.net.add_station (StationRole::Terminal);
  auto &b = n.net.add_station (StationRole::Terminal);
  b.hooks ().ack_decision = [] (const Frame &) { return AckDecision::Block; };
  a.enqueue_sdu (sdu_to (b.id (), SimTime ()));
  n.sched.run_until (SimTime::from_seconds (1));
  EXPECT_EQ (a.counters ().attempts, 7u);
  EXPECT_EQ (a.counters ().drops, 1u);
  EXPECT_EQ (b.counters ().blocked_rx, 7u);
}

namespace {

struct SaturationRun
{
  double frames_per_s = 0;
  std::uint64_t violations = 0;
  std::uint64_t stray = 0;
};

SaturationRun
saturate (int stations, double seconds, std::uint64_t seed)
{
  Net n ({}, {}, seed);
  auto &sink = n.net.add_station (StationRole::Terminal);
  std::uint64_t delivered = 0;
  sink.hooks ().deliver_up = [&] (const Frame &, SimTime) { ++delivered; };
  std::vector<DcfStation *> tx;
  for (int i = 0; i < stations; ++i)
    {
      auto &s = n.net.add_station (StationRole::Terminal);
      s.hooks ().head_resolved = [&s, &sink] (const Frame &, bool) { s.enqueue_sdu (sdu_to (sink.id (), SimTime ())); };
      tx.push_back (&s);
    }
  for (auto *s : tx)
    for (int k = 0; k < 2; ++k)
      s->enqueue_sdu (sdu_to (sink.id (), SimTime ()));
  n.sched.run_until (SimTime::from_seconds (seconds));
  SaturationRun r;
  r.frames_per_s = static_cast<double> (delivered) / seconds;
  r.violations = n.net.carrier_sense_violations ();
  for (auto *s : tx)
    r.stray += s->counters ().stray_acks;
  return r;
}

// Saturation fixed point for n stations with a finite retry limit; the
// windows are the numbers of distinct backoff values per stage.
double
fixed_point_frames_per_s (int n, const MacConfig &c)
{
  std::vector<double> w;
  int cw = c.cw_min;
  for (int i = 0; i < c.short_retry; ++i)
    {
      w.push_back (cw);
      cw = std::min (2 * cw + 1, c.cw_max);
    }
  auto tau_of = [&] (double p) {
    double num = 0, den = 0, pi = 1;
    for (double wi : w)
      {
        num += pi;
        den += pi * (wi + 1) / 2;
        pi *= p;
      }
    return num / den;
  };
  double p = 0.1;
  for (int it = 0; it < 10000; ++it)
    {
      const double tau = tau_of (p);
      p = 0.5 * p + 0.5 * (1 - std::pow (1 - tau, n - 1));
    }
  const double tau = tau_of (p);
  const double ptr = 1 - std::pow (1 - tau, n);
  const double ps = n * tau * std::pow (1 - tau, n - 1) / ptr;
  const double d = (c.data_duration (kSdu) + c.prop_delay).seconds ();
  const double ts = d + (c.sifs + c.ack_duration () + c.prop_delay + c.difs).seconds ();
  const double tc = d + c.difs.seconds ();
  const double slot = (1 - ptr) * c.slot.seconds () + ptr * ps * ts + ptr * (1 - ps) * tc;
  return ptr * ps / slot;
}

} // namespace

TEST (Dcf, SaturationThroughputMatchesFixedPointModel)
{
  for (int stations : {1, 2, 5, 10, 20})
    {
      const SaturationRun r = saturate (stations, 30.0, 42);
      const double model = fixed_point_frames_per_s (stations, MacConfig{});
      EXPECT_NEAR (r.frames_per_s / model, 1.0, 0.03) << stations << " stations: sim " << r.frames_per_s
                                                      << " model " << model;
      EXPECT_EQ (r.violations, 0u);
      EXPECT_EQ (r.stray, 0u);
    }
}
