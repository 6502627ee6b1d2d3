#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "papsim/backoff_policy.hpp"
#include "papsim/errors.hpp"
#include "papsim/event_scheduler.hpp"
#include "papsim/frame.hpp"
#include "papsim/pap_control.hpp"
#include "papsim/radio_medium.hpp"
#include "papsim/rng.hpp"
#include "papsim/sim_time.hpp"

namespace papsim {

/// 802.11b DSSS basic-access parameters (long preamble).
struct MacConfig
{
  SimTime slot = SimTime::from_us (20);
  SimTime sifs = SimTime::from_us (10);
  SimTime difs = SimTime::from_us (50);
  int cw_min = 31;
  int cw_max = 1023;
  int short_retry = 7;
  int long_retry = 4;
  int rts_threshold = -1; // bytes; negative disables RTS/CTS
  std::int64_t data_rate_bps = 11000000;
  SimTime plcp_overhead = SimTime::from_us (192);
  int mac_overhead_bytes = 36;
  int ack_bytes = 14;
  std::int64_t ack_rate_bps = 2000000;
  SimTime prop_delay = SimTime::from_us (1);

  SimTime data_duration (int sdu_bytes) const
  {
    return plcp_overhead + bits_duration (static_cast<std::int64_t> (sdu_bytes + mac_overhead_bytes) * 8, data_rate_bps);
  }

  SimTime ack_duration () const
  {
    return plcp_overhead + bits_duration (static_cast<std::int64_t> (ack_bytes) * 8, ack_rate_bps);
  }

  /// Measured from the end of our own DATA emission.
  SimTime ack_timeout () const { return sifs + ack_duration () + prop_delay * 2 + slot; }

  int retry_limit (int sdu_bytes) const
  {
    if (rts_threshold >= 0 && sdu_bytes + mac_overhead_bytes > rts_threshold)
      return long_retry;
    return short_retry;
  }

  CwBounds cw_bounds () const { return CwBounds{cw_min, cw_max}; }

  void validate () const
  {
    if (cw_min < 1 || cw_min > cw_max)
      throw Error ("MacConfig: need 1 <= cw_min <= cw_max");
    if (slot <= SimTime () || sifs <= SimTime () || difs <= SimTime () || plcp_overhead < SimTime ()
        || prop_delay < SimTime ())
      throw Error ("MacConfig: durations must be positive");
    if (data_rate_bps <= 0 || ack_rate_bps <= 0)
      throw Error ("MacConfig: rates must be positive");
    if (short_retry < 1 || long_retry < 1)
      throw Error ("MacConfig: retry limits must be >= 1");
    if (mac_overhead_bytes < 0 || ack_bytes <= 0)
      throw Error ("MacConfig: frame sizes must be positive");
  }
};

enum class StationRole { AccessPoint, Terminal };

enum class MacState { Idle, Defer, Backoff, Transmitting, AwaitAck };

enum class TraceKind {
  Enqueue,      // SDU appended to a station queue
  TxStart,      // DATA attempt put on the air
  Delivered,    // DATA accepted by its receiver and passed up
  Blocked,      // DATA received but deliberately left unacknowledged
  HeadDone,     // head frame acknowledged and dequeued
  Drop,         // head frame discarded at the retry limit
  StrayAck,
};

struct TraceRecord
{
  TraceKind kind;
  SimTime at;
  StationId station; // where the event happened
  Frame frame;
  SimTime head_since; // HeadDone/Drop: when the frame became head of queue
};

using TraceSink = std::function<void (const TraceRecord &)>;

struct StationHooks
{
  /// Receiver side: decides whether a correctly received DATA is ACKed.
  std::function<AckDecision (const Frame &)> ack_decision;
  /// Receiver side: a new SDU is handed to the upper layer.
  std::function<void (const Frame &, SimTime)> deliver_up;
  /// Sender side: channel label of a destination (Good when unset).
  std::function<ChannelStatus (StationId)> channel_status;
  /// Sender side: ground-truth outcome of each DATA attempt.
  std::function<void (const Frame &, DeliveryOutcome)> attempt_outcome;
  /// Sender side: head frame resolved, acknowledged or dropped.
  std::function<void (const Frame &, bool acknowledged)> head_resolved;
};

struct StationCounters
{
  std::uint64_t enqueued = 0;
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t drops = 0;
  std::uint64_t blocked_rx = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t stray_acks = 0;
};

class DcfNetwork;

/// One station's DCF basic-access state machine with an unbounded FIFO.
class DcfStation
{
public:
  DcfStation (DcfNetwork &net, StationId id, StationRole role, BackoffPolicy policy, RngStream backoff_rng)
    : m_net (net), m_id (id), m_role (role), m_policy (policy), m_rng (std::move (backoff_rng))
  {}

  DcfStation (const DcfStation &) = delete;
  DcfStation &operator= (const DcfStation &) = delete;

  StationId id () const { return m_id; }
  StationRole role () const { return m_role; }
  MacState state () const { return m_state; }
  const std::deque<Frame> &queue () const { return m_queue; }
  const BackoffPolicy &policy () const { return m_policy; }
  int retry_count () const { return m_retry; }
  int backoff_slots_remaining () const { return m_remaining; }
  const StationCounters &counters () const { return m_counters; }
  StationHooks &hooks () { return m_hooks; }

  inline void enqueue_sdu (Frame frame);

  // Driven by DcfNetwork.
  inline void transmit_head (SimTime now);
  inline void on_data_received (const Frame &data, SimTime now);
  inline void on_attempt_outcome (const Frame &data, DeliveryOutcome outcome);
  inline void on_ack (const Frame &ack, SimTime now);
  inline void on_ack_timeout (SimTime now);

private:
  friend class DcfNetwork;

  inline void start_access (SimTime now);
  inline void finish_head (SimTime now, bool acknowledged);
  ChannelStatus status_of (StationId dst) const
  {
    return m_hooks.channel_status ? m_hooks.channel_status (dst) : ChannelStatus::Good;
  }

  DcfNetwork &m_net;
  StationId m_id;
  StationRole m_role;
  BackoffPolicy m_policy;
  RngStream m_rng;
  StationHooks m_hooks;

  std::deque<Frame> m_queue;
  MacState m_state = MacState::Idle;
  int m_retry = 0;
  std::uint32_t m_next_seq = 0;
  SimTime m_head_since;
  EventHandle m_timeout;
  std::unordered_map<StationId, std::uint32_t> m_last_rx_seq;
  StationCounters m_counters;

  // contention bookkeeping, owned by DcfNetwork
  int m_remaining = 0;
  SimTime m_ready_at;
  SimTime m_count_start;
  bool m_contending = false;
  bool m_counting = false;
};

/// A single collision domain: the shared medium, its stations, and the
/// coordinator that runs their slotted backoff countdowns.
///
/// Backoff slots are aligned on a grid that starts DIFS after the medium last
/// turned idle, so every station that reaches zero in the same slot starts
/// transmitting at the same instant and collides.
class DcfNetwork
{
public:
  DcfNetwork (Scheduler &sched, MacConfig cfg, LossModel loss, std::uint64_t seed)
    : m_sched (sched), m_cfg (cfg), m_medium (std::move (loss), seed), m_seed (seed)
  {
    m_cfg.validate ();
  }

  DcfNetwork (const DcfNetwork &) = delete;
  DcfNetwork &operator= (const DcfNetwork &) = delete;

  Scheduler &scheduler () { return m_sched; }
  const MacConfig &config () const { return m_cfg; }
  RadioMedium &medium () { return m_medium; }
  const RadioMedium &medium () const { return m_medium; }

  DcfStation &add_station (StationRole role, BackoffKind kind = BackoffKind::Beb, OneXParams onex = {})
  {
    const auto id = static_cast<StationId> (m_stations.size ());
    m_stations.push_back (std::make_unique<DcfStation> (*this, id, role, BackoffPolicy (kind, m_cfg.cw_bounds (), onex),
                                                        make_stream (m_seed, "backoff", {id})));
    return *m_stations.back ();
  }

  DcfStation &station (StationId id) { return *m_stations.at (id); }
  const DcfStation &station (StationId id) const { return *m_stations.at (id); }
  std::size_t station_count () const { return m_stations.size (); }

  void add_trace_sink (TraceSink sink) { m_sinks.push_back (std::move (sink)); }

  void emit (const TraceRecord &r) const
  {
    for (const auto &s : m_sinks)
      s (r);
  }

  bool medium_busy () const { return m_busy; }
  SimTime last_idle_at () const { return m_last_idle; }
  /// DATA starts that happened while an earlier transmission was on the air.
  std::uint64_t carrier_sense_violations () const { return m_sense_violations; }

  /// First countdown slot boundary at or after `t`.
  SimTime slot_grid_ceil (SimTime t) const
  {
    const SimTime anchor = m_last_idle + m_cfg.difs;
    if (t <= anchor)
      return anchor;
    const std::int64_t slot = m_cfg.slot.ns ();
    const std::int64_t k = ((t - anchor).ns () + slot - 1) / slot;
    return anchor + m_cfg.slot * k;
  }

  /// Busy freezes every countdown (keeping whole idle slots already
  /// elapsed); idle restarts them DIFS later on the slot grid.
  void on_medium_transition (ChannelState state, SimTime now)
  {
    if (state == ChannelState::Busy)
      {
        m_busy = true;
        for (DcfStation *s : m_contenders)
          {
            if (!s->m_counting)
              continue;
            const SimTime expiry = s->m_count_start + m_cfg.slot * s->m_remaining;
            if (expiry == now)
              continue; // reaches zero in this very slot and transmits too
            if (now > s->m_count_start)
              s->m_remaining -= static_cast<int> ((now - s->m_count_start) / m_cfg.slot);
            s->m_counting = false;
            s->m_state = MacState::Defer;
          }
        if (m_access && m_access_at > now)
          {
            m_sched.cancel (m_access);
            m_access = {};
          }
      }
    else
      {
        m_busy = false;
        m_last_idle = now;
        for (DcfStation *s : m_contenders)
          begin_countdown (*s, now);
        reschedule_access ();
      }
  }

  void request_access (DcfStation &s)
  {
    if (!s.m_contending)
      {
        s.m_contending = true;
        m_contenders.push_back (&s);
      }
    s.m_counting = false;
    s.m_state = MacState::Defer;
    if (!m_busy)
      {
        begin_countdown (s, m_sched.now ());
        reschedule_access ();
      }
  }

  /// Puts a frame on the air from `sender`; returns the emission duration.
  SimTime transmit (DcfStation &sender, const Frame &frame)
  {
    const SimTime now = m_sched.now ();
    const SimTime duration
      = frame.kind == FrameKind::Data ? m_cfg.data_duration (frame.sdu_bytes) : m_cfg.ack_duration ();
    if (frame.kind == FrameKind::Data)
      for (const auto &r : m_medium.active ())
        if (r.start < now && r.end > now)
          ++m_sense_violations;
    const bool was_busy = m_medium.carrier_sense (now).state == ChannelState::Busy;
    const TransmissionRecord &rec = m_medium.start_tx (frame, sender.id (), now, duration + m_cfg.prop_delay);
    const std::uint64_t tx_id = rec.id;
    m_sched.schedule (rec.end, [this, tx_id] { on_tx_end (tx_id); });
    if (!was_busy && !m_busy)
      on_medium_transition (ChannelState::Busy, now);
    return duration;
  }

private:
  void begin_countdown (DcfStation &s, SimTime now)
  {
    s.m_count_start = slot_grid_ceil (std::max (now, s.m_ready_at));
    s.m_counting = true;
    s.m_state = MacState::Backoff;
  }

  void reschedule_access ()
  {
    SimTime best = SimTime::max ();
    for (const DcfStation *s : m_contenders)
      if (s->m_counting)
        best = std::min (best, s->m_count_start + m_cfg.slot * s->m_remaining);
    if (m_access && m_access_at == best)
      return;
    if (m_access)
      m_sched.cancel (m_access);
    m_access = {};
    if (best == SimTime::max ())
      return;
    m_access_at = best;
    m_access = m_sched.schedule (best, [this] { fire_access (); });
  }

  void fire_access ()
  {
    m_access = {};
    const SimTime now = m_sched.now ();
    std::vector<DcfStation *> winners;
    for (auto it = m_contenders.begin (); it != m_contenders.end ();)
      {
        DcfStation *s = *it;
        if (s->m_counting && s->m_count_start + m_cfg.slot * s->m_remaining == now)
          {
            s->m_remaining = 0;
            s->m_counting = false;
            s->m_contending = false;
            winners.push_back (s);
            it = m_contenders.erase (it);
          }
        else
          ++it;
      }
    for (DcfStation *s : winners)
      s->transmit_head (now);
  }

  void on_tx_end (std::uint64_t tx_id)
  {
    const SimTime now = m_sched.now ();
    const TransmissionRecord rec = *m_medium.find (tx_id);
    const DeliveryOutcome outcome = m_medium.resolve_tx (tx_id);
    if (rec.frame.kind == FrameKind::Data)
      {
        station (rec.sender).on_attempt_outcome (rec.frame, outcome);
        if (outcome == DeliveryOutcome::Delivered && rec.frame.dst < m_stations.size ())
          station (rec.frame.dst).on_data_received (rec.frame, now);
      }
    else if (outcome == DeliveryOutcome::Delivered && rec.frame.dst < m_stations.size ())
      station (rec.frame.dst).on_ack (rec.frame, now);
    if (m_busy && m_medium.carrier_sense (now).state == ChannelState::Idle)
      on_medium_transition (ChannelState::Idle, now);
  }

  Scheduler &m_sched;
  MacConfig m_cfg;
  RadioMedium m_medium;
  std::uint64_t m_seed;
  std::vector<std::unique_ptr<DcfStation>> m_stations;
  std::vector<DcfStation *> m_contenders;
  std::vector<TraceSink> m_sinks;
  bool m_busy = false;
  SimTime m_last_idle;
  EventHandle m_access;
  SimTime m_access_at;
  std::uint64_t m_sense_violations = 0;
};

// ----------------------------------------------------------------------------

void
DcfStation::enqueue_sdu (Frame frame)
{
  frame.kind = FrameKind::Data;
  frame.src = m_id;
  frame.seq = ++m_next_seq;
  frame.retry_count = 0;
  frame.is_retry = false;
  m_queue.push_back (frame);
  ++m_counters.enqueued;
  const SimTime now = m_net.scheduler ().now ();
  m_net.emit (TraceRecord{TraceKind::Enqueue, now, m_id, frame, {}});
  if (m_state == MacState::Idle)
    start_access (now);
}

void
DcfStation::start_access (SimTime now)
{
  if (m_queue.empty ())
    {
      m_state = MacState::Idle;
      return;
    }
  if (m_retry == 0)
    m_head_since = now;
  m_remaining = draw_backoff (m_policy.cw (), m_rng);
  m_ready_at = now;
  m_net.request_access (*this);
}

void
DcfStation::transmit_head (SimTime now)
{
  Frame &head = m_queue.front ();
  head.retry_count = static_cast<std::uint8_t> (m_retry);
  head.is_retry = m_retry > 0;
  m_state = MacState::Transmitting;
  ++m_counters.attempts;
  m_net.emit (TraceRecord{TraceKind::TxStart, now, m_id, head, m_head_since});
  const SimTime duration = m_net.transmit (*this, head);
  m_state = MacState::AwaitAck;
  m_timeout = m_net.scheduler ().schedule (now + duration + m_net.config ().ack_timeout (),
                                           [this] { on_ack_timeout (m_net.scheduler ().now ()); });
}

void
DcfStation::on_attempt_outcome (const Frame &data, DeliveryOutcome outcome)
{
  if (m_hooks.attempt_outcome)
    m_hooks.attempt_outcome (data, outcome);
}

void
DcfStation::on_data_received (const Frame &data, SimTime now)
{
  const AckDecision decision = m_hooks.ack_decision ? m_hooks.ack_decision (data) : AckDecision::Ack;
  if (decision == AckDecision::Block)
    {
      ++m_counters.blocked_rx;
      m_net.emit (TraceRecord{TraceKind::Blocked, now, m_id, data, {}});
      return;
    }
  Frame ack;
  ack.kind = FrameKind::Ack;
  ack.src = m_id;
  ack.dst = data.src;
  ack.seq = data.seq;
  m_net.scheduler ().schedule (now + m_net.config ().sifs, [this, ack] { m_net.transmit (*this, ack); });

  auto [it, fresh] = m_last_rx_seq.try_emplace (data.src, data.seq);
  if (!fresh)
    {
      if (data.seq <= it->second)
        {
          ++m_counters.duplicates;
          return;
        }
      it->second = data.seq;
    }
  m_net.emit (TraceRecord{TraceKind::Delivered, now, m_id, data, {}});
  if (m_hooks.deliver_up)
    m_hooks.deliver_up (data, now);
}

void
DcfStation::on_ack (const Frame &ack, SimTime now)
{
  if (m_state != MacState::AwaitAck || m_queue.empty () || ack.seq != m_queue.front ().seq)
    {
      ++m_counters.stray_acks;
      m_net.emit (TraceRecord{TraceKind::StrayAck, now, m_id, ack, {}});
      return;
    }
  m_net.scheduler ().cancel (m_timeout);
  m_timeout = {};
  ++m_counters.successes;
  finish_head (now, true);
}

void
DcfStation::on_ack_timeout (SimTime now)
{
  m_timeout = {};
  Frame &head = m_queue.front ();
  ++m_retry;
  m_policy.on_failure (status_of (head.dst));
  if (m_retry >= m_net.config ().retry_limit (head.sdu_bytes))
    {
      ++m_counters.drops;
      finish_head (now, false);
      return;
    }
  head.retry_count = static_cast<std::uint8_t> (m_retry);
  head.is_retry = true;
  start_access (now);
}

void
DcfStation::finish_head (SimTime now, bool acknowledged)
{
  const Frame head = m_queue.front ();
  m_queue.pop_front ();
  m_net.emit (TraceRecord{acknowledged ? TraceKind::HeadDone : TraceKind::Drop, now, m_id, head, m_head_since});
  m_policy.on_cycle_complete (status_of (head.dst));
  if (m_hooks.head_resolved)
    m_hooks.head_resolved (head, acknowledged);
  m_retry = 0;
  m_policy.on_new_packet ();
  m_state = MacState::Idle;
  start_access (now);
}

} // namespace papsim
