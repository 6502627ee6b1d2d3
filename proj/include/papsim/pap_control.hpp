#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "papsim/backoff_policy.hpp"
#include "papsim/frame.hpp"
#include "papsim/radio_medium.hpp"

namespace papsim {

enum class AckDecision { Ack, Block };

enum class ClassifierMode { Oracle, Estimator };

struct EstimatorThresholds
{
  int failures_to_bad = 3;
  int successes_to_good = 2;
};

/// Good/Bad label of every downlink destination as seen by the AP.
///
/// Oracle mode returns the configured label for the whole run. Estimator
/// mode flips to Bad after `failures_to_bad` consecutive channel losses and
/// back to Good after `successes_to_good` consecutive deliveries; collisions
/// do not count either way.
class ChannelStatusMap
{
public:
  explicit ChannelStatusMap (ClassifierMode mode = ClassifierMode::Oracle, EstimatorThresholds th = {})
    : m_mode (mode), m_th (th)
  {}

  ClassifierMode mode () const { return m_mode; }

  void configure (StationId dst, ChannelStatus label)
  {
    Entry &e = m_entries[dst];
    e.configured = label;
    if (m_mode == ClassifierMode::Oracle)
      e.status = label;
  }

  ChannelStatus status (StationId dst) const
  {
    auto it = m_entries.find (dst);
    return it == m_entries.end () ? ChannelStatus::Good : it->second.status;
  }

  ChannelStatus classify_update (StationId dst, DeliveryOutcome outcome)
  {
    Entry &e = m_entries[dst];
    if (m_mode == ClassifierMode::Oracle)
      return e.status = e.configured;
    switch (outcome)
      {
      case DeliveryOutcome::Collided:
        break;
      case DeliveryOutcome::ChannelLoss:
        e.successes = 0;
        if (++e.failures >= m_th.failures_to_bad)
          e.status = ChannelStatus::Bad;
        break;
      case DeliveryOutcome::Delivered:
        e.failures = 0;
        if (++e.successes >= m_th.successes_to_good)
          e.status = ChannelStatus::Good;
        break;
      }
    return e.status;
  }

private:
  struct Entry
  {
    ChannelStatus configured = ChannelStatus::Good;
    ChannelStatus status = ChannelStatus::Good;
    int failures = 0;
    int successes = 0;
  };

  ClassifierMode m_mode;
  EstimatorThresholds m_th;
  std::unordered_map<StationId, Entry> m_entries;
};

/// ACK-withholding state of the AP towards sources whose flow destination is
/// Bad. A blocked source keeps being blocked until the AP finishes one of its
/// own DATA frames, or until `short_retry - 1` consecutive blocks.
class BdaState
{
public:
  explicit BdaState (int short_retry = 7) : m_max_streak (std::max (0, short_retry - 1)) {}

  int max_streak () const { return m_max_streak; }

  /// `retry_count` is the retry counter carried by the received frame; the
  /// last attempt a source is allowed is always acknowledged.
  AckDecision on_uplink_data (StationId src, ChannelStatus flow_dst_status, int retry_count = 0)
  {
    Source &s = m_sources[src];
    if (flow_dst_status == ChannelStatus::Good)
      {
        s = Source{};
        return AckDecision::Ack;
      }
    if (s.released || s.streak >= m_max_streak || retry_count >= m_max_streak)
      {
        s = Source{};
        return AckDecision::Ack;
      }
    ++s.streak;
    m_peak = std::max (m_peak, s.streak);
    ++m_blocked;
    return AckDecision::Block;
  }

  /// The AP finished a DATA frame towards any destination.
  void on_ap_transmit ()
  {
    for (auto &[id, s] : m_sources)
      if (s.streak > 0)
        {
          s.streak = 0;
          s.released = true;
        }
  }

  int blocked_streak (StationId src) const
  {
    auto it = m_sources.find (src);
    return it == m_sources.end () ? 0 : it->second.streak;
  }

  bool released (StationId src) const
  {
    auto it = m_sources.find (src);
    return it != m_sources.end () && it->second.released;
  }

  int peak_streak () const { return m_peak; }
  std::uint64_t blocked_total () const { return m_blocked; }

private:
  struct Source
  {
    int streak = 0;
    bool released = false; // AP transmitted since the streak began
  };

  int m_max_streak;
  int m_peak = 0;
  std::uint64_t m_blocked = 0;
  std::unordered_map<StationId, Source> m_sources;
};

} // namespace papsim
