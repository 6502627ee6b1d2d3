#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "papsim/errors.hpp"
#include "papsim/frame.hpp"
#include "papsim/rng.hpp"
#include "papsim/sim_time.hpp"

namespace papsim {

enum class ChannelState { Idle, Busy };

enum class DeliveryOutcome { Delivered, Collided, ChannelLoss };

struct TransmissionRecord
{
  std::uint64_t id = 0;
  Frame frame;
  StationId sender = 0;
  SimTime start;
  SimTime end; // exclusive
  bool overlapped = false;
};

struct MediumState
{
  ChannelState state = ChannelState::Idle;
  SimTime busy_until;
  std::size_t active_tx = 0;
};

/// Per-destination frame loss ratio, fixed for a run. Destinations without an
/// entry are lossless.
class LossModel
{
public:
  void set_flr (StationId dst, double flr)
  {
    if (!(flr >= 0.0 && flr <= 1.0))
      throw Error ("frame loss ratio " + std::to_string (flr) + " outside [0,1]");
    m_flr[dst] = flr;
  }

  double flr (StationId dst) const
  {
    auto it = m_flr.find (dst);
    return it == m_flr.end () ? 0.0 : it->second;
  }

private:
  std::unordered_map<StationId, double> m_flr;
};

/// One collision domain: every station hears every transmission at the same
/// instant, and any overlap destroys all overlapped frames (no capture).
/// Only DATA frames are subject to channel loss.
class RadioMedium
{
public:
  explicit RadioMedium (LossModel loss = {}, std::uint64_t seed = 0)
    : m_loss (std::move (loss)), m_seed (seed)
  {}

  const LossModel &loss_model () const { return m_loss; }

  MediumState carrier_sense (SimTime now) const
  {
    MediumState s;
    for (const auto &r : m_active)
      if (r.start <= now && now < r.end)
        {
          s.state = ChannelState::Busy;
          s.busy_until = std::max (s.busy_until, r.end);
          ++s.active_tx;
        }
    return s;
  }

  const TransmissionRecord &start_tx (const Frame &frame, StationId sender, SimTime now, SimTime duration)
  {
    if (duration <= SimTime ())
      throw Error ("transmission duration must be positive");
    bool overlap = false;
    for (auto &r : m_active)
      {
        if (r.end <= now)
          continue;
        if (r.sender == sender)
          throw DoubleTransmit ("station " + std::to_string (sender) + " is already transmitting");
        r.overlapped = true;
        overlap = true;
      }
    TransmissionRecord rec;
    rec.id = ++m_next_id;
    rec.frame = frame;
    rec.sender = sender;
    rec.start = now;
    rec.end = now + duration;
    rec.overlapped = overlap;
    if (overlap)
      ++m_overlaps;
    m_active.push_back (rec);
    return m_active.back ();
  }

  /// Settles a finished transmission and removes it from the medium. The loss
  /// draw happens once per collision-free DATA frame.
  DeliveryOutcome resolve_tx (std::uint64_t tx_id, RngStream &rng)
  {
    auto it = std::find_if (m_active.begin (), m_active.end (),
                            [tx_id] (const TransmissionRecord &r) { return r.id == tx_id; });
    if (it == m_active.end ())
      throw Error ("unknown transmission " + std::to_string (tx_id));
    DeliveryOutcome out = DeliveryOutcome::Delivered;
    if (it->overlapped)
      out = DeliveryOutcome::Collided;
    else if (it->frame.kind == FrameKind::Data)
      {
        const double u = uniform01 (rng);
        if (u < m_loss.flr (it->frame.dst))
          out = DeliveryOutcome::ChannelLoss;
      }
    m_active.erase (it);
    return out;
  }

  DeliveryOutcome resolve_tx (std::uint64_t tx_id)
  {
    const TransmissionRecord *r = find (tx_id);
    if (r == nullptr)
      throw Error ("unknown transmission " + std::to_string (tx_id));
    return resolve_tx (tx_id, link_stream (r->sender, r->frame.dst));
  }

  const TransmissionRecord *find (std::uint64_t tx_id) const
  {
    for (const auto &r : m_active)
      if (r.id == tx_id)
        return &r;
    return nullptr;
  }

  bool transmitting (StationId sender, SimTime now) const
  {
    return std::any_of (m_active.begin (), m_active.end (),
                        [&] (const TransmissionRecord &r) { return r.sender == sender && r.end > now; });
  }

  const std::vector<TransmissionRecord> &active () const { return m_active; }
  std::uint64_t overlapping_starts () const { return m_overlaps; }

  RngStream &link_stream (StationId src, StationId dst)
  {
    const std::uint64_t key = (static_cast<std::uint64_t> (src) << 32) | dst;
    auto it = m_links.find (key);
    if (it == m_links.end ())
      it = m_links.emplace (key, make_stream (m_seed, "link", {src, dst})).first;
    return it->second;
  }

private:
  LossModel m_loss;
  std::uint64_t m_seed;
  std::uint64_t m_next_id = 0;
  std::uint64_t m_overlaps = 0;
  std::vector<TransmissionRecord> m_active;
  std::unordered_map<std::uint64_t, RngStream> m_links;
};

} // namespace papsim
