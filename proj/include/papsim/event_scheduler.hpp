#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include "papsim/errors.hpp"
#include "papsim/sim_time.hpp"

namespace papsim {

/// Refers to one scheduled event. A default-constructed handle is never live.
struct EventHandle
{
  std::uint64_t id = 0;
  std::uint32_t slot = 0;

  explicit operator bool () const { return id != 0; }
  bool operator== (const EventHandle &) const = default;
};

enum class CancelOutcome { Cancelled, AlreadyDead };

/// Event calendar with a virtual clock. Events fire in (time, insertion
/// sequence) order; cancellation is O(1) and lazy.
class Scheduler
{
public:
  using Callback = std::function<void ()>;

  SimTime now () const { return m_now; }

  EventHandle schedule (SimTime at, Callback cb)
  {
    if (at < m_now)
      throw SchedulingInPast ("event at " + std::to_string (at.ns ()) + "ns is before clock "
                              + std::to_string (m_now.ns ()) + "ns");
    const std::uint64_t id = ++m_seq;
    std::uint32_t slot;
    if (!m_free.empty ())
      {
        slot = m_free.back ();
        m_free.pop_back ();
      }
    else
      {
        slot = static_cast<std::uint32_t> (m_slots.size ());
        m_slots.emplace_back ();
      }
    m_slots[slot].fn = std::move (cb);
    m_slots[slot].id = id;
    m_queue.push (Entry{at, id, slot});
    ++m_live;
    return EventHandle{id, slot};
  }

  EventHandle schedule_in (SimTime delay, Callback cb) { return schedule (m_now + delay, std::move (cb)); }

  CancelOutcome cancel (EventHandle h)
  {
    if (!is_live (h))
      return CancelOutcome::AlreadyDead;
    release (h.slot);
    return CancelOutcome::Cancelled;
  }

  bool is_live (EventHandle h) const
  {
    return h.id != 0 && h.slot < m_slots.size () && m_slots[h.slot].id == h.id;
  }

  /// Fires every event with fire time <= t_end; leaves the clock at t_end.
  std::uint64_t run_until (SimTime t_end)
  {
    std::uint64_t fired = 0;
    while (!m_queue.empty () && m_queue.top ().at <= t_end)
      {
        const Entry e = m_queue.top ();
        m_queue.pop ();
        if (m_slots[e.slot].id != e.seq)
          continue;
        m_now = e.at;
        Callback fn = std::move (m_slots[e.slot].fn);
        release (e.slot);
        fn ();
        ++fired;
      }
    if (t_end > m_now)
      m_now = t_end;
    m_fired += fired;
    return fired;
  }

  std::size_t pending () const { return m_live; }
  std::uint64_t total_fired () const { return m_fired; }

private:
  struct Slot
  {
    Callback fn;
    std::uint64_t id = 0; // 0 when free
  };
  struct Entry
  {
    SimTime at;
    std::uint64_t seq;
    std::uint32_t slot;
    bool operator> (const Entry &o) const { return at != o.at ? at > o.at : seq > o.seq; }
  };

  void release (std::uint32_t slot)
  {
    m_slots[slot].fn = nullptr;
    m_slots[slot].id = 0;
    m_free.push_back (slot);
    --m_live;
  }

  SimTime m_now;
  std::uint64_t m_seq = 0;
  std::uint64_t m_fired = 0;
  std::size_t m_live = 0;
  std::vector<Slot> m_slots;
  std::vector<std::uint32_t> m_free;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> m_queue;
};

} // namespace papsim
