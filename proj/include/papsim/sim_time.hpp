#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

namespace papsim {

/// Virtual time in integer nanoseconds since simulation start.
class SimTime
{
public:
  constexpr SimTime () = default;

  static constexpr SimTime from_ns (std::int64_t ns) { return SimTime (ns); }
  static constexpr SimTime from_us (std::int64_t us) { return SimTime (us * 1000); }
  static constexpr SimTime from_ms (std::int64_t ms) { return SimTime (ms * 1000000); }
  static SimTime from_seconds (double s) { return SimTime (std::llround (s * 1e9)); }
  static constexpr SimTime max () { return SimTime (std::numeric_limits<std::int64_t>::max ()); }

  constexpr std::int64_t ns () const { return m_ns; }
  constexpr double us () const { return static_cast<double> (m_ns) / 1e3; }
  constexpr double seconds () const { return static_cast<double> (m_ns) / 1e9; }

  constexpr auto operator<=> (const SimTime &) const = default;

  constexpr SimTime &operator+= (SimTime o) { m_ns += o.m_ns; return *this; }
  constexpr SimTime &operator-= (SimTime o) { m_ns -= o.m_ns; return *this; }
  friend constexpr SimTime operator+ (SimTime a, SimTime b) { return SimTime (a.m_ns + b.m_ns); }
  friend constexpr SimTime operator- (SimTime a, SimTime b) { return SimTime (a.m_ns - b.m_ns); }
  friend constexpr SimTime operator* (SimTime a, std::int64_t k) { return SimTime (a.m_ns * k); }
  friend constexpr SimTime operator* (std::int64_t k, SimTime a) { return SimTime (a.m_ns * k); }
  // number of whole `b` intervals in `a`
  friend constexpr std::int64_t operator/ (SimTime a, SimTime b) { return a.m_ns / b.m_ns; }

  friend std::ostream &operator<< (std::ostream &os, SimTime t) { return os << t.m_ns << "ns"; }

private:
  constexpr explicit SimTime (std::int64_t ns) : m_ns (ns) {}
  std::int64_t m_ns = 0;
};

/// Air time of `bits` at `rate_bps`, rounded up to the next nanosecond.
constexpr SimTime
bits_duration (std::int64_t bits, std::int64_t rate_bps)
{
  const std::int64_t num = bits * 1000000000LL;
  return SimTime::from_ns ((num + rate_bps - 1) / rate_bps);
}

} // namespace papsim
