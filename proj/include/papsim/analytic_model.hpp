#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "papsim/dcf_mac.hpp"
#include "papsim/sim_time.hpp"

namespace papsim::analytic {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct TimingParams
{
  SimTime h;       // PHY + MAC headers
  SimTime payload;
  SimTime sifs;
  SimTime difs;
  SimTime prop;
  SimTime ack;
};

struct ServiceParams
{
  double p = 0.0;  // per-attempt failure probability
  int w = 31;      // minimum contention window, slots
  int m = 7;       // retry limit
  SimTime sigma = SimTime::from_us (20);
  SimTime ts;
  SimTime tf;
};

/// Successful cycle: H + P + SIFS + prop + ACK + DIFS + prop.
constexpr SimTime
t_success (const TimingParams &t)
{
  return t.h + t.payload + t.sifs + t.prop + t.ack + t.difs + t.prop;
}

/// Failed cycle: H + P + DIFS + prop.
constexpr SimTime
t_fail (const TimingParams &t)
{
  return t.h + t.payload + t.difs + t.prop;
}

inline TimingParams
timing_from_mac (const MacConfig &cfg, int sdu_bytes)
{
  TimingParams t;
  t.h = cfg.plcp_overhead + bits_duration (static_cast<std::int64_t> (cfg.mac_overhead_bytes) * 8, cfg.data_rate_bps);
  t.payload = cfg.data_duration (sdu_bytes) - t.h; // H + P equals the simulated DATA time
  t.sifs = cfg.sifs;
  t.difs = cfg.difs;
  t.prop = cfg.prop_delay;
  t.ack = cfg.ack_duration ();
  return t;
}

/// The exact binary value of a double.
inline Rational
exact_rational (double x)
{
  if (!std::isfinite (x))
    throw std::invalid_argument ("exact_rational: non-finite value");
  if (x == 0.0)
    return Rational (0);
  int exp = 0;
  const double mant = std::frexp (x, &exp);
  const auto scaled = static_cast<std::int64_t> (std::ldexp (mant, 53));
  Rational r{BigInt (scaled)};
  const int shift = exp - 53;
  BigInt pow2 = BigInt (1) << std::abs (shift);
  if (shift >= 0)
    r *= Rational (pow2);
  else
    r /= Rational (pow2);
  return r;
}

inline void
validate (const ServiceParams &s)
{
  if (!(s.p >= 0.0 && s.p <= 1.0))
    throw std::invalid_argument ("failure probability outside [0,1]");
  if (s.w < 1 || s.m < 0)
    throw std::invalid_argument ("need w >= 1 and m >= 0");
  if (s.sigma <= SimTime () || s.ts <= SimTime () || s.tf <= SimTime ())
    throw std::invalid_argument ("durations must be positive");
}

/// Weights p^j (1-p) for j = 0..m followed by the drop weight p^(m+1).
inline std::vector<Rational>
outcome_weights (const Rational &p, int m)
{
  std::vector<Rational> w;
  w.reserve (m + 2);
  Rational pj (1);
  for (int j = 0; j <= m; ++j)
    {
      w.push_back (pj * (Rational (1) - p));
      pj *= p;
    }
  w.push_back (pj);
  return w;
}

/// Optional cap on the backoff window (in slots) used for comparison output.
struct WindowCap
{
  std::int64_t max_window = 0; // 0 leaves 2^k w uncapped
};

/// Expected head-of-line service time in nanoseconds, exact. Every term of
/// the closed form is kept as printed, including the success time inside the
/// drop bracket.
inline Rational
expected_service_time_exact (const ServiceParams &s, WindowCap cap = {})
{
  validate (s);
  const Rational p = exact_rational (s.p);
  const std::vector<Rational> weights = outcome_weights (p, s.m);
  const Rational sigma (s.sigma.ns ());
  const Rational ts (s.ts.ns ());
  const Rational tf (s.tf.ns ());

  Rational total (0);
  Rational backoff_sum (0);
  for (int j = 0; j <= s.m; ++j)
    {
      BigInt window = BigInt (s.w) << j;
      if (cap.max_window > 0 && window > cap.max_window)
        window = cap.max_window;
      backoff_sum += Rational (window - 1) / 2 * sigma;
      total += weights[j] * (backoff_sum + Rational (j) * tf + ts);
    }
  total += weights[s.m + 1] * (backoff_sum + Rational (s.m + 1) * tf + ts);
  return total;
}

inline SimTime
round_to_simtime (const Rational &ns)
{
  const Rational shifted = ns + Rational (1, 2);
  BigInt q = boost::multiprecision::numerator (shifted) / boost::multiprecision::denominator (shifted);
  return SimTime::from_ns (static_cast<std::int64_t> (q));
}

inline SimTime
expected_service_time (const ServiceParams &s, WindowCap cap = {})
{
  return round_to_simtime (expected_service_time_exact (s, cap));
}

struct HolRow
{
  double p;
  SimTime expected;
  SimTime expected_capped;
};

/// Expected head service time across a grid of failure probabilities.
inline std::vector<HolRow>
hol_gap_report (const ServiceParams &base, const std::vector<double> &p_grid, std::int64_t cap_window = 1024)
{
  std::vector<HolRow> rows;
  rows.reserve (p_grid.size ());
  for (double p : p_grid)
    {
      ServiceParams s = base;
      s.p = p;
      rows.push_back (HolRow{p, expected_service_time (s), expected_service_time (s, WindowCap{cap_window})});
    }
  return rows;
}

} // namespace papsim::analytic
