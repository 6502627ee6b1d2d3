#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "papsim/analytic_model.hpp"

using namespace papsim;
using namespace papsim::analytic;

namespace {

TimingParams
example_timing ()
{
  TimingParams t;
  t.h = SimTime::from_us (200);
  t.payload = SimTime::from_us (500);
  t.sifs = SimTime::from_us (10);
  t.ack = SimTime::from_us (300);
  t.difs = SimTime::from_us (50);
  t.prop = SimTime::from_us (1);
  return t;
}

ServiceParams
service (double p, int m)
{
  ServiceParams s;
  s.p = p;
  s.w = 31;
  s.m = m;
  s.ts = SimTime::from_us (1062);
  s.tf = SimTime::from_us (751);
  return s;
}

// Independent sampler: j failures with P(j) = p^j (1-p), truncated at m+1
// (drop). Each attempt k adds a uniform backoff on 0..2^k w - 1; every
// failure adds Tf; the cycle ends with Ts.
double
monte_carlo_ns (const ServiceParams &s, int trials, std::uint64_t seed)
{
  std::mt19937_64 rng (seed);
  std::bernoulli_distribution fail (s.p);
  double total = 0;
  for (int t = 0; t < trials; ++t)
    {
      int j = 0;
      while (j <= s.m && fail (rng))
        ++j;
      const int attempts = std::min (j, s.m) + 1;
      double ns = 0;
      for (int k = 0; k < attempts; ++k)
        {
          const std::int64_t window = static_cast<std::int64_t> (s.w) << k;
          ns += static_cast<double> (std::uniform_int_distribution<std::int64_t> (0, window - 1) (rng))
                * static_cast<double> (s.sigma.ns ());
        }
      ns += j * static_cast<double> (s.tf.ns ()) + static_cast<double> (s.ts.ns ());
      total += ns;
    }
  return total / trials;
}

double
to_double (const Rational &r)
{
  return static_cast<double> (r);
}

} // namespace

TEST (Analytic, SuccessCycleExample)
{
  EXPECT_EQ (t_success (example_timing ()), SimTime::from_us (1062));
}

TEST (Analytic, FailureCycleExample)
{
  EXPECT_EQ (t_fail (example_timing ()), SimTime::from_us (751));
}

TEST (Analytic, WeightsSumToOne)
{
  for (double p : {0.0, 0.3, 0.5, 0.9, 1.0})
    {
      Rational sum (0);
      for (const auto &w : outcome_weights (exact_rational (p), 7))
        sum += w;
      EXPECT_EQ (sum, Rational (1)) << p;
    }
}

TEST (Analytic, LosslessIsMeanBackoffPlusSuccess)
{
  // (31 - 1) / 2 slots of 20 us plus Ts.
  EXPECT_EQ (expected_service_time_exact (service (0.0, 7)), Rational (300000 + 1062000));
}

TEST (Analytic, CertainFailureHitsTheDropBranch)
{
  const ServiceParams s = service (1.0, 4);
  Rational backoff (0);
  for (int j = 0; j <= 4; ++j)
    backoff += Rational ((31 << j) - 1, 2) * 20000;
  EXPECT_EQ (expected_service_time_exact (s), backoff + 5 * Rational (751000) + Rational (1062000));
}

TEST (Analytic, MonotoneInFailureProbability)
{
  Rational prev (0);
  for (double p = 0.0; p <= 1.0; p += 0.05)
    {
      const Rational e = expected_service_time_exact (service (p, 7));
      EXPECT_GT (e, prev);
      prev = e;
    }
}

TEST (Analytic, CapOnlyLowersTheEstimate)
{
  const ServiceParams s = service (0.9, 7);
  EXPECT_LT (expected_service_time_exact (s, WindowCap{1024}), expected_service_time_exact (s));
  EXPECT_EQ (expected_service_time_exact (service (0.9, 4), WindowCap{1024}),
             expected_service_time_exact (service (0.9, 4)));
}

TEST (Analytic, MatchesMonteCarloAtHalf)
{
  const ServiceParams s = service (0.5, 4);
  const double exact = to_double (expected_service_time_exact (s));
  EXPECT_NEAR (monte_carlo_ns (s, 1000000, 99) / exact, 1.0, 0.005);
}

TEST (Analytic, ExactRationalIsExact)
{
  EXPECT_EQ (exact_rational (0.5), Rational (1, 2));
  EXPECT_EQ (exact_rational (0.75), Rational (3, 4));
  EXPECT_EQ (static_cast<double> (exact_rational (0.7)), 0.7);
  EXPECT_THROW (exact_rational (NAN), std::invalid_argument);
}

TEST (Analytic, RejectsInvalidParameters)
{
  EXPECT_THROW (expected_service_time (service (1.5, 4)), std::invalid_argument);
  ServiceParams s = service (0.5, 4);
  s.w = 0;
  EXPECT_THROW (expected_service_time (s), std::invalid_argument);
}

TEST (Analytic, TimingFromMacUsesFrameDurations)
{
  MacConfig c;
  const TimingParams t = timing_from_mac (c, 120);
  EXPECT_EQ (t.h + t.payload, c.data_duration (120));
  EXPECT_EQ (t.ack, c.ack_duration ());
}
