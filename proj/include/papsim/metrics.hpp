#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "papsim/dcf_mac.hpp"
#include "papsim/frame.hpp"
#include "papsim/sim_time.hpp"

namespace papsim {

struct FlowStats
{
  int session = -1;
  std::int64_t bits_delivered = 0;
  std::int64_t sdus_generated = 0;
  std::int64_t sdus_delivered = 0;
  std::int64_t sdus_dropped = 0;
  SimTime delay_sum;
  SimTime delay_max;
  std::int64_t delay_samples = 0;

  FlowStats &operator+= (const FlowStats &o)
  {
    bits_delivered += o.bits_delivered;
    sdus_generated += o.sdus_generated;
    sdus_delivered += o.sdus_delivered;
    sdus_dropped += o.sdus_dropped;
    delay_sum += o.delay_sum;
    delay_max = std::max (delay_max, o.delay_max);
    delay_samples += o.delay_samples;
    return *this;
  }
};

inline double
throughput (const FlowStats &f, double window_s)
{
  if (!(window_s > 0.0))
    throw std::invalid_argument ("throughput window must be positive");
  return static_cast<double> (f.bits_delivered) / window_s;
}

inline SimTime
e2e_delay (const Frame &sdu, SimTime delivered_at)
{
  return delivered_at - sdu.born_at;
}

/// Mean delay in seconds over delivered SDUs; NaN when nothing arrived.
inline double
mean_delay_s (const FlowStats &f)
{
  if (f.delay_samples == 0)
    return std::numeric_limits<double>::quiet_NaN ();
  return f.delay_sum.seconds () / static_cast<double> (f.delay_samples);
}

inline double
loss_ratio (const FlowStats &f)
{
  if (f.sdus_generated <= 0)
    throw std::invalid_argument ("loss ratio of a flow that generated nothing");
  return static_cast<double> (f.sdus_dropped) / static_cast<double> (f.sdus_generated);
}

struct MosScore
{
  double r_factor = 0.0;
  double mos = 1.0;
};

/// E-model parameters for G.726-32 with a fixed codec/playout allowance.
struct EModel
{
  double r0 = 93.2;
  double ie = 7.0;
  double bpl = 24.0;
  double fixed_delay_ms = 60.0;
};

inline double
r_to_mos (double r)
{
  if (r < 0.0)
    return 1.0;
  if (r > 100.0)
    return 4.5;
  // the cubic dips below 1 for small positive R
  return std::max (1.0, 1.0 + 0.035 * r + 7e-6 * r * (r - 60.0) * (100.0 - r));
}

inline MosScore
mos (double delay_s, double loss, const EModel &em = {})
{
  if (!(delay_s >= 0.0) || !(loss >= 0.0 && loss <= 1.0))
    throw std::invalid_argument ("mos: need delay >= 0 and loss in [0,1]");
  const double d = 1000.0 * delay_s + em.fixed_delay_ms;
  const double id = 0.024 * d + (d > 177.3 ? 0.11 * (d - 177.3) : 0.0);
  const double ppl = 100.0 * loss;
  const double ie_eff = em.ie + (95.0 - em.ie) * ppl / (ppl + em.bpl);
  const double r = em.r0 - id - ie_eff;
  return MosScore{r, r_to_mos (r)};
}

/// Largest loss ratio that still scores at least `threshold` at `delay_s`;
/// negative when even lossless delivery falls short.
inline double
mos_loss_bound (double delay_s, double threshold, const EModel &em = {})
{
  if (mos (delay_s, 0.0, em).mos < threshold)
    return -1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i)
    {
      const double mid = 0.5 * (lo + hi);
      (mos (delay_s, mid, em).mos >= threshold ? lo : hi) = mid;
    }
  return lo;
}

/// Per-session accumulator fed from the MAC trace tap. Only SDUs born at or
/// after the warm-up boundary are counted.
class FlowCollector
{
public:
  FlowCollector (std::size_t sessions, SimTime warmup) : m_flows (sessions), m_warmup (warmup)
  {
    for (std::size_t i = 0; i < sessions; ++i)
      m_flows[i].session = static_cast<int> (i);
  }

  void on_generated (const Frame &sdu)
  {
    if (counted (sdu))
      ++m_flows[sdu.session].sdus_generated;
  }

  void on_final_delivery (const Frame &sdu, SimTime at)
  {
    if (!counted (sdu))
      return;
    FlowStats &f = m_flows[sdu.session];
    const SimTime d = e2e_delay (sdu, at);
    ++f.sdus_delivered;
    f.bits_delivered += static_cast<std::int64_t> (sdu.sdu_bytes) * 8;
    f.delay_sum += d;
    f.delay_max = std::max (f.delay_max, d);
    ++f.delay_samples;
  }

  void on_trace (const TraceRecord &r)
  {
    if (r.kind == TraceKind::Drop && r.frame.session >= 0 && counted (r.frame))
      ++m_flows[r.frame.session].sdus_dropped;
  }

  const std::vector<FlowStats> &flows () const { return m_flows; }
  SimTime warmup () const { return m_warmup; }

private:
  bool counted (const Frame &f) const
  {
    return f.session >= 0 && static_cast<std::size_t> (f.session) < m_flows.size () && f.born_at >= m_warmup;
  }

  std::vector<FlowStats> m_flows;
  SimTime m_warmup;
};

} // namespace papsim
