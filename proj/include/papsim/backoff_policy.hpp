#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <variant>

#include "papsim/rng.hpp"

namespace papsim {

enum class ChannelStatus { Good, Bad };

struct CwBounds
{
  int cw_min = 31;
  int cw_max = 1023;
};

/// Multiplier Z of the 1.X exponential backoff, held in tenths so that the
/// +/-0.1 steps stay exact.
class ZFactor
{
public:
  static constexpr int kMinTenths = 10;
  static constexpr int kMaxTenths = 20;

  constexpr ZFactor () = default;
  static constexpr ZFactor from_tenths (int t) { return ZFactor (std::clamp (t, kMinTenths, kMaxTenths)); }

  constexpr int tenths () const { return m_tenths; }
  constexpr double value () const { return m_tenths / 10.0; }

  constexpr ZFactor lowered (int steps = 1) const { return from_tenths (m_tenths - steps); }
  constexpr ZFactor raised (int steps = 1) const { return from_tenths (m_tenths + steps); }

  constexpr bool operator== (const ZFactor &) const = default;

private:
  constexpr explicit ZFactor (int t) : m_tenths (t) {}
  int m_tenths = kMaxTenths;
};

struct BebState
{
  int cw = 31;
  bool operator== (const BebState &) const = default;
};

struct OneXState
{
  int cw = 31;
  ZFactor z;
  bool operator== (const OneXState &) const = default;
};

/// round(z * cw + 1) with halves away from zero, evaluated in tenths.
constexpr int
scaled_window (ZFactor z, int cw)
{
  const std::int64_t tenths = static_cast<std::int64_t> (z.tenths ()) * cw + 10;
  return static_cast<int> ((tenths + 5) / 10);
}

constexpr BebState
beb_on_failure (BebState s, CwBounds b = {})
{
  return BebState{std::min (2 * s.cw + 1, b.cw_max)};
}

/// Failure towards a Bad destination: Z drops by one step first, then scales
/// the window.
constexpr OneXState
onex_on_failure (OneXState s, CwBounds b = {}, int step = 1)
{
  const ZFactor z = s.z.lowered (step);
  return OneXState{std::min (scaled_window (z, s.cw), b.cw_max), z};
}

/// Failure towards a Good destination (a collision): the window scales by
/// the current Z, which is left unchanged.
constexpr OneXState
onex_on_good_failure (OneXState s, CwBounds b = {})
{
  return OneXState{std::min (scaled_window (s.z, s.cw), b.cw_max), s.z};
}

constexpr OneXState
onex_on_good_tx (OneXState s, int step = 1)
{
  return OneXState{s.cw, s.z.raised (step)};
}

constexpr BebState policy_on_new_packet (BebState, CwBounds b = {}) { return BebState{b.cw_min}; }
constexpr OneXState policy_on_new_packet (OneXState s, CwBounds b = {}) { return OneXState{b.cw_min, s.z}; }

/// Uniform slot count in [0, cw-1].
inline int
draw_backoff (int cw, RngStream &rng)
{
  if (cw < 1)
    throw std::invalid_argument ("contention window must be >= 1");
  return std::uniform_int_distribution<int> (0, cw - 1) (rng);
}

enum class BackoffKind { Beb, OneX };

struct OneXParams
{
  int z_initial_tenths = ZFactor::kMaxTenths;
  int bad_step_tenths = 1;
  int good_step_tenths = 1;
};

/// Contention-window evolution of one station.
class BackoffPolicy
{
public:
  BackoffPolicy (BackoffKind kind = BackoffKind::Beb, CwBounds bounds = {}, OneXParams onex = {})
    : m_bounds (bounds), m_onex (onex)
  {
    if (bounds.cw_min < 1 || bounds.cw_min > bounds.cw_max)
      throw std::invalid_argument ("contention window bounds must satisfy 1 <= cw_min <= cw_max");
    if (kind == BackoffKind::Beb)
      m_state = BebState{bounds.cw_min};
    else
      m_state = OneXState{bounds.cw_min, ZFactor::from_tenths (onex.z_initial_tenths)};
  }

  BackoffKind kind () const { return std::holds_alternative<BebState> (m_state) ? BackoffKind::Beb : BackoffKind::OneX; }

  int cw () const
  {
    return std::visit ([] (const auto &s) { return s.cw; }, m_state);
  }

  /// Z of a 1.X station; BEB behaves as a fixed Z of 2.
  ZFactor z () const
  {
    if (auto *s = std::get_if<OneXState> (&m_state))
      return s->z;
    return ZFactor::from_tenths (ZFactor::kMaxTenths);
  }

  const std::variant<BebState, OneXState> &state () const { return m_state; }

  void on_failure (ChannelStatus dst)
  {
    if (auto *s = std::get_if<BebState> (&m_state))
      *s = beb_on_failure (*s, m_bounds);
    else
      {
        auto &o = std::get<OneXState> (m_state);
        o = dst == ChannelStatus::Bad ? onex_on_failure (o, m_bounds, m_onex.bad_step_tenths)
                                      : onex_on_good_failure (o, m_bounds);
      }
  }

  /// The head frame left the station (acknowledged or dropped).
  void on_cycle_complete (ChannelStatus dst)
  {
    if (auto *s = std::get_if<OneXState> (&m_state); s && dst == ChannelStatus::Good)
      *s = onex_on_good_tx (*s, m_onex.good_step_tenths);
  }

  void on_new_packet ()
  {
    std::visit ([this] (auto &s) { s = policy_on_new_packet (s, m_bounds); }, m_state);
  }

private:
  CwBounds m_bounds;
  OneXParams m_onex;
  std::variant<BebState, OneXState> m_state;
};

} // namespace papsim
