#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "papsim/errors.hpp"
#include "papsim/frame.hpp"
#include "papsim/rng.hpp"
#include "papsim/sim_time.hpp"

namespace papsim {

/// Constant-bit-rate voice codec (G.726-32 by default).
struct VoiceCodec
{
  std::int64_t bit_rate = 32000;
  SimTime framing_interval = SimTime::from_ms (20);
  int overhead_bytes = 40; // RTP + UDP + IPv4

  int payload_bytes () const
  {
    const std::int64_t bits_times_ns = bit_rate * framing_interval.ns ();
    constexpr std::int64_t kNsPerSecondBits = 8LL * 1000000000LL;
    if (framing_interval <= SimTime () || bits_times_ns % kNsPerSecondBits != 0)
      throw NonIntegralPayload ("codec frame of " + std::to_string (framing_interval.seconds ())
                                + " s is not a whole number of bytes");
    return static_cast<int> (bits_times_ns / kNsPerSecondBits);
  }

  int sdu_bytes () const { return payload_bytes () + overhead_bytes; }
};

/// One-way voice session routed src -> AP -> dst.
struct VoiceSession
{
  int id = 0;
  StationId src = 0;
  StationId dst = 0;
  double activity = 0.8;
  double on_mean_s = 1.0;
  double off_mean_s = 0.25;
  bool lossy = false;
  double flr = 0.0;
};

enum class VoiceEventKind { EmitFrame, ToggleOnOff };

struct VoiceEvent
{
  VoiceEventKind kind;
  SimTime at;
};

/// Talk-spurt source: exponential ON and OFF periods; inside a spurt one
/// frame every framing interval starting at the spurt onset. A spurt of
/// length L carries round(L / FI) frames.
class OnOffVoiceSource
{
public:
  OnOffVoiceSource (VoiceCodec codec, const VoiceSession &session, RngStream rng)
    : m_fi (codec.framing_interval), m_on_mean (session.on_mean_s), m_off_mean (session.off_mean_s),
      m_rng (std::move (rng))
  {}

  /// Starts in the stationary phase distribution at `now`.
  void start (SimTime now)
  {
    const double p_on = m_on_mean / (m_on_mean + m_off_mean);
    if (uniform01 (m_rng) < p_on)
      begin_spurt (now);
    else
      {
        m_on = false;
        m_toggle_at = now + exp_duration (m_off_mean);
      }
  }

  /// Forces a spurt of exactly `frames` frames starting at `now`.
  void start_spurt (SimTime now, std::int64_t frames)
  {
    m_on = true;
    m_next_frame = now;
    m_frames_left = frames;
    m_toggle_at = now + m_fi * frames;
  }

  bool on () const { return m_on; }

  VoiceEvent next_event () const
  {
    if (m_on && m_frames_left > 0)
      return {VoiceEventKind::EmitFrame, m_next_frame};
    return {VoiceEventKind::ToggleOnOff, m_toggle_at};
  }

  /// Applies the event returned by next_event().
  void advance ()
  {
    const VoiceEvent ev = next_event ();
    if (ev.kind == VoiceEventKind::EmitFrame)
      {
        --m_frames_left;
        m_next_frame += m_fi;
        return;
      }
    if (m_on)
      {
        m_on = false;
        m_toggle_at = ev.at + exp_duration (m_off_mean);
      }
    else
      begin_spurt (ev.at);
  }

private:
  void begin_spurt (SimTime now)
  {
    const double len = -std::log1p (-uniform01 (m_rng)) * m_on_mean;
    start_spurt (now, std::llround (len / m_fi.seconds ()));
  }

  SimTime exp_duration (double mean)
  {
    return SimTime::from_seconds (-std::log1p (-uniform01 (m_rng)) * mean);
  }

  SimTime m_fi;
  double m_on_mean;
  double m_off_mean;
  RngStream m_rng;
  bool m_on = false;
  SimTime m_next_frame;
  std::int64_t m_frames_left = 0;
  SimTime m_toggle_at;
};

} // namespace papsim
