#pragma once

#include <cstdint>

#include "papsim/sim_time.hpp"

namespace papsim {

using StationId = std::uint32_t;
inline constexpr StationId kAccessPointId = 0;

enum class FrameKind : std::uint8_t { Data, Ack };

/// MAC-level unit. For DATA, `sdu_bytes` covers the voice payload plus the
/// RTP/UDP/IP overhead; ACK frames carry no SDU.
struct Frame
{
  FrameKind kind = FrameKind::Data;
  StationId src = 0;
  StationId dst = 0;
  std::uint32_t seq = 0;     // per-sender MAC sequence
  std::int32_t session = -1; // voice session carried, -1 for none
  std::uint32_t sdu_seq = 0; // per-session SDU number
  std::int32_t sdu_bytes = 0;
  std::uint8_t retry_count = 0;
  bool is_retry = false;
  SimTime born_at;           // SDU arrival at the source queue
};

} // namespace papsim
