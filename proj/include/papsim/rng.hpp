#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace papsim {

using RngStream = std::mt19937_64;

constexpr std::uint64_t
splitmix64 (std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t
hash_label (std::string_view label)
{
  std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
  for (char c : label)
    {
      h ^= static_cast<unsigned char> (c);
      h *= 0x100000001b3ULL;
    }
  return h;
}

/// Seed of the substream `label/parts...` under a master seed. Streams depend
/// only on their own coordinates, so adding stations leaves others intact.
constexpr std::uint64_t
substream_seed (std::uint64_t master, std::string_view label, std::initializer_list<std::uint64_t> parts)
{
  std::uint64_t h = splitmix64 (master ^ hash_label (label));
  for (std::uint64_t p : parts)
    h = splitmix64 (h ^ splitmix64 (p + 0x632be59bd9b4e019ULL));
  return h;
}

inline RngStream
make_stream (std::uint64_t master, std::string_view label, std::initializer_list<std::uint64_t> parts)
{
  return RngStream (substream_seed (master, label, parts));
}

/// Uniform real in [0, 1).
inline double
uniform01 (RngStream &rng)
{
  return static_cast<double> (rng () >> 11) * 0x1.0p-53;
}

} // namespace papsim
