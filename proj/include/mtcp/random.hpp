#ifndef MTCP_RANDOM_HPP
#define MTCP_RANDOM_HPP

#include <cstdint>
#include <random>

namespace mtcp {

/// All randomness flows through 64-bit Mersenne Twister engines seeded explicitly.
using Rng = std::mt19937_64;

/// SplitMix64 finaliser; decorrelates nearby seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream `stream` of a master seed. Used for per-replication generators so
/// results do not depend on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

}  // namespace mtcp

#endif  // MTCP_RANDOM_HPP
