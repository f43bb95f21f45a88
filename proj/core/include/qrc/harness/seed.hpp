#pragma once

#include <cstdint>

namespace qrc::harness {

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Per-realization seed. Injective in `index` for a fixed master seed and
/// independent of platform and scheduling.
std::uint64_t seed_fanout(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Named sub-streams of one realization, so e.g. the noise draws never shift
/// the unitary or the input series.
enum class Stream : std::uint64_t {
  Unitary = 1,
  Input = 2,
  Feedback = 3,
};

inline std::uint64_t stream_seed(std::uint64_t realization_seed, Stream stream) noexcept {
  return seed_fanout(realization_seed, static_cast<std::uint64_t>(stream));
}

}  // namespace qrc::harness
