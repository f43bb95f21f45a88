#include "qrc/harness/seed.hpp"

namespace qrc::harness {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t seed_fanout(std::uint64_t master_seed, std::uint64_t index) noexcept {
  // master + (index + 1) * golden is injective in index (odd multiplier mod 2^64),
  // and mix64 is a bijection.
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  return mix64(mix64(master_seed) + (index + 1) * kGolden);
}

}  // namespace qrc::harness
