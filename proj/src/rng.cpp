#include "wslice/rng.hpp"

namespace wslice {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, SeedTag tag, std::uint64_t index) noexcept {
  std::uint64_t h = mix64(parent);
  h = mix64(h ^ static_cast<std::uint64_t>(tag));
  return mix64(h ^ (index * 0xd1b54a32d192ed03ULL));
}

}  // namespace wslice
