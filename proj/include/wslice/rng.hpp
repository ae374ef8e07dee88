#pragma once

#include <cstdint>
#include <random>

namespace wslice {

using Rng = std::mt19937_64;

/// Stream tags used when splitting a parent seed into independent children.
/// Every random quantity in the project is reachable from a single root seed
/// through a fixed path of tags, so paired runs see identical draws.
enum class SeedTag : std::uint64_t {
  kRealization = 1,
  kTraffic = 2,
  kChannel = 3,
  kWindow = 4,
  kArrivalPhase = 5,
  kComposition = 6,
  kTrainSet = 7,
  kValidationSet = 8,
  kTestSet = 9,
  kInit = 10,
  kShuffle = 11,
  kDualSample = 12,
  kMeanSnr = 13,
  kInitRate = 14,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child seed for (parent, tag, index). Distinct paths give decorrelated seeds.
std::uint64_t derive_seed(std::uint64_t parent, SeedTag tag, std::uint64_t index = 0) noexcept;

inline Rng make_rng(std::uint64_t parent, SeedTag tag, std::uint64_t index = 0) {
  return Rng(derive_seed(parent, tag, index));
}

}  // namespace wslice
