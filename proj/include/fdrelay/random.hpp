#pragma once

#include <cstdint>
#include <random>

namespace fdrelay {

using Rng = std::mt19937_64;

/// Independent substreams of one trial. Keeping them separate means a change
/// in how many values one stage consumes never shifts another stage's draws.
enum class Stream : std::uint64_t {
  sources = 1,
  relays = 2,
  typical_fading = 3,
  interferer_fading = 4,
  internal_fading = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of trial `index` under the plan base_seed, base_seed+1, ...
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t index) {
  return base_seed + index;
}

/// Generator for one (trial seed, stream) pair; pure function of its inputs.
Rng make_stream(std::uint64_t seed, Stream stream);

}  // namespace fdrelay
