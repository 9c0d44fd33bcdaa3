#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace geofree {

using Rng = std::mt19937_64;

// Independent generator derived from a master seed and a stream name
// ("learner", "environment", "sampler", ...).
Rng make_stream(std::uint64_t seed, std::string_view name);

std::uint64_t mix_seed(std::uint64_t seed, std::string_view name);

}  // namespace geofree
