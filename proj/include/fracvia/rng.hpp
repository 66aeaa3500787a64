#pragma once

#include <cstdint>
#include <random>

namespace fracvia {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream (replication, channel) under a master seed. Pure function
/// of its inputs, so streams do not depend on scheduling.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replication, std::uint64_t channel);

/// Standard normal generator with a fixed, platform independent algorithm
/// (polar Box-Muller on top of mt19937_64 uniforms).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : eng_(seed) {}
    double next();
    double uniform();

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fracvia
