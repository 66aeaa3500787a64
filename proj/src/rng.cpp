#include "fracvia/rng.hpp"

#include <cmath>

namespace fracvia {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replication, std::uint64_t channel) {
    return splitmix64(splitmix64(splitmix64(master) ^ replication) ^ (channel * 0xd1b54a32d192ed03ULL));
}

double NormalStream::uniform() {
    // 53 random bits mapped to [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

}  // namespace fracvia
