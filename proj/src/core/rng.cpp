#include "core/rng.hpp"

#include "core/error.hpp"

#include <cmath>
#include <numbers>

namespace sdc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

constexpr double kTwoNeg53 = 0x1.0p-53;

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
        word = splitmix64(sm);
    }
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * kTwoNeg53;
}

double Rng::uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * kTwoNeg53;
}

double Rng::normal(double mean, double stddev) {
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * kTwoNeg53;
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

double Rng::laplace(double scale) {
    if (scale < 0.0) {
        throw_usage("laplace scale must be non-negative");
    }
    double u = uniform_open();
    if (scale == 0.0) {
        return 0.0;
    }
    double centered = u - 0.5;
    double sign = centered < 0.0 ? -1.0 : (centered > 0.0 ? 1.0 : 0.0);
    return -scale * sign * std::log(1.0 - 2.0 * std::fabs(centered));
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) {
        throw_usage("Rng::below requires a positive bound");
    }
    // Accept x >= 2^64 mod n so that x % n is exactly uniform.
    std::uint64_t threshold = (0 - n) % n;
    while (true) {
        std::uint64_t x = next_u64();
        if (x >= threshold) {
            return x % n;
        }
    }
}

} // namespace sdc
