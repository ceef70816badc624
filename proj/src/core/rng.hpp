#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace sdc {

/// Deterministic random stream used by every randomized operation.
///
/// The algorithm is fixed so that seeded outputs are reproducible across
/// builds and implementations:
///
///   state    : xoshiro256++ (Blackman/Vigna), 256-bit state seeded with the
///              first four outputs of splitmix64(seed).
///   uniform  : (x >> 11) * 2^-53                        in [0, 1)
///   open     : ((x >> 11) + 0.5) * 2^-53                in (0, 1)
///   normal   : Box-Muller, z = sqrt(-2 ln u1) * cos(2 pi u2) with
///              u1 = ((x >> 11) + 1) * 2^-53 in (0, 1], u2 = uniform();
///              consumes exactly two 64-bit words per draw.
///   laplace  : inverse CDF, -b * sgn(u - 1/2) * ln(1 - 2|u - 1/2|) with
///              u = open(); consumes one word. Scale 0 returns exactly 0.
///   below(n) : draw words, reject x < 2^64 mod n, return x % n.
///   shuffle  : Fisher-Yates, i from n-1 down to 1, j = below(i + 1).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    double uniform();
    double uniform_open();
    double normal(double mean, double stddev);
    double laplace(double scale);

    /// Unbiased integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n);

    template <typename T>
    void shuffle(std::vector<T>& values) {
        if (values.size() < 2) {
            return;
        }
        for (std::size_t i = values.size() - 1; i >= 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i + 1));
            using std::swap;
            swap(values[i], values[j]);
        }
    }

private:
    std::array<std::uint64_t, 4> state_;
};

} // namespace sdc
