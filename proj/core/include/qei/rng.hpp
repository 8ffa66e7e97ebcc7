#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qei {

/// Deterministic PRNG (xoshiro256**) with hand-rolled variate transforms.
/// Campaign reports quote the seed; identical seeds reproduce campaigns
/// bit-for-bit on any platform, which std::<distribution>s do not guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent substream for trial `stream`; used to make campaign
    /// trials order- and thread-independent.
    Rng substream(std::uint64_t stream) const;

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [a, b).
    double uniform(double a, double b);
    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);
    /// Standard normal (Box-Muller, no state caching).
    double normal();
    /// Uniform on the complex disk of radius r.
    std::complex<double> complex_in_disk(double r);
    /// Probability vector of length n (normalized positive uniforms).
    std::vector<double> probability_vector(int n);

private:
    std::uint64_t s_[4];
};

} // namespace qei
