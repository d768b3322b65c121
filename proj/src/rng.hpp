#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace qgd {

// Counter-based 64-bit generator (splitmix64 finalizer). Reproducible across
// platforms; every stochastic element in the project flows through this.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform on (0, 1]; strictly positive so it is safe under log()
    double uniform01() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // uniform on [0, 1)
    double uniform_half_open() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // standard normal via Box-Muller
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform_half_open();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // standard complex normal: E|z|^2 = 1
    std::complex<double> complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re * 0.7071067811865475244, im * 0.7071067811865475244};
    }

    // substream key for component k of a stream keyed by seed
    static std::uint64_t substream(std::uint64_t seed, std::uint64_t k) {
        SplitMix64 g(seed);
        const std::uint64_t base = g.next();
        SplitMix64 h(base + k * 0x9e3779b97f4a7c15ULL);
        return h.next();
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qgd
