#ifndef EXPOLY_RNG_HPP
#define EXPOLY_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace expoly {

inline constexpr std::uint64_t kDefaultSeed = 0x5eedu;

// Deterministic across platforms: draws come straight from mt19937_64,
// bypassing the implementation-defined std distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed = kDefaultSeed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    std::complex<double> unit_phase() {
        double t = uniform(-3.14159265358979323846, 3.14159265358979323846);
        return {std::cos(t), std::sin(t)};
    }

    // uniform point of the open real simplex {c_i > 0, sum c_i = 1}
    std::vector<double> simplex(int n) {
        std::vector<double> c(static_cast<size_t>(n));
        double sum = 0.0;
        for (auto& x : c) {
            double u = uniform01();
            if (u < 1e-300) u = 1e-300;
            x = -std::log(u);
            sum += x;
        }
        for (auto& x : c) x /= sum;
        return c;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace expoly

#endif
