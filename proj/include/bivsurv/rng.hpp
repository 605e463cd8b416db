#pragma once

// Deterministic random streams. Every distribution is implemented over the
// raw 64-bit engine output, so a given seed reproduces the same draws
// regardless of standard-library distribution internals. Replication k of
// a study derives its stream as stream(master_seed, k).

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace bivsurv {

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    static SeededRng stream(std::uint64_t master_seed, std::uint64_t index) {
        return SeededRng(master_seed + index);
    }

    std::uint64_t raw() { return engine_(); }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + uniform01() * (b - a); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Box-Muller with cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // Marsaglia-Tsang; shape 0 is the point mass at 0.
    double gamma(double shape) {
        if (shape < 0) throw std::invalid_argument("gamma shape must be nonnegative");
        if (shape == 0) return 0.0;
        if (shape < 1) {
            double u = uniform01();
            if (u < 1e-300) u = 1e-300;
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0) continue;
            v = v * v * v;
            double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u < 1e-300) u = 1e-300;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Beta draw via two gammas; one-sided zero weights are degenerate.
    double beta(double a, double b) {
        if (a < 0 || b < 0) throw std::invalid_argument("beta weights must be nonnegative");
        if (a == 0 && b == 0) throw std::invalid_argument("beta weights must not both be zero");
        if (a == 0) return 0.0;
        if (b == 0) return 1.0;
        double x = gamma(a);
        double y = gamma(b);
        if (x + y == 0) return a / (a + b);
        return x / (x + y);
    }

    // Normalized independent gamma draws; returned unnormalized so callers
    // can normalize exactly in their own arithmetic.
    std::array<double, 3> gamma_triple(const std::array<double, 3>& shapes) {
        return {gamma(shapes[0]), gamma(shapes[1]), gamma(shapes[2])};
    }

    // Index draw from cumulative weights (last entry = total).
    std::size_t discrete_from_cumulative(const std::vector<double>& cum) {
        double u = uniform01() * cum.back();
        std::size_t lo = 0, hi = cum.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cum[mid] <= u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace bivsurv
