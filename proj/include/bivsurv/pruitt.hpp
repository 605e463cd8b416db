#pragma once

// Inconsistency demonstration for the Dirichlet-process Bayes estimate of
// a bivariate survival probability. The generator draws the pair uniformly
// from two diagonal unit squares and censors with a three-point law; the
// closed-form Bayes estimate of the off-diagonal block B = [1,2]x[2,3]
// converges to 1/6 although the true probability is 0.

#include "bivsurv/data.hpp"
#include "bivsurv/rational.hpp"
#include "bivsurv/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace bivsurv::pruitt {

struct PruittConfig {
    long n = 0;
    double m_conc = 1.0;  // Dirichlet-process concentration M
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 1) throw consistency_error("sample size must be at least 1");
        if (!(m_conc > 0)) throw consistency_error("concentration must be positive");
    }
};

struct PruittSample {
    std::vector<Observation> observations;
};

// One draw: the pair lands in [1,2]^2 or [2,3]^2 with equal probability,
// coordinates independent uniform within the square; the censoring pair is
// (1,3), (3,1) or (4,4) with probability 1/3 each.
inline PruittSample generate(const PruittConfig& cfg, SeededRng& rng) {
    cfg.validate();
    PruittSample sample;
    sample.observations.reserve(static_cast<std::size_t>(cfg.n));
    for (long i = 0; i < cfg.n; ++i) {
        double base = rng.bernoulli(0.5) ? 2.0 : 1.0;
        double t1 = base + rng.uniform01();
        double t2 = base + rng.uniform01();
        double r = rng.uniform01();
        double c1, c2;
        if (r < 1.0 / 3.0) {
            c1 = 1;
            c2 = 3;
        } else if (r < 2.0 / 3.0) {
            c1 = 3;
            c2 = 1;
        } else {
            c1 = 4;
            c2 = 4;
        }
        Observation o;
        o.z1 = Rat(std::min(t1, c1));
        o.d1 = t1 <= c1 ? 1 : 0;
        o.z2 = Rat(std::min(t2, c2));
        o.d2 = t2 <= c2 ? 1 : 0;
        sample.observations.push_back(std::move(o));
    }
    return sample;
}

inline PruittSample generate(const PruittConfig& cfg) {
    SeededRng rng(cfg.seed);
    return generate(cfg, rng);
}

namespace detail {

inline bool in_unit_square(double z1, double z2, double lo) {
    return z1 >= lo && z1 <= lo + 1 && z2 >= lo && z2 <= lo + 1;
}

}  // namespace detail

// Closed-form Bayes estimate of P(B), B = [1,2]x[2,3], under the uniform
// base measure on [1,3]^2 with concentration M:
//   M/(M+n) * 1/4 + 1/(M+n) * sum_i c_i
// where c_i is 1 for an uncensored pair inside B, 1/2 for a half-censored
// observation whose observed coordinate pins the pair to a strip meeting
// B, and 0 otherwise.
inline double dp_estimate_B(const PruittSample& sample, double m_conc) {
    if (!(m_conc > 0)) throw consistency_error("concentration must be positive");
    const auto n = static_cast<double>(sample.observations.size());
    if (n == 0) throw consistency_error("empty sample");
    double contrib = 0.0;
    for (const auto& o : sample.observations) {
        double z1 = to_double(o.z1);
        double z2 = to_double(o.z2);
        if (o.d1 == 0 && o.d2 == 0)
            throw consistency_error("sample invariant violated: doubly censored observation");
        if (o.d1 == 1 && o.d2 == 1) {
            if (!detail::in_unit_square(z1, z2, 1.0) && !detail::in_unit_square(z1, z2, 2.0))
                throw consistency_error("sample invariant violated: uncensored pair off support");
            if (z1 >= 1 && z1 <= 2 && z2 >= 2 && z2 <= 3) contrib += 1.0;
        } else if (o.d1 == 0 && o.d2 == 1) {
            if (z2 >= 2 && z2 <= 3) contrib += 0.5;
        } else {  // d1 == 1, d2 == 0
            if (z1 >= 1 && z1 <= 2) contrib += 0.5;
        }
    }
    return m_conc / (m_conc + n) * 0.25 + contrib / (m_conc + n);
}

// The large-sample limit of the Bayes estimate, exactly 1/6. The true
// probability of B is 0.
inline Rat asymptotic_limit() { return Rat(1, 6); }

struct PruittReport {
    long n = 0;
    double m_conc = 0;
    double estimate = 0;
    double limit = 0;
    double gap_to_truth = 0;
};

inline PruittReport run(const PruittConfig& cfg) {
    PruittSample sample = generate(cfg);
    PruittReport rep;
    rep.n = cfg.n;
    rep.m_conc = cfg.m_conc;
    rep.estimate = dp_estimate_B(sample, cfg.m_conc);
    rep.limit = to_double(asymptotic_limit());
    rep.gap_to_truth = std::abs(rep.estimate - 0.0);
    return rep;
}

}  // namespace bivsurv::pruitt
