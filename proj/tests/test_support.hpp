#pragma once

// Shared fixtures and independent oracles for the test suites.

#include "bivsurv.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bivsurv::testing {

// Four censored pairs used throughout as a worked example; the
// noninformative estimate has atoms {(.51,.02): 1/4, (.11,.62): 1/4,
// (.68,.68): 1/2} and the product-limit comparison values are known.
inline std::string example4_csv() {
    return "z1,d1,z2,d2\n"
           "0.51,1,0.02,1\n"
           "0.11,1,0.62,0\n"
           "0.24,0,0.24,0\n"
           "0.68,1,0.68,1\n";
}

inline Dataset example4_dataset() { return parse_dataset(example4_csv()); }

inline Rat dec(const char* s) { return parse_decimal(s); }

// Independent direct implementation of the classical product-limit
// estimator: walk the sorted observations, release mass by the at-risk
// fraction at each event time. Used as the oracle for km().
struct KmOracle {
    std::map<Rat, Rat> mass;
    Rat defect = 0;
    std::optional<Rat> defect_at;
};

inline KmOracle direct_km(std::vector<std::pair<Rat, int>> pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    KmOracle out;
    Rat surv = 1;
    long at_risk = static_cast<long>(pairs.size());
    std::size_t k = 0;
    Rat max_time = 0;
    while (k < pairs.size()) {
        Rat t = pairs[k].first;
        long died = 0, dropped = 0;
        while (k < pairs.size() && pairs[k].first == t) {
            if (pairs[k].second == 1)
                ++died;
            ++dropped;
            ++k;
        }
        if (died > 0) {
            Rat released = surv * Rat(died, at_risk);
            out.mass[t] = released;
            surv -= released;
        }
        at_risk -= dropped;
        max_time = t;
    }
    out.defect = surv;
    if (surv > 0) out.defect_at = max_time;
    return out;
}

// Survival past t implied by a mass curve (defect counts at its placement).
inline Rat curve_survival_past(const MassCurve& mc, const Rat& t) {
    Rat acc = 0;
    for (std::size_t i = 0; i < mc.mass.size(); ++i)
        if (mc.grid[i] > t) acc += mc.mass[i];
    if (mc.defect_index && mc.grid[*mc.defect_index] > t) acc += mc.defect;
    return acc;
}

// Random right-censored dataset over a small integer time pool; ties and
// heavy censoring both occur.
inline Dataset random_dataset(SeededRng& rng, int max_n = 14, int pool = 5,
                              double censor_prob = 0.35) {
    int n = 1 + static_cast<int>(rng.uniform01() * max_n);
    std::vector<Observation> obs;
    for (int k = 0; k < n; ++k) {
        Observation o;
        o.z1 = Rat(1 + static_cast<long>(rng.uniform01() * pool));
        o.z2 = Rat(1 + static_cast<long>(rng.uniform01() * pool));
        o.d1 = rng.bernoulli(censor_prob) ? 0 : 1;
        o.d2 = rng.bernoulli(censor_prob) ? 0 : 1;
        obs.push_back(std::move(o));
    }
    return make_dataset(std::move(obs));
}

// Random dataset with every coordinate uncensored.
inline Dataset random_uncensored_dataset(SeededRng& rng, int max_n = 14, int pool = 5) {
    return random_dataset(rng, max_n, pool, 0.0);
}

// Random probability mass on grid x grid from integer weights (exact
// normalization). `support` restricts atoms to indices < support when
// positive.
inline BivariateMass random_mass(SeededRng& rng, const TimeGrid& grid, std::size_t support = 0,
                                 double sparsity = 0.5) {
    if (support == 0 || support > grid.size()) support = grid.size();
    std::vector<long> w(grid.size() * grid.size(), 0);
    long total = 0;
    for (std::size_t i1 = 0; i1 < support; ++i1)
        for (std::size_t i2 = 0; i2 < support; ++i2)
            if (rng.uniform01() > sparsity) {
                long v = 1 + static_cast<long>(rng.uniform01() * 9);
                w[i1 * grid.size() + i2] = v;
                total += v;
            }
    if (total == 0) {
        std::size_t i = static_cast<std::size_t>(rng.uniform01() * support);
        std::size_t j = static_cast<std::size_t>(rng.uniform01() * support);
        w[i * grid.size() + j] = 1;
        total = 1;
    }
    BivariateMass m(grid);
    for (std::size_t i1 = 0; i1 < grid.size(); ++i1)
        for (std::size_t i2 = 0; i2 < grid.size(); ++i2)
            if (w[i1 * grid.size() + i2] > 0)
                m.add(i1, i2, Rat(w[i1 * grid.size() + i2], total));
    return m;
}

inline BivariateMass mass_from_atoms(const TimeGrid& grid,
                                     const std::vector<std::tuple<Rat, Rat, Rat>>& atoms) {
    BivariateMass m(grid);
    for (const auto& [t1, t2, w] : atoms) m.add(*grid.index_of(t1), *grid.index_of(t2), w);
    return m;
}

// Random truth / censoring pair with disjoint supports (truth on even
// times, censoring on odd times) and a censoring atom beyond the entire
// truth support; the exact observation law then determines the truth.
// Censoring values colliding with truth values can turn an off-diagonal
// event into an observed tie, which the reduction cannot undo, so the
// generators keep the supports apart the way a continuous censoring law
// would.
struct ScenarioPair {
    TimeGrid grid;
    BivariateMass p0;
    BivariateMass g;
};

inline ScenarioPair random_identifiable_pair(SeededRng& rng, std::size_t max_support = 4) {
    std::size_t k = 2 + static_cast<std::size_t>(rng.uniform01() * (max_support - 1));
    if (k > max_support) k = max_support;
    // truth times 2,4,..,2k; censoring times 3,5,..,2k+1
    std::vector<Rat> times;
    for (std::size_t i = 0; i < k; ++i) {
        times.push_back(Rat(2 * static_cast<long>(i) + 2));
        times.push_back(Rat(2 * static_cast<long>(i) + 3));
    }
    TimeGrid grid(std::move(times));

    BivariateMass p0(grid);
    {
        std::vector<long> w(k * k, 0);
        long total = 0;
        for (auto& v : w)
            if (rng.uniform01() > 0.5) {
                v = 1 + static_cast<long>(rng.uniform01() * 9);
                total += v;
            }
        if (total == 0) {
            w[0] = 1;
            total = 1;
        }
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                if (w[a * k + b] > 0) p0.add(2 * a, 2 * b, Rat(w[a * k + b], total));
    }
    BivariateMass g(grid);
    {
        std::vector<long> w(k * k, 0);
        long total = 1;  // reserve weight for the dominating corner
        for (auto& v : w)
            if (rng.uniform01() > 0.7) {
                v = 1 + static_cast<long>(rng.uniform01() * 9);
                total += v;
            }
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                if (w[a * k + b] > 0) g.add(2 * a + 1, 2 * b + 1, Rat(w[a * k + b], total));
        g.add(grid.size() - 1, grid.size() - 1, Rat(1, total));
    }
    return {grid, std::move(p0), std::move(g)};
}

// Largest absolute atom difference between two masses on the same grid.
inline Rat sup_atom_diff(const BivariateMass& a, const BivariateMass& b) {
    Rat worst = 0;
    for (std::size_t i1 = 0; i1 < a.dim(); ++i1)
        for (std::size_t i2 = 0; i2 < a.dim(); ++i2) {
            Rat d = a.at(i1, i2) - b.at(i1, i2);
            if (d < 0) d = -d;
            if (d > worst) worst = d;
        }
    return worst;
}

inline bool atoms_equal(const BivariateMass& a, const BivariateMass& b) {
    return a.grid() == b.grid() && sup_atom_diff(a, b) == 0;
}

}  // namespace bivsurv::testing
