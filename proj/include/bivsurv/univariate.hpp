#pragma once

// One-dimensional censoring engine reused by every stratum of the
// bivariate estimators: discrete hazards, product-limit mass curves,
// Beta-weight posterior updating, posterior mean hazards.

#include "bivsurv/grid.hpp"
#include "bivsurv/rational.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace bivsurv {

// Discrete hazard h(i) = P{T = t_i | T >= t_i} per grid point.
// no_risk marks points where the hazard came from an empty risk set
// (0/0, reported as 0); empty when not applicable.
struct HazardCurve {
    TimeGrid grid;
    std::vector<Rat> h;
    std::vector<std::uint8_t> no_risk;

    void validate() const {
        for (const auto& v : h)
            if (v < 0 || v > 1) throw consistency_error("hazard outside [0,1]");
    }
};

// Independent Beta weights (a(i), b(i)) per grid point. Both zero means
// the point carries no weight at all.
struct BetaPrior1D {
    TimeGrid grid;
    std::vector<Rat> a, b;

    void validate() const {
        if (a.size() != grid.size() || b.size() != grid.size())
            throw consistency_error("weight vectors must match the grid");
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] < 0 || b[i] < 0) throw consistency_error("negative Beta weight");
    }
};

// Probability mass per grid point plus the residual ("defective") mass a
// product-limit construction failed to release, recorded with the point
// where the convention places it. mass excludes the defect.
struct MassCurve {
    TimeGrid grid;
    std::vector<Rat> mass;
    Rat defect = 0;
    std::optional<std::size_t> defect_index;

    bool defective() const { return defect > 0; }
    Rat total() const {
        Rat t = defect;
        for (const auto& v : mass) t += v;
        return t;
    }
};

namespace detail {

// mass(i) = h(i) * prod_{j<i} (1 - h(j)); whatever survives the last point
// becomes the defect, placed at `placement` (falling back to the last grid
// point).
inline MassCurve hazards_to_mass_at(const HazardCurve& hc, std::optional<std::size_t> placement) {
    hc.validate();
    MassCurve mc;
    mc.grid = hc.grid;
    mc.mass.assign(hc.h.size(), Rat(0));
    Rat surv = 1;
    for (std::size_t i = 0; i < hc.h.size(); ++i) {
        Rat released = surv * hc.h[i];
        mc.mass[i] = released;
        surv -= released;
    }
    mc.defect = surv;
    if (surv > 0) {
        if (!placement && !hc.h.empty()) placement = hc.h.size() - 1;
        mc.defect_index = placement;
    }
    return mc;
}

}  // namespace detail

inline MassCurve hazards_to_mass(const HazardCurve& hc) {
    return detail::hazards_to_mass_at(hc, std::nullopt);
}

// Empirical hazards dn(i)/y(i) for right-censored pairs (time, event flag);
// empty risk sets give hazard 0 and a no_risk flag.
inline HazardCurve empirical_hazards(const std::vector<std::pair<Rat, int>>& pairs,
                                     const TimeGrid& grid) {
    const std::size_t m = grid.size();
    std::vector<long> at(m, 0), dn(m, 0);
    for (const auto& [t, d] : pairs) {
        auto i = grid.index_of(t);
        if (!i) throw consistency_error("observation time off grid");
        ++at[*i];
        if (d == 1)
            ++dn[*i];
        else if (d != 0)
            throw consistency_error("censor flag must be 0 or 1");
    }
    HazardCurve hc;
    hc.grid = grid;
    hc.h.assign(m, Rat(0));
    hc.no_risk.assign(m, 0);
    long y = 0;
    for (std::size_t i = m; i-- > 0;) {
        y += at[i];
        if (y > 0)
            hc.h[i] = Rat(dn[i], y);
        else
            hc.no_risk[i] = 1;
    }
    return hc;
}

// Product-limit mass estimate. The defect, when the last relevant
// observation is censored, is placed at the largest observed time.
inline MassCurve km(const std::vector<std::pair<Rat, int>>& pairs, const TimeGrid& grid) {
    if (pairs.empty()) throw consistency_error("empty input");
    HazardCurve hc = empirical_hazards(pairs, grid);
    std::optional<std::size_t> placement;
    for (std::size_t i = 0; i < hc.no_risk.size(); ++i)
        if (!hc.no_risk[i]) placement = i;
    return detail::hazards_to_mass_at(hc, placement);
}

// Conjugate update a -> a + dn, b -> b + y - dn.
inline BetaPrior1D beta_posterior_1d(const BetaPrior1D& prior, const std::vector<long>& dn,
                                     const std::vector<long>& y) {
    prior.validate();
    if (dn.size() != prior.a.size() || y.size() != prior.a.size())
        throw consistency_error("count vectors must match the grid");
    BetaPrior1D post = prior;
    for (std::size_t i = 0; i < dn.size(); ++i) {
        if (dn[i] < 0 || dn[i] > y[i]) throw consistency_error("event count exceeds risk count");
        post.a[i] += dn[i];
        post.b[i] += y[i] - dn[i];
    }
    return post;
}

// Mean hazard a/(a+b); a point with no weight at all reports 0.
inline HazardCurve posterior_mean_hazard(const BetaPrior1D& p) {
    p.validate();
    HazardCurve hc;
    hc.grid = p.grid;
    hc.h.assign(p.a.size(), Rat(0));
    for (std::size_t i = 0; i < p.a.size(); ++i) {
        Rat total = p.a[i] + p.b[i];
        if (total > 0) hc.h[i] = p.a[i] / total;
    }
    return hc;
}

// Mass curve of the mean hazards; the defect is placed at the last point
// carrying any weight.
inline MassCurve mean_mass_curve(const BetaPrior1D& p) {
    HazardCurve hc = posterior_mean_hazard(p);
    std::optional<std::size_t> placement;
    for (std::size_t i = 0; i < p.a.size(); ++i)
        if (p.a[i] + p.b[i] > 0) placement = i;
    return detail::hazards_to_mass_at(hc, placement);
}

// Survival prefix on the closed grid: entry k is the probability of
// surviving past the k-th grid point (entry 0 = survival past "time zero",
// always 1).
inline std::vector<Rat> survival_closure(const HazardCurve& hc) {
    std::vector<Rat> s(hc.h.size() + 1);
    s[0] = 1;
    for (std::size_t i = 0; i < hc.h.size(); ++i) s[i + 1] = s[i] * (1 - hc.h[i]);
    return s;
}

}  // namespace bivsurv
