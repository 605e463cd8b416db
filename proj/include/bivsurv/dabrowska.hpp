#pragma once

// Bivariate product-limit survival estimate and a rectangle-mass auditor.
// The estimate is consistent but is not a proper distribution: the audit
// lists the grid cells it assigns negative mass.

#include "bivsurv/betaproc.hpp"
#include "bivsurv/counts.hpp"
#include "bivsurv/data.hpp"
#include "bivsurv/univariate.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace bivsurv {

// Survival values on the closed grid: index 0 on each axis is "time zero",
// index k > 0 is the k-th grid point. Monotonicity is not guaranteed; that
// is exactly what the audit measures.
struct SurvivalSurface {
    TimeGrid grid;
    std::vector<Rat> values;  // (m+1) x (m+1), row-major

    std::size_t dim() const { return grid.size() + 1; }
    const Rat& at_index(std::size_t a, std::size_t b) const { return values[a * dim() + b]; }
    Rat& at_index(std::size_t a, std::size_t b) { return values[a * dim() + b]; }

    // Step-function lookup for arbitrary query times.
    const Rat& value(const Rat& s, const Rat& t) const {
        return at_index(grid.count_leq(s), grid.count_leq(t));
    }
};

// S(s,t) = S1(s) S2(t) prod_{0<u<=s, 0<v<=t} [1 - L(u,v)] with S1, S2 the
// marginal product-limit survivals and, writing Y(u,v) for the number of
// observations with z1 >= u and z2 >= v,
//   L = (L10 L01 - L11) / ((1 - L10)(1 - L01)),
//   L10 = #{z1=u, d1=1, z2>=v}/Y,  L01 = #{z1>=u, z2=v, d2=1}/Y,
//   L11 = #{z1=u, d1=1, z2=v, d2=1}/Y.
// Conventions: 0/0 ratios are 0; a factor whose denominator vanishes is
// skipped.
inline SurvivalSurface dabrowska_estimate(const Dataset& ds) {
    if (ds.observations.empty()) throw consistency_error("empty dataset");
    const std::size_t m = ds.grid.size();
    const std::size_t w = m + 1;

    std::vector<std::pair<Rat, int>> pairs1, pairs2;
    pairs1.reserve(ds.observations.size());
    pairs2.reserve(ds.observations.size());
    for (const auto& o : ds.observations) {
        pairs1.emplace_back(o.z1, o.d1);
        pairs2.emplace_back(o.z2, o.d2);
    }
    std::vector<Rat> s1 = survival_closure(empirical_hazards(pairs1, ds.grid));
    std::vector<Rat> s2 = survival_closure(empirical_hazards(pairs2, ds.grid));

    // Integer count matrices over grid pairs, then 1D/2D suffix sums.
    std::vector<long> pair_cnt(m * m, 0), ev1_cnt(m * m, 0), ev2_cnt(m * m, 0), ev11(m * m, 0);
    for (const auto& o : ds.observations) {
        std::size_t u = *ds.grid.index_of(o.z1);
        std::size_t v = *ds.grid.index_of(o.z2);
        ++pair_cnt[u * m + v];
        if (o.d1 == 1) ++ev1_cnt[u * m + v];
        if (o.d2 == 1) ++ev2_cnt[u * m + v];
        if (o.d1 == 1 && o.d2 == 1) ++ev11[u * m + v];
    }
    // at_risk(u,v) = #{z1 >= u, z2 >= v}
    std::vector<long> at_risk = pair_cnt;
    for (std::size_t u = m; u-- > 0;)
        for (std::size_t v = m; v-- > 0;) {
            long acc = at_risk[u * m + v];
            if (u + 1 < m) acc += at_risk[(u + 1) * m + v];
            if (v + 1 < m) acc += at_risk[u * m + v + 1];
            if (u + 1 < m && v + 1 < m) acc -= at_risk[(u + 1) * m + v + 1];
            at_risk[u * m + v] = acc;
        }
    // n10(u,v) = #{z1=u, d1=1, z2>=v}: suffix over v within row u.
    std::vector<long> n10 = ev1_cnt;
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = m - 1; v-- > 0;) n10[u * m + v] += n10[u * m + v + 1];
    // n01(u,v) = #{z1>=u, z2=v, d2=1}: suffix over u within column v.
    std::vector<long> n01 = ev2_cnt;
    for (std::size_t v = 0; v < m; ++v)
        for (std::size_t u = m - 1; u-- > 0;) n01[u * m + v] += n01[(u + 1) * m + v];

    // factor(u,v) = 1 - L(u,v), in integers:
    // L = (n10 n01 - n11 Y) / ((Y - n10)(Y - n01)).
    auto factor = [&](std::size_t u, std::size_t v) -> Rat {
        long y = at_risk[u * m + v];
        if (y == 0) return Rat(1);
        BigInt a = n10[u * m + v];
        BigInt b = n01[u * m + v];
        BigInt e = ev11[u * m + v];
        BigInt num = a * b - e * y;
        BigInt den = (y - a) * (y - b);
        if (den == 0) return Rat(1);  // skipped factor
        return 1 - Rat(num, den);
    };

    SurvivalSurface surf;
    surf.grid = ds.grid;
    surf.values.assign(w * w, Rat(0));
    // cumulative double product R(a,b) = prod_{u<=a, v<=b} factor, built
    // row by row without division.
    std::vector<Rat> prev_row(w, Rat(1)), row(w, Rat(1));
    surf.at_index(0, 0) = 1;
    for (std::size_t b = 1; b < w; ++b) surf.at_index(0, b) = s2[b];
    for (std::size_t a = 1; a < w; ++a) {
        Rat row_cum = 1;
        row[0] = 1;
        for (std::size_t b = 1; b < w; ++b) {
            row_cum *= factor(a - 1, b - 1);
            row[b] = prev_row[b] * row_cum;
        }
        surf.at_index(a, 0) = s1[a];
        for (std::size_t b = 1; b < w; ++b) surf.at_index(a, b) = s1[a] * s2[b] * row[b];
        std::swap(prev_row, row);
    }
    return surf;
}

inline SurvivalSurface surface_from_mass(const BivariateMass& mass) {
    const std::size_t m = mass.dim();
    const std::size_t w = m + 1;
    SurvivalSurface surf;
    surf.grid = mass.grid();
    surf.values.assign(w * w, Rat(0));
    // suffix sums over strictly-greater index pairs
    for (std::size_t a = w; a-- > 0;)
        for (std::size_t b = w; b-- > 0;) {
            Rat acc = 0;
            if (a < m && b < m) acc += mass.at(a, b);
            if (a + 1 < w) acc += surf.at_index(a + 1, b);
            if (b + 1 < w) acc += surf.at_index(a, b + 1);
            if (a + 1 < w && b + 1 < w) acc -= surf.at_index(a + 1, b + 1);
            surf.at_index(a, b) = acc;
        }
    return surf;
}

// Signed mass of one grid cell (u_{a-1}, u_a] x (v_{b-1}, v_b], a,b >= 1
// in closure indices.
struct AuditCell {
    std::size_t a = 0, b = 0;
    Rat mass;
};

struct MassAudit {
    TimeGrid grid;
    std::vector<AuditCell> cells;
    std::vector<AuditCell> negatives;
    Rat total;  // telescopes to S(0,0) - S(max,0) - S(0,max) + S(max,max)
};

// Inclusion-exclusion over all adjacent grid cells. Negatives at any
// rectangle granularity imply negatives at this finest one.
inline MassAudit mass_audit(const SurvivalSurface& s) {
    const std::size_t m = s.grid.size();
    MassAudit audit;
    audit.grid = s.grid;
    audit.total = 0;
    for (std::size_t a = 1; a <= m; ++a)
        for (std::size_t b = 1; b <= m; ++b) {
            Rat mass = s.at_index(a - 1, b - 1) - s.at_index(a, b - 1) - s.at_index(a - 1, b) +
                       s.at_index(a, b);
            audit.total += mass;
            AuditCell cell{a, b, mass};
            if (mass < 0) audit.negatives.push_back(cell);
            audit.cells.push_back(std::move(cell));
        }
    return audit;
}

// Signed mass of an arbitrary rectangle (s1, s2] x (t1, t2] by
// inclusion-exclusion on the surface.
inline Rat rectangle_mass(const SurvivalSurface& s, const Rat& s1, const Rat& s2, const Rat& t1,
                          const Rat& t2) {
    return s.value(s1, t1) - s.value(s2, t1) - s.value(s1, t2) + s.value(s2, t2);
}

}  // namespace bivsurv
