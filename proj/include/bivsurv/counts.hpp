#pragma once

// Counting statistics on the time grid: risk and event counts for the
// minimum time, the tie-pattern split of events, and per-stratum risk and
// event counts for the larger coordinate, indexed by grid-position offset.
//
// Observations whose minimum time is censored enter only the minimum-time
// risk counts; they carry no usable information about the tie pattern or
// the larger coordinate.

#include "bivsurv/data.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace bivsurv {

struct CountStatistics {
    TimeGrid grid;

    std::vector<long> y_star;                  // #{j : z*_j >= t_i}
    std::vector<long> dn_star;                 // #{j : z*_j = t_i, event}
    std::vector<std::array<long, 3>> n_eps;    // dn_star split by eta

    // Conditional counts for stratum (i, eps), eps in {1,2}. Entry d-1
    // refers to grid position i+d. Vectors are truncated past the last
    // nonzero risk count; absent entries are zero.
    struct CondCounts {
        std::vector<long> y;
        std::vector<long> dn;
    };
    std::vector<std::array<CondCounts, 2>> cond;

    long y_cond(std::size_t i, int eps, std::size_t d) const {
        const auto& c = cond[i][eps - 1];
        return d >= 1 && d <= c.y.size() ? c.y[d - 1] : 0;
    }
    long dn_cond(std::size_t i, int eps, std::size_t d) const {
        const auto& c = cond[i][eps - 1];
        return d >= 1 && d <= c.dn.size() ? c.dn[d - 1] : 0;
    }

    long total_observations() const { return y_star.empty() ? 0 : y_star.front(); }

    void validate() const {
        long events = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (dn_star[i] < 0 || dn_star[i] > y_star[i])
                throw consistency_error("event count exceeds risk count");
            if (i + 1 < grid.size() && y_star[i] < y_star[i + 1])
                throw consistency_error("risk counts must be nonincreasing");
            if (n_eps[i][0] + n_eps[i][1] + n_eps[i][2] != dn_star[i])
                throw consistency_error("tie-pattern counts must sum to the event count");
            events += dn_star[i];
            for (int e = 1; e <= 2; ++e) {
                const auto& c = cond[i][e - 1];
                for (std::size_t k = 0; k < c.y.size(); ++k) {
                    if (c.dn[k] < 0 || c.dn[k] > c.y[k])
                        throw consistency_error("conditional event count exceeds risk count");
                    if (k + 1 < c.y.size() && c.y[k] < c.y[k + 1])
                        throw consistency_error("conditional risk counts must be nonincreasing");
                }
            }
        }
        (void)events;
    }
};

inline CountStatistics compute_counts(const Dataset& ds) {
    const std::size_t m = ds.grid.size();
    CountStatistics c;
    c.grid = ds.grid;
    c.y_star.assign(m, 0);
    c.dn_star.assign(m, 0);
    c.n_eps.assign(m, {0, 0, 0});
    c.cond.assign(m, {});

    std::vector<long> at(m, 0);  // observations with z* exactly at t_i
    for (const auto& o : ds.observations) {
        auto rp = reparametrize(o);
        auto i_opt = ds.grid.index_of(rp.z_star);
        if (!i_opt || !ds.grid.index_of(o.z1) || !ds.grid.index_of(o.z2))
            throw consistency_error("observation time off grid");
        std::size_t i = *i_opt;
        ++at[i];
        if (rp.delta_star == 0) continue;
        ++c.dn_star[i];
        ++c.n_eps[i][rp.eta];
        if (rp.eta == 0) continue;
        std::size_t j = *ds.grid.index_of(rp.z_eta);
        std::size_t span = j - i;  // z_eta > z_star, so span >= 1
        auto& cc = c.cond[i][rp.eta - 1];
        if (cc.y.size() < span) {
            cc.y.resize(span, 0);
            cc.dn.resize(span, 0);
        }
        for (std::size_t d = 1; d <= span; ++d) ++cc.y[d - 1];
        if (rp.delta_eta == 1) ++cc.dn[span - 1];
    }
    long suffix = 0;
    for (std::size_t i = m; i-- > 0;) {
        suffix += at[i];
        c.y_star[i] = suffix;
    }
    return c;
}

inline CountStatistics compute_counts(const std::vector<Observation>& obs, const TimeGrid& grid) {
    return compute_counts(make_dataset(obs, grid));
}

}  // namespace bivsurv
