#pragma once

// Simulation studies: draw censored pairs from a known discrete joint law
// and censoring law, run the estimators, and summarize sup-norm errors
// against the truth across sample sizes.

#include "bivsurv/betaproc.hpp"
#include "bivsurv/dabrowska.hpp"
#include "bivsurv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace bivsurv {

namespace detail {

struct AtomSampler {
    std::vector<std::pair<std::size_t, std::size_t>> atoms;
    std::vector<double> cumulative;

    explicit AtomSampler(const BivariateMass& mass) {
        double acc = 0;
        for (std::size_t i1 = 0; i1 < mass.dim(); ++i1)
            for (std::size_t i2 = 0; i2 < mass.dim(); ++i2) {
                const Rat& w = mass.at(i1, i2);
                if (w == 0) continue;
                atoms.emplace_back(i1, i2);
                acc += to_double(w);
                cumulative.push_back(acc);
            }
        if (atoms.empty()) throw consistency_error("cannot sample from an empty mass");
    }

    std::pair<std::size_t, std::size_t> draw(SeededRng& rng) const {
        return atoms[rng.discrete_from_cumulative(cumulative)];
    }
};

}  // namespace detail

// n independent draws of (pair, censoring pair) reduced to observations.
// The dataset keeps the shared scenario grid.
inline Dataset simulate_dataset(const BivariateMass& p0, const BivariateMass& g, long n,
                                SeededRng& rng) {
    if (p0.grid() != g.grid()) throw consistency_error("truth and censoring laws must share a grid");
    detail::AtomSampler truth(p0), cens(g);
    std::vector<Observation> obs;
    obs.reserve(static_cast<std::size_t>(n));
    const TimeGrid& grid = p0.grid();
    for (long k = 0; k < n; ++k) {
        auto [t1, t2] = truth.draw(rng);
        auto [c1, c2] = cens.draw(rng);
        Observation o;
        o.z1 = grid[std::min(t1, c1)];
        o.d1 = t1 <= c1 ? 1 : 0;
        o.z2 = grid[std::min(t2, c2)];
        o.d2 = t2 <= c2 ? 1 : 0;
        obs.push_back(std::move(o));
    }
    return make_dataset(std::move(obs), grid);
}

// Exact law of the observables under (p0, g): every (pair atom, censoring
// atom) combination reduced and aggregated. Serves as the infinite-sample
// surrogate in consistency checks.
inline std::vector<WeightedObservation> exact_observation_law(const BivariateMass& p0,
                                                              const BivariateMass& g) {
    if (p0.grid() != g.grid()) throw consistency_error("truth and censoring laws must share a grid");
    const TimeGrid& grid = p0.grid();
    std::map<std::tuple<Rat, int, Rat, int>, Rat> agg;
    for (std::size_t t1 = 0; t1 < p0.dim(); ++t1)
        for (std::size_t t2 = 0; t2 < p0.dim(); ++t2) {
            const Rat& pw = p0.at(t1, t2);
            if (pw == 0) continue;
            for (std::size_t c1 = 0; c1 < g.dim(); ++c1)
                for (std::size_t c2 = 0; c2 < g.dim(); ++c2) {
                    const Rat& gw = g.at(c1, c2);
                    if (gw == 0) continue;
                    Observation o;
                    o.z1 = grid[std::min(t1, c1)];
                    o.d1 = t1 <= c1 ? 1 : 0;
                    o.z2 = grid[std::min(t2, c2)];
                    o.d2 = t2 <= c2 ? 1 : 0;
                    agg[{o.z1, o.d1, o.z2, o.d2}] += pw * gw;
                }
        }
    std::vector<WeightedObservation> law;
    law.reserve(agg.size());
    for (const auto& [key, prob] : agg) {
        Observation o;
        o.z1 = std::get<0>(key);
        o.d1 = std::get<1>(key);
        o.z2 = std::get<2>(key);
        o.d2 = std::get<3>(key);
        law.push_back({std::move(o), prob});
    }
    return law;
}

// Largest absolute survival difference over the closed grid (surfaces are
// piecewise constant, so the supremum is attained there).
inline double sup_error(const SurvivalSurface& est, const SurvivalSurface& truth) {
    if (est.grid != truth.grid) throw consistency_error("surfaces live on different grids");
    double worst = 0;
    for (std::size_t k = 0; k < est.values.size(); ++k)
        worst = std::max(worst, std::abs(to_double(est.values[k] - truth.values[k])));
    return worst;
}

struct ScenarioConfig {
    TimeGrid grid;
    BivariateMass p0;  // truth
    BivariateMass g;   // censoring law, independent of the pair
    std::vector<long> sample_sizes;
    long replications = 1;
    std::uint64_t seed = 0;
    bool run_dabrowska = false;

    void validate() const {
        p0.validate();
        g.validate();
        if (p0.grid() != grid || g.grid() != grid)
            throw consistency_error("scenario laws must live on the scenario grid");
        if (replications < 1) throw consistency_error("replications must be at least 1");
        if (sample_sizes.empty()) throw consistency_error("no sample sizes given");
        for (long n : sample_sizes)
            if (n < 1) throw consistency_error("sample sizes must be positive");
        // identifiability: the exact observation law must determine p0
        recover_distribution(exact_observation_law(p0, g));
    }
};

struct RunResult {
    long n = 0;
    long replication = 0;
    std::string estimator;
    double sup_error = 0;
    long negative_cells = 0;
    bool failed = false;
    std::string error;
};

struct SummaryRow {
    long n = 0;
    std::string estimator;
    double median = 0, q1 = 0, q3 = 0;
};

struct ConvergenceReport {
    std::vector<RunResult> runs;
    std::vector<SummaryRow> summary;
};

namespace detail {

inline double midpoint_quantile(const std::vector<double>& sorted, std::size_t lo, std::size_t hi) {
    // median of sorted[lo, hi)
    std::size_t len = hi - lo;
    std::size_t mid = lo + len / 2;
    if (len % 2 == 1) return sorted[mid];
    return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace detail

inline double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return detail::midpoint_quantile(values, 0, values.size());
}

// Replication r of sample-size index k uses stream(seed, k*replications + r
// + 1), so serial and any parallel schedule produce identical reports.
inline ConvergenceReport run_study(const ScenarioConfig& cfg) {
    cfg.validate();
    ConvergenceReport report;
    SurvivalSurface truth = surface_from_mass(cfg.p0);
    for (std::size_t k = 0; k < cfg.sample_sizes.size(); ++k) {
        long n = cfg.sample_sizes[k];
        for (long r = 0; r < cfg.replications; ++r) {
            std::uint64_t index = static_cast<std::uint64_t>(k) * cfg.replications +
                                  static_cast<std::uint64_t>(r) + 1;
            SeededRng rng = SeededRng::stream(cfg.seed, index);
            Dataset ds = simulate_dataset(cfg.p0, cfg.g, n, rng);
            {
                RunResult res;
                res.n = n;
                res.replication = r;
                res.estimator = "noninformative";
                try {
                    BivariateMass est = noninformative_estimate(ds);
                    est.validate();
                    res.sup_error = sup_error(surface_from_mass(est), truth);
                } catch (const std::exception& e) {
                    res.failed = true;
                    res.error = e.what();
                }
                report.runs.push_back(std::move(res));
            }
            if (cfg.run_dabrowska) {
                RunResult res;
                res.n = n;
                res.replication = r;
                res.estimator = "dabrowska";
                try {
                    SurvivalSurface est = dabrowska_estimate(ds);
                    res.sup_error = sup_error(est, truth);
                    res.negative_cells = static_cast<long>(mass_audit(est).negatives.size());
                } catch (const std::exception& e) {
                    res.failed = true;
                    res.error = e.what();
                }
                report.runs.push_back(std::move(res));
            }
        }
    }
    // quartile summary per (n, estimator), successful runs only
    std::vector<std::string> estimators{"noninformative"};
    if (cfg.run_dabrowska) estimators.push_back("dabrowska");
    for (long n : cfg.sample_sizes)
        for (const auto& est : estimators) {
            std::vector<double> errs;
            for (const auto& run : report.runs)
                if (run.n == n && run.estimator == est && !run.failed) errs.push_back(run.sup_error);
            if (errs.empty()) continue;
            std::sort(errs.begin(), errs.end());
            SummaryRow row;
            row.n = n;
            row.estimator = est;
            row.median = detail::midpoint_quantile(errs, 0, errs.size());
            if (errs.size() >= 2) {
                row.q1 = detail::midpoint_quantile(errs, 0, errs.size() / 2);
                row.q3 = detail::midpoint_quantile(errs, (errs.size() + 1) / 2, errs.size());
            } else {
                row.q1 = row.q3 = row.median;
            }
            report.summary.push_back(std::move(row));
        }
    return report;
}

}  // namespace bivsurv
