#pragma once

// Bivariate Beta-process prior over the minimum-time reparametrization:
// independent Beta hazards for the minimum, a Dirichlet triple for the tie
// pattern at each point, and independent Beta hazards for the larger
// coordinate within each (point, pattern) stratum. The posterior update
// uses only the likelihood factors the reparametrization expresses in
// these parameters; observations whose minimum is censored touch only the
// minimum-time risk counts.

#include "bivsurv/counts.hpp"
#include "bivsurv/data.hpp"
#include "bivsurv/rng.hpp"
#include "bivsurv/univariate.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace bivsurv {

// ---------------------------------------------------------------------------
// Joint probability mass
// ---------------------------------------------------------------------------

// Where a product-limit stratum failed to release all of its mass, the
// residual is placed by convention at the stratum's largest weighted time
// and recorded here. The placed mass is included in the atom matrix.
struct DefectRecord {
    enum class Level {
        minimum,      // mass never released by the minimum-time hazards
        tie_pattern,  // released mass with no tie-pattern weights at all
        conditional   // stratum (i, eps) residual
    };
    Level level = Level::minimum;
    std::size_t i = 0;  // stratum base index (tie_pattern / conditional)
    int eps = 0;        // 1 or 2 for conditional strata
    std::size_t at1 = 0, at2 = 0;
    Rat mass;
};

// Discrete joint mass for the pair on grid x grid, queryable as a survival
// surface. Defect mass is folded into the atoms at its placement and
// additionally recorded per stratum.
class BivariateMass {
public:
    BivariateMass() = default;
    explicit BivariateMass(TimeGrid grid)
        : grid_(std::move(grid)), mass_(grid_.size() * grid_.size(), Rat(0)) {}

    const TimeGrid& grid() const { return grid_; }
    std::size_t dim() const { return grid_.size(); }

    const Rat& at(std::size_t i1, std::size_t i2) const { return mass_[i1 * dim() + i2]; }
    void add(std::size_t i1, std::size_t i2, const Rat& m) { mass_[i1 * dim() + i2] += m; }

    const std::vector<DefectRecord>& defects() const { return defects_; }
    void record_defect(DefectRecord d) {
        add(d.at1, d.at2, d.mass);
        defects_.push_back(std::move(d));
    }

    // Rebuild from serialized parts; the mass entries already contain any
    // placed defect mass.
    static BivariateMass from_parts(TimeGrid grid, std::vector<Rat> mass,
                                    std::vector<DefectRecord> defects) {
        BivariateMass m(std::move(grid));
        if (mass.size() != m.mass_.size())
            throw consistency_error("mass entries do not match the grid");
        m.mass_ = std::move(mass);
        m.defects_ = std::move(defects);
        return m;
    }

    Rat total() const {
        Rat t = 0;
        for (const auto& v : mass_) t += v;
        return t;
    }

    Rat defective_mass() const {
        Rat t = 0;
        for (const auto& d : defects_) t += d.mass;
        return t;
    }

    // P{T1 > s, T2 > t}; defect mass counts at its placement point.
    Rat survival(const Rat& s, const Rat& t) const {
        Rat acc = 0;
        for (std::size_t i1 = 0; i1 < dim(); ++i1) {
            if (grid_[i1] <= s) continue;
            for (std::size_t i2 = 0; i2 < dim(); ++i2)
                if (grid_[i2] > t) acc += at(i1, i2);
        }
        return acc;
    }

    void validate() const {
        for (const auto& v : mass_)
            if (v < 0) throw consistency_error("negative probability mass");
        if (total() != 1) throw consistency_error("mass must total 1");
    }

private:
    TimeGrid grid_;
    std::vector<Rat> mass_;
    std::vector<DefectRecord> defects_;
};

inline Rat survival_surface(const BivariateMass& m, const Rat& s, const Rat& t) {
    return m.survival(s, t);
}

// ---------------------------------------------------------------------------
// Parameter bundle
// ---------------------------------------------------------------------------

struct BivariateBetaParams {
    TimeGrid grid;
    BetaPrior1D star;                            // minimum-time Beta weights
    std::vector<std::array<Rat, 3>> dirichlet;   // tie-pattern weights per point

    // cond[i][eps-1]: Beta weights over offsets d = 1..len, offset d
    // meaning grid position i+d. Entries past the stored length carry no
    // weight.
    struct CondBeta {
        std::vector<Rat> a, b;
    };
    std::vector<std::array<CondBeta, 2>> cond;

    static BivariateBetaParams zero(const TimeGrid& grid) {
        BivariateBetaParams p;
        p.grid = grid;
        p.star.grid = grid;
        p.star.a.assign(grid.size(), Rat(0));
        p.star.b.assign(grid.size(), Rat(0));
        p.dirichlet.assign(grid.size(), {Rat(0), Rat(0), Rat(0)});
        p.cond.assign(grid.size(), {});
        return p;
    }

    BivariateBetaParams scaled(const Rat& factor) const {
        BivariateBetaParams p = *this;
        for (auto& v : p.star.a) v *= factor;
        for (auto& v : p.star.b) v *= factor;
        for (auto& t : p.dirichlet)
            for (auto& v : t) v *= factor;
        for (auto& per_i : p.cond)
            for (auto& cb : per_i) {
                for (auto& v : cb.a) v *= factor;
                for (auto& v : cb.b) v *= factor;
            }
        return p;
    }

    void validate() const {
        star.validate();
        if (star.grid != grid || dirichlet.size() != grid.size() || cond.size() != grid.size())
            throw consistency_error("parameter bundle does not match its grid");
        for (const auto& t : dirichlet)
            for (const auto& v : t)
                if (v < 0) throw consistency_error("negative Dirichlet weight");
        for (std::size_t i = 0; i < cond.size(); ++i)
            for (int e = 0; e < 2; ++e) {
                const auto& cb = cond[i][e];
                if (cb.a.size() != cb.b.size())
                    throw consistency_error("conditional weight vectors differ in length");
                if (cb.a.size() > grid.size() - 1 - i)
                    throw consistency_error("conditional offsets fall off the grid");
                for (std::size_t k = 0; k < cb.a.size(); ++k)
                    if (cb.a[k] < 0 || cb.b[k] < 0)
                        throw consistency_error("negative Beta weight");
            }
    }
};

// ---------------------------------------------------------------------------
// Stratified hazard assembly
// ---------------------------------------------------------------------------

// Hazard-scale description of a joint law: the minimum-time hazards, the
// tie-pattern probabilities where events release mass, and the conditional
// hazards per stratum. `sup` flags mark where a quantity is defined at all
// (carries weight / has positive risk); the last supported point of a
// stratum is the defect placement.
struct StratifiedHazards {
    TimeGrid grid;
    std::vector<Rat> star_h;
    std::vector<std::uint8_t> star_sup;
    std::vector<std::array<Rat, 3>> eps_p;
    std::vector<std::uint8_t> eps_sup;
    struct CondH {
        std::vector<Rat> h;
        std::vector<std::uint8_t> sup;
    };
    std::vector<std::array<CondH, 2>> cond;
};

enum class UndefinedMassPolicy { withhold_as_defect, error };

// Runs the product construction: release minimum-time mass point by point,
// split by the tie pattern, and push each off-diagonal share through its
// stratum's conditional hazards. Residual mass at any level follows the
// defect convention.
inline BivariateMass assemble_mass(const StratifiedHazards& sh,
                                   UndefinedMassPolicy policy = UndefinedMassPolicy::withhold_as_defect) {
    const std::size_t m = sh.grid.size();
    BivariateMass out(sh.grid);

    std::optional<std::size_t> star_placement;
    for (std::size_t i = 0; i < m; ++i)
        if (sh.star_sup[i]) star_placement = i;

    Rat remaining = 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (!sh.star_sup[i]) continue;
        Rat released = remaining * sh.star_h[i];
        if (released == 0) continue;
        remaining -= released;

        if (!sh.eps_sup[i]) {
            if (policy == UndefinedMassPolicy::error)
                throw consistency_error("no tie-pattern weight at a point carrying mass");
            out.record_defect({DefectRecord::Level::tie_pattern, i, 0, i, i, released});
            continue;
        }
        const auto& p = sh.eps_p[i];
        if (p[0] > 0) out.add(i, i, released * p[0]);
        for (int eps = 1; eps <= 2; ++eps) {
            Rat share = released * p[eps];
            if (share == 0) continue;
            const auto& ch = sh.cond[i][eps - 1];
            std::optional<std::size_t> placement;
            for (std::size_t k = 0; k < ch.sup.size(); ++k)
                if (ch.sup[k]) placement = k;
            if (!placement) {
                if (policy == UndefinedMassPolicy::error)
                    throw consistency_error("no conditional weight in a stratum carrying mass");
                out.record_defect({DefectRecord::Level::conditional, i, eps, i, i, share});
                continue;
            }
            Rat left = share;
            for (std::size_t k = 0; k < ch.h.size(); ++k) {
                if (!ch.sup[k]) continue;
                Rat rel = left * ch.h[k];
                if (rel == 0) continue;
                left -= rel;
                std::size_t j = i + k + 1;
                if (eps == 1)
                    out.add(j, i, rel);
                else
                    out.add(i, j, rel);
            }
            if (left > 0) {
                std::size_t j = i + *placement + 1;
                if (eps == 1)
                    out.record_defect({DefectRecord::Level::conditional, i, eps, j, i, left});
                else
                    out.record_defect({DefectRecord::Level::conditional, i, eps, i, j, left});
            }
        }
    }
    if (remaining > 0) {
        std::size_t pl = star_placement ? *star_placement : (m == 0 ? 0 : m - 1);
        if (m == 0) throw consistency_error("cannot place mass on an empty grid");
        out.record_defect({DefectRecord::Level::minimum, 0, 0, pl, pl, remaining});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reparametrizing a joint mass into stratified hazards
// ---------------------------------------------------------------------------

// Exact hazard-scale reduction of a known joint mass. Supported exactly
// where the corresponding (conditional) survival is still positive.
inline StratifiedHazards reparametrize_mass(const BivariateMass& f) {
    const std::size_t m = f.dim();
    StratifiedHazards sh;
    sh.grid = f.grid();
    sh.star_h.assign(m, Rat(0));
    sh.star_sup.assign(m, 0);
    sh.eps_p.assign(m, {Rat(0), Rat(0), Rat(0)});
    sh.eps_sup.assign(m, 0);
    sh.cond.assign(m, {});

    // Mass of the minimum and its tie-pattern split.
    std::vector<Rat> p_star(m, Rat(0));
    std::vector<std::array<Rat, 3>> p_eps(m, {Rat(0), Rat(0), Rat(0)});
    for (std::size_t i1 = 0; i1 < m; ++i1)
        for (std::size_t i2 = 0; i2 < m; ++i2) {
            const Rat& w = f.at(i1, i2);
            if (w == 0) continue;
            std::size_t i = std::min(i1, i2);
            int eps = i1 == i2 ? 0 : (i1 > i2 ? 1 : 2);
            p_star[i] += w;
            p_eps[i][eps] += w;
        }

    Rat tail = 0;
    for (std::size_t i = m; i-- > 0;) tail += p_star[i];
    for (std::size_t i = 0; i < m; ++i) {
        if (tail > 0) {
            sh.star_sup[i] = 1;
            sh.star_h[i] = p_star[i] / tail;
        }
        if (p_star[i] > 0) {
            sh.eps_sup[i] = 1;
            for (int e = 0; e < 3; ++e) sh.eps_p[i][e] = p_eps[i][e] / p_star[i];
        }
        tail -= p_star[i];

        for (int eps = 1; eps <= 2; ++eps) {
            if (p_eps[i][eps] == 0) continue;
            auto& ch = sh.cond[i][eps - 1];
            ch.h.assign(m - 1 - i, Rat(0));
            ch.sup.assign(m - 1 - i, 0);
            Rat cond_tail = p_eps[i][eps];
            std::size_t last = 0;
            for (std::size_t d = 1; d + i < m; ++d) {
                std::size_t j = i + d;
                Rat w = eps == 1 ? f.at(j, i) : f.at(i, j);
                if (cond_tail > 0) {
                    ch.sup[d - 1] = 1;
                    ch.h[d - 1] = w / cond_tail;
                    last = d;
                }
                cond_tail -= w;
            }
            ch.h.resize(last);
            ch.sup.resize(last);
        }
    }
    return sh;
}

// ---------------------------------------------------------------------------
// Prior construction
// ---------------------------------------------------------------------------

// A prior guess distribution plus concentration functions. Weights may be
// a single constant or per-point tables; they apply only where the guess
// itself is defined.
struct PriorGuess {
    BivariateMass f0;
    Rat w_star_const = 1;
    std::vector<Rat> w_star_table;  // per grid index; empty = constant
    Rat w_dir_const = 1;
    std::vector<Rat> w_dir_table;
    Rat w_cond_const = 1;
    // per (i, eps): weights over offsets; empty = constant
    std::vector<std::array<std::vector<Rat>, 2>> w_cond_table;

    Rat w_star(std::size_t i) const { return w_star_table.empty() ? w_star_const : w_star_table[i]; }
    Rat w_dir(std::size_t i) const { return w_dir_table.empty() ? w_dir_const : w_dir_table[i]; }
    Rat w_cond(std::size_t i, int eps, std::size_t d) const {
        if (w_cond_table.empty()) return w_cond_const;
        const auto& v = w_cond_table[i][eps - 1];
        return d - 1 < v.size() ? v[d - 1] : w_cond_const;
    }

    void validate() const {
        f0.validate();
        auto positive = [](const Rat& w) {
            if (w <= 0) throw consistency_error("concentration must be positive");
        };
        positive(w_star_const);
        positive(w_dir_const);
        positive(w_cond_const);
        for (const auto& w : w_star_table) positive(w);
        for (const auto& w : w_dir_table) positive(w);
        for (const auto& per_i : w_cond_table)
            for (const auto& v : per_i)
                for (const auto& w : v) positive(w);
    }
};

// Beta weights (w*h0, w*(1-h0)) etc., built from the reparametrized guess.
inline BivariateBetaParams prior_from_guess(const PriorGuess& g) {
    g.validate();
    StratifiedHazards sh = reparametrize_mass(g.f0);
    const std::size_t m = sh.grid.size();
    BivariateBetaParams p = BivariateBetaParams::zero(sh.grid);
    for (std::size_t i = 0; i < m; ++i) {
        if (sh.star_sup[i]) {
            Rat w = g.w_star(i);
            p.star.a[i] = w * sh.star_h[i];
            p.star.b[i] = w * (1 - sh.star_h[i]);
        }
        if (sh.eps_sup[i]) {
            Rat w = g.w_dir(i);
            for (int e = 0; e < 3; ++e) p.dirichlet[i][e] = w * sh.eps_p[i][e];
        }
        for (int eps = 1; eps <= 2; ++eps) {
            const auto& ch = sh.cond[i][eps - 1];
            auto& cb = p.cond[i][eps - 1];
            cb.a.assign(ch.h.size(), Rat(0));
            cb.b.assign(ch.h.size(), Rat(0));
            for (std::size_t k = 0; k < ch.h.size(); ++k) {
                if (!ch.sup[k]) continue;
                Rat w = g.w_cond(i, eps, k + 1);
                cb.a[k] = w * ch.h[k];
                cb.b[k] = w * (1 - ch.h[k]);
            }
        }
    }
    return p;
}

// Data-anchored guess: the completed pairs of the observations whose
// minimum time is uncensored, each carrying equal mass, with constant
// concentration w. Suits use as a vanishing-weight reference prior.
inline PriorGuess empirical_prior_guess(const Dataset& ds, const Rat& w = 1) {
    BivariateMass f0(ds.grid);
    long k = 0;
    for (const auto& o : ds.observations)
        if (reparametrize(o).delta_star == 1) ++k;
    if (k == 0) throw consistency_error("no usable events to anchor a prior guess");
    for (const auto& o : ds.observations) {
        auto rp = reparametrize(o);
        if (rp.delta_star != 1) continue;
        std::size_t i1 = *ds.grid.index_of(o.z1);
        std::size_t i2 = *ds.grid.index_of(o.z2);
        f0.add(i1, i2, Rat(1, k));
    }
    PriorGuess g;
    g.f0 = std::move(f0);
    g.w_star_const = g.w_dir_const = g.w_cond_const = w;
    return g;
}

// ---------------------------------------------------------------------------
// Posterior update and mean
// ---------------------------------------------------------------------------

inline BivariateBetaParams update(const BivariateBetaParams& prior, const CountStatistics& c) {
    prior.validate();
    if (prior.grid != c.grid) throw consistency_error("prior and counts live on different grids");
    BivariateBetaParams post = prior;
    const std::size_t m = prior.grid.size();
    for (std::size_t i = 0; i < m; ++i) {
        post.star.a[i] += c.dn_star[i];
        post.star.b[i] += c.y_star[i] - c.dn_star[i];
        for (int e = 0; e < 3; ++e) post.dirichlet[i][e] += c.n_eps[i][e];
        for (int eps = 1; eps <= 2; ++eps) {
            const auto& cc = c.cond[i][eps - 1];
            auto& cb = post.cond[i][eps - 1];
            std::size_t len = std::max(cb.a.size(), cc.y.size());
            cb.a.resize(len, Rat(0));
            cb.b.resize(len, Rat(0));
            for (std::size_t k = 0; k < cc.y.size(); ++k) {
                cb.a[k] += cc.dn[k];
                cb.b[k] += cc.y[k] - cc.dn[k];
            }
        }
    }
    return post;
}

namespace detail {

inline StratifiedHazards hazard_means(const BivariateBetaParams& p) {
    const std::size_t m = p.grid.size();
    StratifiedHazards sh;
    sh.grid = p.grid;
    sh.star_h.assign(m, Rat(0));
    sh.star_sup.assign(m, 0);
    sh.eps_p.assign(m, {Rat(0), Rat(0), Rat(0)});
    sh.eps_sup.assign(m, 0);
    sh.cond.assign(m, {});
    for (std::size_t i = 0; i < m; ++i) {
        Rat tot = p.star.a[i] + p.star.b[i];
        if (tot > 0) {
            sh.star_sup[i] = 1;
            sh.star_h[i] = p.star.a[i] / tot;
        }
        Rat dtot = p.dirichlet[i][0] + p.dirichlet[i][1] + p.dirichlet[i][2];
        if (dtot > 0) {
            sh.eps_sup[i] = 1;
            for (int e = 0; e < 3; ++e) sh.eps_p[i][e] = p.dirichlet[i][e] / dtot;
        }
        for (int eps = 1; eps <= 2; ++eps) {
            const auto& cb = p.cond[i][eps - 1];
            auto& ch = sh.cond[i][eps - 1];
            ch.h.assign(cb.a.size(), Rat(0));
            ch.sup.assign(cb.a.size(), 0);
            for (std::size_t k = 0; k < cb.a.size(); ++k) {
                Rat t = cb.a[k] + cb.b[k];
                if (t > 0) {
                    ch.sup[k] = 1;
                    ch.h[k] = cb.a[k] / t;
                }
            }
        }
    }
    return sh;
}

}  // namespace detail

// Joint mass assembled from the posterior mean of every hazard and
// tie-pattern parameter. Mass reaching a point with no tie-pattern weight
// is withheld as a flagged defect.
inline BivariateMass posterior_mean_mass(const BivariateBetaParams& p) {
    p.validate();
    return assemble_mass(detail::hazard_means(p), UndefinedMassPolicy::withhold_as_defect);
}

// Empirical-ratio estimator: the vanishing-weight limit of the posterior
// mean, computed directly from the counts (0/0 ratios release nothing).
// Equals posterior_mean_mass(update(zero prior, c)) exactly.
inline BivariateMass noninformative_estimate(const CountStatistics& c) {
    if (c.grid.empty() || c.total_observations() == 0)
        throw consistency_error("empty dataset");
    const std::size_t m = c.grid.size();
    StratifiedHazards sh;
    sh.grid = c.grid;
    sh.star_h.assign(m, Rat(0));
    sh.star_sup.assign(m, 0);
    sh.eps_p.assign(m, {Rat(0), Rat(0), Rat(0)});
    sh.eps_sup.assign(m, 0);
    sh.cond.assign(m, {});
    for (std::size_t i = 0; i < m; ++i) {
        if (c.y_star[i] > 0) {
            sh.star_sup[i] = 1;
            sh.star_h[i] = Rat(c.dn_star[i], c.y_star[i]);
        }
        if (c.dn_star[i] > 0) {
            sh.eps_sup[i] = 1;
            for (int e = 0; e < 3; ++e) sh.eps_p[i][e] = Rat(c.n_eps[i][e], c.dn_star[i]);
        }
        for (int eps = 1; eps <= 2; ++eps) {
            const auto& cc = c.cond[i][eps - 1];
            auto& ch = sh.cond[i][eps - 1];
            ch.h.assign(cc.y.size(), Rat(0));
            ch.sup.assign(cc.y.size(), 0);
            for (std::size_t k = 0; k < cc.y.size(); ++k)
                if (cc.y[k] > 0) {
                    ch.sup[k] = 1;
                    ch.h[k] = Rat(cc.dn[k], cc.y[k]);
                }
        }
    }
    return assemble_mass(sh, UndefinedMassPolicy::withhold_as_defect);
}

inline BivariateMass noninformative_estimate(const Dataset& ds) {
    return noninformative_estimate(compute_counts(ds));
}

// ---------------------------------------------------------------------------
// Recovering a joint law from the exact observation law
// ---------------------------------------------------------------------------

struct WeightedObservation {
    Observation obs;
    Rat prob;
};

// Inverts the exact law of the censored observables back to the joint law
// of the pair, using only the event-side conditional factors. Fails with
// an identifiability error when some mass is unrecoverable (the censoring
// law has no support beyond part of the pair law). The result lives on
// `grid`, which must contain every observable time.
inline BivariateMass recover_distribution(const std::vector<WeightedObservation>& law,
                                          const TimeGrid& grid) {
    Rat total = 0;
    for (const auto& w : law) {
        w.obs.validate();
        if (w.prob < 0) throw consistency_error("negative probability");
        total += w.prob;
        if (!grid.index_of(w.obs.z1) || !grid.index_of(w.obs.z2))
            throw consistency_error("observation time off grid");
    }
    if (total != 1) throw consistency_error("observation law must total 1");
    const std::size_t m = grid.size();

    std::vector<Rat> p_zstar(m, Rat(0)), p_event(m, Rat(0));
    std::vector<std::array<Rat, 3>> p_eta(m, {Rat(0), Rat(0), Rat(0)});
    // per (i, eps): tail-resolved mass over offsets of z_eta, any flag and
    // event-flag versions
    std::map<std::tuple<std::size_t, int, std::size_t>, std::pair<Rat, Rat>> cond_at;
    for (const auto& w : law) {
        if (w.prob == 0) continue;
        auto rp = reparametrize(w.obs);
        std::size_t i = *grid.index_of(rp.z_star);
        p_zstar[i] += w.prob;
        if (rp.delta_star == 1) {
            p_event[i] += w.prob;
            p_eta[i][rp.eta] += w.prob;
            if (rp.eta != 0) {
                std::size_t j = *grid.index_of(rp.z_eta);
                auto& slot = cond_at[{i, rp.eta, j - i}];
                slot.first += w.prob;
                if (rp.delta_eta == 1) slot.second += w.prob;
            }
        }
    }

    StratifiedHazards sh;
    sh.grid = grid;
    sh.star_h.assign(m, Rat(0));
    sh.star_sup.assign(m, 0);
    sh.eps_p.assign(m, {Rat(0), Rat(0), Rat(0)});
    sh.eps_sup.assign(m, 0);
    sh.cond.assign(m, {});

    Rat tail = 0;
    for (std::size_t i = m; i-- > 0;) tail += p_zstar[i];
    for (std::size_t i = 0; i < m; ++i) {
        if (tail > 0) {
            sh.star_sup[i] = 1;
            sh.star_h[i] = p_event[i] / tail;
        } else if (p_event[i] > 0) {
            throw identifiability_error("event mass with zero risk in the observation law");
        }
        if (p_event[i] > 0) {
            sh.eps_sup[i] = 1;
            for (int e = 0; e < 3; ++e) sh.eps_p[i][e] = p_eta[i][e] / p_event[i];
        }
        tail -= p_zstar[i];

        for (int eps = 1; eps <= 2; ++eps) {
            if (p_eta[i][eps] == 0) continue;
            std::size_t max_d = 0;
            for (std::size_t d = 1; d + i < m; ++d)
                if (cond_at.count({i, eps, d})) max_d = d;
            auto& ch = sh.cond[i][eps - 1];
            ch.h.assign(max_d, Rat(0));
            ch.sup.assign(max_d, 0);
            Rat cond_tail = 0;
            for (std::size_t d = max_d; d >= 1; --d) {
                auto it = cond_at.find({i, eps, d});
                if (it != cond_at.end()) cond_tail += it->second.first;
                if (cond_tail > 0) {
                    ch.sup[d - 1] = 1;
                    Rat ev = it != cond_at.end() ? it->second.second : Rat(0);
                    ch.h[d - 1] = ev / cond_tail;
                }
            }
        }
    }

    BivariateMass out = assemble_mass(sh, UndefinedMassPolicy::withhold_as_defect);
    if (out.defective_mass() > 0)
        throw identifiability_error("observation law does not determine the full joint law");
    return out;
}

inline BivariateMass recover_distribution(const std::vector<WeightedObservation>& law) {
    std::vector<Rat> times;
    for (const auto& w : law) {
        times.push_back(w.obs.z1);
        times.push_back(w.obs.z2);
    }
    return recover_distribution(law, TimeGrid(std::move(times)));
}

// ---------------------------------------------------------------------------
// Sampling from the prior
// ---------------------------------------------------------------------------

// Draws the hazards and tie-pattern probabilities, then assembles the
// implied joint mass. Draws happen in fixed grid order, so a seed fully
// determines the result. Mass reaching a point with no weights at all is
// an error here: the prior cannot be sampled there.
inline BivariateMass sample_prior(const BivariateBetaParams& p, SeededRng& rng) {
    p.validate();
    const std::size_t m = p.grid.size();
    StratifiedHazards sh;
    sh.grid = p.grid;
    sh.star_h.assign(m, Rat(0));
    sh.star_sup.assign(m, 0);
    sh.eps_p.assign(m, {Rat(0), Rat(0), Rat(0)});
    sh.eps_sup.assign(m, 0);
    sh.cond.assign(m, {});
    for (std::size_t i = 0; i < m; ++i) {
        if (p.star.a[i] + p.star.b[i] > 0) {
            sh.star_sup[i] = 1;
            sh.star_h[i] = Rat(rng.beta(to_double(p.star.a[i]), to_double(p.star.b[i])));
        }
        const auto& dw = p.dirichlet[i];
        if (dw[0] + dw[1] + dw[2] > 0) {
            auto g = rng.gamma_triple({to_double(dw[0]), to_double(dw[1]), to_double(dw[2])});
            Rat g0(g[0]), g1(g[1]), g2(g[2]);
            Rat tot = g0 + g1 + g2;
            if (tot == 0) {
                // all draws underflowed; fall back to the mean split
                Rat dt = dw[0] + dw[1] + dw[2];
                sh.eps_p[i] = {dw[0] / dt, dw[1] / dt, dw[2] / dt};
            } else {
                sh.eps_p[i] = {g0 / tot, g1 / tot, g2 / tot};
            }
            sh.eps_sup[i] = 1;
        }
        for (int eps = 1; eps <= 2; ++eps) {
            const auto& cb = p.cond[i][eps - 1];
            auto& ch = sh.cond[i][eps - 1];
            ch.h.assign(cb.a.size(), Rat(0));
            ch.sup.assign(cb.a.size(), 0);
            for (std::size_t k = 0; k < cb.a.size(); ++k)
                if (cb.a[k] + cb.b[k] > 0) {
                    ch.sup[k] = 1;
                    ch.h[k] = Rat(rng.beta(to_double(cb.a[k]), to_double(cb.b[k])));
                }
        }
    }
    return assemble_mass(sh, UndefinedMassPolicy::error);
}

}  // namespace bivsurv
