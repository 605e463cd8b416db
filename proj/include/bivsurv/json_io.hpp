#pragma once

// JSON encoding of every public value type. Rationals are written as exact
// strings (terminating decimal where possible, otherwise "p/q"), so a
// decode of an encode reproduces the value bit for bit.

#include "bivsurv/betaproc.hpp"
#include "bivsurv/counts.hpp"
#include "bivsurv/dabrowska.hpp"
#include "bivsurv/data.hpp"
#include "bivsurv/pruitt.hpp"
#include "bivsurv/simulate.hpp"
#include "bivsurv/univariate.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace bivsurv {

using Json = nlohmann::ordered_json;

inline Json encode(const Rat& r) { return to_string_exact(r); }

inline Rat decode_rat(const Json& j) {
    if (j.is_string()) return parse_number(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_number_float()) return Rat(j.get<double>());
    throw parse_error("expected a number or exact number string");
}

inline Json encode(const TimeGrid& g) {
    Json arr = Json::array();
    for (const auto& t : g) arr.push_back(encode(t));
    return arr;
}

inline TimeGrid decode_grid(const Json& j) {
    std::vector<Rat> times;
    for (const auto& e : j) times.push_back(decode_rat(e));
    return TimeGrid(std::move(times));
}

// --- observations -----------------------------------------------------------

inline Json encode(const Observation& o) {
    return Json{{"z1", encode(o.z1)}, {"d1", o.d1}, {"z2", encode(o.z2)}, {"d2", o.d2}};
}

inline Observation decode_observation(const Json& j) {
    Observation o;
    o.z1 = decode_rat(j.at("z1"));
    o.d1 = j.at("d1").get<int>();
    o.z2 = decode_rat(j.at("z2"));
    o.d2 = j.at("d2").get<int>();
    o.validate();
    return o;
}

inline Json encode(const Dataset& ds) {
    Json obs = Json::array();
    for (const auto& o : ds.observations) obs.push_back(encode(o));
    return Json{{"observations", std::move(obs)}, {"grid", encode(ds.grid)}};
}

inline Dataset decode_dataset(const Json& j) {
    std::vector<Observation> obs;
    for (const auto& e : j.at("observations")) obs.push_back(decode_observation(e));
    return make_dataset(std::move(obs), decode_grid(j.at("grid")));
}

// --- counts -----------------------------------------------------------------

inline Json encode(const CountStatistics& c) {
    Json y_cond = Json::array(), dn_cond = Json::array();
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        Json yi = Json::array(), di = Json::array();
        for (int e = 0; e < 2; ++e) {
            yi.push_back(c.cond[i][e].y);
            di.push_back(c.cond[i][e].dn);
        }
        y_cond.push_back(std::move(yi));
        dn_cond.push_back(std::move(di));
    }
    return Json{{"grid", encode(c.grid)}, {"y_star", c.y_star},   {"dn_star", c.dn_star},
                {"n_eps", c.n_eps},       {"y_cond", std::move(y_cond)}, {"dn_cond", std::move(dn_cond)}};
}

// --- univariate curves ------------------------------------------------------

inline Json encode(const MassCurve& mc) {
    Json mass = Json::array();
    for (const auto& v : mc.mass) mass.push_back(encode(v));
    Json j{{"grid", encode(mc.grid)}, {"mass", std::move(mass)}, {"defect", encode(mc.defect)}};
    if (mc.defect_index)
        j["defect_at"] = encode(mc.grid[*mc.defect_index]);
    else
        j["defect_at"] = nullptr;
    return j;
}

inline Json encode(const BetaPrior1D& p) {
    Json a = Json::array(), b = Json::array();
    for (const auto& v : p.a) a.push_back(encode(v));
    for (const auto& v : p.b) b.push_back(encode(v));
    return Json{{"grid", encode(p.grid)}, {"a", std::move(a)}, {"b", std::move(b)}};
}

// --- parameter bundle -------------------------------------------------------

inline Json encode(const BivariateBetaParams& p) {
    Json star_a = Json::array(), star_b = Json::array(), dir = Json::array(), cond = Json::array();
    for (const auto& v : p.star.a) star_a.push_back(encode(v));
    for (const auto& v : p.star.b) star_b.push_back(encode(v));
    for (const auto& t : p.dirichlet) dir.push_back(Json{encode(t[0]), encode(t[1]), encode(t[2])});
    for (std::size_t i = 0; i < p.cond.size(); ++i)
        for (int eps = 1; eps <= 2; ++eps) {
            const auto& cb = p.cond[i][eps - 1];
            if (cb.a.empty()) continue;
            Json a = Json::array(), b = Json::array();
            for (const auto& v : cb.a) a.push_back(encode(v));
            for (const auto& v : cb.b) b.push_back(encode(v));
            cond.push_back(Json{{"i", i}, {"eps", eps}, {"a", std::move(a)}, {"b", std::move(b)}});
        }
    return Json{{"grid", encode(p.grid)},
                {"star", Json{{"a", std::move(star_a)}, {"b", std::move(star_b)}}},
                {"dirichlet", std::move(dir)},
                {"cond", std::move(cond)}};
}

inline BivariateBetaParams decode_params(const Json& j) {
    TimeGrid grid = decode_grid(j.at("grid"));
    BivariateBetaParams p = BivariateBetaParams::zero(grid);
    const Json& star = j.at("star");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        p.star.a[i] = decode_rat(star.at("a").at(i));
        p.star.b[i] = decode_rat(star.at("b").at(i));
        const Json& t = j.at("dirichlet").at(i);
        for (int e = 0; e < 3; ++e) p.dirichlet[i][e] = decode_rat(t.at(e));
    }
    for (const auto& entry : j.at("cond")) {
        std::size_t i = entry.at("i").get<std::size_t>();
        int eps = entry.at("eps").get<int>();
        auto& cb = p.cond.at(i).at(eps - 1);
        for (const auto& v : entry.at("a")) cb.a.push_back(decode_rat(v));
        for (const auto& v : entry.at("b")) cb.b.push_back(decode_rat(v));
    }
    p.validate();
    return p;
}

// --- joint mass -------------------------------------------------------------

inline Json encode(const DefectRecord& d) {
    Json j;
    switch (d.level) {
        case DefectRecord::Level::minimum: j["stratum"] = "minimum"; break;
        case DefectRecord::Level::tie_pattern:
            j["stratum"] = Json{{"i", d.i}, {"kind", "tie_pattern"}};
            break;
        case DefectRecord::Level::conditional:
            j["stratum"] = Json{{"i", d.i}, {"eps", d.eps}};
            break;
    }
    j["at1"] = d.at1;
    j["at2"] = d.at2;
    j["mass"] = encode(d.mass);
    return j;
}

inline DefectRecord decode_defect(const Json& j) {
    DefectRecord d;
    const Json& s = j.at("stratum");
    if (s.is_string()) {
        d.level = DefectRecord::Level::minimum;
    } else if (s.contains("eps")) {
        d.level = DefectRecord::Level::conditional;
        d.i = s.at("i").get<std::size_t>();
        d.eps = s.at("eps").get<int>();
    } else {
        d.level = DefectRecord::Level::tie_pattern;
        d.i = s.at("i").get<std::size_t>();
    }
    d.at1 = j.at("at1").get<std::size_t>();
    d.at2 = j.at("at2").get<std::size_t>();
    d.mass = decode_rat(j.at("mass"));
    return d;
}

inline Json encode(const BivariateMass& m) {
    Json atoms = Json::array();
    for (std::size_t i1 = 0; i1 < m.dim(); ++i1)
        for (std::size_t i2 = 0; i2 < m.dim(); ++i2) {
            const Rat& w = m.at(i1, i2);
            if (w == 0) continue;
            atoms.push_back(Json{encode(m.grid()[i1]), encode(m.grid()[i2]), encode(w)});
        }
    Json defects = Json::array();
    for (const auto& d : m.defects()) defects.push_back(encode(d));
    return Json{{"grid", encode(m.grid())}, {"atoms", std::move(atoms)}, {"defects", std::move(defects)}};
}

inline BivariateMass decode_mass(const Json& j) {
    TimeGrid grid = decode_grid(j.at("grid"));
    std::vector<Rat> mass(grid.size() * grid.size(), Rat(0));
    for (const auto& atom : j.at("atoms")) {
        Rat t1 = decode_rat(atom.at(0));
        Rat t2 = decode_rat(atom.at(1));
        auto i1 = grid.index_of(t1), i2 = grid.index_of(t2);
        if (!i1 || !i2) throw parse_error("atom time off grid");
        mass[*i1 * grid.size() + *i2] += decode_rat(atom.at(2));
    }
    std::vector<DefectRecord> defects;
    if (j.contains("defects"))
        for (const auto& d : j.at("defects")) defects.push_back(decode_defect(d));
    return BivariateMass::from_parts(std::move(grid), std::move(mass), std::move(defects));
}

// --- prior guess ------------------------------------------------------------

namespace detail {

inline void decode_weight(const Json& j, Rat& constant, std::vector<Rat>& table) {
    if (j.is_array()) {
        for (const auto& v : j) table.push_back(decode_rat(v));
    } else {
        constant = decode_rat(j);
    }
}

}  // namespace detail

inline Json encode(const PriorGuess& g) {
    Json j{{"f0", encode(g.f0)}};
    if (g.w_star_table.empty())
        j["w_star"] = encode(g.w_star_const);
    else {
        Json arr = Json::array();
        for (const auto& v : g.w_star_table) arr.push_back(encode(v));
        j["w_star"] = std::move(arr);
    }
    if (g.w_dir_table.empty())
        j["w_dir"] = encode(g.w_dir_const);
    else {
        Json arr = Json::array();
        for (const auto& v : g.w_dir_table) arr.push_back(encode(v));
        j["w_dir"] = std::move(arr);
    }
    j["w_cond"] = encode(g.w_cond_const);  // per-offset tables are interface-internal
    return j;
}

inline PriorGuess decode_prior_guess(const Json& j) {
    PriorGuess g;
    g.f0 = decode_mass(j.at("f0"));
    if (j.contains("w_star")) detail::decode_weight(j.at("w_star"), g.w_star_const, g.w_star_table);
    if (j.contains("w_dir")) detail::decode_weight(j.at("w_dir"), g.w_dir_const, g.w_dir_table);
    if (j.contains("w_cond")) {
        if (!j.at("w_cond").is_number() && !j.at("w_cond").is_string())
            throw parse_error("w_cond must be a single concentration value");
        g.w_cond_const = decode_rat(j.at("w_cond"));
    }
    g.validate();
    return g;
}

// --- surfaces and audits ----------------------------------------------------

inline Json encode(const SurvivalSurface& s) {
    Json rows = Json::array();
    for (std::size_t a = 0; a < s.dim(); ++a) {
        Json row = Json::array();
        for (std::size_t b = 0; b < s.dim(); ++b) row.push_back(encode(s.at_index(a, b)));
        rows.push_back(std::move(row));
    }
    return Json{{"grid", encode(s.grid)}, {"values", std::move(rows)}};
}

inline SurvivalSurface decode_surface(const Json& j) {
    SurvivalSurface s;
    s.grid = decode_grid(j.at("grid"));
    const Json& rows = j.at("values");
    s.values.assign(s.dim() * s.dim(), Rat(0));
    for (std::size_t a = 0; a < s.dim(); ++a)
        for (std::size_t b = 0; b < s.dim(); ++b) s.at_index(a, b) = decode_rat(rows.at(a).at(b));
    return s;
}

inline Json encode_cell(const MassAudit& audit, const AuditCell& c) {
    auto closure_time = [&](std::size_t k) -> Json {
        return k == 0 ? Json("0") : Json(to_string_exact(audit.grid[k - 1]));
    };
    return Json{{"u1", closure_time(c.a - 1)},
                {"u2", closure_time(c.a)},
                {"v1", closure_time(c.b - 1)},
                {"v2", closure_time(c.b)},
                {"mass", encode(c.mass)},
                {"mass_value", to_double(c.mass)}};
}

inline Json encode(const MassAudit& audit) {
    Json cells = Json::array(), negatives = Json::array();
    for (const auto& c : audit.cells) cells.push_back(encode_cell(audit, c));
    for (const auto& c : audit.negatives) negatives.push_back(encode_cell(audit, c));
    return Json{{"grid", encode(audit.grid)},
                {"cells", std::move(cells)},
                {"negatives", std::move(negatives)},
                {"negative_count", audit.negatives.size()},
                {"total_mass", encode(audit.total)}};
}

// --- scenario and report ----------------------------------------------------

inline Json encode(const ScenarioConfig& cfg) {
    return Json{{"grid", encode(cfg.grid)},
                {"p0", encode(cfg.p0)},
                {"g", encode(cfg.g)},
                {"sample_sizes", cfg.sample_sizes},
                {"replications", cfg.replications},
                {"seed", cfg.seed},
                {"run_dabrowska", cfg.run_dabrowska}};
}

inline ScenarioConfig decode_scenario(const Json& j) {
    ScenarioConfig cfg;
    cfg.grid = decode_grid(j.at("grid"));
    cfg.p0 = decode_mass(j.at("p0"));
    cfg.g = decode_mass(j.at("g"));
    cfg.sample_sizes = j.at("sample_sizes").get<std::vector<long>>();
    cfg.replications = j.at("replications").get<long>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("run_dabrowska")) cfg.run_dabrowska = j.at("run_dabrowska").get<bool>();
    cfg.validate();
    return cfg;
}

inline Json encode(const ConvergenceReport& rep) {
    Json runs = Json::array();
    for (const auto& r : rep.runs) {
        Json row{{"n", r.n},
                 {"replication", r.replication},
                 {"estimator", r.estimator},
                 {"sup_error", r.sup_error},
                 {"negative_cells", r.negative_cells}};
        if (r.failed) row["error"] = r.error;
        runs.push_back(std::move(row));
    }
    Json summary = Json::array();
    for (const auto& s : rep.summary)
        summary.push_back(Json{{"n", s.n},
                               {"estimator", s.estimator},
                               {"median", s.median},
                               {"q1", s.q1},
                               {"q3", s.q3}});
    return Json{{"runs", std::move(runs)}, {"summary", std::move(summary)}};
}

inline Json encode(const pruitt::PruittReport& rep) {
    return Json{{"n", rep.n},
                {"M", rep.m_conc},
                {"estimate", rep.estimate},
                {"limit", rep.limit},
                {"gap_to_truth", rep.gap_to_truth}};
}

}  // namespace bivsurv
