#pragma once

// Command-line front end: estimation, negative-mass auditing, the
// Dirichlet-process inconsistency demonstration, simulation studies, and
// the two-estimator comparison table.

#include "bivsurv/json_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace bivsurv::cli {

namespace detail {

inline std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw consistency_error(std::string(what) + " not found: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw consistency_error("cannot write output: " + path);
    out << content;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

inline void emit_json(const Json& j, const std::string& output_path) {
    std::string text = j.dump(2) + "\n";
    if (output_path.empty())
        std::cout << text;
    else
        write_file(output_path, text);
}

inline Dataset load_dataset(const std::string& path) {
    std::string text = read_file(path, "input");
    return parse_dataset(text);
}

// Re-express a mass on a larger grid (indices shift, values unchanged).
inline BivariateMass regrid_mass(const BivariateMass& m, const TimeGrid& grid) {
    std::vector<Rat> mass(grid.size() * grid.size(), Rat(0));
    auto map_index = [&](std::size_t k) {
        auto idx = grid.index_of(m.grid()[k]);
        if (!idx) throw consistency_error("grid does not contain all prior times");
        return *idx;
    };
    for (std::size_t i1 = 0; i1 < m.dim(); ++i1)
        for (std::size_t i2 = 0; i2 < m.dim(); ++i2)
            if (m.at(i1, i2) != 0) mass[map_index(i1) * grid.size() + map_index(i2)] = m.at(i1, i2);
    std::vector<DefectRecord> defects = m.defects();
    for (auto& d : defects) {
        d.at1 = map_index(d.at1);
        d.at2 = map_index(d.at2);
        if (d.level != DefectRecord::Level::minimum) d.i = map_index(d.i);
    }
    return BivariateMass::from_parts(grid, std::move(mass), std::move(defects));
}

struct Query {
    Rat s, t;
};

inline std::vector<Query> parse_queries(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    std::vector<Query> queries;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = bivsurv::detail::trim(line);
        if (trimmed.empty()) continue;
        auto fields = bivsurv::detail::split_csv_line(trimmed);
        if (line_no == 1 && fields == std::vector<std::string>{"s", "t"}) continue;
        if (fields.size() != 2)
            throw parse_error("line " + std::to_string(line_no) + ": expected 2 fields");
        Query q;
        q.s = bivsurv::detail::parse_time(fields[0], line_no);
        q.t = bivsurv::detail::parse_time(fields[1], line_no);
        queries.push_back(std::move(q));
    }
    if (queries.empty()) throw parse_error("empty query file");
    return queries;
}

inline std::string report_to_csv(const ConvergenceReport& rep) {
    std::ostringstream os;
    os << "n,replication,estimator,sup_error,negative_cells\n";
    for (const auto& r : rep.runs) {
        os << r.n << ',' << r.replication << ',' << r.estimator << ','
           << (r.failed ? "nan" : format_double(r.sup_error)) << ',' << r.negative_cells << '\n';
    }
    return os.str();
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// --- subcommand bodies ------------------------------------------------------

inline void run_estimate(const std::string& input, const std::string& estimator,
                         const std::string& prior_path, const std::string& output) {
    Dataset ds = load_dataset(input);
    if (estimator == "noninformative") {
        emit_json(encode(noninformative_estimate(ds)), output);
    } else if (estimator == "bayes") {
        if (prior_path.empty()) throw CLI::ValidationError("--prior is required for --estimator bayes");
        PriorGuess guess = decode_prior_guess(Json::parse(read_file(prior_path, "prior")));
        TimeGrid grid = union_grids(ds.grid, guess.f0.grid());
        if (grid != guess.f0.grid()) {
            if (!guess.w_star_table.empty() || !guess.w_dir_table.empty() ||
                !guess.w_cond_table.empty())
                throw consistency_error(
                    "per-point prior weights require the prior grid to contain all data times");
            guess.f0 = regrid_mass(guess.f0, grid);
        }
        Dataset regridded = make_dataset(ds.observations, grid);
        BivariateBetaParams post = update(prior_from_guess(guess), compute_counts(regridded));
        emit_json(encode(posterior_mean_mass(post)), output);
    } else if (estimator == "dabrowska") {
        emit_json(encode(dabrowska_estimate(ds)), output);
    } else if (estimator == "km-marginal") {
        std::vector<std::pair<Rat, int>> p1, p2;
        for (const auto& o : ds.observations) {
            p1.emplace_back(o.z1, o.d1);
            p2.emplace_back(o.z2, o.d2);
        }
        Json j{{"coord1", encode(km(p1, ds.grid))}, {"coord2", encode(km(p2, ds.grid))}};
        emit_json(j, output);
    } else {
        throw CLI::ValidationError("unknown estimator: " + estimator);
    }
}

inline void run_audit(const std::string& input, const std::string& output) {
    Dataset ds = load_dataset(input);
    MassAudit dab = mass_audit(dabrowska_estimate(ds));
    MassAudit noninf = mass_audit(surface_from_mass(noninformative_estimate(ds)));
    emit_json(Json{{"dabrowska", encode(dab)}, {"noninformative", encode(noninf)}}, output);
}

inline void run_table(const std::string& input, const std::string& queries_path,
                      const std::string& output) {
    Dataset ds = load_dataset(input);
    auto queries = parse_queries(read_file(queries_path, "queries"));
    SurvivalSurface dab = dabrowska_estimate(ds);
    BivariateMass noninf = noninformative_estimate(ds);
    std::ostringstream os;
    os << "s,t,dabrowska,noninformative\n";
    for (const auto& q : queries) {
        os << to_string_exact(q.s) << ',' << to_string_exact(q.t) << ','
           << format_double(to_double(dab.value(q.s, q.t))) << ','
           << format_double(to_double(noninf.survival(q.s, q.t))) << '\n';
    }
    if (output.empty())
        std::cout << os.str();
    else
        write_file(output, os.str());
}

inline void run_study(const std::string& config_path, const std::string& output) {
    ScenarioConfig cfg = decode_scenario(Json::parse(read_file(config_path, "config")));
    ConvergenceReport rep = bivsurv::run_study(cfg);
    if (ends_with(output, ".json"))
        emit_json(encode(rep), output);
    else if (output.empty())
        std::cout << report_to_csv(rep);
    else
        write_file(output, report_to_csv(rep));
}

}  // namespace detail

// Exit status 0 on success, 1 on data or estimator errors, 2 on usage
// errors.
inline int run(const std::vector<std::string>& args) {
    CLI::App app{"Nonparametric estimation of bivariate survival distributions "
                 "from right-censored pairs"};
    app.require_subcommand(1);

    std::string input, output, estimator, prior_path, config_path, queries_path;
    long n = 0;
    double m_conc = 1.0;
    std::uint64_t seed = 0;

    auto* est = app.add_subcommand("estimate", "Estimate a joint distribution from a CSV dataset");
    est->add_option("--input", input, "dataset CSV (header z1,d1,z2,d2)")->required();
    est->add_option("--estimator", estimator, "noninformative | bayes | dabrowska | km-marginal")
        ->required();
    est->add_option("--prior", prior_path, "prior guess JSON (bayes only)");
    est->add_option("--output", output, "output JSON path (default stdout)");

    auto* aud = app.add_subcommand("audit", "Rectangle-mass audit of the product-limit surface");
    aud->add_option("--input", input, "dataset CSV")->required();
    aud->add_option("--output", output, "output JSON path (default stdout)");

    auto* pru = app.add_subcommand("pruitt", "Dirichlet-process inconsistency demonstration");
    pru->add_option("--n", n, "sample size")->required();
    pru->add_option("--M", m_conc, "Dirichlet-process concentration")->required();
    pru->add_option("--seed", seed, "random seed")->required();
    pru->add_option("--output", output, "output JSON path (default stdout)");

    auto* stu = app.add_subcommand("study", "Convergence study from a scenario config");
    stu->add_option("--config", config_path, "scenario JSON config")->required();
    stu->add_option("--output", output, "report path (.csv or .json; default CSV to stdout)");

    auto* tab = app.add_subcommand("table", "Survival comparison table at query points");
    tab->add_option("--input", input, "dataset CSV")->required();
    tab->add_option("--queries", queries_path, "query CSV with rows s,t")->required();
    tab->add_option("--output", output, "output CSV path (default stdout)");

    try {
        std::vector<const char*> argv;
        argv.push_back("bivsurv");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());

        if (est->parsed()) {
            detail::run_estimate(input, estimator, prior_path, output);
        } else if (aud->parsed()) {
            detail::run_audit(input, output);
        } else if (pru->parsed()) {
            pruitt::PruittConfig cfg{n, m_conc, seed};
            detail::emit_json(encode(pruitt::run(cfg)), output);
        } else if (stu->parsed()) {
            detail::run_study(config_path, output);
        } else if (tab->parsed()) {
            detail::run_table(input, queries_path, output);
        }
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace bivsurv::cli
