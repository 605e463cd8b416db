#pragma once

// Data model for right-censored bivariate observations and their
// minimum-time reduction.

#include "bivsurv/grid.hpp"
#include "bivsurv/rational.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace bivsurv {

// One censored pair: z_j = min(T_j, C_j), d_j = 1 when T_j <= C_j.
struct Observation {
    Rat z1;
    int d1 = 0;
    Rat z2;
    int d2 = 0;

    void validate() const {
        if (z1 < 0 || z2 < 0) throw consistency_error("negative time");
        if ((d1 != 0 && d1 != 1) || (d2 != 0 && d2 != 1))
            throw consistency_error("censor flag must be 0 or 1");
    }
};

// Reduction of a pair to (minimum time, its event indicator, tie pattern,
// larger coordinate and its censor flag).
//
//   eta = 0 when z1 = z2, 1 when z1 > z2, 2 when z1 < z2.
//   delta_star = 1 exactly when the minimum of the survival times is
//   uncensored; it is observable from (z, d) alone.
struct ReparamObservation {
    Rat z_star;
    int delta_star = 0;
    int eta = 0;
    Rat z_eta;
    int delta_eta = 0;
};

inline ReparamObservation reparametrize(const Observation& o) {
    ReparamObservation r;
    if (o.z1 == o.z2) {
        r.eta = 0;
        r.z_star = o.z1;
        r.z_eta = o.z1;
        r.delta_eta = std::max(o.d1, o.d2);
        r.delta_star = (o.d1 == 1 || o.d2 == 1) ? 1 : 0;
    } else if (o.z1 > o.z2) {
        r.eta = 1;
        r.z_star = o.z2;
        r.z_eta = o.z1;
        r.delta_eta = o.d1;
        r.delta_star = (o.d2 == 1) ? 1 : 0;
    } else {
        r.eta = 2;
        r.z_star = o.z1;
        r.z_eta = o.z2;
        r.delta_eta = o.d2;
        r.delta_star = (o.d1 == 1) ? 1 : 0;
    }
    return r;
}

struct Dataset {
    std::vector<Observation> observations;
    TimeGrid grid;
};

// Grid derived from the data: sorted distinct union of both coordinates.
inline Dataset make_dataset(std::vector<Observation> obs) {
    std::vector<Rat> times;
    times.reserve(obs.size() * 2);
    for (const auto& o : obs) {
        o.validate();
        times.push_back(o.z1);
        times.push_back(o.z2);
    }
    return Dataset{std::move(obs), TimeGrid(std::move(times))};
}

// Externally supplied grid; every observation time must lie on it.
inline Dataset make_dataset(std::vector<Observation> obs, TimeGrid grid) {
    for (const auto& o : obs) {
        o.validate();
        if (!grid.index_of(o.z1) || !grid.index_of(o.z2))
            throw consistency_error("observation time off grid");
    }
    return Dataset{std::move(obs), std::move(grid)};
}

enum class DataFormat { csv };

namespace detail {

inline std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && issp(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && issp(s[i])) ++i;
    return s.substr(i);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

inline int parse_flag(const std::string& s, long line_no) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw parse_error("line " + std::to_string(line_no) + ": censor flag must be 0 or 1, got '" + s + "'");
}

inline Rat parse_time(const std::string& s, long line_no) {
    auto r = try_parse_decimal(s);
    if (!r) throw parse_error("line " + std::to_string(line_no) + ": malformed number '" + s + "'");
    if (*r < 0) throw parse_error("line " + std::to_string(line_no) + ": negative time '" + s + "'");
    return *r;
}

}  // namespace detail

// CSV with header "z1,d1,z2,d2", one observation per record. Times are
// decimal numbers parsed exactly; flags are 0/1. Errors cite the file
// line number.
inline Dataset parse_dataset(std::istream& in, DataFormat = DataFormat::csv) {
    std::string line;
    long line_no = 0;
    bool have_header = false;
    std::vector<Observation> obs;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        auto fields = detail::split_csv_line(t);
        if (!have_header) {
            if (fields != std::vector<std::string>{"z1", "d1", "z2", "d2"})
                throw parse_error("line " + std::to_string(line_no) + ": expected header 'z1,d1,z2,d2'");
            have_header = true;
            continue;
        }
        if (fields.size() != 4)
            throw parse_error("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                              std::to_string(fields.size()));
        Observation o;
        o.z1 = detail::parse_time(fields[0], line_no);
        o.d1 = detail::parse_flag(fields[1], line_no);
        o.z2 = detail::parse_time(fields[2], line_no);
        o.d2 = detail::parse_flag(fields[3], line_no);
        obs.push_back(std::move(o));
    }
    if (!have_header) throw parse_error("empty input: missing header 'z1,d1,z2,d2'");
    if (obs.empty()) throw parse_error("empty input: no observations");
    return make_dataset(std::move(obs));
}

inline Dataset parse_dataset(const std::string& text, DataFormat fmt = DataFormat::csv) {
    std::istringstream in(text);
    return parse_dataset(in, fmt);
}

}  // namespace bivsurv
