#pragma once

#include "bivsurv/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace bivsurv {

// Strictly increasing set of time points. Observation times live on the
// grid and estimators index time by grid position.
class TimeGrid {
public:
    TimeGrid() = default;

    // Sorts and deduplicates.
    explicit TimeGrid(std::vector<Rat> times) : times_(std::move(times)) {
        std::sort(times_.begin(), times_.end());
        times_.erase(std::unique(times_.begin(), times_.end()), times_.end());
    }

    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    const Rat& operator[](std::size_t i) const { return times_[i]; }
    const std::vector<Rat>& times() const { return times_; }

    std::optional<std::size_t> index_of(const Rat& t) const {
        auto it = std::lower_bound(times_.begin(), times_.end(), t);
        if (it == times_.end() || *it != t) return std::nullopt;
        return static_cast<std::size_t>(it - times_.begin());
    }

    // Number of grid points <= t; 0 means t lies below the whole grid.
    std::size_t count_leq(const Rat& t) const {
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        return static_cast<std::size_t>(it - times_.begin());
    }

    bool operator==(const TimeGrid& other) const = default;

    auto begin() const { return times_.begin(); }
    auto end() const { return times_.end(); }

private:
    std::vector<Rat> times_;
};

inline TimeGrid union_grids(const TimeGrid& a, const TimeGrid& b) {
    std::vector<Rat> all(a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    return TimeGrid(std::move(all));
}

}  // namespace bivsurv
