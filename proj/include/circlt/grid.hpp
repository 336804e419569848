#pragma once

#include <cstddef>
#include <vector>

namespace circlt {

/// Strictly increasing time points starting at 0. Times are matched
/// exactly (bit-for-bit), never with an epsilon: grids are user-authored
/// and fuzzy lookup would hide config bugs.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times);

    const std::vector<double>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    double operator[](std::size_t k) const { return times_[k]; }

    /// Exact-match lookup; throws grid_error when t is not a grid point.
    std::size_t index_of(double t) const;

    bool contains(double t) const;

    bool operator==(const TimeGrid& other) const { return times_ == other.times_; }

private:
    std::vector<double> times_;
};

}  // namespace circlt
