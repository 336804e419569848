#include "circlt/grid.hpp"

#include <cmath>
#include <string>

#include "circlt/errors.hpp"

namespace circlt {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.empty()) throw grid_error("time grid must contain at least one point");
    if (times_.front() != 0.0) throw grid_error("time grid must start at 0");
    for (std::size_t k = 0; k < times_.size(); ++k) {
        if (!std::isfinite(times_[k]))
            throw grid_error("time grid point " + std::to_string(k) + " is not finite");
        if (k > 0 && !(times_[k] > times_[k - 1]))
            throw grid_error("time grid must be strictly increasing (violated at index " +
                             std::to_string(k) + ")");
    }
}

std::size_t TimeGrid::index_of(double t) const {
    for (std::size_t k = 0; k < times_.size(); ++k)
        if (times_[k] == t) return k;
    throw grid_error("time " + std::to_string(t) + " is not a grid point (exact match required)");
}

bool TimeGrid::contains(double t) const {
    for (double x : times_)
        if (x == t) return true;
    return false;
}

}  // namespace circlt
