#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "circlt/grid.hpp"

namespace circlt {

/// R independent replicas of n_entries independent standard Brownian
/// motion paths sampled on a shared time grid. Values are immutable after
/// construction and safe to share read-only across threads.
///
/// Every (replica, entry) pair owns a counter-based RNG substream derived
/// from the master seed, so output is bit-identical for identical
/// arguments under any thread count or generation order.
class PathEnsemble {
public:
    PathEnsemble(std::size_t n_entries, TimeGrid grid, std::size_t replicas,
                 std::uint64_t seed, std::vector<double> values);

    std::size_t n_entries() const { return n_entries_; }
    std::size_t replicas() const { return replicas_; }
    const TimeGrid& grid() const { return grid_; }
    std::uint64_t seed() const { return seed_; }

    /// b_entry(t_k) for the given replica.
    double value(std::size_t replica, std::size_t entry, std::size_t grid_index) const {
        return values_[(replica * n_entries_ + entry) * grid_.size() + grid_index];
    }

    /// One path (all grid points) of one (replica, entry).
    std::span<const double> path(std::size_t replica, std::size_t entry) const {
        return {values_.data() + (replica * n_entries_ + entry) * grid_.size(), grid_.size()};
    }

    const std::vector<double>& raw() const { return values_; }

    /// True when both ensembles came from the same generation call shape
    /// (replica-paired statistics are only meaningful within one ensemble).
    bool same_source(const PathEnsemble& other) const {
        return seed_ == other.seed_ && replicas_ == other.replicas_ &&
               n_entries_ == other.n_entries_ && grid_ == other.grid_;
    }

private:
    std::size_t n_entries_;
    std::size_t replicas_;
    TimeGrid grid_;
    std::uint64_t seed_;
    std::vector<double> values_;  // (replica, entry, grid index), row-major
};

/// u_i = b_i(t1), v_i = b_i(t2) - b_i(t1) for one replica.
struct IncrementPair {
    std::vector<double> u;
    std::vector<double> v;
    double t1 = 0;
    double t2 = 0;
};

/// Generate a reproducible ensemble. Parallel across replicas when
/// threads > 1; results do not depend on the thread count.
PathEnsemble generate_ensemble(std::size_t n_entries, const TimeGrid& grid,
                               std::size_t replicas, std::uint64_t seed, int threads = 1);

/// Split one replica's paths at grid times 0 < t1 <= t2.
IncrementPair increment_decompose(const PathEnsemble& ensemble, std::size_t replica,
                                  double t1, double t2);

/// CSV persistence: rows (replica, entry, grid_index, value) under a
/// deterministic metadata header. See README for the format.
void save_ensemble_csv(const PathEnsemble& ensemble, const std::string& path);
PathEnsemble load_ensemble_csv(const std::string& path);

}  // namespace circlt
