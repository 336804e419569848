#include "circlt/brownian.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "circlt/errors.hpp"
#include "circlt/rng.hpp"

namespace circlt {

PathEnsemble::PathEnsemble(std::size_t n_entries, TimeGrid grid, std::size_t replicas,
                           std::uint64_t seed, std::vector<double> values)
    : n_entries_(n_entries),
      replicas_(replicas),
      grid_(std::move(grid)),
      seed_(seed),
      values_(std::move(values)) {}

namespace {

void generate_range(std::vector<double>& values, std::size_t r0, std::size_t r1,
                    std::size_t n_entries, const TimeGrid& grid, std::uint64_t seed) {
    const std::size_t K = grid.size();
    const std::uint64_t brownian_seed = mix64(seed ^ rng_tag::brownian);
    for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t e = 0; e < n_entries; ++e) {
            const CounterRng rng = CounterRng::stream(brownian_seed, r, e);
            double* path = values.data() + (r * n_entries + e) * K;
            path[0] = 0.0;  // B(0) = 0
            double b = 0.0;
            for (std::size_t k = 1; k < K; ++k) {
                const double dt = grid[k] - grid[k - 1];
                b += std::sqrt(dt) * rng.normal(k - 1);
                path[k] = b;
            }
        }
    }
}

}  // namespace

PathEnsemble generate_ensemble(std::size_t n_entries, const TimeGrid& grid,
                               std::size_t replicas, std::uint64_t seed, int threads) {
    if (n_entries < 1) throw std::invalid_argument("generate_ensemble: n_entries must be >= 1");
    if (replicas < 1) throw std::invalid_argument("generate_ensemble: replicas must be >= 1");

    std::vector<double> values(replicas * n_entries * grid.size());
    // Each (replica, entry) owns its substream, so splitting across
    // threads cannot change any value.
    if (threads <= 1 || replicas == 1) {
        generate_range(values, 0, replicas, n_entries, grid, seed);
    } else {
        const std::size_t nt = std::min<std::size_t>(threads, replicas);
        std::vector<std::thread> pool;
        const std::size_t chunk = (replicas + nt - 1) / nt;
        for (std::size_t t = 0; t < nt; ++t) {
            const std::size_t r0 = t * chunk;
            const std::size_t r1 = std::min(replicas, r0 + chunk);
            if (r0 >= r1) break;
            pool.emplace_back([&values, r0, r1, n_entries, &grid, seed] {
                generate_range(values, r0, r1, n_entries, grid, seed);
            });
        }
        for (auto& th : pool) th.join();
    }
    return PathEnsemble(n_entries, grid, replicas, seed, std::move(values));
}

IncrementPair increment_decompose(const PathEnsemble& ensemble, std::size_t replica,
                                  double t1, double t2) {
    if (replica >= ensemble.replicas())
        throw std::out_of_range("increment_decompose: replica out of range");
    if (t1 > t2) throw std::invalid_argument("increment_decompose: requires t1 <= t2");
    if (!(t1 > 0)) throw std::invalid_argument("increment_decompose: requires t1 > 0");
    const std::size_t k1 = ensemble.grid().index_of(t1);
    const std::size_t k2 = ensemble.grid().index_of(t2);

    IncrementPair out;
    out.t1 = t1;
    out.t2 = t2;
    const std::size_t n = ensemble.n_entries();
    out.u.resize(n);
    out.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.u[i] = ensemble.value(replica, i, k1);
        out.v[i] = ensemble.value(replica, i, k2) - out.u[i];
    }
    return out;
}

void save_ensemble_csv(const PathEnsemble& ensemble, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << "# circlt path ensemble v1\n";
    f << "# n_entries=" << ensemble.n_entries() << " replicas=" << ensemble.replicas()
      << " seed=" << ensemble.seed() << "\n";
    f << "# grid=";
    for (std::size_t k = 0; k < ensemble.grid().size(); ++k) {
        if (k) f << ",";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", ensemble.grid()[k]);
        f << buf;
    }
    f << "\nreplica,entry,grid_index,value\n";
    char buf[32];
    for (std::size_t r = 0; r < ensemble.replicas(); ++r)
        for (std::size_t e = 0; e < ensemble.n_entries(); ++e)
            for (std::size_t k = 0; k < ensemble.grid().size(); ++k) {
                std::snprintf(buf, sizeof buf, "%.17g", ensemble.value(r, e, k));
                f << r << "," << e << "," << k << "," << buf << "\n";
            }
}

PathEnsemble load_ensemble_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::size_t n_entries = 0, replicas = 0;
    std::uint64_t seed = 0;
    std::vector<double> grid_times;
    // header lines
    while (std::getline(f, line)) {
        if (line.rfind("# n_entries=", 0) == 0) {
            unsigned long long seed_raw = 0;
            std::sscanf(line.c_str(), "# n_entries=%zu replicas=%zu seed=%llu", &n_entries,
                        &replicas, &seed_raw);
            seed = seed_raw;
        } else if (line.rfind("# grid=", 0) == 0) {
            std::stringstream ss(line.substr(7));
            std::string tok;
            while (std::getline(ss, tok, ',')) grid_times.push_back(std::stod(tok));
        } else if (line.rfind("replica,", 0) == 0) {
            break;
        }
    }
    if (n_entries == 0 || replicas == 0 || grid_times.empty())
        throw std::runtime_error("malformed ensemble file: " + path);
    TimeGrid grid(grid_times);
    std::vector<double> values(replicas * n_entries * grid.size());
    std::size_t r, e, k;
    double v;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (std::sscanf(line.c_str(), "%zu,%zu,%zu,%lf", &r, &e, &k, &v) != 4)
            throw std::runtime_error("malformed ensemble row: " + line);
        values[(r * n_entries + e) * grid.size() + k] = v;
    }
    return PathEnsemble(n_entries, std::move(grid), replicas, seed, std::move(values));
}

}  // namespace circlt
