#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "circlt/circulant.hpp"
#include "circlt/kernel.hpp"

namespace circlt {

enum class CenteringMode { exact, empirical, automatic };

/// One experiment, fully specified: every run is reproducible from this
/// plus nothing else. Loaded from a single JSON file (schema in README);
/// defaults mirror configs/default.json.
struct ExperimentConfig {
    std::vector<std::size_t> n_list{201};
    std::vector<int> p_list{2, 3};
    std::vector<double> grid{0.0, 0.5, 1.0};
    std::size_t replicas = 10000;
    std::uint64_t seed = 20260808;
    CenteringMode centering = CenteringMode::automatic;
    TraceRoute route = TraceRoute::spectral;
    double enumeration_budget = 1e8;
    std::string out_dir = "out";
    double tolerance_multiplier = 1.0;
    Convention convention = Convention::normalized;
    bool allow_degenerate = false;
    bool emit_plots = true;
    bool dump_paths = false;
    int threads = 1;

    struct CovariancePair {
        int p, q;
        double t1, t2;
    };
    std::vector<CovariancePair> covariance_pairs{{2, 2, 1.0, 1.0},
                                                 {3, 3, 1.0, 1.0},
                                                 {2, 3, 1.0, 1.0},
                                                 {2, 2, 0.5, 1.0},
                                                 {3, 3, 0.5, 1.0}};

    std::vector<std::vector<Label>> moment_sets{
        {{2, 1.0}, {2, 1.0}, {2, 1.0}, {2, 1.0}},
        {{2, 1.0}, {2, 1.0}, {2, 1.0}},
        {{3, 1.0}, {3, 1.0}, {2, 1.0}},
        {{2, 0.5}, {2, 1.0}}};

    struct CountsSection {
        std::vector<int> density_p{2, 3};
        std::vector<std::size_t> density_n{50, 100, 200};
        int family_p_max = 4;
        std::size_t family_n_max = 200;
        std::vector<int> cluster_powers{2, 2, 2};
        std::vector<std::size_t> cluster_n{4, 6, 8, 10, 12};
    } counts;

    struct LimitSection {
        std::vector<Label> labels{{2, 0.25}, {2, 0.5}, {2, 1.0}, {2, 2.0},
                                  {3, 0.25}, {3, 0.5}, {3, 1.0}, {3, 2.0}};
        std::size_t replicas = 100000;
    } limit;

    struct TightnessSection {
        std::size_t n = 101;
        int p = 2;
        std::vector<std::pair<double, double>> pairs{
            {0.1, 0.05}, {0.2, 0.1}, {0.4, 0.2}, {0.8, 0.4}};
        std::vector<double> grid{0.0, 0.05, 0.1, 0.2, 0.4, 0.8};
    } tightness;

    /// Resolve the centering mode for a concrete (n, p).
    Centering centering_for(std::size_t n, int p) const;
};

/// Parse and validate a config file; throws config_error with the
/// offending field in the message.
ExperimentConfig load_config(const std::string& path);

/// The shipped defaults (identical to configs/default.json).
ExperimentConfig default_config();

/// Serialize back to JSON (written into the output directory so each run
/// carries its exact inputs).
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace circlt
