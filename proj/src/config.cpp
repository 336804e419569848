#include "circlt/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "circlt/errors.hpp"

namespace circlt {

using nlohmann::json;

Centering ExperimentConfig::centering_for(std::size_t n, int p) const {
    switch (centering) {
        case CenteringMode::exact: return Centering::exact;
        case CenteringMode::empirical: return Centering::empirical;
        case CenteringMode::automatic:
            return std::pow(static_cast<double>(n), p - 1) <= enumeration_budget
                       ? Centering::exact
                       : Centering::empirical;
    }
    return Centering::exact;
}

ExperimentConfig default_config() { return ExperimentConfig{}; }

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw config_error("config field '" + field + "': " + why);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(key, e.what());
    }
}

void validate(const ExperimentConfig& c) {
    if (c.n_list.empty()) fail("n", "at least one dimension required");
    for (auto n : c.n_list)
        if (n < 1) fail("n", "dimensions must be positive");
    if (c.replicas < 1) fail("replicas", "must be positive");
    if (c.p_list.empty()) fail("p", "at least one power required");
    for (int p : c.p_list) {
        if (p < 0) fail("p", "powers must be nonnegative");
        if (p < 2 && !c.allow_degenerate)
            fail("p", "powers below 2 are degenerate (w_0 = 0, w_1 = b_0); "
                      "set allow_degenerate to request them");
    }
    if (c.grid.size() < 1) fail("grid", "empty");
    try {
        TimeGrid g(c.grid);
    } catch (const std::exception& e) {
        fail("grid", e.what());
    }
    if (c.enumeration_budget <= 0) fail("enumeration_budget", "must be positive");
    if (c.tolerance_multiplier <= 0) fail("tolerance_multiplier", "must be positive");
    if (c.threads < 1) fail("threads", "must be >= 1");
    for (const auto& pr : c.covariance_pairs)
        if (pr.p < 2 || pr.q < 2) fail("covariance.pairs", "powers must be >= 2");
    for (const auto& set : c.moment_sets) {
        if (set.empty() || set.size() > 6) fail("moments.sets", "need 1..6 labels per set");
        for (const auto& lab : set)
            if (lab.p < 2) fail("moments.sets", "powers must be >= 2");
    }
    for (const auto& lab : c.limit.labels)
        if (lab.p < 2 || lab.t < 0) fail("limit.labels", "need p >= 2 and t >= 0");
    if (c.limit.replicas < 2) fail("limit.replicas", "must be >= 2");
    if (c.tightness.p < 2) fail("tightness.p", "must be >= 2");
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw config_error("parse error in " + path + ": " + e.what());
    }

    ExperimentConfig c;
    if (j.contains("n")) {
        if (j.at("n").is_array())
            c.n_list = j.at("n").get<std::vector<std::size_t>>();
        else
            c.n_list = {j.at("n").get<std::size_t>()};
    }
    c.p_list = get_or(j, "p", c.p_list);
    c.grid = get_or(j, "grid", c.grid);
    c.replicas = get_or(j, "replicas", c.replicas);
    c.seed = get_or(j, "seed", c.seed);
    if (j.contains("centering")) {
        const std::string m = j.at("centering").get<std::string>();
        if (m == "exact") c.centering = CenteringMode::exact;
        else if (m == "empirical") c.centering = CenteringMode::empirical;
        else if (m == "auto") c.centering = CenteringMode::automatic;
        else fail("centering", "expected exact | empirical | auto, got '" + m + "'");
    }
    if (j.contains("route")) {
        const std::string m = j.at("route").get<std::string>();
        if (m == "spectral") c.route = TraceRoute::spectral;
        else if (m == "combinatorial") c.route = TraceRoute::combinatorial;
        else fail("route", "expected spectral | combinatorial, got '" + m + "'");
    }
    c.enumeration_budget = get_or(j, "enumeration_budget", c.enumeration_budget);
    c.out_dir = get_or(j, "out", c.out_dir);
    c.tolerance_multiplier = get_or(j, "tolerance_multiplier", c.tolerance_multiplier);
    if (j.contains("convention")) {
        const std::string m = j.at("convention").get<std::string>();
        if (m == "normalized") c.convention = Convention::normalized;
        else if (m == "display") c.convention = Convention::display;
        else fail("convention", "expected normalized | display, got '" + m + "'");
    }
    c.allow_degenerate = get_or(j, "allow_degenerate", c.allow_degenerate);
    c.emit_plots = get_or(j, "emit_plots", c.emit_plots);
    c.dump_paths = get_or(j, "dump_paths", c.dump_paths);
    c.threads = get_or(j, "threads", c.threads);

    if (j.contains("covariance")) {
        const auto& sec = j.at("covariance");
        if (sec.contains("pairs")) {
            c.covariance_pairs.clear();
            for (const auto& row : sec.at("pairs")) {
                if (!row.is_array() || row.size() != 4)
                    fail("covariance.pairs", "each entry must be [p, q, t1, t2]");
                c.covariance_pairs.push_back({row[0].get<int>(), row[1].get<int>(),
                                              row[2].get<double>(), row[3].get<double>()});
            }
        }
    }
    if (j.contains("moments")) {
        const auto& sec = j.at("moments");
        if (sec.contains("sets")) {
            c.moment_sets.clear();
            for (const auto& set : sec.at("sets")) {
                std::vector<Label> labels;
                for (const auto& lab : set) {
                    if (!lab.is_array() || lab.size() != 2)
                        fail("moments.sets", "each label must be [p, t]");
                    labels.push_back({lab[0].get<int>(), lab[1].get<double>()});
                }
                c.moment_sets.push_back(std::move(labels));
            }
        }
    }
    if (j.contains("counts")) {
        const auto& sec = j.at("counts");
        c.counts.density_p = get_or(sec, "density_p", c.counts.density_p);
        c.counts.density_n = get_or(sec, "density_n", c.counts.density_n);
        c.counts.family_p_max = get_or(sec, "family_p_max", c.counts.family_p_max);
        c.counts.family_n_max = get_or(sec, "family_n_max", c.counts.family_n_max);
        c.counts.cluster_powers = get_or(sec, "cluster_powers", c.counts.cluster_powers);
        c.counts.cluster_n = get_or(sec, "cluster_n", c.counts.cluster_n);
    }
    if (j.contains("limit")) {
        const auto& sec = j.at("limit");
        if (sec.contains("labels")) {
            c.limit.labels.clear();
            for (const auto& lab : sec.at("labels")) {
                if (!lab.is_array() || lab.size() != 2)
                    fail("limit.labels", "each label must be [p, t]");
                c.limit.labels.push_back({lab[0].get<int>(), lab[1].get<double>()});
            }
        }
        c.limit.replicas = get_or(sec, "replicas", c.limit.replicas);
    }
    if (j.contains("tightness")) {
        const auto& sec = j.at("tightness");
        c.tightness.n = get_or(sec, "n", c.tightness.n);
        c.tightness.p = get_or(sec, "p", c.tightness.p);
        if (sec.contains("pairs")) {
            c.tightness.pairs.clear();
            for (const auto& row : sec.at("pairs")) {
                if (!row.is_array() || row.size() != 2)
                    fail("tightness.pairs", "each entry must be [t, s]");
                c.tightness.pairs.emplace_back(row[0].get<double>(), row[1].get<double>());
            }
        }
        c.tightness.grid = get_or(sec, "grid", c.tightness.grid);
    }

    validate(c);
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["n"] = c.n_list;
    j["p"] = c.p_list;
    j["grid"] = c.grid;
    j["replicas"] = c.replicas;
    j["seed"] = c.seed;
    j["centering"] = c.centering == CenteringMode::exact       ? "exact"
                     : c.centering == CenteringMode::empirical ? "empirical"
                                                               : "auto";
    j["route"] = c.route == TraceRoute::spectral ? "spectral" : "combinatorial";
    j["enumeration_budget"] = c.enumeration_budget;
    j["out"] = c.out_dir;
    j["tolerance_multiplier"] = c.tolerance_multiplier;
    j["convention"] = c.convention == Convention::normalized ? "normalized" : "display";
    j["allow_degenerate"] = c.allow_degenerate;
    j["emit_plots"] = c.emit_plots;
    j["dump_paths"] = c.dump_paths;
    j["threads"] = c.threads;
    j["covariance"]["pairs"] = nlohmann::ordered_json::array();
    for (const auto& pr : c.covariance_pairs)
        j["covariance"]["pairs"].push_back({pr.p, pr.q, pr.t1, pr.t2});
    j["moments"]["sets"] = nlohmann::ordered_json::array();
    for (const auto& set : c.moment_sets) {
        nlohmann::ordered_json labels = nlohmann::ordered_json::array();
        for (const auto& lab : set) labels.push_back({lab.p, lab.t});
        j["moments"]["sets"].push_back(labels);
    }
    j["counts"]["density_p"] = c.counts.density_p;
    j["counts"]["density_n"] = c.counts.density_n;
    j["counts"]["family_p_max"] = c.counts.family_p_max;
    j["counts"]["family_n_max"] = c.counts.family_n_max;
    j["counts"]["cluster_powers"] = c.counts.cluster_powers;
    j["counts"]["cluster_n"] = c.counts.cluster_n;
    j["limit"]["labels"] = nlohmann::ordered_json::array();
    for (const auto& lab : c.limit.labels) j["limit"]["labels"].push_back({lab.p, lab.t});
    j["limit"]["replicas"] = c.limit.replicas;
    j["tightness"]["n"] = c.tightness.n;
    j["tightness"]["p"] = c.tightness.p;
    j["tightness"]["pairs"] = nlohmann::ordered_json::array();
    for (const auto& pr : c.tightness.pairs)
        j["tightness"]["pairs"].push_back({pr.first, pr.second});
    j["tightness"]["grid"] = c.tightness.grid;
    return j.dump(2) + "\n";
}

}  // namespace circlt
