#include "circlt/runner.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "circlt/acceptance.hpp"
#include "circlt/errors.hpp"
#include "circlt/report.hpp"
#include "circlt/rng.hpp"
#include "circlt/statistics.hpp"

namespace circlt {

namespace {

std::string convention_name(Convention c) {
    return c == Convention::normalized ? "normalized" : "display";
}

std::string label_product_name(const std::vector<Label>& labels) {
    std::ostringstream s;
    s << "E[";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) s << "*";
        s << "w" << labels[i].p << "(" << format_double(labels[i].t) << ")";
    }
    s << "]";
    return s.str();
}

/// Builds ensembles and fluctuation series on demand, one ensemble per n,
/// one series per (n, p) over the full config grid.
class SeriesCache {
public:
    SeriesCache(const ExperimentConfig& cfg) : cfg_(cfg) {}

    const PathEnsemble& ensemble(std::size_t n) {
        auto it = ensembles_.find(n);
        if (it == ensembles_.end()) {
            TimeGrid grid(cfg_.grid);
            it = ensembles_
                     .emplace(n, generate_ensemble(n, grid, cfg_.replicas, cfg_.seed,
                                                   cfg_.threads))
                     .first;
        }
        return it->second;
    }

    const FluctuationSeries& series(std::size_t n, int p) {
        const auto key = std::make_pair(n, p);
        auto it = series_.find(key);
        if (it == series_.end()) {
            std::vector<double> times(cfg_.grid.begin() + 1, cfg_.grid.end());  // skip t=0
            it = series_
                     .emplace(key, fluctuation_series(ensemble(n), p, times,
                                                      cfg_.centering_for(n, p), cfg_.route,
                                                      cfg_.enumeration_budget,
                                                      cfg_.allow_degenerate, cfg_.threads))
                     .first;
        }
        return it->second;
    }

private:
    const ExperimentConfig& cfg_;
    std::map<std::size_t, PathEnsemble> ensembles_;
    std::map<std::pair<std::size_t, int>, FluctuationSeries> series_;
};

int finish(const std::vector<StatRow>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return kExitStatFailure;
    return kExitOk;
}

int run_simulate(const ExperimentConfig& cfg, const ReportWriter& out, std::ostream& log) {
    SeriesCache cache(cfg);
    for (std::size_t n : cfg.n_list) {
        if (cfg.dump_paths)
            save_ensemble_csv(cache.ensemble(n), out.path_for("paths_n" + std::to_string(n) + ".csv"));
        for (int p : cfg.p_list) {
            const auto& s = cache.series(n, p);
            const std::string name =
                "w" + std::to_string(p) + "_n" + std::to_string(n) + ".csv";
            out.write_series_csv(name, s);
            log << "wrote " << out.path_for(name) << "\n";
        }
    }
    return kExitOk;
}

int run_covariance(const ExperimentConfig& cfg, const ReportWriter& out, std::ostream& log) {
    SeriesCache cache(cfg);
    std::vector<StatRow> rows;
    for (std::size_t n : cfg.n_list) {
        for (const auto& pr : cfg.covariance_pairs) {
            const auto& wp = cache.series(n, pr.p);
            const auto& wq = cache.series(n, pr.q);
            MomentEstimate est = empirical_covariance(wp, pr.t1, wq, pr.t2, cfg.convention);
            StatRow row;
            std::ostringstream name;
            name << "cov(w" << pr.p << "(" << format_double(pr.t1) << ");w" << pr.q << "("
                 << format_double(pr.t2) << "))";
            row.statistic = name.str();
            row.estimate = est.value;
            row.std_error = est.std_error;
            row.prediction = est.prediction;
            row.z_score = est.z_score();
            row.pass = std::abs(row.z_score) <= 4.0 * cfg.tolerance_multiplier;
            row.n = n;
            row.replicas = cfg.replicas;
            row.seed = cfg.seed;
            row.convention = convention_name(cfg.convention);
            rows.push_back(row);
        }
    }
    out.write_stat_csv("covariance.csv", "covariance report", rows);
    out.write_stat_json("covariance.json", rows);
    if (cfg.emit_plots) out.write_covariance_svg("covariance.svg", rows);
    log << "wrote " << out.path_for("covariance.csv") << "\n";
    return finish(rows);
}

int run_moments(const ExperimentConfig& cfg, const ReportWriter& out, std::ostream& log) {
    SeriesCache cache(cfg);
    std::vector<StatRow> rows;
    for (std::size_t n : cfg.n_list) {
        for (const auto& set : cfg.moment_sets) {
            std::vector<std::pair<const FluctuationSeries*, double>> factors;
            for (const auto& lab : set) factors.emplace_back(&cache.series(n, lab.p), lab.t);
            MomentEstimate est = mixed_moment(factors);
            est.prediction = wick_moment(set, cfg.convention);
            StatRow row;
            row.statistic = label_product_name(set);
            row.estimate = est.value;
            row.std_error = est.std_error;
            row.prediction = est.prediction;
            row.z_score = est.z_score();
            row.pass = std::abs(row.z_score) <= 5.0 * cfg.tolerance_multiplier;
            row.n = n;
            row.replicas = cfg.replicas;
            row.seed = cfg.seed;
            row.convention = convention_name(cfg.convention);
            rows.push_back(row);
        }
    }
    out.write_stat_csv("moments.csv", "mixed moments vs wick report", rows);
    out.write_stat_json("moments.json", rows);
    log << "wrote " << out.path_for("moments.csv") << "\n";
    return finish(rows);
}

int run_counts(const ExperimentConfig& cfg, const ReportWriter& out, std::ostream& log) {
    std::vector<CountRow> rows;
    bool all_ok = true;

    // family sizes: |A_p| must equal n^{p-1}, sum levels must partition
    for (int p = 1; p <= cfg.counts.family_p_max; ++p) {
        const std::size_t n = cfg.counts.family_n_max;
        const auto counts = index_family_counts_by_level(n, p, false, false,
                                                         cfg.enumeration_budget);
        std::uint64_t total = 0;
        for (auto c : counts) total += c;
        std::uint64_t expect = 1;
        for (int e = 0; e < p - 1; ++e) expect *= n;
        all_ok = all_ok && total == expect;
        CountRow row;
        row.n = n;
        row.p = p;
        row.s = -1;
        row.variant = "A_p";
        row.count = total;
        row.ratio = static_cast<double>(total) / static_cast<double>(expect);
        row.density = 1.0;
        row.abs_error = std::abs(row.ratio - 1.0);
        rows.push_back(row);
    }

    // density ratios vs f_p(s)
    for (int p : cfg.counts.density_p)
        for (const auto& d : density_limit_check(p, cfg.counts.density_n,
                                                 cfg.enumeration_budget)) {
            CountRow row;
            row.n = d.n;
            row.p = d.p;
            row.s = d.s;
            row.variant = "A_ps";
            row.count = d.count;
            row.ratio = d.ratio;
            row.density = d.density;
            row.abs_error = d.abs_error;
            rows.push_back(row);
            CountRow prim = row;
            prim.variant = "A_ps_distinct";
            prim.count = d.count_distinct;
            prim.ratio = d.ratio_distinct;
            prim.abs_error = std::abs(d.ratio_distinct - d.density);
            rows.push_back(prim);
        }
    out.write_count_csv("counts.csv", "index family counts", rows);

    // cluster counts |B_{P_l}| with the nonzero-contribution diagnostic
    std::ostringstream body;
    body << "n,powers,count,nonzero_contribution\n";
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    std::string powers_name;
    for (std::size_t i = 0; i < cfg.counts.cluster_powers.size(); ++i)
        powers_name += (i ? "+" : "") + std::to_string(cfg.counts.cluster_powers[i]);
    for (std::size_t n : cfg.counts.cluster_n) {
        std::uint64_t nonzero = 0;
        const std::uint64_t count =
            enumerate_B(n, cfg.counts.cluster_powers, cfg.enumeration_budget, &nonzero);
        body << n << "," << powers_name << "," << count << "," << nonzero << "\n";
        if (count > 0) {
            const double x = std::log(static_cast<double>(n));
            const double y = std::log(static_cast<double>(count));
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++m;
        }
    }
    if (m >= 2) {
        const double slope = (static_cast<double>(m) * sxy - sx * sy) /
                             (static_cast<double>(m) * sxx - sx * sx);
        body << "# fitted log-log slope: " << format_double(slope) << "\n";
    }
    out.write_text("cluster_counts.csv", body.str(), "cluster counts");
    log << "wrote " << out.path_for("counts.csv") << " and "
        << out.path_for("cluster_counts.csv") << "\n";
    return all_ok ? kExitOk : kExitStatFailure;
}

int run_limit(const ExperimentConfig& cfg, const ReportWriter& out, std::ostream& log) {
    const KernelMatrix km = kernel_matrix(cfg.limit.labels, cfg.convention);

    std::ostringstream body;
    body << "# psd=" << (km.psd ? "yes" : "NO") << " rank=" << km.rank
         << " min_pivot=" << format_double(km.min_pivot)
         << " jitter=" << format_double(km.jitter_used) << "\n";
    body << "p_i,t_i,p_j,t_j,K\n";
    for (std::size_t i = 0; i < km.dim(); ++i)
        for (std::size_t j = 0; j < km.dim(); ++j)
            body << km.labels[i].p << "," << format_double(km.labels[i].t) << ","
                 << km.labels[j].p << "," << format_double(km.labels[j].t) << ","
                 << format_double(km.gram_at(i, j)) << "\n";
    out.write_text("kernel_matrix.csv", body.str(), "limit kernel matrix");

    if (!km.psd) {
        log << "kernel matrix failed PSD factorization (min pivot "
            << format_double(km.min_pivot) << ")\n";
        return kExitStatFailure;
    }

    const LimitSample sample = sample_limit_process(km, cfg.limit.replicas, cfg.seed);
    // same CSV schema as fluctuation series, so diagnostics run identically
    std::ostringstream series;
    series << "# n=limit R=" << sample.replicas << " seed=" << sample.seed
           << " centering=exact route=gaussian\n";
    series << "p,t,replica,value\n";
    for (std::size_t i = 0; i < km.dim(); ++i)
        for (std::size_t r = 0; r < sample.replicas; ++r)
            series << km.labels[i].p << "," << format_double(km.labels[i].t) << "," << r << ","
                   << format_double(sample.values[i * sample.replicas + r]) << "\n";
    out.write_text("limit_samples.csv", series.str(), "limit process samples");

    // closed loop: empirical covariance of the samples vs kernel entries
    std::vector<StatRow> rows;
    const std::size_t R = sample.replicas;
    for (std::size_t i = 0; i < km.dim(); ++i)
        for (std::size_t j = i; j < km.dim(); ++j) {
            const double* xi = sample.column(i);
            const double* xj = sample.column(j);
            double mi = 0, mj = 0;
            for (std::size_t r = 0; r < R; ++r) { mi += xi[r]; mj += xj[r]; }
            mi /= static_cast<double>(R);
            mj /= static_cast<double>(R);
            double c = 0;
            for (std::size_t r = 0; r < R; ++r) c += (xi[r] - mi) * (xj[r] - mj);
            c /= static_cast<double>(R - 1);
            const double k = km.gram_at(i, j);
            // analytic SE for Gaussian samples
            const double se = std::sqrt((km.gram_at(i, i) * km.gram_at(j, j) + k * k) /
                                        static_cast<double>(R - 1));
            StatRow row;
            std::ostringstream name;
            name << "gp_cov(N" << km.labels[i].p << "(" << format_double(km.labels[i].t) << ");N"
                 << km.labels[j].p << "(" << format_double(km.labels[j].t) << "))";
            row.statistic = name.str();
            row.estimate = c;
            row.std_error = se;
            row.prediction = k;
            row.z_score = se > 0 ? (c - k) / se : 0.0;
            row.pass = std::abs(row.z_score) <= 4.0 * cfg.tolerance_multiplier;
            row.n = km.dim();
            row.replicas = R;
            row.seed = cfg.seed;
            row.convention = convention_name(cfg.convention);
            rows.push_back(row);
        }
    out.write_stat_csv("limit_closed_loop.csv", "limit process closed loop", rows);
    log << "wrote " << out.path_for("kernel_matrix.csv") << "\n";
    return finish(rows);
}

int run_tightness(const ExperimentConfig& cfg, const ReportWriter& out, std::ostream& log) {
    TimeGrid grid(cfg.tightness.grid);
    const PathEnsemble ens =
        generate_ensemble(cfg.tightness.n, grid, cfg.replicas, cfg.seed, cfg.threads);
    const ScalingFit fit = increment_moment_scaling(
        ens, cfg.tightness.p, cfg.tightness.pairs,
        cfg.centering_for(cfg.tightness.n, cfg.tightness.p), cfg.enumeration_budget, cfg.threads);

    std::ostringstream body;
    body << "gap,moment4,std_error\n";
    for (const auto& pt : fit.points)
        body << format_double(pt.gap) << "," << format_double(pt.moment) << ","
             << format_double(pt.std_error) << "\n";
    body << "# slope=" << format_double(fit.slope)
         << " slope_se=" << format_double(fit.slope_std_error)
         << " implied_constant=" << format_double(fit.implied_constant) << "\n";
    out.write_text("tightness.csv", body.str(), "increment moment scaling");
    if (cfg.emit_plots) out.write_scaling_svg("tightness.svg", fit);
    log << "wrote " << out.path_for("tightness.csv") << " (slope "
        << format_double(fit.slope) << ")\n";
    return fit.slope >= 1.8 ? kExitOk : kExitStatFailure;
}

int run_verify(const ExperimentConfig& cfg, const ReportWriter& out, std::ostream& log) {
    std::vector<StatRow> rows;
    bool all = true;
    const auto results = run_all_criteria(cfg, [&](const CriterionResult& r) {
        log << (r.passed ? "PASS" : "FAIL") << "  [" << (r.id < 10 ? " " : "") << r.id << "/"
            << kCriteriaCount << "] " << r.name << " — " << r.detail << " ("
            << format_double(r.seconds) << "s)\n";
        log.flush();
    });
    std::ostringstream body;
    body << "criterion,name,status,detail,seconds\n";
    for (const auto& r : results) {
        all = all && r.passed;
        std::string detail = r.detail;
        for (auto& ch : detail)
            if (ch == ',') ch = ';';
        body << r.id << "," << r.name << "," << (r.passed ? "pass" : "FAIL") << "," << detail
             << "," << format_double(r.seconds) << "\n";
    }
    out.write_text("verify_report.csv", body.str(), "verification suite");
    log << (all ? "all criteria passed" : "SOME CRITERIA FAILED") << "\n";
    return all ? kExitOk : kExitStatFailure;
}

}  // namespace

int run_subcommand(const std::string& name, const ExperimentConfig& cfg, const RunOptions& opts,
                   std::ostream& log) {
    ReportWriter out(cfg.out_dir, !opts.no_header);
    {
        // raw echo of the exact inputs (valid JSON, so no comment header)
        std::ofstream f(out.path_for("effective_config.json"));
        f << config_to_json(cfg);
    }
    if (name == "simulate") return run_simulate(cfg, out, log);
    if (name == "covariance") return run_covariance(cfg, out, log);
    if (name == "moments") return run_moments(cfg, out, log);
    if (name == "counts") return run_counts(cfg, out, log);
    if (name == "limit") return run_limit(cfg, out, log);
    if (name == "tightness") return run_tightness(cfg, out, log);
    if (name == "verify") return run_verify(cfg, out, log);
    log << "unknown subcommand: " << name << "\n";
    return kExitUsage;
}

}  // namespace circlt
