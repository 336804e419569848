#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circlt/statistics.hpp"

namespace circlt {

/// Shortest round-trip decimal form; locale-independent and byte-stable.
std::string format_double(double v);

/// One row of a statistics report. Every row carries enough metadata to
/// re-run it in isolation.
struct StatRow {
    std::string statistic;
    double estimate = 0;
    double std_error = 0;
    double prediction = 0;
    double z_score = 0;
    bool pass = true;
    std::size_t n = 0;
    std::size_t replicas = 0;
    std::uint64_t seed = 0;
    std::string convention;
};

struct CountRow {
    std::size_t n = 0;
    int p = 0;
    int s = -1;
    std::string variant;
    std::uint64_t count = 0;
    double ratio = 0;
    double density = 0;
    double abs_error = 0;
};

/// Report writer: deterministic CSV (and JSON) bodies. The only
/// nondeterministic line is the "# generated:" timestamp, emitted when
/// with_timestamp is set and suppressed by --no-header.
class ReportWriter {
public:
    ReportWriter(std::string out_dir, bool with_timestamp);

    std::string path_for(const std::string& filename) const;

    void write_text(const std::string& filename, const std::string& body,
                    const std::string& title) const;
    void write_stat_csv(const std::string& filename, const std::string& title,
                        const std::vector<StatRow>& rows) const;
    void write_stat_json(const std::string& filename, const std::vector<StatRow>& rows) const;
    void write_count_csv(const std::string& filename, const std::string& title,
                         const std::vector<CountRow>& rows) const;

    /// (p, t, replica, value) columns under a metadata header line.
    void write_series_csv(const std::string& filename, const FluctuationSeries& series) const;

    /// Whisker chart of estimates (± 4 SE) against predictions.
    void write_covariance_svg(const std::string& filename, const std::vector<StatRow>& rows) const;
    /// Log-log scatter of the increment moments with the fitted line.
    void write_scaling_svg(const std::string& filename, const ScalingFit& fit) const;

private:
    std::string header(const std::string& title) const;

    std::string out_dir_;
    bool with_timestamp_;
};

}  // namespace circlt
