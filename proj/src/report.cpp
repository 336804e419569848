#include "circlt/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace circlt {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ReportWriter::ReportWriter(std::string out_dir, bool with_timestamp)
    : out_dir_(std::move(out_dir)), with_timestamp_(with_timestamp) {
    std::filesystem::create_directories(out_dir_);
}

std::string ReportWriter::path_for(const std::string& filename) const {
    return (std::filesystem::path(out_dir_) / filename).string();
}

std::string ReportWriter::header(const std::string& title) const {
    std::string h = "# circlt " + title + "\n";
    if (with_timestamp_) {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        h += std::string("# generated: ") + buf + "\n";
    }
    return h;
}

void ReportWriter::write_text(const std::string& filename, const std::string& body,
                              const std::string& title) const {
    std::ofstream f(path_for(filename));
    if (!f) throw std::runtime_error("cannot write " + path_for(filename));
    f << header(title) << body;
}

void ReportWriter::write_stat_csv(const std::string& filename, const std::string& title,
                                  const std::vector<StatRow>& rows) const {
    std::ostringstream body;
    body << "statistic,estimate,std_error,prediction,z_score,pass,n,R,seed,convention\n";
    for (const auto& r : rows)
        body << r.statistic << "," << format_double(r.estimate) << ","
             << format_double(r.std_error) << "," << format_double(r.prediction) << ","
             << format_double(r.z_score) << "," << (r.pass ? "pass" : "FAIL") << "," << r.n << ","
             << r.replicas << "," << r.seed << "," << r.convention << "\n";
    write_text(filename, body.str(), title);
}

void ReportWriter::write_stat_json(const std::string& filename,
                                   const std::vector<StatRow>& rows) const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back({{"statistic", r.statistic},
                       {"estimate", r.estimate},
                       {"std_error", r.std_error},
                       {"prediction", r.prediction},
                       {"z_score", r.z_score},
                       {"pass", r.pass},
                       {"n", r.n},
                       {"R", r.replicas},
                       {"seed", r.seed},
                       {"convention", r.convention}});
    }
    std::ofstream f(path_for(filename));
    if (!f) throw std::runtime_error("cannot write " + path_for(filename));
    f << arr.dump(2) << "\n";
}

void ReportWriter::write_count_csv(const std::string& filename, const std::string& title,
                                   const std::vector<CountRow>& rows) const {
    std::ostringstream body;
    body << "n,p,s,variant,count,ratio,f_p_s,abs_error\n";
    for (const auto& r : rows)
        body << r.n << "," << r.p << "," << r.s << "," << r.variant << "," << r.count << ","
             << format_double(r.ratio) << "," << format_double(r.density) << ","
             << format_double(r.abs_error) << "\n";
    write_text(filename, body.str(), title);
}

void ReportWriter::write_series_csv(const std::string& filename,
                                    const FluctuationSeries& series) const {
    std::ostringstream body;
    body << "# n=" << series.n << " R=" << series.replicas << " seed=" << series.seed
         << " centering=" << (series.centering == Centering::exact ? "exact" : "empirical")
         << " route=" << (series.route == TraceRoute::spectral ? "spectral" : "combinatorial")
         << "\n";
    body << "p,t,replica,value\n";
    for (std::size_t j = 0; j < series.times.size(); ++j)
        for (std::size_t r = 0; r < series.replicas; ++r)
            body << series.p << "," << format_double(series.times[j]) << "," << r << ","
                 << format_double(series.value(j, r)) << "\n";
    write_text(filename, body.str(), "fluctuation series");
}

namespace {

// map data range to SVG canvas
struct Scale {
    double lo, hi, px0, px1;
    double operator()(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

}  // namespace

void ReportWriter::write_covariance_svg(const std::string& filename,
                                        const std::vector<StatRow>& rows) const {
    if (rows.empty()) return;
    double lo = 0, hi = 0;
    for (const auto& r : rows) {
        lo = std::min({lo, r.estimate - 4 * r.std_error, r.prediction});
        hi = std::max({hi, r.estimate + 4 * r.std_error, r.prediction});
    }
    const double pad = 0.1 * (hi - lo + 1e-12);
    Scale y{lo - pad, hi + pad, 280.0, 20.0};
    const double w = 80.0 + 60.0 * static_cast<double>(rows.size());
    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='320'>\n";
    s << "<line x1='40' y1='" << y(0.0) << "' x2='" << w - 20 << "' y2='" << y(0.0)
      << "' stroke='#999'/>\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double x = 70.0 + 60.0 * static_cast<double>(i);
        const auto& r = rows[i];
        s << "<line x1='" << x << "' y1='" << y(r.estimate - 4 * r.std_error) << "' x2='" << x
          << "' y2='" << y(r.estimate + 4 * r.std_error) << "' stroke='#336' stroke-width='2'/>\n";
        s << "<circle cx='" << x << "' cy='" << y(r.estimate) << "' r='4' fill='#336'/>\n";
        s << "<rect x='" << x - 6 << "' y='" << y(r.prediction) - 1.5
          << "' width='12' height='3' fill='#c33'/>\n";
        s << "<text x='" << x << "' y='300' font-size='9' text-anchor='middle'>" << r.statistic
          << "</text>\n";
    }
    s << "</svg>\n";
    std::ofstream f(path_for(filename));
    f << s.str();
}

void ReportWriter::write_scaling_svg(const std::string& filename, const ScalingFit& fit) const {
    if (fit.points.empty()) return;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& pt : fit.points) {
        if (pt.gap <= 0 || pt.moment <= 0) continue;
        xlo = std::min(xlo, std::log10(pt.gap));
        xhi = std::max(xhi, std::log10(pt.gap));
        ylo = std::min(ylo, std::log10(pt.moment));
        yhi = std::max(yhi, std::log10(pt.moment));
    }
    Scale sx{xlo - 0.2, xhi + 0.2, 50.0, 370.0};
    Scale sy{ylo - 0.3, yhi + 0.3, 270.0, 20.0};
    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='400' height='300'>\n";
    const double ln10 = std::log(10.0);
    auto fit_y = [&](double lx) { return (fit.intercept + fit.slope * lx * ln10) / ln10; };
    s << "<line x1='" << sx(xlo - 0.1) << "' y1='" << sy(fit_y(xlo - 0.1)) << "' x2='"
      << sx(xhi + 0.1) << "' y2='" << sy(fit_y(xhi + 0.1)) << "' stroke='#c33'/>\n";
    for (const auto& pt : fit.points) {
        if (pt.gap <= 0 || pt.moment <= 0) continue;
        s << "<circle cx='" << sx(std::log10(pt.gap)) << "' cy='" << sy(std::log10(pt.moment))
          << "' r='4' fill='#336'/>\n";
    }
    s << "<text x='60' y='30' font-size='11'>slope " << format_double(fit.slope) << "</text>\n";
    s << "</svg>\n";
    std::ofstream f(path_for(filename));
    f << s.str();
}

}  // namespace circlt
