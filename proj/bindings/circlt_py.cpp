// Python bindings for the core operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "circlt/acceptance.hpp"
#include "circlt/errors.hpp"
#include "circlt/report.hpp"
#include "circlt/statistics.hpp"

namespace py = pybind11;
using namespace circlt;

namespace {

Centering centering_from(const std::string& s) {
    if (s == "exact") return Centering::exact;
    if (s == "empirical") return Centering::empirical;
    throw std::invalid_argument("centering must be 'exact' or 'empirical'");
}

TraceRoute route_from(const std::string& s) {
    if (s == "spectral") return TraceRoute::spectral;
    if (s == "combinatorial") return TraceRoute::combinatorial;
    throw std::invalid_argument("route must be 'spectral' or 'combinatorial'");
}

Convention convention_from(const std::string& s) {
    if (s == "normalized") return Convention::normalized;
    if (s == "display") return Convention::display;
    throw std::invalid_argument("convention must be 'normalized' or 'display'");
}

IndexVariant variant_from(const std::string& s) {
    if (s == "A_p") return IndexVariant::a_p;
    if (s == "A_p_distinct") return IndexVariant::a_p_distinct;
    if (s == "A_p_pairwise") return IndexVariant::a_p_pairwise;
    if (s == "A_ps") return IndexVariant::a_ps;
    if (s == "A_ps_distinct") return IndexVariant::a_ps_distinct;
    if (s == "A_ps_pairwise") return IndexVariant::a_ps_pairwise;
    throw std::invalid_argument("unknown index family variant: " + s);
}

std::vector<Label> labels_from(const std::vector<std::pair<int, double>>& raw) {
    std::vector<Label> out;
    out.reserve(raw.size());
    for (const auto& [p, t] : raw) out.push_back({p, t});
    return out;
}

}  // namespace

PYBIND11_MODULE(circlt, m) {
    m.doc() = "time-dependent fluctuations of trace powers of random circulant matrices: "
              "simulation, counting and limit-law verification";

    py::register_exception<grid_error>(m, "GridError", PyExc_ValueError);
    py::register_exception<budget_error>(m, "BudgetError", PyExc_RuntimeError);
    py::register_exception<pairing_error>(m, "PairingError", PyExc_ValueError);

    py::class_<PathEnsemble>(m, "PathEnsemble")
        .def_property_readonly("n_entries", &PathEnsemble::n_entries)
        .def_property_readonly("replicas", &PathEnsemble::replicas)
        .def_property_readonly("seed", &PathEnsemble::seed)
        .def_property_readonly("grid",
                               [](const PathEnsemble& e) { return e.grid().times(); })
        .def("value", &PathEnsemble::value, py::arg("replica"), py::arg("entry"),
             py::arg("grid_index"))
        .def("path",
             [](const PathEnsemble& e, std::size_t r, std::size_t i) {
                 auto s = e.path(r, i);
                 return std::vector<double>(s.begin(), s.end());
             },
             py::arg("replica"), py::arg("entry"));

    m.def(
        "generate_ensemble",
        [](std::size_t n_entries, const std::vector<double>& grid, std::size_t replicas,
           std::uint64_t seed, int threads) {
            return generate_ensemble(n_entries, TimeGrid(grid), replicas, seed, threads);
        },
        py::arg("n_entries"), py::arg("grid"), py::arg("replicas"), py::arg("seed"),
        py::arg("threads") = 1);

    m.def(
        "increment_decompose",
        [](const PathEnsemble& e, std::size_t replica, double t1, double t2) {
            auto pair = increment_decompose(e, replica, t1, t2);
            return py::make_tuple(pair.u, pair.v);
        },
        py::arg("ensemble"), py::arg("replica"), py::arg("t1"), py::arg("t2"));

    py::class_<CirculantSample>(m, "CirculantSample")
        .def_readonly("n", &CirculantSample::n)
        .def_readonly("entries", &CirculantSample::entries)
        .def_readonly("t", &CirculantSample::t)
        .def("matrix_element", &CirculantSample::matrix_element, py::arg("i"), py::arg("j"));

    m.def("sample_at", &sample_at, py::arg("ensemble"), py::arg("replica"), py::arg("t"));

    m.def(
        "trace_power_spectral",
        [](const std::vector<double>& entries, int p, double t) {
            CirculantSample s{entries.size(), entries, t};
            return trace_power_spectral(s, p).value;
        },
        py::arg("entries"), py::arg("p"), py::arg("t") = 0.0);
    m.def(
        "trace_power_combinatorial",
        [](const std::vector<double>& entries, int p, double t, double budget) {
            CirculantSample s{entries.size(), entries, t};
            return trace_power_combinatorial(s, p, budget).value;
        },
        py::arg("entries"), py::arg("p"), py::arg("t") = 0.0, py::arg("budget") = 1e8);
    m.def("expected_trace_power_exact", &expected_trace_power_exact, py::arg("n"), py::arg("p"),
          py::arg("t"), py::arg("budget") = 1e8);

    py::class_<FluctuationSeries>(m, "FluctuationSeries")
        .def_readonly("p", &FluctuationSeries::p)
        .def_readonly("times", &FluctuationSeries::times)
        .def_readonly("replicas", &FluctuationSeries::replicas)
        .def_readonly("n", &FluctuationSeries::n)
        .def_readonly("centering_values", &FluctuationSeries::centering_values)
        .def("column", [](const FluctuationSeries& s, double t) {
            const double* c = s.column(s.time_index(t));
            return std::vector<double>(c, c + s.replicas);
        }, py::arg("t"), "per-replica w_p(t) values");

    m.def(
        "fluctuation_series",
        [](const PathEnsemble& e, int p, const std::vector<double>& times,
           const std::string& centering, const std::string& route, double budget,
           bool allow_degenerate, int threads) {
            return fluctuation_series(e, p, times, centering_from(centering), route_from(route),
                                      budget, allow_degenerate, threads);
        },
        py::arg("ensemble"), py::arg("p"), py::arg("times"), py::arg("centering") = "exact",
        py::arg("route") = "spectral", py::arg("budget") = 1e8,
        py::arg("allow_degenerate") = false, py::arg("threads") = 1);

    m.def(
        "enumerate_index_family",
        [](std::size_t n, int p, const std::string& variant, std::optional<int> s,
           bool keep_members, double budget) {
            auto fam = enumerate_index_family(n, p, variant_from(variant), s, keep_members,
                                              budget);
            py::dict d;
            d["n"] = fam.n;
            d["p"] = fam.p;
            d["variant"] = to_string(fam.variant);
            d["s"] = fam.s;
            d["count"] = fam.count;
            if (keep_members) d["members"] = fam.members;
            return d;
        },
        py::arg("n"), py::arg("p"), py::arg("variant") = "A_p", py::arg("s") = std::nullopt,
        py::arg("keep_members") = false, py::arg("budget") = 1e8);

    m.def(
        "eulerian_density",
        [](int p, int s, const std::string& convention) {
            return eulerian_density(p, s, convention_from(convention));
        },
        py::arg("p"), py::arg("s"), py::arg("convention") = "normalized");

    m.def(
        "density_limit_check",
        [](int p, const std::vector<std::size_t>& n_list, double budget) {
            py::list rows;
            for (const auto& r : density_limit_check(p, n_list, budget)) {
                py::dict d;
                d["n"] = r.n;
                d["p"] = r.p;
                d["s"] = r.s;
                d["count"] = r.count;
                d["count_distinct"] = r.count_distinct;
                d["ratio"] = r.ratio;
                d["ratio_distinct"] = r.ratio_distinct;
                d["density"] = r.density;
                d["abs_error"] = r.abs_error;
                d["gap"] = r.gap;
                rows.append(d);
            }
            return rows;
        },
        py::arg("p"), py::arg("n_list"), py::arg("budget") = 1e8);

    m.def(
        "cluster_decompose",
        [](const std::vector<std::vector<int>>& vectors) {
            auto dec = cluster_decompose(VectorTupleSystem{vectors});
            py::dict d;
            d["blocks"] = dec.blocks;
            d["total_multiplicity"] = dec.total_multiplicity;
            d["cross_multiplicity"] = dec.cross_multiplicity;
            return d;
        },
        py::arg("vectors"));

    m.def(
        "enumerate_b",
        [](std::size_t n, const std::vector<int>& powers, double budget) {
            std::uint64_t nonzero = 0;
            const std::uint64_t count = enumerate_B(n, powers, budget, &nonzero);
            return py::make_tuple(count, nonzero);
        },
        py::arg("n"), py::arg("powers"), py::arg("budget") = 1e8,
        "returns (count, count with nonzero centered contribution)");

    m.def("pair_partitions", [](int l) {
        py::list out;
        for (const auto& pp : pair_partitions(l)) out.append(pp.pairs);
        return out;
    }, py::arg("l"));

    m.def("wick_gaussian_product_moment", &wick_gaussian_product_moment,
          py::arg("multiplicities"), py::arg("t"));

    py::class_<MomentEstimate>(m, "MomentEstimate")
        .def_readonly("value", &MomentEstimate::value)
        .def_readonly("std_error", &MomentEstimate::std_error)
        .def_readonly("replicas", &MomentEstimate::replicas)
        .def_readonly("prediction", &MomentEstimate::prediction)
        .def("z_score", &MomentEstimate::z_score);

    m.def(
        "empirical_covariance",
        [](const FluctuationSeries& wp, double t1, const FluctuationSeries& wq, double t2,
           const std::string& convention) {
            return empirical_covariance(wp, t1, wq, t2, convention_from(convention));
        },
        py::arg("wp"), py::arg("t1"), py::arg("wq"), py::arg("t2"),
        py::arg("convention") = "normalized");

    m.def(
        "mixed_moment",
        [](const std::vector<std::pair<const FluctuationSeries*, double>>& factors) {
            return mixed_moment(factors);
        },
        py::arg("factors"));

    m.def(
        "wick_moment",
        [](const std::vector<std::pair<int, double>>& labels, const std::string& convention) {
            return wick_moment(labels_from(labels), convention_from(convention));
        },
        py::arg("labels"), py::arg("convention") = "normalized");

    m.def(
        "normality_diagnostics",
        [](const std::vector<double>& samples, double predicted_variance) {
            auto rep = normality_diagnostics(samples, predicted_variance);
            py::dict d;
            d["replicas"] = rep.replicas;
            d["skewness"] = rep.skewness;
            d["skewness_se"] = rep.skewness_se;
            d["excess_kurtosis"] = rep.excess_kurtosis;
            d["excess_kurtosis_se"] = rep.excess_kurtosis_se;
            d["ks_statistic"] = rep.ks_statistic;
            d["ks_pvalue"] = rep.ks_pvalue;
            d["degenerate"] = rep.degenerate;
            return d;
        },
        py::arg("samples"), py::arg("predicted_variance"));

    m.def(
        "increment_moment_scaling",
        [](const PathEnsemble& e, int p, const std::vector<std::pair<double, double>>& pairs,
           const std::string& centering) {
            auto fit = increment_moment_scaling(e, p, pairs, centering_from(centering));
            py::dict d;
            py::list pts;
            for (const auto& pt : fit.points) {
                py::dict q;
                q["gap"] = pt.gap;
                q["moment"] = pt.moment;
                q["std_error"] = pt.std_error;
                pts.append(q);
            }
            d["points"] = pts;
            d["slope"] = fit.slope;
            d["intercept"] = fit.intercept;
            d["slope_std_error"] = fit.slope_std_error;
            d["implied_constant"] = fit.implied_constant;
            return d;
        },
        py::arg("ensemble"), py::arg("p"), py::arg("pairs"), py::arg("centering") = "exact");

    m.def(
        "kernel_value",
        [](int p, int q, double t1, double t2, const std::string& convention) {
            return kernel_value(p, q, t1, t2, convention_from(convention));
        },
        py::arg("p"), py::arg("q"), py::arg("t1"), py::arg("t2"),
        py::arg("convention") = "normalized");

    py::class_<KernelMatrix>(m, "KernelMatrix")
        .def_readonly("gram", &KernelMatrix::gram)
        .def_readonly("psd", &KernelMatrix::psd)
        .def_readonly("rank", &KernelMatrix::rank)
        .def_readonly("min_pivot", &KernelMatrix::min_pivot)
        .def_readonly("jitter_used", &KernelMatrix::jitter_used)
        .def_property_readonly("dim", &KernelMatrix::dim)
        .def("gram_at", &KernelMatrix::gram_at, py::arg("i"), py::arg("j"));

    m.def(
        "kernel_matrix",
        [](const std::vector<std::pair<int, double>>& labels, const std::string& convention) {
            return kernel_matrix(labels_from(labels), convention_from(convention));
        },
        py::arg("labels"), py::arg("convention") = "normalized");

    py::class_<LimitSample>(m, "LimitSample")
        .def_readonly("replicas", &LimitSample::replicas)
        .def_readonly("seed", &LimitSample::seed)
        .def("column", [](const LimitSample& s, std::size_t i) {
            const double* c = s.column(i);
            return std::vector<double>(c, c + s.replicas);
        }, py::arg("label_index"));

    m.def("sample_limit_process", &sample_limit_process, py::arg("kernel"), py::arg("replicas"),
          py::arg("seed"));

    m.def("run_criterion", [](int id) {
        auto res = run_criterion(id, default_config());
        py::dict d;
        d["id"] = res.id;
        d["name"] = res.name;
        d["passed"] = res.passed;
        d["detail"] = res.detail;
        return d;
    }, py::arg("id"), "run one built-in verification criterion with the default config");
}
