#include "augsindy/causal.hpp"
#include "augsindy/dictlearn.hpp"
#include "augsindy/errors.hpp"
#include "augsindy/differentiate.hpp"
#include "augsindy/harness.hpp"
#include "augsindy/library.hpp"
#include "augsindy/metrics.hpp"
#include "augsindy/simulate.hpp"
#include "augsindy/stls.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

namespace py = pybind11;
using namespace augsindy;

namespace {

using RowMajorBool = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

TimeSeries series(const Eigen::VectorXd& times, const Eigen::MatrixXd& values, const std::vector<std::string>& names) {
    return TimeSeries(times, values, names);
}

py::dict series_dict(const TimeSeries& ts) {
    py::dict d;
    d["times"] = ts.times();
    d["values"] = ts.values();
    d["names"] = ts.names();
    return d;
}

py::dict model_dict(const SparseModel& m) {
    std::vector<std::string> labels;
    for (const auto& t : m.terms) labels.push_back(t.label);
    py::dict d;
    d["xi"] = m.xi;
    d["labels"] = labels;
    d["targets"] = m.targets;
    d["equations"] = m.render();
    return d;
}

py::dict report_dict(const MetricReport& r) {
    py::dict d;
    d["metric"] = to_string(r.metric);
    d["lambdas"] = r.lambdas;
    d["per_trial"] = r.per_trial;
    d["mean"] = r.mean;
    d["std"] = r.std;
    d["table"] = render_table(r);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sparse model discovery with permutation screening and learned library atoms";

    py::register_exception<Error>(m, "AugsindyError", PyExc_ValueError);

    m.def("system_names", &system_names);

    m.def(
        "simulate",
        [](const std::string& name, const std::map<std::string, double>& params, std::optional<Eigen::VectorXd> x0,
           std::optional<double> t_end, std::optional<double> dt) {
            const auto sys = make_system(name, params);
            auto cfg = default_config(sys);
            if (x0) cfg.x0 = *x0;
            if (t_end) cfg.t_end = *t_end;
            if (dt) cfg.dt = *dt;
            return series_dict(integrate(sys, cfg));
        },
        py::arg("system"), py::arg("params") = std::map<std::string, double>{}, py::arg("x0") = py::none(),
        py::arg("t_end") = py::none(), py::arg("dt") = py::none(),
        "Integrate a named system; returns {'times', 'values', 'names'}.");

    m.def("stls", [](const Eigen::MatrixXd& theta, const Eigen::VectorXd& y, double lam,
                     int max_iter) { return stls_solve(theta, y, lam, max_iter); },
          py::arg("theta"), py::arg("y"), py::arg("lam"), py::arg("max_iter") = 25,
          "Sequentially thresholded least squares on raw coefficients.");

    m.def("select", [](const Eigen::VectorXd& v) { return Eigen::VectorXi(select(v)); });

    m.def(
        "fit",
        [](const Eigen::VectorXd& times, const Eigen::MatrixXd& values, const std::vector<std::string>& names,
           double lam, int degree, const std::string& diff, bool normalize_target,
           std::optional<RowMajorBool> admissible) {
            const auto ts = series(times, values, names);
            const auto xdot = differentiate(ts, DiffMethod::parse(diff));
            const auto lib = build_polynomial_library(ts, degree);
            FitOptions opts;
            opts.normalize_target = normalize_target;
            if (!admissible) return model_dict(fit_sindy(ts, xdot, lib, lam, opts));
            if (admissible->rows() != ts.variables() || admissible->cols() != ts.variables())
                throw Error(ErrorKind::Shape, "admissible must be variables x variables");
            auto mask = CausalMask::full(names);
            for (Eigen::Index r = 0; r < admissible->rows(); ++r)
                for (Eigen::Index c = 0; c < admissible->cols(); ++c) mask.admissible(r, c) = (*admissible)(r, c);
            return model_dict(fit_augmented(ts, xdot, lib, lam, mask, opts));
        },
        py::arg("times"), py::arg("values"), py::arg("names"), py::arg("lam") = 0.1, py::arg("degree") = 2,
        py::arg("diff") = "central", py::arg("normalize_target") = false, py::arg("admissible") = py::none(),
        "Fit a polynomial sparse model; `admissible[target, variable]` restricts each equation.");

    m.def(
        "screen",
        [](const Eigen::VectorXd& times, const Eigen::MatrixXd& values, const std::vector<std::string>& names,
           int permutations, std::uint64_t seed, double alpha, int degree, const std::string& correction,
           const std::string& diff) {
            const auto ts = series(times, values, names);
            ScreeningConfig cfg;
            cfg.n_permutations = permutations;
            cfg.seed = seed;
            cfg.alpha = alpha;
            cfg.degree = degree;
            cfg.correction = parse_correction(correction);
            const auto mask = screen_variables(ts, differentiate(ts, DiffMethod::parse(diff)), cfg);
            py::dict d;
            d["admissible"] = RowMajorBool(mask.admissible.matrix());
            d["p_values"] = mask.p_values;
            d["driven"] = mask.driven;
            return d;
        },
        py::arg("times"), py::arg("values"), py::arg("names"), py::arg("permutations") = 1000, py::arg("seed") = 0,
        py::arg("alpha") = 0.05, py::arg("degree") = 1, py::arg("correction") = "bh", py::arg("diff") = "central");

    m.def(
        "learn_basis",
        [](const Eigen::VectorXd& times, const Eigen::MatrixXd& values, const std::vector<std::string>& names,
           const std::vector<std::string>& withhold, int atoms, int sparsity, int degree, std::uint64_t seed) {
            const auto ts = series(times, values, names);
            const auto known = build_polynomial_library(ts, degree).without(withhold);
            LearnBasisConfig cfg;
            cfg.seed = seed;
            const auto basis = learn_basis(finite_diff(ts), known, atoms, sparsity, cfg);
            py::dict d;
            d["atoms"] = basis.atoms;
            d["codes"] = basis.codes;
            d["objective_trace"] = basis.objective_trace;
            d["known_labels"] = known.labels();
            return d;
        },
        py::arg("times"), py::arg("values"), py::arg("names"), py::arg("withhold"), py::arg("atoms") = 1,
        py::arg("sparsity") = 1, py::arg("degree") = 2, py::arg("seed") = 0);

    m.def("abs_correlation", [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return abs_correlation(a, b); });

    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            const auto pair = run_experiment(config_from_json(nlohmann::json::parse(config_json)));
            py::dict d;
            d["baseline"] = report_dict(pair.baseline);
            d["augmented"] = report_dict(pair.augmented);
            d["config"] = config_to_json(pair.config).dump();
            d["csv"] = pair_to_csv(pair);
            return d;
        },
        py::arg("config_json"), "Run an experiment from its JSON config text.");

    m.def("format_value", &format_value);
}
