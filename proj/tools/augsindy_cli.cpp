// Command-line front end: simulate systems, fit and screen series, learn
// auxiliary bases, and run or re-render the experiments.
#include "augsindy/causal.hpp"
#include "augsindy/dictlearn.hpp"
#include "augsindy/differentiate.hpp"
#include "augsindy/errors.hpp"
#include "augsindy/harness.hpp"
#include "augsindy/library.hpp"
#include "augsindy/simulate.hpp"
#include "augsindy/stls.hpp"
#include "augsindy/timeseries.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace augsindy;
using nlohmann::json;

namespace {

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
    std::map<std::string, double> out;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Parse, "expected key=value, got '" + item + "'");
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "bad number in '" + item + "'");
        }
    }
    return out;
}

TimeSeries load_series(const std::string& path, const std::string& time_column) {
    if (time_column.empty()) return load_csv(path);
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
    std::string header;
    std::getline(in, header);
    CsvSchema schema;
    schema.time_column = time_column;
    std::stringstream ss(header);
    std::string col;
    while (std::getline(ss, col, ','))
        if (col != time_column) schema.value_columns.push_back(col);
    return load_csv(path, schema);
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    out << body;
}

json mask_to_json(const CausalMask& mask) {
    json rows = json::array(), pv = json::array(), targets = json::array();
    for (Eigen::Index r = 0; r < mask.admissible.rows(); ++r) {
        json row = json::array(), prow = json::array();
        for (Eigen::Index c = 0; c < mask.admissible.cols(); ++c) {
            row.push_back(static_cast<bool>(mask.admissible(r, c)));
            const double p = mask.p_values(r, c);
            prow.push_back(std::isnan(p) ? json(nullptr) : json(p));
        }
        rows.push_back(row);
        pv.push_back(prow);
        targets.push_back(mask.variable_names[static_cast<std::size_t>(mask.targets[static_cast<std::size_t>(r)])]);
    }
    return {{"variables", mask.variable_names}, {"targets", targets}, {"admissible", rows}, {"p_values", pv},
            {"driven", mask.driven}, {"alpha", mask.alpha}, {"n_permutations", mask.n_permutations},
            {"seed", mask.seed}};
}

CausalMask mask_from_json(const json& j, const TimeSeries& ts) {
    CausalMask mask = CausalMask::full(ts.names());
    const auto targets = j.at("targets").get<std::vector<std::string>>();
    const auto rows = j.at("admissible");
    for (std::size_t r = 0; r < targets.size(); ++r) {
        auto t = ts.index_of(targets[r]);
        if (!t) throw Error(ErrorKind::Alignment, "mask target '" + targets[r] + "' is not in the series");
        const auto row = mask.row_of(static_cast<int>(*t));
        for (Eigen::Index c = 0; c < mask.admissible.cols(); ++c) mask.admissible(row, c) = rows.at(r).at(c).get<bool>();
        if (j.contains("driven")) mask.driven[static_cast<std::size_t>(row)] = j.at("driven").at(r).get<bool>();
    }
    return mask;
}

json model_to_json(const SparseModel& m) {
    json eqs = json::object();
    for (std::size_t k = 0; k < m.targets.size(); ++k) {
        json terms = json::object();
        for (Eigen::Index j = 0; j < m.xi.rows(); ++j)
            if (m.xi(j, static_cast<Eigen::Index>(k)) != 0.0) terms[m.terms[static_cast<std::size_t>(j)].label] = m.xi(j, static_cast<Eigen::Index>(k));
        eqs[m.targets[k]] = terms;
    }
    return {{"lambda", m.lambda}, {"equations", eqs}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse identification of dynamics with causal screening and basis learning"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Integrate a named ODE system and write its trajectory as CSV");
    std::string sim_system, sim_out;
    std::vector<std::string> sim_params;
    std::vector<double> sim_x0;
    double sim_t_end = 0.0, sim_dt = 0.0;
    sim->add_option("--system", sim_system, "lorenz | mrw | fitzhugh-nagumo | pendulum | sir")->required();
    sim->add_option("--param", sim_params, "Parameter override key=value (repeatable)");
    sim->add_option("--x0", sim_x0, "Initial state")->delimiter(',');
    sim->add_option("--t-end", sim_t_end, "Horizon (default: the system's)");
    sim->add_option("--dt", sim_dt, "Step (default: the system's)");
    sim->add_option("--out", sim_out, "Output CSV ('-' for stdout)")->default_val("-");

    // fit
    auto* fit = app.add_subcommand("fit", "Fit a sparse model to a CSV series");
    std::string fit_data, fit_time, fit_diff = "central", fit_solver = "stls", fit_mask, fit_out;
    double fit_lambda = 0.1;
    int fit_degree = 2, fit_iter = 25;
    bool fit_norm_target = false, fit_raw = false;
    fit->add_option("--data", fit_data, "Input CSV (first column is time unless --time-column)")->required();
    fit->add_option("--time-column", fit_time, "Name of the time column");
    fit->add_option("--lambda", fit_lambda, "Threshold")->default_val(0.1);
    fit->add_option("--degree", fit_degree, "Polynomial library degree")->default_val(2);
    fit->add_option("--diff", fit_diff, "central | smooth:<w>")->default_val("central");
    fit->add_option("--solver", fit_solver, "stls | lasso")->default_val("stls");
    fit->add_option("--max-iter", fit_iter, "STLS passes")->default_val(25);
    fit->add_option("--mask", fit_mask, "Mask JSON from `screen`; fits the augmented model");
    fit->add_flag("--normalize-target", fit_norm_target, "Scale each target to unit RMS before thresholding");
    fit->add_flag("--raw", fit_raw, "Threshold raw coefficients (no column scaling)");
    fit->add_option("--out", fit_out, "Write the model as JSON");

    // screen
    auto* scr = app.add_subcommand("screen", "Permutation screening of candidate variables per target");
    std::string scr_data, scr_time, scr_diff = "central", scr_out, scr_corr = "bh";
    ScreeningConfig scfg;
    bool scr_all = false;
    scr->add_option("--data", scr_data, "Input CSV")->required();
    scr->add_option("--time-column", scr_time, "Name of the time column");
    scr->add_option("--diff", scr_diff, "central | smooth:<w>")->default_val("central");
    scr->add_option("--alpha", scfg.alpha, "Significance level")->default_val(0.05);
    scr->add_option("--permutations", scfg.n_permutations, "Permutations per test")->default_val(1000);
    scr->add_option("--seed", scfg.seed, "Seed")->default_val(0);
    scr->add_option("--degree", scfg.degree, "Polynomial degree of the screening regression")->default_val(1);
    scr->add_option("--correction", scr_corr, "none | bh | holm")->default_val("bh");
    scr->add_flag("--family-all", scr_all, "Correct across the whole mask instead of per target");
    scr->add_option("--out", scr_out, "Mask JSON ('-' for stdout)")->default_val("-");

    // learn-basis
    auto* lb = app.add_subcommand("learn-basis", "Learn auxiliary atoms completing a partial polynomial library");
    std::string lb_data, lb_time, lb_diff = "central", lb_out;
    std::vector<std::string> lb_withhold;
    int lb_degree = 2, lb_p = 1, lb_sparsity = 1;
    LearnBasisConfig lbcfg;
    lb->add_option("--data", lb_data, "Input CSV")->required();
    lb->add_option("--time-column", lb_time, "Name of the time column");
    lb->add_option("--diff", lb_diff, "central | smooth:<w>")->default_val("central");
    lb->add_option("--degree", lb_degree, "Polynomial degree of the full library")->default_val(2);
    lb->add_option("--withhold", lb_withhold, "Labels removed from the known library");
    lb->add_option("--atoms", lb_p, "Number of atoms to learn")->default_val(1);
    lb->add_option("--sparsity", lb_sparsity, "Atoms per target at most")->default_val(1);
    lb->add_option("--seed", lbcfg.seed, "Seed")->default_val(0);
    lb->add_option("--code-threshold", lbcfg.code_threshold, "Threshold on unit-scaled codes")->default_val(0.05);
    lb->add_option("--max-iter", lbcfg.max_iter, "Alternations")->default_val(100);
    lb->add_option("--out", lb_out, "Atoms CSV ('-' for stdout)")->default_val("-");

    // experiment
    auto* ex = app.add_subcommand("experiment", "Run an experiment from a JSON config");
    std::string ex_config, ex_out, ex_noise, ex_system;
    int ex_trials = 0, ex_missing = 0;
    std::optional<std::uint64_t> ex_seed;
    ex->add_option("--config", ex_config, "Experiment JSON")->required();
    ex->add_option("--out", ex_out, "Output directory (overrides the config)");
    ex->add_option("--trials", ex_trials, "Override trial count");
    ex->add_option("--seed", ex_seed, "Override master seed");
    ex->add_option("--noise-mode", ex_noise, "Override noise mode");
    ex->add_option("--system", ex_system, "Override system");
    ex->add_option("--n-missing", ex_missing, "Override |N|");

    // report
    auto* rep = app.add_subcommand("report", "Render report.csv as text tables");
    std::string rep_in;
    rep->add_option("--in", rep_in, "report.csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const OdeSystem system = make_system(sim_system, parse_params(sim_params));
            SimConfig cfg = default_config(system);
            if (!sim_x0.empty()) cfg.x0 = Eigen::Map<Eigen::VectorXd>(sim_x0.data(), static_cast<Eigen::Index>(sim_x0.size()));
            if (sim_t_end > 0.0) cfg.t_end = sim_t_end;
            if (sim_dt > 0.0) cfg.dt = sim_dt;
            const TimeSeries ts = integrate(system, cfg);
            if (sim_out == "-") {
                std::cout << "t";
                for (const auto& n : ts.names()) std::cout << ',' << n;
                std::cout << '\n';
                std::cout.precision(17);
                for (Eigen::Index i = 0; i < ts.samples(); ++i) {
                    std::cout << ts.times()(i);
                    for (Eigen::Index j = 0; j < ts.variables(); ++j) std::cout << ',' << ts.values()(i, j);
                    std::cout << '\n';
                }
            } else {
                save_csv(ts, sim_out, "t");
            }
        } else if (*fit) {
            const TimeSeries ts = load_series(fit_data, fit_time);
            const DerivativeMatrix xdot = differentiate(ts, DiffMethod::parse(fit_diff));
            const FunctionLibrary lib = build_polynomial_library(ts, fit_degree);
            FitOptions opts;
            opts.max_iter = fit_iter;
            opts.solver = parse_solver(fit_solver);
            opts.normalize_columns = !fit_raw;
            opts.normalize_target = fit_norm_target;
            SparseModel model;
            if (fit_mask.empty()) {
                model = fit_sindy(ts, xdot, lib, fit_lambda, opts);
            } else {
                std::ifstream in(fit_mask);
                if (!in) throw Error(ErrorKind::Io, "cannot open mask '" + fit_mask + "'");
                json j;
                in >> j;
                model = fit_augmented(ts, xdot, lib, fit_lambda, mask_from_json(j, ts), opts);
            }
            std::cout << model.render();
            if (!fit_out.empty()) write_text(fit_out, model_to_json(model).dump(2) + "\n");
        } else if (*scr) {
            const TimeSeries ts = load_series(scr_data, scr_time);
            const DerivativeMatrix xdot = differentiate(ts, DiffMethod::parse(scr_diff));
            scfg.correction = parse_correction(scr_corr);
            scfg.per_target = !scr_all;
            write_text(scr_out, mask_to_json(screen_variables(ts, xdot, scfg)).dump(2) + "\n");
        } else if (*lb) {
            const TimeSeries ts = load_series(lb_data, lb_time);
            const DerivativeMatrix xdot = differentiate(ts, DiffMethod::parse(lb_diff));
            const FunctionLibrary known = build_polynomial_library(ts, lb_degree).without(lb_withhold);
            const LearnedBasis basis = learn_basis(xdot, known, lb_p, lb_sparsity, lbcfg);
            std::ostringstream out;
            out.precision(17);
            for (int k = 0; k < basis.p; ++k) out << (k ? "," : "") << 'N' << (k + 1);
            out << '\n';
            for (Eigen::Index i = 0; i < basis.atoms.rows(); ++i) {
                for (Eigen::Index k = 0; k < basis.atoms.cols(); ++k) out << (k ? "," : "") << basis.atoms(i, k);
                out << '\n';
            }
            write_text(lb_out, out.str());
            std::cerr << "objective: " << basis.objective_trace.front() << " -> " << basis.objective_trace.back() << " after "
                      << basis.iterations << " iterations\n";
        } else if (*ex) {
            ExperimentConfig cfg = load_config(ex_config);
            if (ex_trials > 0) cfg.trials = ex_trials;
            if (ex_seed) cfg.seed = *ex_seed;
            if (!ex_noise.empty()) cfg.noise_mode = parse_noise_mode(ex_noise);
            if (!ex_system.empty()) cfg.system = ex_system;
            if (ex_missing > 0) cfg.n_missing = ex_missing;
            if (!ex_out.empty()) cfg.output = ex_out;
            if (cfg.output.empty()) throw Error(ErrorKind::Config, "no output directory: pass --out or set \"output\"");
            const ReportPair pair = run_experiment(cfg);
            write_outputs(pair, cfg.output);
            std::cout << pair_to_text(pair);
        } else if (*rep) {
            std::ifstream in(rep_in);
            if (!in) throw Error(ErrorKind::Io, "cannot open '" + rep_in + "'");
            std::stringstream buf;
            buf << in.rdbuf();
            bool first = true;
            for (const auto& [name, report] : reports_from_csv(buf.str())) {
                if (!first) std::cout << '\n';
                first = false;
                std::cout << render_table(report);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
