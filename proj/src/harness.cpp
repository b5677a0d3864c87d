#include "augsindy/harness.hpp"

#include "augsindy/dictlearn.hpp"
#include "augsindy/errors.hpp"
#include "augsindy/rng.hpp"
#include "augsindy/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#ifndef AUGSINDY_DEFAULT_DATA_DIR
#define AUGSINDY_DEFAULT_DATA_DIR "data"
#endif

namespace augsindy {

using nlohmann::json;

ExperimentKind parse_experiment(const std::string& text) {
    if (text == "lynx-hare") return ExperimentKind::LynxHare;
    if (text == "sardine-anchovy") return ExperimentKind::SardineAnchovy;
    if (text == "dual-uncertainty") return ExperimentKind::DualUncertainty;
    throw Error(ErrorKind::Config, "unknown experiment '" + text + "'");
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::LynxHare: return "lynx-hare";
        case ExperimentKind::SardineAnchovy: return "sardine-anchovy";
        case ExperimentKind::DualUncertainty: return "dual-uncertainty";
    }
    return "lynx-hare";
}

std::vector<double> lambda_schedule(double start, double ratio, int count) {
    if (!(start > 0.0)) throw Error(ErrorKind::Config, "lambda schedule start must be positive");
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorKind::Config, "lambda schedule ratio must lie in (0, 1)");
    if (count < 1) throw Error(ErrorKind::Config, "lambda schedule needs at least one value");
    std::vector<double> out;
    double v = start;
    for (int i = 0; i < count; ++i, v *= ratio) out.push_back(std::round(v * 1e4) / 1e4);
    return out;
}

std::uint64_t cell_seed(std::uint64_t master, int trial, int lambda_index) {
    return derive_seed({master, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(lambda_index)});
}

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

const std::vector<std::string> kKnownKeys{
    "experiment", "noise_mode", "lambdas", "lambda_schedule", "trials", "seed", "output", "system", "n_missing",
    "t_end", "dt", "basis_sparsity", "code_threshold", "basis_max_iter", "n_noise", "data_dir", "library_degree",
    "differentiation", "trim_endpoints", "standardize", "normalize_target", "screening"};
const std::vector<std::string> kScreeningKeys{"alpha",      "n_permutations", "degree",
                                              "per_target", "admit_self",     "correction", "differentiation",
                                              "max_rows",   "stop_after"};

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Config, "experiment config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
            throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
        }
    }
    try {
        ExperimentConfig cfg;
        if (j.contains("experiment")) cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());
        if (j.contains("noise_mode")) cfg.noise_mode = parse_noise_mode(j.at("noise_mode").get<std::string>());
        else if (cfg.experiment == ExperimentKind::DualUncertainty) cfg.noise_mode = NoiseMode::StandardNormal;
        read_if(j, "lambdas", cfg.lambdas);
        if (j.contains("lambda_schedule")) {
            const auto& s = j.at("lambda_schedule");
            if (!cfg.lambdas.empty()) throw Error(ErrorKind::Config, "give either lambdas or lambda_schedule, not both");
            cfg.lambdas = lambda_schedule(s.at("start").get<double>(), s.at("ratio").get<double>(), s.at("count").get<int>());
        }
        read_if(j, "trials", cfg.trials);
        read_if(j, "seed", cfg.seed);
        read_if(j, "output", cfg.output);
        read_if(j, "system", cfg.system);
        read_if(j, "n_missing", cfg.n_missing);
        read_if(j, "t_end", cfg.t_end);
        read_if(j, "dt", cfg.dt);
        read_if(j, "basis_sparsity", cfg.basis_sparsity);
        read_if(j, "code_threshold", cfg.code_threshold);
        read_if(j, "basis_max_iter", cfg.basis_max_iter);
        read_if(j, "n_noise", cfg.n_noise);
        read_if(j, "data_dir", cfg.data_dir);
        read_if(j, "library_degree", cfg.library_degree);
        read_if(j, "differentiation", cfg.differentiation);
        read_if(j, "trim_endpoints", cfg.trim_endpoints);
        read_if(j, "standardize", cfg.standardize);
        if (j.contains("normalize_target") && !j.at("normalize_target").is_null()) {
            cfg.normalize_target = j.at("normalize_target").get<bool>();
        }
        if (j.contains("screening")) {
            const auto& s = j.at("screening");
            for (const auto& [key, value] : s.items()) {
                if (std::find(kScreeningKeys.begin(), kScreeningKeys.end(), key) == kScreeningKeys.end()) {
                    throw Error(ErrorKind::Config, "unknown screening key '" + key + "'");
                }
            }
            read_if(s, "differentiation", cfg.screening_differentiation);
            read_if(s, "alpha", cfg.screening.alpha);
            read_if(s, "n_permutations", cfg.screening.n_permutations);
            read_if(s, "degree", cfg.screening_degree);
            read_if(s, "per_target", cfg.screening.per_target);
            read_if(s, "admit_self", cfg.screening.admit_self);
            read_if(s, "max_rows", cfg.screening.max_rows);
            read_if(s, "stop_after", cfg.screening.stop_after);
            if (s.contains("correction")) cfg.screening.correction = parse_correction(s.at("correction").get<std::string>());
        }
        return cfg;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, std::string("malformed experiment config: ") + e.what());
    }
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = to_string(cfg.experiment);
    j["noise_mode"] = to_string(cfg.noise_mode);
    j["lambdas"] = cfg.lambdas;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["output"] = cfg.output;
    if (cfg.experiment == ExperimentKind::DualUncertainty) {
        j["system"] = cfg.system;
        j["n_missing"] = cfg.n_missing;
        j["t_end"] = cfg.t_end;
        j["dt"] = cfg.dt;
        j["basis_sparsity"] = cfg.basis_sparsity;
        j["code_threshold"] = cfg.code_threshold;
        j["basis_max_iter"] = cfg.basis_max_iter;
    } else {
        j["data_dir"] = cfg.data_dir;
    }
    j["n_noise"] = cfg.n_noise;
    j["library_degree"] = cfg.library_degree;
    j["differentiation"] = cfg.differentiation;
    j["trim_endpoints"] = cfg.trim_endpoints;
    j["standardize"] = cfg.standardize;
    j["normalize_target"] = cfg.normalize_target ? json(*cfg.normalize_target) : json(nullptr);
    j["screening"] = {{"alpha", cfg.screening.alpha},
                      {"n_permutations", cfg.screening.n_permutations},
                      {"degree", cfg.screening_degree},
                      {"correction", to_string(cfg.screening.correction)},
                      {"per_target", cfg.screening.per_target},
                      {"admit_self", cfg.screening.admit_self},
                      {"max_rows", cfg.screening.max_rows},
                      {"stop_after", cfg.screening.stop_after},
                      {"differentiation", cfg.screening_differentiation}};
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Config, "config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

namespace {

int system_degree(const std::string& name) { return name == "fitzhugh-nagumo" ? 3 : 2; }

}  // namespace

ExperimentConfig resolve(ExperimentConfig cfg) {
    if (cfg.trials < 1) throw Error(ErrorKind::Config, "trials must be at least 1");
    if (cfg.lambdas.empty()) cfg.lambdas = lambda_schedule(0.09, 0.9, 5);
    for (double l : cfg.lambdas)
        if (!(l > 0.0)) throw Error(ErrorKind::Config, "every lambda must be positive");
    if (cfg.n_noise < 0) throw Error(ErrorKind::Config, "n_noise must be non-negative");
    if (cfg.screening.n_permutations < 200) throw Error(ErrorKind::Config, "screening needs at least 200 permutations");
    if (cfg.screening.max_rows < 0 || cfg.screening.stop_after < 0) {
        throw Error(ErrorKind::Config, "screening max_rows and stop_after must be non-negative");
    }

    switch (cfg.experiment) {
        case ExperimentKind::LynxHare:
            if (cfg.library_degree == 0) cfg.library_degree = 1;
            if (cfg.differentiation.empty()) cfg.differentiation = "smooth:5";
            if (!cfg.normalize_target) cfg.normalize_target = false;
            break;
        case ExperimentKind::SardineAnchovy:
            if (cfg.library_degree == 0) cfg.library_degree = 2;
            if (cfg.differentiation.empty()) cfg.differentiation = "central";
            if (!cfg.normalize_target) cfg.normalize_target = false;
            break;
        case ExperimentKind::DualUncertainty: {
            if (cfg.system.empty()) throw Error(ErrorKind::Config, "dual-uncertainty needs a system");
            const OdeSystem sys = make_system(cfg.system);
            const auto support = sys.support_labels();
            std::vector<std::string> names = sys.state_names;
            const auto canonical = sys.canonical_terms(names);
            if (cfg.n_missing < 1 || cfg.n_missing >= static_cast<int>(canonical.size())) {
                throw Error(ErrorKind::Config, "n_missing must lie in [1, " + std::to_string(canonical.size()) + ")");
            }
            if (cfg.n_missing > static_cast<int>(support.size())) {
                throw Error(ErrorKind::Config, "cannot withhold " + std::to_string(cfg.n_missing) + " terms from a " +
                                                   std::to_string(support.size()) + "-term support");
            }
            if (cfg.t_end == 0.0) cfg.t_end = sys.default_t_end;
            if (cfg.dt == 0.0) cfg.dt = sys.default_dt;
            if (cfg.basis_sparsity == 0) cfg.basis_sparsity = cfg.n_missing;
            if (cfg.code_threshold == 0.0) cfg.code_threshold = 0.05;
            if (cfg.basis_max_iter == 0) cfg.basis_max_iter = 100;
            if (cfg.library_degree == 0) cfg.library_degree = system_degree(cfg.system);
            if (cfg.differentiation.empty()) cfg.differentiation = "central";
            if (cfg.screening_degree == 0) cfg.screening_degree = system_degree(cfg.system);
            if (!cfg.normalize_target) cfg.normalize_target = true;
            break;
        }
    }
    if (cfg.screening_degree == 0) cfg.screening_degree = 1;
    DiffMethod::parse(cfg.differentiation);
    DiffMethod::parse(cfg.screening_differentiation);
    return cfg;
}

std::filesystem::path resolve_data_dir(const ExperimentConfig& cfg) {
    if (!cfg.data_dir.empty()) return cfg.data_dir;
    if (const char* env = std::getenv("AUGSINDY_DATA_DIR"); env && *env) return env;
    return AUGSINDY_DEFAULT_DATA_DIR;
}

namespace {

struct Dataset {
    std::string file;
    std::vector<std::string> mirror_of;
    std::map<std::string, std::set<std::string>> parents;
};

Dataset dataset_for(ExperimentKind kind) {
    if (kind == ExperimentKind::LynxHare) {
        return {"lynx_hare.csv", {"l", "h"}, {{"h", {"h", "l"}}, {"l", {"h", "l"}}}};
    }
    if (kind == ExperimentKind::SardineAnchovy) {
        return {"sardine_anchovy.csv", {"a", "s"}, {{"a", {"a"}}, {"s", {"s"}}}};
    }
    throw Error(ErrorKind::Config, "experiment has no real-data fixture");
}

std::vector<std::string> noise_names(const std::string& prefix, int count, const std::vector<std::string>& taken) {
    std::vector<std::string> out;
    for (int k = 1; k <= count; ++k) {
        std::string name = prefix + std::to_string(k);
        if (std::find(taken.begin(), taken.end(), name) != taken.end()) {
            throw Error(ErrorKind::Collision, "noise variable name '" + name + "' is already used");
        }
        out.push_back(name);
    }
    return out;
}

// Half-width of the stencil whose boundary rows get one-sided estimates.
int stencil_half_width(const DiffMethod& m) { return m.kind == DiffMethod::Kind::Smooth ? m.window / 2 : 1; }

std::pair<TimeSeries, DerivativeMatrix> trimmed(const TimeSeries& ts, const DerivativeMatrix& d, int h) {
    const Eigen::Index keep = ts.samples() - 2 * h;
    if (h <= 0) return {ts, d};
    if (keep < 3) throw Error(ErrorKind::InsufficientData, "too few samples left after trimming the endpoints");
    TimeSeries out(ts.times().segment(h, keep), ts.values().middleRows(h, keep), ts.names());
    DerivativeMatrix dd{d.values.middleRows(h, keep), d.method};
    return {std::move(out), std::move(dd)};
}

}  // namespace

TimeSeries load_dataset(const ExperimentConfig& cfg) {
    const auto ds = dataset_for(cfg.experiment);
    const auto path = resolve_data_dir(cfg) / ds.file;
    if (!std::filesystem::exists(path)) throw Error(ErrorKind::Io, "dataset fixture missing: " + path.string());
    return load_csv(path);
}

VariableCell run_variable_cell(const ExperimentConfig& cfg, const TimeSeries& data, double lambda, std::uint64_t seed) {
    const auto ds = dataset_for(cfg.experiment);
    NoiseSpec spec;
    spec.mode = cfg.noise_mode;
    spec.count = cfg.n_noise;
    spec.seed = derive_seed({seed, 1});
    spec.names = noise_names("x", cfg.n_noise, data.names());
    if (spec.mode == NoiseMode::MatchedMoments) {
        for (int k = 0; k < cfg.n_noise; ++k) spec.mirror_of.push_back(ds.mirror_of[static_cast<std::size_t>(k) % ds.mirror_of.size()]);
    }
    TimeSeries ts = augment_with_noise(data, spec);
    if (cfg.standardize) ts = zscore(ts);
    const auto method = DiffMethod::parse(cfg.differentiation);
    DerivativeMatrix xdot = differentiate(ts, method);
    DerivativeMatrix screen_xdot = differentiate(ts, DiffMethod::parse(cfg.screening_differentiation));
    if (cfg.trim_endpoints) {
        const int h = stencil_half_width(method);
        screen_xdot = trimmed(ts, screen_xdot, h).second;
        std::tie(ts, xdot) = trimmed(ts, xdot, h);
    }

    const FunctionLibrary lib = build_polynomial_library(ts, cfg.library_degree);
    FitOptions opts;
    opts.normalize_target = cfg.normalize_target.value_or(false);

    VariableCell cell;
    cell.variables = ts.names();
    cell.plain = fit_sindy(ts, xdot, lib, lambda, opts);

    ScreeningConfig sc = cfg.screening;
    sc.degree = cfg.screening_degree;
    sc.seed = derive_seed({seed, 2});
    cell.mask = screen_variables(ts, screen_xdot, sc);
    cell.augmented = fit_augmented(ts, xdot, lib, lambda, cell.mask, opts);

    const auto truth = GroundTruthCausal::from_parents(ts.names(), ds.parents);
    cell.fpiv_plain = fpiv(cell.plain, truth, ts.names());
    cell.fpiv_augmented = fpiv(cell.augmented, truth, ts.names());
    return cell;
}

namespace {

std::string title_of(const ExperimentConfig& cfg, const std::string& pipeline) {
    std::string t = to_string(cfg.experiment);
    if (cfg.experiment == ExperimentKind::DualUncertainty) t += " " + cfg.system + " |N|=" + std::to_string(cfg.n_missing);
    else t += " " + to_string(cfg.noise_mode);
    return t + " " + pipeline;
}

ReportPair finish(const ExperimentConfig& cfg, const Eigen::MatrixXd& base, const Eigen::MatrixXd& aug, MetricKind metric) {
    ReportPair pair;
    pair.config = cfg;
    pair.baseline = aggregate(base, cfg.lambdas, metric);
    pair.baseline.title = title_of(cfg, "SINDy");
    pair.augmented = aggregate(aug, cfg.lambdas, metric);
    pair.augmented.title = title_of(cfg, "Augmented SINDy");
    return pair;
}

}  // namespace

ReportPair run_variable_uncertainty(const ExperimentConfig& input) {
    if (input.experiment == ExperimentKind::DualUncertainty) {
        throw Error(ErrorKind::Config, "run_variable_uncertainty needs a real-data experiment");
    }
    const ExperimentConfig cfg = resolve(input);
    const TimeSeries data = load_dataset(cfg);
    const auto T = static_cast<Eigen::Index>(cfg.trials), L = static_cast<Eigen::Index>(cfg.lambdas.size());
    Eigen::MatrixXd plain(T, L), aug(T, L);
    for (Eigen::Index t = 0; t < T; ++t) {
        for (Eigen::Index i = 0; i < L; ++i) {
            auto cell = run_variable_cell(cfg, data, cfg.lambdas[static_cast<std::size_t>(i)],
                                          cell_seed(cfg.seed, static_cast<int>(t), static_cast<int>(i)));
            plain(t, i) = cell.fpiv_plain;
            aug(t, i) = cell.fpiv_augmented;
        }
    }
    return finish(cfg, plain, aug, MetricKind::Fpiv);
}

DualCell run_dual_cell(const ExperimentConfig& cfg, double lambda, std::uint64_t seed) {
    const OdeSystem sys = make_system(cfg.system);
    SimConfig sim = default_config(sys);
    sim.t_end = cfg.t_end;
    sim.dt = cfg.dt;
    const TimeSeries states = integrate(sys, sim);

    NoiseSpec spec;
    spec.mode = NoiseMode::StandardNormal;
    spec.count = cfg.n_noise;
    spec.seed = derive_seed({seed, 1});
    spec.names = noise_names("z", cfg.n_noise, states.names());
    const TimeSeries ts = augment_with_noise(states, spec);
    const DerivativeMatrix xdot = differentiate(ts, DiffMethod::parse(cfg.differentiation));
    const DerivativeMatrix screen_xdot = differentiate(ts, DiffMethod::parse(cfg.screening_differentiation));

    // theta* = canonical library over the states, plus each noise variable as a linear term.
    auto terms = sys.canonical_terms(ts.names());
    for (int k = 0; k < cfg.n_noise; ++k) {
        std::vector<int> e(static_cast<std::size_t>(ts.variables()), 0);
        e[static_cast<std::size_t>(sys.dim + k)] = 1;
        terms.push_back(monomial_term(e, ts.names()));
    }
    const FunctionLibrary full = build_library(ts, terms);

    DualCell cell;
    cell.truth = true_model(sys, terms);
    const auto ranked = sys.support_by_magnitude();
    cell.withheld.assign(ranked.begin(), ranked.begin() + cfg.n_missing);

    const FunctionLibrary f_and_z = full.without(cell.withheld);
    const FunctionLibrary known = f_and_z.without(spec.names);

    FitOptions opts;
    opts.normalize_target = cfg.normalize_target.value_or(false);
    opts.targets = sys.state_names;
    cell.baseline = fit_sindy(ts, xdot, f_and_z, lambda, opts);

    DerivativeMatrix state_xdot{xdot.values.leftCols(sys.dim), xdot.method};
    LearnBasisConfig lb;
    lb.seed = derive_seed({seed, 3});
    lb.code_threshold = cfg.code_threshold;
    lb.max_iter = cfg.basis_max_iter;
    const LearnedBasis basis = learn_basis(state_xdot, known, cfg.n_missing, cfg.basis_sparsity, lb);
    const FunctionLibrary theta_hat_z = extend_library(f_and_z, basis.as_columns("N"));

    ScreeningConfig sc = cfg.screening;
    sc.degree = cfg.screening_degree;
    sc.seed = derive_seed({seed, 2});
    sc.targets = sys.state_names;
    const CausalMask mask = screen_variables(ts, screen_xdot, sc);
    cell.augmented = fit_augmented(ts, xdot, theta_hat_z, lambda, mask, opts);

    Eigen::MatrixXd withheld_cols(ts.samples(), cfg.n_missing);
    std::vector<std::string> atom_labels;
    for (int k = 0; k < cfg.n_missing; ++k) {
        withheld_cols.col(k) = full.matrix().col(full.find(cell.withheld[static_cast<std::size_t>(k)]));
        atom_labels.push_back("N" + std::to_string(k + 1));
    }
    cell.assignment = assign_atoms(match_atoms(basis, withheld_cols), atom_labels, cell.withheld);
    cell.fdes_baseline = fdes(cell.baseline, cell.truth);
    cell.fdes_augmented = fdes(cell.augmented, cell.truth, cell.assignment);
    return cell;
}

ReportPair run_dual_uncertainty(const ExperimentConfig& input) {
    if (input.experiment != ExperimentKind::DualUncertainty) {
        throw Error(ErrorKind::Config, "run_dual_uncertainty needs the dual-uncertainty experiment");
    }
    const ExperimentConfig cfg = resolve(input);
    const auto T = static_cast<Eigen::Index>(cfg.trials), L = static_cast<Eigen::Index>(cfg.lambdas.size());
    Eigen::MatrixXd base(T, L), aug(T, L);
    for (Eigen::Index t = 0; t < T; ++t) {
        for (Eigen::Index i = 0; i < L; ++i) {
            auto cell = run_dual_cell(cfg, cfg.lambdas[static_cast<std::size_t>(i)],
                                      cell_seed(cfg.seed, static_cast<int>(t), static_cast<int>(i)));
            base(t, i) = cell.fdes_baseline;
            aug(t, i) = cell.fdes_augmented;
        }
    }
    return finish(cfg, base, aug, MetricKind::Fdes);
}

ReportPair run_experiment(const ExperimentConfig& cfg) {
    return cfg.experiment == ExperimentKind::DualUncertainty ? run_dual_uncertainty(cfg) : run_variable_uncertainty(cfg);
}

std::string pair_to_csv(const ReportPair& pair) {
    return "pipeline,baseline\n" + report_to_csv(pair.baseline) + "pipeline,augmented\n" + report_to_csv(pair.augmented);
}

std::string pair_to_text(const ReportPair& pair) {
    return render_table(pair.baseline) + "\n" + render_table(pair.augmented);
}

std::map<std::string, MetricReport> reports_from_csv(const std::string& text) {
    std::map<std::string, MetricReport> out;
    std::istringstream in(text);
    std::string line, current, body;
    auto flush = [&] {
        if (!current.empty()) out[current] = report_from_csv(body);
        body.clear();
    };
    while (std::getline(in, line)) {
        if (line.rfind("pipeline,", 0) == 0) {
            flush();
            current = line.substr(9);
            continue;
        }
        body += line + "\n";
    }
    if (current.empty()) {
        out["report"] = report_from_csv(body);
        return out;
    }
    flush();
    return out;
}

json manifest(const ReportPair& pair) {
    json j;
    j["config"] = config_to_json(pair.config);
    json seeds = json::array();
    for (int t = 0; t < pair.config.trials; ++t) {
        json row = json::array();
        for (std::size_t i = 0; i < pair.config.lambdas.size(); ++i) {
            row.push_back(cell_seed(pair.config.seed, t, static_cast<int>(i)));
        }
        seeds.push_back(row);
    }
    j["cell_seeds"] = seeds;
    j["metric"] = to_string(pair.baseline.metric);
    j["baseline_mean"] = std::vector<double>(pair.baseline.mean.data(), pair.baseline.mean.data() + pair.baseline.mean.size());
    j["augmented_mean"] = std::vector<double>(pair.augmented.mean.data(), pair.augmented.mean.data() + pair.augmented.mean.size());
    return j;
}

void write_outputs(const ReportPair& pair, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + dir.string() + "': " + ec.message());
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "cannot write '" + (dir / name).string() + "'");
        out << body;
    };
    write("report.csv", pair_to_csv(pair));
    write("report.txt", pair_to_text(pair));
    write("manifest.json", manifest(pair).dump(2) + "\n");
}

}  // namespace augsindy
