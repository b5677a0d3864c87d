#include "augsindy/simulate.hpp"

#include "augsindy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace augsindy {

std::vector<std::string> OdeSystem::support_labels() const {
    std::set<std::string> labels;
    for (const auto& eq : true_terms)
        for (const auto& [label, coef] : eq)
            if (coef != 0.0) labels.insert(label);
    return {labels.begin(), labels.end()};
}

std::vector<std::string> OdeSystem::support_by_magnitude() const {
    std::map<std::string, double> biggest;
    for (const auto& eq : true_terms)
        for (const auto& [label, coef] : eq)
            if (coef != 0.0) biggest[label] = std::max(biggest[label], std::abs(coef));
    std::vector<std::pair<std::string, double>> items(biggest.begin(), biggest.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    for (const auto& [label, mag] : items) out.push_back(label);
    return out;
}

const std::vector<std::string>& system_names() {
    static const std::vector<std::string> names{"lorenz", "mrw", "fitzhugh-nagumo", "pendulum", "sir"};
    return names;
}

namespace {

double param(const std::map<std::string, double>& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw Error(ErrorKind::Parameter, "missing system parameter '" + key + "'");
    return it->second;
}

std::map<std::string, double> merged(std::map<std::string, double> defaults, const std::map<std::string, double>& overrides) {
    for (const auto& [k, v] : overrides) {
        if (!defaults.count(k)) throw Error(ErrorKind::Parameter, "unknown system parameter '" + k + "'");
        defaults[k] = v;
    }
    return defaults;
}

std::vector<std::string> state_prefix(const std::vector<std::string>& names, int dim) {
    if (static_cast<int>(names.size()) < dim) throw Error(ErrorKind::Coverage, "name list shorter than system dimension");
    return names;
}

// Polynomial terms over the first `dim` names, padded with zero exponents
// for any trailing variables.
std::vector<TermDescriptor> padded_polynomial(const std::vector<std::string>& names, int dim, int degree) {
    std::vector<std::string> head(names.begin(), names.begin() + dim);
    auto terms = polynomial_terms(head, degree);
    for (auto& t : terms) {
        if (t.kind == TermKind::Monomial) {
            t.exponents.resize(names.size(), 0);
        }
    }
    return terms;
}

OdeSystem lorenz(const std::map<std::string, double>& overrides) {
    OdeSystem s;
    s.name = "lorenz";
    s.params = merged({{"sigma", 10.0}, {"rho", 28.0}, {"beta", 8.0 / 3.0}}, overrides);
    const double sigma = param(s.params, "sigma"), rho = param(s.params, "rho"), beta = param(s.params, "beta");
    s.dim = 3;
    s.state_names = {"x", "y", "z"};
    s.rhs = [=](const Eigen::VectorXd& u) {
        Eigen::VectorXd d(3);
        d << sigma * (u(1) - u(0)), u(0) * (rho - u(2)) - u(1), u(0) * u(1) - beta * u(2);
        return d;
    };
    s.true_terms = {{{"x", -sigma}, {"y", sigma}}, {{"x", rho}, {"y", -1.0}, {"x*z", -1.0}}, {{"x*y", 1.0}, {"z", -beta}}};
    s.canonical_terms = [](const std::vector<std::string>& names) { return padded_polynomial(state_prefix(names, 3), 3, 2); };
    s.default_x0 = Eigen::Vector3d(-8.0, 7.0, 27.0);
    s.default_t_end = 10.0;
    s.default_dt = 0.0025;
    return s;
}

// Mankiw-Romer-Weil: physical (k) and human (h) capital per effective worker.
OdeSystem mrw(const std::map<std::string, double>& overrides) {
    OdeSystem s;
    s.name = "mrw";
    s.params = merged({{"s_k", 0.3}, {"s_h", 0.2}, {"depreciation", 0.1}, {"alpha", 1.0 / 3.0}, {"beta", 1.0 / 3.0}}, overrides);
    const double sk = param(s.params, "s_k"), sh = param(s.params, "s_h"), dep = param(s.params, "depreciation");
    const double alpha = param(s.params, "alpha"), beta = param(s.params, "beta");
    s.dim = 2;
    s.state_names = {"k", "h"};
    auto output = [=](double k, double h) { return std::pow(k, alpha) * std::pow(h, beta); };
    s.rhs = [=](const Eigen::VectorXd& u) {
        Eigen::VectorXd d(2);
        const double y = output(u(0), u(1));
        d << sk * y - dep * u(0), sh * y - dep * u(1);
        return d;
    };
    char buf[96];
    std::snprintf(buf, sizeof(buf), "k^%.4g*h^%.4g", alpha, beta);
    const std::string prod = buf;
    s.true_terms = {{{prod, sk}, {"k", -dep}}, {{prod, sh}, {"h", -dep}}};
    s.canonical_terms = [=](const std::vector<std::string>& names) {
        auto terms = padded_polynomial(state_prefix(names, 2), 2, 2);
        terms.push_back(custom_term(prod, {0, 1}, [=](const Eigen::Ref<const Eigen::RowVectorXd>& u) {
            return output(std::max(u(0), 0.0), std::max(u(1), 0.0));
        }));
        return terms;
    };
    s.default_x0 = Eigen::Vector2d(1.0, 5.0);
    s.default_t_end = 40.0;
    s.default_dt = 0.01;
    return s;
}

// Cubic-polynomial FitzHugh-Nagumo: v' = v(a - v)(v - 1) - w + I, w' = b v - c w.
OdeSystem fitzhugh_nagumo(const std::map<std::string, double>& overrides) {
    OdeSystem s;
    s.name = "fitzhugh-nagumo";
    s.params = merged({{"a", 0.2}, {"b", 0.1}, {"c", 0.1}, {"I", 0.35}}, overrides);
    const double a = param(s.params, "a"), b = param(s.params, "b"), c = param(s.params, "c"), I = param(s.params, "I");
    s.dim = 2;
    s.state_names = {"v", "w"};
    s.rhs = [=](const Eigen::VectorXd& u) {
        Eigen::VectorXd d(2);
        d << u(0) * (a - u(0)) * (u(0) - 1.0) - u(1) + I, b * u(0) - c * u(1);
        return d;
    };
    s.true_terms = {{{"1", I}, {"v", -a}, {"v^2", 1.0 + a}, {"v^3", -1.0}, {"w", -1.0}}, {{"v", b}, {"w", -c}}};
    s.canonical_terms = [](const std::vector<std::string>& names) { return padded_polynomial(state_prefix(names, 2), 2, 3); };
    s.default_x0 = Eigen::Vector2d(0.0, 0.0);
    s.default_t_end = 100.0;
    s.default_dt = 0.025;
    return s;
}

OdeSystem pendulum(const std::map<std::string, double>& overrides) {
    OdeSystem s;
    s.name = "pendulum";
    s.params = merged({{"g_over_l", 9.81}, {"damping", 0.0}}, overrides);
    const double gl = param(s.params, "g_over_l"), damping = param(s.params, "damping");
    s.dim = 2;
    s.state_names = {"theta", "omega"};
    s.rhs = [=](const Eigen::VectorXd& u) {
        Eigen::VectorXd d(2);
        d << u(1), -gl * std::sin(u(0)) - damping * u(1);
        return d;
    };
    s.true_terms = {{{"omega", 1.0}}, {{"sin(theta)", -gl}}};
    if (damping != 0.0) s.true_terms[1]["omega"] = -damping;
    s.canonical_terms = [](const std::vector<std::string>& names) {
        auto terms = padded_polynomial(state_prefix(names, 2), 2, 2);
        terms.push_back(trig_term(TrigFunction::Sin, 0, names));
        terms.push_back(trig_term(TrigFunction::Cos, 0, names));
        return terms;
    };
    s.default_x0 = Eigen::Vector2d(2.0, 0.0);
    s.default_t_end = 20.0;
    s.default_dt = 0.005;
    return s;
}

// S + I + R is conserved, so the canonical library spans S and I only;
// including R would make the library columns linearly dependent.
OdeSystem sir(const std::map<std::string, double>& overrides) {
    OdeSystem s;
    s.name = "sir";
    s.params = merged({{"beta", 0.3}, {"gamma", 0.1}}, overrides);
    const double beta = param(s.params, "beta"), gamma = param(s.params, "gamma");
    s.dim = 3;
    s.state_names = {"S", "I", "R"};
    s.rhs = [=](const Eigen::VectorXd& u) {
        Eigen::VectorXd d(3);
        const double infection = beta * u(0) * u(1);
        d << -infection, infection - gamma * u(1), gamma * u(1);
        return d;
    };
    s.true_terms = {{{"S*I", -beta}}, {{"S*I", beta}, {"I", -gamma}}, {{"I", gamma}}};
    s.canonical_terms = [](const std::vector<std::string>& names) { return padded_polynomial(state_prefix(names, 3), 2, 2); };
    s.default_x0 = Eigen::Vector3d(0.99, 0.01, 0.0);
    s.default_t_end = 100.0;
    s.default_dt = 0.025;
    return s;
}

}  // namespace

OdeSystem make_system(const std::string& name, const std::map<std::string, double>& params) {
    if (name == "lorenz") return lorenz(params);
    if (name == "mrw") return mrw(params);
    if (name == "fitzhugh-nagumo") return fitzhugh_nagumo(params);
    if (name == "pendulum") return pendulum(params);
    if (name == "sir") return sir(params);
    throw Error(ErrorKind::Config, "unknown system '" + name + "'");
}

SimConfig default_config(const OdeSystem& system) {
    return SimConfig{system.default_x0, system.default_t_end, system.default_dt, "rk4"};
}

TimeSeries integrate(const OdeSystem& system, const SimConfig& cfg) {
    if (cfg.method != "rk4") throw Error(ErrorKind::Config, "unsupported integrator '" + cfg.method + "'");
    if (!(cfg.dt > 0.0)) throw Error(ErrorKind::Config, "dt must be positive");
    if (!(cfg.t_end > cfg.dt)) throw Error(ErrorKind::Config, "t_end must exceed dt");
    if (cfg.x0.size() != system.dim) {
        throw Error(ErrorKind::Config, "initial state has " + std::to_string(cfg.x0.size()) + " entries, system '" +
                                           system.name + "' has dimension " + std::to_string(system.dim));
    }
    constexpr double overflow_guard = 1e12;
    const auto steps = static_cast<Eigen::Index>(std::floor(cfg.t_end / cfg.dt + 1e-9));
    const Eigen::Index m = steps + 1;
    Eigen::VectorXd times(m);
    Eigen::MatrixXd values(m, system.dim);
    Eigen::VectorXd x = cfg.x0;
    const double h = cfg.dt;
    times(0) = 0.0;
    values.row(0) = x.transpose();
    for (Eigen::Index i = 1; i < m; ++i) {
        const Eigen::VectorXd k1 = system.rhs(x);
        const Eigen::VectorXd k2 = system.rhs(x + 0.5 * h * k1);
        const Eigen::VectorXd k3 = system.rhs(x + 0.5 * h * k2);
        const Eigen::VectorXd k4 = system.rhs(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > overflow_guard) {
            throw Error(ErrorKind::BlowUp, "state of '" + system.name + "' left the overflow guard at step " + std::to_string(i));
        }
        times(i) = static_cast<double>(i) * h;
        values.row(i) = x.transpose();
    }
    return TimeSeries(std::move(times), std::move(values), system.state_names);
}

SparseModel true_model(const OdeSystem& system, const std::vector<TermDescriptor>& library_spec) {
    if (system.dim == 0 || library_spec.empty()) throw Error(ErrorKind::Coverage, "empty system or library");
    SparseModel model;
    model.terms = library_spec;
    model.targets = system.state_names;
    model.xi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(library_spec.size()), system.dim);
    for (int k = 0; k < system.dim; ++k) {
        for (const auto& [label, coef] : system.true_terms[static_cast<std::size_t>(k)]) {
            auto it = std::find_if(library_spec.begin(), library_spec.end(), [&](const auto& t) { return t.label == label; });
            if (it == library_spec.end()) {
                throw Error(ErrorKind::Coverage, "library does not span term '" + label + "' of " + system.name);
            }
            model.xi(it - library_spec.begin(), k) = coef;
        }
    }
    model.scaled_xi = model.xi;
    model.iterations.assign(static_cast<std::size_t>(system.dim), 0);
    return model;
}

}  // namespace augsindy
