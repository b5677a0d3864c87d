#pragma once

#include "augsindy/library.hpp"
#include "augsindy/stls.hpp"
#include "augsindy/timeseries.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace augsindy {

/// An autonomous ODE x' = f(x) together with its ground-truth sparse form
/// over a canonical candidate library.
struct OdeSystem {
    using Rhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
    using LibraryFactory = std::function<std::vector<TermDescriptor>(const std::vector<std::string>&)>;

    std::string name;
    std::map<std::string, double> params;
    int dim = 0;
    std::vector<std::string> state_names;
    Rhs rhs;
    // Per equation: term label -> coefficient.
    std::vector<std::map<std::string, double>> true_terms;
    // Canonical terms over a name list whose first `dim` entries are the states.
    LibraryFactory canonical_terms;

    Eigen::VectorXd default_x0;
    double default_t_end = 10.0;
    double default_dt = 1e-3;

    std::vector<std::string> support_labels() const;
    // True-support labels sorted by largest |coefficient| over equations, ties by label.
    std::vector<std::string> support_by_magnitude() const;
};

const std::vector<std::string>& system_names();

// Builds a named system with canonical parameters, overridden by `params`.
OdeSystem make_system(const std::string& name, const std::map<std::string, double>& params = {});

struct SimConfig {
    Eigen::VectorXd x0;
    double t_end = 10.0;
    double dt = 1e-3;
    std::string method = "rk4";
};

SimConfig default_config(const OdeSystem& system);

/// Fixed-step classical Runge-Kutta; floor(t_end/dt)+1 samples starting at t=0.
TimeSeries integrate(const OdeSystem& system, const SimConfig& cfg);

/// Ground-truth coefficients of `system` over `library_spec`.
SparseModel true_model(const OdeSystem& system, const std::vector<TermDescriptor>& library_spec);

}  // namespace augsindy
