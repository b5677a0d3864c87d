#pragma once

#include "augsindy/differentiate.hpp"
#include "augsindy/library.hpp"
#include "augsindy/timeseries.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace augsindy {

/// Sparse coefficient matrix: column k is the equation of targets[k] over
/// `terms`. `scaled_xi` holds the same coefficients in the units the
/// threshold was applied in; every nonzero there has magnitude >= lambda.
struct SparseModel {
    Eigen::MatrixXd xi;
    Eigen::MatrixXd scaled_xi;
    std::vector<TermDescriptor> terms;
    std::vector<std::string> targets;
    double lambda = 0.0;
    std::vector<int> iterations;

    Eigen::Index target_index(const std::string& name) const;
    std::string render_equation(Eigen::Index k, int precision = 3) const;
    // One "d<target>/dt = ..." line per target.
    std::string render(int precision = 3) const;
};

// Support after each least-squares pass, for inspecting convergence.
struct StlsTrace {
    std::vector<std::vector<bool>> supports;
    int iterations = 0;
    bool converged = false;
};

/// Least squares on the active columns alternated with hard thresholding at
/// `lambda` until the support repeats or `max_iter` passes have run.
/// Rank-deficient active sets get the minimum-norm solution.
Eigen::VectorXd stls_solve(const Eigen::Ref<const Eigen::MatrixXd>& theta,
                           const Eigen::Ref<const Eigen::VectorXd>& xdot, double lambda,
                           int max_iter = 25, StlsTrace* trace = nullptr);
Eigen::VectorXd stls_solve(const FunctionLibrary& theta, const Eigen::Ref<const Eigen::VectorXd>& xdot,
                           double lambda, int max_iter = 25, StlsTrace* trace = nullptr);

// Minimum-norm least squares.
Eigen::VectorXd least_squares(const Eigen::Ref<const Eigen::MatrixXd>& a,
                              const Eigen::Ref<const Eigen::VectorXd>& b);

/// l1-regularized least squares, (1/2m)||y - A x||^2 + lambda ||x||_1, by
/// accelerated proximal gradient.
Eigen::VectorXd lasso_solve(const Eigen::Ref<const Eigen::MatrixXd>& theta,
                            const Eigen::Ref<const Eigen::VectorXd>& y, double lambda,
                            int max_iter = 20000, double tol = 1e-10);

enum class Solver { Stls, Lasso };
Solver parse_solver(const std::string& text);

struct FitOptions {
    int max_iter = 25;
    Solver solver = Solver::Stls;
    // Columns are scaled to unit root-mean-square before thresholding.
    bool normalize_columns = true;
    // Target is scaled to unit root-mean-square before thresholding.
    bool normalize_target = false;
    // Names of the equations to fit; empty fits every variable.
    std::vector<std::string> targets;
};

struct ColumnFit {
    Eigen::VectorXd coefficients;  // physical units
    Eigen::VectorXd scaled;        // thresholding units
    int iterations = 0;
};

// One regression column with the normalization in `opts` applied and undone.
ColumnFit fit_column(const Eigen::Ref<const Eigen::MatrixXd>& theta, const Eigen::Ref<const Eigen::VectorXd>& y,
                     double lambda, const FitOptions& opts);

SparseModel fit_sindy(const TimeSeries& ts, const DerivativeMatrix& xdot, const FunctionLibrary& lib,
                      double lambda, const FitOptions& opts = {});

}  // namespace augsindy
