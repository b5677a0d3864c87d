#include "augsindy/stls.hpp"

#include "augsindy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace augsindy {

Eigen::Index SparseModel::target_index(const std::string& name) const {
    auto it = std::find(targets.begin(), targets.end(), name);
    if (it == targets.end()) throw Error(ErrorKind::Alignment, "model has no equation for '" + name + "'");
    return static_cast<Eigen::Index>(it - targets.begin());
}

std::string SparseModel::render_equation(Eigen::Index k, int precision) const {
    std::string out;
    char buf[64];
    for (Eigen::Index j = 0; j < xi.rows(); ++j) {
        const double c = xi(j, k);
        if (c == 0.0) continue;
        std::snprintf(buf, sizeof(buf), "%.*f", precision, std::abs(c));
        if (out.empty()) {
            if (c < 0) out += '-';
        } else {
            out += c < 0 ? " - " : " + ";
        }
        out += buf;
        const auto& label = terms[static_cast<std::size_t>(j)].label;
        if (label != "1") out += label;
    }
    return out.empty() ? "0" : out;
}

std::string SparseModel::render(int precision) const {
    std::string out;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        out += "d" + targets[k] + "/dt = " + render_equation(static_cast<Eigen::Index>(k), precision) + "\n";
    }
    return out;
}

Eigen::VectorXd least_squares(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
    if (a.cols() == 0) return Eigen::VectorXd();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    return cod.solve(b);
}

namespace {

Eigen::VectorXd solve_on_support(const Eigen::Ref<const Eigen::MatrixXd>& theta,
                                 const Eigen::Ref<const Eigen::VectorXd>& y, const std::vector<bool>& support) {
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < support.size(); ++j)
        if (support[j]) cols.push_back(static_cast<Eigen::Index>(j));
    Eigen::VectorXd full = Eigen::VectorXd::Zero(theta.cols());
    if (cols.empty()) return full;
    Eigen::MatrixXd sub(theta.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = theta.col(cols[k]);
    const Eigen::VectorXd c = least_squares(sub, y);
    for (std::size_t k = 0; k < cols.size(); ++k) full(cols[k]) = c(static_cast<Eigen::Index>(k));
    return full;
}

}  // namespace

Eigen::VectorXd stls_solve(const Eigen::Ref<const Eigen::MatrixXd>& theta, const Eigen::Ref<const Eigen::VectorXd>& xdot,
                           double lambda, int max_iter, StlsTrace* trace) {
    if (theta.rows() != xdot.size()) {
        throw Error(ErrorKind::Shape, "library has " + std::to_string(theta.rows()) + " rows, target has " +
                                          std::to_string(xdot.size()));
    }
    if (theta.rows() == 0) throw Error(ErrorKind::InsufficientData, "cannot regress on zero samples");
    if (!(lambda >= 0.0)) throw Error(ErrorKind::Parameter, "lambda must be non-negative");
    if (max_iter < 1) throw Error(ErrorKind::Parameter, "max_iter must be >= 1");

    const auto L = static_cast<std::size_t>(theta.cols());
    std::vector<bool> support(L, true);
    Eigen::VectorXd xi = solve_on_support(theta, xdot, support);
    if (trace) {
        trace->supports.assign(1, support);
        trace->iterations = 1;
        trace->converged = false;
    }
    int passes = 1;
    bool converged = false;
    while (true) {
        std::vector<bool> next(L);
        for (std::size_t j = 0; j < L; ++j) next[j] = support[j] && std::abs(xi(static_cast<Eigen::Index>(j))) >= lambda;
        if (next == support) {
            converged = true;
            break;
        }
        if (passes >= max_iter) {
            // Out of passes: keep the fixed-point property by dropping what fell below lambda.
            for (std::size_t j = 0; j < L; ++j)
                if (!next[j]) xi(static_cast<Eigen::Index>(j)) = 0.0;
            break;
        }
        support = std::move(next);
        xi = solve_on_support(theta, xdot, support);
        ++passes;
        if (trace) trace->supports.push_back(support);
    }
    if (trace) {
        trace->iterations = passes;
        trace->converged = converged;
    }
    return xi;
}

Eigen::VectorXd stls_solve(const FunctionLibrary& theta, const Eigen::Ref<const Eigen::VectorXd>& xdot, double lambda,
                           int max_iter, StlsTrace* trace) {
    return stls_solve(theta.matrix(), xdot, lambda, max_iter, trace);
}

Eigen::VectorXd lasso_solve(const Eigen::Ref<const Eigen::MatrixXd>& theta, const Eigen::Ref<const Eigen::VectorXd>& y,
                            double lambda, int max_iter, double tol) {
    if (theta.rows() != y.size()) throw Error(ErrorKind::Shape, "library and target row counts differ");
    if (theta.rows() == 0) throw Error(ErrorKind::InsufficientData, "cannot regress on zero samples");
    if (!(lambda >= 0.0)) throw Error(ErrorKind::Parameter, "lambda must be non-negative");
    const double m = static_cast<double>(theta.rows());
    const Eigen::MatrixXd gram = theta.transpose() * theta / m;
    const Eigen::VectorXd corr = theta.transpose() * y / m;
    const double lipschitz = std::max(gram.selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff(), 1e-300);
    const double step = 1.0 / lipschitz;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(theta.cols());
    Eigen::VectorXd z = x;
    double t = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd grad = gram * z - corr;
        Eigen::VectorXd next = z - step * grad;
        const double thr = step * lambda;
        next = next.unaryExpr([thr](double v) { return v > thr ? v - thr : (v < -thr ? v + thr : 0.0); });
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = next + ((t - 1.0) / t_next) * (next - x);
        const double change = (next - x).lpNorm<Eigen::Infinity>();
        x = std::move(next);
        t = t_next;
        if (change < tol) break;
    }
    return x;
}

Solver parse_solver(const std::string& text) {
    if (text == "stls") return Solver::Stls;
    if (text == "lasso") return Solver::Lasso;
    throw Error(ErrorKind::Parameter, "unknown solver '" + text + "' (expected stls or lasso)");
}

ColumnFit fit_column(const Eigen::Ref<const Eigen::MatrixXd>& theta, const Eigen::Ref<const Eigen::VectorXd>& y,
                     double lambda, const FitOptions& opts) {
    if (theta.rows() != y.size()) throw Error(ErrorKind::Shape, "library and target row counts differ");
    if (theta.rows() == 0) throw Error(ErrorKind::InsufficientData, "cannot regress on zero samples");
    const double m = static_cast<double>(theta.rows());

    Eigen::VectorXd col_scale = Eigen::VectorXd::Ones(theta.cols());
    if (opts.normalize_columns) {
        for (Eigen::Index j = 0; j < theta.cols(); ++j) {
            const double rms = theta.col(j).norm() / std::sqrt(m);
            if (rms > 0.0) col_scale(j) = rms;
        }
    }
    double y_scale = 1.0;
    if (opts.normalize_target) {
        const double rms = y.norm() / std::sqrt(m);
        if (rms > 0.0) y_scale = rms;
    }
    const Eigen::MatrixXd a = theta * col_scale.cwiseInverse().asDiagonal();
    const Eigen::VectorXd b = y / y_scale;

    ColumnFit fit;
    if (opts.solver == Solver::Stls) {
        StlsTrace trace;
        fit.scaled = stls_solve(a, b, lambda, opts.max_iter, &trace);
        fit.iterations = trace.iterations;
    } else {
        fit.scaled = lasso_solve(a, b, lambda);
        fit.iterations = 0;
    }
    fit.coefficients = (fit.scaled.array() * y_scale / col_scale.array()).matrix();
    return fit;
}

SparseModel fit_sindy(const TimeSeries& ts, const DerivativeMatrix& xdot, const FunctionLibrary& lib, double lambda,
                      const FitOptions& opts) {
    if (xdot.values.rows() != ts.samples() || xdot.values.cols() != ts.variables()) {
        throw Error(ErrorKind::Shape, "derivative matrix does not match the series shape");
    }
    if (lib.samples() != ts.samples()) throw Error(ErrorKind::Shape, "library row count differs from series");
    if (ts.samples() == 0) throw Error(ErrorKind::InsufficientData, "cannot fit on zero samples");

    const std::vector<std::string> targets = opts.targets.empty() ? ts.names() : opts.targets;
    SparseModel model;
    model.terms = lib.terms();
    model.targets = targets;
    model.lambda = lambda;
    model.xi = Eigen::MatrixXd::Zero(lib.size(), static_cast<Eigen::Index>(targets.size()));
    model.scaled_xi = model.xi;
    for (std::size_t k = 0; k < targets.size(); ++k) {
        auto idx = ts.index_of(targets[k]);
        if (!idx) throw Error(ErrorKind::Alignment, "unknown target '" + targets[k] + "'");
        auto fit = fit_column(lib.matrix(), xdot.values.col(*idx), lambda, opts);
        model.xi.col(static_cast<Eigen::Index>(k)) = fit.coefficients;
        model.scaled_xi.col(static_cast<Eigen::Index>(k)) = fit.scaled;
        model.iterations.push_back(fit.iterations);
    }
    return model;
}

}  // namespace augsindy
