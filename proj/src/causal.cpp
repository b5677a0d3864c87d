#include "augsindy/causal.hpp"

#include "augsindy/errors.hpp"
#include "augsindy/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace augsindy {

CausalMask CausalMask::full(const std::vector<std::string>& names, std::vector<int> targets) {
    CausalMask mask;
    if (targets.empty()) {
        targets.resize(names.size());
        std::iota(targets.begin(), targets.end(), 0);
    }
    const auto rows = static_cast<Eigen::Index>(targets.size());
    const auto cols = static_cast<Eigen::Index>(names.size());
    mask.targets = std::move(targets);
    mask.variable_names = names;
    mask.admissible = BoolMatrix::Constant(rows, cols, true);
    mask.p_values = Eigen::MatrixXd::Constant(rows, cols, std::numeric_limits<double>::quiet_NaN());
    mask.driven.assign(static_cast<std::size_t>(rows), true);
    return mask;
}

Eigen::Index CausalMask::row_of(int target) const {
    auto it = std::find(targets.begin(), targets.end(), target);
    if (it == targets.end()) throw Error(ErrorKind::Alignment, "mask does not cover target " + std::to_string(target));
    return static_cast<Eigen::Index>(it - targets.begin());
}

std::vector<int> CausalMask::admissible_variables(int target) const {
    const Eigen::Index row = row_of(target);
    std::vector<int> out;
    for (Eigen::Index j = 0; j < admissible.cols(); ++j)
        if (admissible(row, j)) out.push_back(static_cast<int>(j));
    return out;
}

namespace {

Eigen::MatrixXd evaluate_terms(const Eigen::MatrixXd& values, const std::vector<const TermDescriptor*>& terms) {
    Eigen::MatrixXd out(values.rows(), static_cast<Eigen::Index>(terms.size()));
    for (std::size_t k = 0; k < terms.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = terms[k]->evaluate(values);
    return out;
}

// Orthonormal basis for the numerical column space of `a`.
Eigen::MatrixXd column_basis(const Eigen::MatrixXd& a) {
    if (a.cols() == 0) return Eigen::MatrixXd(a.rows(), 0);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    const Eigen::Index r = qr.rank();
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), r);
    return q;
}

// Squared norm of the projection of `e` onto the part of span(g) orthogonal to span(q_reduced).
double projected_drop(const Eigen::MatrixXd& q_reduced, const Eigen::MatrixXd& g, const Eigen::VectorXd& e) {
    Eigen::MatrixXd resid = g;
    if (q_reduced.cols() > 0) resid.noalias() -= q_reduced * (q_reduced.transpose() * g);
    // Columns already inside the reduced span carry no new information.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        const double scale = g.col(j).norm();
        if (scale > 0.0 && resid.col(j).norm() > 1e-9 * scale) keep.push_back(j);
    }
    if (keep.empty()) return 0.0;
    Eigen::MatrixXd kept(g.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) kept.col(static_cast<Eigen::Index>(k)) = resid.col(keep[k]);
    const Eigen::MatrixXd qg = column_basis(kept);
    return (qg.transpose() * e).squaredNorm();
}

}  // namespace

GroupTest permutation_group_test(const Eigen::MatrixXd& values, const std::vector<TermDescriptor>& terms,
                                 const Eigen::Ref<const Eigen::VectorXd>& y, int candidate, int n_permutations,
                                 std::uint64_t seed, int stop_after) {
    if (values.rows() != y.size()) throw Error(ErrorKind::Shape, "target and series row counts differ");
    if (candidate < 0 || candidate >= values.cols()) throw Error(ErrorKind::Parameter, "candidate variable out of range");

    std::vector<const TermDescriptor*> reduced_terms;
    std::vector<const TermDescriptor*> group_terms;
    for (const auto& t : terms) (t.depends_on(candidate) ? group_terms : reduced_terms).push_back(&t);

    GroupTest result;
    result.group_size = static_cast<int>(group_terms.size());
    if (group_terms.empty()) return result;

    const Eigen::MatrixXd q_reduced = column_basis(evaluate_terms(values, reduced_terms));
    Eigen::VectorXd e = y;
    if (q_reduced.cols() > 0) e.noalias() -= q_reduced * (q_reduced.transpose() * y);
    const double rss_reduced = e.squaredNorm();
    if (!(rss_reduced > 0.0)) return result;

    auto statistic = [&](const Eigen::MatrixXd& vals) {
        const double drop = std::min(projected_drop(q_reduced, evaluate_terms(vals, group_terms), e), rss_reduced);
        const double rss_full = rss_reduced - drop;
        return drop / std::max(rss_full, rss_reduced * 1e-15);
    };

    result.statistic = statistic(values);

    Rng rng(seed);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Eigen::MatrixXd permuted = values;
    int exceed = 0;
    for (int b = 0; b < n_permutations; ++b) {
        std::shuffle(order.begin(), order.end(), rng);
        for (Eigen::Index i = 0; i < values.rows(); ++i) permuted(i, candidate) = values(order[static_cast<std::size_t>(i)], candidate);
        ++result.draws;
        if (statistic(permuted) >= result.statistic) ++exceed;
        if (stop_after > 0 && exceed >= stop_after) {
            result.p_value = static_cast<double>(exceed) / static_cast<double>(result.draws);
            return result;
        }
    }
    result.p_value = (1.0 + exceed) / (1.0 + n_permutations);
    return result;
}

std::vector<bool> benjamini_hochberg(const std::vector<double>& p_values, double alpha) {
    const std::size_t n = p_values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p_values[a] < p_values[b]; });
    std::size_t cutoff = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (p_values[order[k]] <= alpha * static_cast<double>(k + 1) / static_cast<double>(n)) cutoff = k + 1;
    }
    std::vector<bool> reject(n, false);
    for (std::size_t k = 0; k < cutoff; ++k) reject[order[k]] = true;
    return reject;
}

std::vector<bool> holm(const std::vector<double>& p_values, double alpha) {
    const std::size_t n = p_values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return p_values[a] < p_values[b]; });
    std::vector<bool> reject(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        if (p_values[order[k]] > alpha / static_cast<double>(n - k)) break;
        reject[order[k]] = true;
    }
    return reject;
}

Correction parse_correction(const std::string& text) {
    if (text == "none") return Correction::None;
    if (text == "bh" || text == "fdr") return Correction::BenjaminiHochberg;
    if (text == "holm") return Correction::Holm;
    throw Error(ErrorKind::Config, "unknown multiple-testing correction '" + text + "'");
}

std::string to_string(Correction c) {
    switch (c) {
        case Correction::None: return "none";
        case Correction::BenjaminiHochberg: return "bh";
        case Correction::Holm: return "holm";
    }
    return "bh";
}

namespace {

std::vector<bool> apply_correction(const std::vector<double>& p, double alpha, Correction c) {
    if (c == Correction::BenjaminiHochberg) return benjamini_hochberg(p, alpha);
    if (c == Correction::Holm) return holm(p, alpha);
    std::vector<bool> reject(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) reject[k] = p[k] < alpha;
    return reject;
}

}  // namespace

CausalMask screen_variables(const TimeSeries& ts, const DerivativeMatrix& xdot, const ScreeningConfig& config) {
    if (config.n_permutations < 200) {
        throw Error(ErrorKind::Config, "screening needs at least 200 permutations, got " + std::to_string(config.n_permutations));
    }
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw Error(ErrorKind::Config, "alpha must lie in (0, 1)");
    if (xdot.values.rows() != ts.samples() || xdot.values.cols() != ts.variables()) {
        throw Error(ErrorKind::Shape, "derivative matrix does not match the series shape");
    }

    std::vector<int> targets;
    if (config.targets.empty()) {
        targets.resize(static_cast<std::size_t>(ts.variables()));
        std::iota(targets.begin(), targets.end(), 0);
    } else {
        for (const auto& name : config.targets) {
            auto idx = ts.index_of(name);
            if (!idx) throw Error(ErrorKind::Config, "unknown screening target '" + name + "'");
            targets.push_back(static_cast<int>(*idx));
        }
    }

    CausalMask mask = CausalMask::full(ts.names(), targets);
    mask.alpha = config.alpha;
    mask.n_permutations = config.n_permutations;
    mask.seed = config.seed;
    mask.admissible.setConstant(false);

    if (config.max_rows < 0) throw Error(ErrorKind::Config, "max_rows must be >= 0");
    if (config.stop_after < 0) throw Error(ErrorKind::Config, "stop_after must be >= 0");

    // Evenly spaced rows keep the test cost bounded on long series.
    const Eigen::Index m = ts.samples();
    const Eigen::Index stride =
        config.max_rows > 0 && m > config.max_rows ? (m + config.max_rows - 1) / config.max_rows : 1;
    const Eigen::Index rows = (m + stride - 1) / stride;
    Eigen::MatrixXd values(rows, ts.variables());
    Eigen::MatrixXd ydot(rows, xdot.values.cols());
    for (Eigen::Index i = 0; i < rows; ++i) {
        values.row(i) = ts.values().row(i * stride);
        ydot.row(i) = xdot.values.row(i * stride);
    }

    const auto terms = polynomial_terms(ts.names(), config.degree);
    const int n = static_cast<int>(ts.variables());
    for (std::size_t r = 0; r < targets.size(); ++r) {
        const int t = targets[r];
        for (int j = 0; j < n; ++j) {
            const auto seed = derive_seed({config.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(j)});
            auto test =
                permutation_group_test(values, terms, ydot.col(t), j, config.n_permutations, seed, config.stop_after);
            mask.p_values(static_cast<Eigen::Index>(r), j) = test.p_value;
        }
    }

    // Decide each family of hypotheses: one row, or the whole mask at once.
    BoolMatrix reject = BoolMatrix::Constant(mask.p_values.rows(), mask.p_values.cols(), false);
    if (config.per_target) {
        for (Eigen::Index r = 0; r < reject.rows(); ++r) {
            std::vector<double> p;
            for (Eigen::Index j = 0; j < reject.cols(); ++j) p.push_back(mask.p_values(r, j));
            auto dec = apply_correction(p, config.alpha, config.correction);
            for (Eigen::Index j = 0; j < reject.cols(); ++j) reject(r, j) = dec[static_cast<std::size_t>(j)];
        }
    } else {
        std::vector<double> p;
        for (Eigen::Index r = 0; r < reject.rows(); ++r)
            for (Eigen::Index j = 0; j < reject.cols(); ++j) p.push_back(mask.p_values(r, j));
        auto dec = apply_correction(p, config.alpha, config.correction);
        std::size_t k = 0;
        for (Eigen::Index r = 0; r < reject.rows(); ++r)
            for (Eigen::Index j = 0; j < reject.cols(); ++j) reject(r, j) = dec[k++];
    }

    for (std::size_t r = 0; r < targets.size(); ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        mask.admissible.row(row) = reject.row(row);
        if (config.admit_self) mask.admissible(row, targets[r]) = true;
        mask.driven[r] = reject.row(row).any();
    }
    return mask;
}

SparseModel fit_augmented(const TimeSeries& ts, const DerivativeMatrix& xdot, const FunctionLibrary& lib, double lambda,
                          const CausalMask& mask, const FitOptions& opts) {
    if (xdot.values.rows() != ts.samples() || xdot.values.cols() != ts.variables()) {
        throw Error(ErrorKind::Shape, "derivative matrix does not match the series shape");
    }
    if (lib.samples() != ts.samples()) throw Error(ErrorKind::Shape, "library row count differs from series");
    if (mask.admissible.cols() != ts.variables()) throw Error(ErrorKind::Shape, "mask width differs from variable count");

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
        const int t = static_cast<int>(*idx);
        const Eigen::Index row = mask.row_of(t);
        const bool driven = mask.driven.empty() || mask.driven[static_cast<std::size_t>(row)];
        if (!driven || !mask.admissible.row(row).any()) {
            model.iterations.push_back(0);
            continue;
        }
        std::vector<bool> adm(static_cast<std::size_t>(mask.admissible.cols()));
        for (Eigen::Index j = 0; j < mask.admissible.cols(); ++j) adm[static_cast<std::size_t>(j)] = mask.admissible(row, j);
        const auto cols = admissible_terms(lib, adm);
        Eigen::MatrixXd sub(lib.samples(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = lib.matrix().col(cols[c]);
        auto fit = fit_column(sub, xdot.values.col(t), lambda, opts);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            model.xi(cols[c], static_cast<Eigen::Index>(k)) = fit.coefficients(static_cast<Eigen::Index>(c));
            model.scaled_xi(cols[c], static_cast<Eigen::Index>(k)) = fit.scaled(static_cast<Eigen::Index>(c));
        }
        model.iterations.push_back(fit.iterations);
    }
    return model;
}

}  // namespace augsindy
