#include "augsindy/dictlearn.hpp"

#include "augsindy/errors.hpp"
#include "augsindy/rng.hpp"
#include "augsindy/stls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace augsindy {

std::vector<LibraryColumn> LearnedBasis::as_columns(const std::string& prefix) const {
    std::vector<LibraryColumn> out;
    for (Eigen::Index q = 0; q < atoms.cols(); ++q) {
        out.push_back({learned_atom_term(prefix + std::to_string(q + 1)), atoms.col(q)});
    }
    return out;
}

namespace {

using Support = std::vector<Eigen::Index>;

Eigen::VectorXd unit(const Eigen::VectorXd& v) {
    const double n = v.norm();
    return n > 0.0 ? Eigen::VectorXd(v / n) : v;
}

class SparseCoder {
public:
    SparseCoder(const Eigen::MatrixXd& dict, Eigen::Index known, int sparsity, double threshold)
        : dict_(dict), known_(known), sparsity_(sparsity), threshold_(threshold), penalty_(threshold * threshold) {}

    Eigen::Index atoms_in(const Support& s) const {
        return std::count_if(s.begin(), s.end(), [&](Eigen::Index j) { return j >= known_; });
    }

    // Least-squares codes on a support (minimum norm), scattered to full length.
    Eigen::VectorXd refit(const Support& s, const Eigen::VectorXd& y) const {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(dict_.cols());
        if (s.empty()) return full;
        Eigen::MatrixXd sub(dict_.rows(), static_cast<Eigen::Index>(s.size()));
        for (std::size_t k = 0; k < s.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = dict_.col(s[k]);
        const Eigen::VectorXd c = least_squares(sub, y);
        for (std::size_t k = 0; k < s.size(); ++k) full(s[k]) = c(static_cast<Eigen::Index>(k));
        return full;
    }

    double objective(const Support& s, const Eigen::VectorXd& y, Eigen::VectorXd* codes = nullptr) const {
        Eigen::VectorXd c = refit(s, y);
        const double value = (y - dict_ * c).squaredNorm() + penalty_ * static_cast<double>(s.size());
        if (codes) *codes = std::move(c);
        return value;
    }

    // Best support found from thresholded least squares and the previous
    // support, refined by single add/remove moves on the penalized objective.
    Support code(const Eigen::VectorXd& y, const Support* previous) const {
        const Eigen::VectorXd stls = stls_solve(dict_, y, threshold_, 25);
        Support s;
        for (Eigen::Index j = 0; j < dict_.cols(); ++j)
            if (stls(j) != 0.0) s.push_back(j);
        if (atoms_in(s) > sparsity_) {
            // keep the largest atom codes
            Support atoms_sorted;
            for (auto j : s)
                if (j >= known_) atoms_sorted.push_back(j);
            std::sort(atoms_sorted.begin(), atoms_sorted.end(),
                      [&](auto a, auto b) { return std::abs(stls(a)) > std::abs(stls(b)); });
            atoms_sorted.resize(static_cast<std::size_t>(sparsity_));
            Support trimmed;
            for (auto j : s)
                if (j < known_ || std::find(atoms_sorted.begin(), atoms_sorted.end(), j) != atoms_sorted.end())
                    trimmed.push_back(j);
            s = std::move(trimmed);
        }
        double best = objective(s, y);
        if (previous) {
            const double prev = objective(*previous, y);
            if (prev <= best) {
                best = prev;
                s = *previous;
            }
        }
        for (int move = 0; move < 4 * dict_.cols(); ++move) {
            Support best_s;
            double best_move = best;
            for (Eigen::Index j = 0; j < dict_.cols(); ++j) {
                Support trial = s;
                auto it = std::find(trial.begin(), trial.end(), j);
                if (it != trial.end()) {
                    trial.erase(it);
                } else {
                    if (j >= known_ && atoms_in(s) >= sparsity_) continue;
                    trial.insert(std::upper_bound(trial.begin(), trial.end(), j), j);
                }
                const double v = objective(trial, y);
                if (v < best_move) {
                    best_move = v;
                    best_s = std::move(trial);
                }
            }
            if (!(best_move < best)) break;
            best = best_move;
            s = std::move(best_s);
        }
        return s;
    }

private:
    const Eigen::MatrixXd& dict_;
    Eigen::Index known_;
    int sparsity_;
    double threshold_;
    double penalty_;
};

// Top left singular vector of the columns of `e`.
Eigen::VectorXd leading_direction(const Eigen::MatrixXd& e, double* sigma = nullptr, Eigen::VectorXd* right = nullptr) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (sigma) *sigma = svd.singularValues()(0);
    if (right) *right = svd.matrixV().col(0);
    return svd.matrixU().col(0);
}

// Penalized sparse coding in Gram form: with G = D'D, b = D'y and yy = y'y the
// residual of a least-squares fit on support S is yy - b_S' G_SS^-1 b_S, so
// candidate atoms can be scored without touching the m-row data.
class GramCoder {
public:
    GramCoder(const Eigen::MatrixXd& g, Eigen::Index known, int sparsity, double penalty)
        : g_(g), known_(known), sparsity_(sparsity), penalty_(penalty) {}

    double value(const Support& s, const Eigen::VectorXd& b, double yy) const {
        if (s.empty()) return yy;
        const auto n = static_cast<Eigen::Index>(s.size());
        Eigen::MatrixXd gs(n, n);
        Eigen::VectorXd bs(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            bs(i) = b(s[static_cast<std::size_t>(i)]);
            for (Eigen::Index j = 0; j < n; ++j) gs(i, j) = g_(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
        }
        const Eigen::VectorXd c = gs.ldlt().solve(bs);
        return std::max(0.0, yy - bs.dot(c)) + penalty_ * static_cast<double>(n);
    }

    // Best-improvement add/remove moves from the empty support.
    double best(const Eigen::VectorXd& b, double yy) const {
        Support s;
        double current = value(s, b, yy);
        for (int move = 0; move < 4 * g_.cols(); ++move) {
            Support best_s;
            double best_v = current;
            const Eigen::Index atoms = std::count_if(s.begin(), s.end(), [&](Eigen::Index j) { return j >= known_; });
            for (Eigen::Index j = 0; j < g_.cols(); ++j) {
                Support trial = s;
                auto it = std::find(trial.begin(), trial.end(), j);
                if (it != trial.end()) {
                    trial.erase(it);
                } else {
                    if (j >= known_ && atoms >= sparsity_) continue;
                    trial.insert(std::upper_bound(trial.begin(), trial.end(), j), j);
                }
                const double v = value(trial, b, yy);
                if (v < best_v - 1e-15) {
                    best_v = v;
                    best_s = std::move(trial);
                }
            }
            if (best_s.empty() && !(best_v < current)) break;
            if (!(best_v < current)) break;
            current = best_v;
            s = std::move(best_s);
        }
        return current;
    }

private:
    const Eigen::MatrixXd& g_;
    Eigen::Index known_;
    int sparsity_;
    double penalty_;
};

// Every subset of {0..n-1} with at most `max_size` elements, smallest first.
std::vector<Support> small_subsets(Eigen::Index n, int max_size) {
    std::vector<Support> out{Support{}};
    std::size_t begin = 0;
    for (int size = 1; size <= max_size; ++size) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            const Eigen::Index start = out[i].empty() ? 0 : out[i].back() + 1;
            for (Eigen::Index j = start; j < n; ++j) {
                Support s = out[i];
                s.push_back(j);
                out.push_back(std::move(s));
            }
        }
        begin = end;
    }
    return out;
}

// Greedy atom-by-atom initialization. Candidates are the residuals of each
// target after least squares on a small nonempty subset of the current
// dictionary, the full dictionary included. The empty subset is skipped: a
// raw target as an atom codes that one equation with a single term and wins
// the count without explaining anything shared. The candidate with the
// lowest penalized objective wins.
Eigen::MatrixXd candidate_atoms(const Eigen::MatrixXd& y, const Eigen::MatrixXd& known, int p, int sparsity,
                                double penalty) {
    const Eigen::Index m = y.rows();
    const Eigen::Index k = y.cols();
    const Eigen::Index f = known.cols();
    const Eigen::MatrixXd yty = y.transpose() * y;

    Eigen::MatrixXd dict = known;
    Eigen::MatrixXd out(m, p);
    for (int q = 0; q < p; ++q) {
        const Eigen::Index n = dict.cols();
        const Eigen::MatrixXd g = dict.transpose() * dict;
        const Eigen::MatrixXd b = dict.transpose() * y;

        int max_size = 0;
        double count = 1.0, total = 1.0;
        while (max_size < 3 && max_size < n) {
            count *= static_cast<double>(n - max_size) / static_cast<double>(max_size + 1);
            if ((total + count) * static_cast<double>(k) > 4000.0) break;
            total += count;
            ++max_size;
        }
        std::vector<Support> subsets = small_subsets(n, max_size);
        Support all(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j) all[static_cast<std::size_t>(j)] = j;
        if (max_size < n) subsets.push_back(all);

        Eigen::MatrixXd ge(n + 1, n + 1);
        ge.topLeftCorner(n, n) = g;
        ge(n, n) = 1.0;
        GramCoder coder(ge, f, sparsity, penalty);

        double best = std::numeric_limits<double>::infinity();
        Eigen::Index best_t = -1;
        Support best_s;
        Eigen::VectorXd best_c;
        for (Eigen::Index t = 0; t < k; ++t) {
            for (const auto& s : subsets) {
                if (s.empty() && n > 0) continue;
                const auto ns = static_cast<Eigen::Index>(s.size());
                Eigen::VectorXd c(ns);
                Eigen::VectorXd gb(n);  // D'r
                Eigen::VectorXd ry(k);  // r'y
                double rr = yty(t, t);
                if (ns == 0) {
                    gb = b.col(t);
                    ry = yty.row(t).transpose();
                } else {
                    Eigen::MatrixXd gs(ns, ns);
                    Eigen::VectorXd bs(ns);
                    Eigen::MatrixXd gcols(n, ns);
                    Eigen::MatrixXd bsu(ns, k);
                    for (Eigen::Index i = 0; i < ns; ++i) {
                        const Eigen::Index si = s[static_cast<std::size_t>(i)];
                        bs(i) = b(si, t);
                        gcols.col(i) = g.col(si);
                        bsu.row(i) = b.row(si);
                        for (Eigen::Index j = 0; j < ns; ++j) gs(i, j) = g(si, s[static_cast<std::size_t>(j)]);
                    }
                    c = gs.completeOrthogonalDecomposition().solve(bs);
                    rr -= bs.dot(c);
                    gb = b.col(t) - gcols * c;
                    ry = yty.row(t).transpose() - bsu.transpose() * c;
                }
                if (!(rr > 1e-10 * yty(t, t))) continue;
                const double norm = std::sqrt(rr);
                ge.topRightCorner(n, 1) = gb / norm;
                ge.bottomLeftCorner(1, n) = (gb / norm).transpose();
                double total_value = 0.0;
                for (Eigen::Index u = 0; u < k && total_value < best; ++u) {
                    Eigen::VectorXd bu(n + 1);
                    bu.head(n) = b.col(u);
                    bu(n) = ry(u) / norm;
                    total_value += coder.best(bu, yty(u, u));
                }
                if (total_value < best) {
                    best = total_value;
                    best_t = t;
                    best_s = s;
                    best_c = c;
                }
            }
        }

        if (best_t < 0) return out.leftCols(q);  // targets already explained exactly
        Eigen::VectorXd atom = y.col(best_t);
        for (std::size_t i = 0; i < best_s.size(); ++i) atom -= best_c(static_cast<Eigen::Index>(i)) * dict.col(best_s[i]);
        atom = unit(atom);
        out.col(q) = atom;
        dict.conservativeResize(Eigen::NoChange, n + 1);
        dict.col(n) = atom;
    }
    return out;
}

}  // namespace

LearnedBasis learn_basis(const DerivativeMatrix& xdot, const FunctionLibrary& known, int p, int sparsity,
                         const LearnBasisConfig& config) {
    const Eigen::Index m = xdot.values.rows();
    if (known.samples() != m) throw Error(ErrorKind::Shape, "known library and derivative row counts differ");
    if (p < 1) throw Error(ErrorKind::Parameter, "atom count must be >= 1");
    if (sparsity < 1) throw Error(ErrorKind::Parameter, "sparsity must be >= 1");
    if (p >= m) throw Error(ErrorKind::Parameter, "atom count " + std::to_string(p) + " must be below sample count " + std::to_string(m));
    if (config.max_iter < 1) throw Error(ErrorKind::Parameter, "max_iter must be >= 1");

    const Eigen::Index k = xdot.values.cols();
    const Eigen::Index f = known.size();

    Eigen::MatrixXd y(m, k);
    for (Eigen::Index t = 0; t < k; ++t) y.col(t) = unit(xdot.values.col(t));
    Eigen::MatrixXd dict(m, f + p);
    for (Eigen::Index j = 0; j < f; ++j) dict.col(j) = unit(known.matrix().col(j));

    Rng rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto random_unit = [&]() {
        Eigen::VectorXd v(m);
        for (Eigen::Index i = 0; i < m; ++i) v(i) = normal(rng);
        return unit(v);
    };

    if (config.initial_atoms) {
        const auto& init = *config.initial_atoms;
        if (init.rows() != m || init.cols() != p) throw Error(ErrorKind::Shape, "initial atoms must be m x p");
        for (Eigen::Index q = 0; q < p; ++q) dict.col(f + q) = unit(init.col(q));
    } else {
        const Eigen::MatrixXd pool =
            candidate_atoms(y, dict.leftCols(f), p, sparsity, config.code_threshold * config.code_threshold);
        Eigen::MatrixXd resid = y;
        if (f > 0) {
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(dict.leftCols(f));
            resid -= dict.leftCols(f) * cod.solve(y);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid, Eigen::ComputeThinU);
        const auto& sv = svd.singularValues();
        for (Eigen::Index q = 0; q < p; ++q) {
            Eigen::VectorXd atom;
            const Eigen::Index r = q - pool.cols();
            if (q < pool.cols()) {
                atom = pool.col(q);
            } else if (r < sv.size() && sv(r) > 1e-12 * std::max(sv(0), 1e-300)) {
                atom = svd.matrixU().col(r);
            } else {
                atom = random_unit();
            }
            for (Eigen::Index i = 0; i < m; ++i) atom(i) += config.jitter * normal(rng) / std::sqrt(static_cast<double>(m));
            dict.col(f + q) = unit(atom);
        }
    }

    LearnedBasis basis;
    basis.p = p;
    basis.seed = config.seed;

    std::vector<Support> supports(static_cast<std::size_t>(k));
    Eigen::MatrixXd codes = Eigen::MatrixXd::Zero(f + p, k);

    auto total_objective = [&](const Eigen::MatrixXd& d, const Eigen::MatrixXd& c) {
        double v = (y - d * c).squaredNorm();
        for (const auto& s : supports) v += config.code_threshold * config.code_threshold * static_cast<double>(s.size());
        return v;
    };

    auto coding_step = [&](bool first) {
        SparseCoder coder(dict, f, sparsity, config.code_threshold);
        for (Eigen::Index t = 0; t < k; ++t) {
            auto& s = supports[static_cast<std::size_t>(t)];
            s = coder.code(y.col(t), first ? nullptr : &s);
            codes.col(t) = coder.refit(s, y.col(t));
        }
    };

    auto refit_codes = [&]() {
        SparseCoder coder(dict, f, sparsity, config.code_threshold);
        for (Eigen::Index t = 0; t < k; ++t) codes.col(t) = coder.refit(supports[static_cast<std::size_t>(t)], y.col(t));
    };

    coding_step(true);
    double current = total_objective(dict, codes);
    basis.objective_trace.push_back(current);

    int iter = 0;
    for (; iter < config.max_iter; ++iter) {
        if (iter > 0) {
            coding_step(false);
            current = std::min(current, total_objective(dict, codes));
        }
        const Eigen::MatrixXd dict_before = dict;
        const Eigen::MatrixXd codes_before = codes;

        for (Eigen::Index q = 0; q < p; ++q) {
            const Eigen::Index col = f + q;
            std::vector<Eigen::Index> users;
            for (Eigen::Index t = 0; t < k; ++t)
                if (codes(col, t) != 0.0) users.push_back(t);
            if (users.empty()) continue;
            Eigen::MatrixXd e(m, static_cast<Eigen::Index>(users.size()));
            for (std::size_t u = 0; u < users.size(); ++u) {
                const Eigen::Index t = users[u];
                e.col(static_cast<Eigen::Index>(u)) = y.col(t) - dict * codes.col(t) + dict.col(col) * codes(col, t);
            }
            if (e.norm() == 0.0) continue;
            double sigma = 0.0;
            Eigen::VectorXd right;
            const Eigen::VectorXd atom = leading_direction(e, &sigma, &right);
            dict.col(col) = atom;
            for (std::size_t u = 0; u < users.size(); ++u) codes(col, users[u]) = sigma * right(static_cast<Eigen::Index>(u));
        }
        refit_codes();
        double updated = total_objective(dict, codes);
        if (updated > current) {
            dict = dict_before;
            codes = codes_before;
            updated = current;
        }

        // Unused atoms carry no codes; point them at the largest remaining residual.
        const Eigen::MatrixXd resid = y - dict * codes;
        if (resid.norm() > 0.0) {
            for (Eigen::Index q = 0; q < p; ++q) {
                if (codes.row(f + q).isZero(0.0)) dict.col(f + q) = leading_direction(resid);
            }
        }

        const double previous = basis.objective_trace.back();
        basis.objective_trace.push_back(updated);
        current = updated;
        if (previous - updated <= config.tol * std::max(previous, std::numeric_limits<double>::min())) {
            ++iter;
            break;
        }
    }

    basis.atoms = dict.rightCols(p);
    basis.codes = codes;
    basis.iterations = iter;
    return basis;
}

double abs_correlation(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::Shape, "correlation of vectors with different lengths");
    const Eigen::VectorXd ca = a.array() - a.mean();
    const Eigen::VectorXd cb = b.array() - b.mean();
    const double denom = ca.norm() * cb.norm();
    if (!(denom > 0.0)) return 0.0;
    return std::min(1.0, std::abs(ca.dot(cb)) / denom);
}

std::vector<AtomMatch> match_atoms(const LearnedBasis& basis, const Eigen::MatrixXd& withheld) {
    if (withheld.cols() == 0) throw Error(ErrorKind::Parameter, "no withheld columns to match against");
    if (withheld.rows() != basis.atoms.rows()) throw Error(ErrorKind::Shape, "withheld columns and atoms differ in length");
    const Eigen::Index p = basis.atoms.cols();
    const Eigen::Index w = withheld.cols();
    Eigen::MatrixXd corr(p, w);
    for (Eigen::Index a = 0; a < p; ++a)
        for (Eigen::Index b = 0; b < w; ++b) corr(a, b) = abs_correlation(basis.atoms.col(a), withheld.col(b));

    std::vector<AtomMatch> out;
    std::vector<bool> atom_used(static_cast<std::size_t>(p)), col_used(static_cast<std::size_t>(w));
    for (Eigen::Index step = 0; step < std::min(p, w); ++step) {
        double best = -1.0;
        Eigen::Index ba = -1, bb = -1;
        for (Eigen::Index a = 0; a < p; ++a) {
            if (atom_used[static_cast<std::size_t>(a)]) continue;
            for (Eigen::Index b = 0; b < w; ++b) {
                if (col_used[static_cast<std::size_t>(b)]) continue;
                if (corr(a, b) > best) {
                    best = corr(a, b);
                    ba = a;
                    bb = b;
                }
            }
        }
        atom_used[static_cast<std::size_t>(ba)] = true;
        col_used[static_cast<std::size_t>(bb)] = true;
        out.push_back({static_cast<int>(ba), static_cast<int>(bb), best});
    }
    return out;
}

}  // namespace augsindy
