#pragma once

#include "augsindy/differentiate.hpp"
#include "augsindy/library.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace augsindy {

struct LearnBasisConfig {
    int max_iter = 100;
    // Stop once an alternation lowers the objective by less than this fraction.
    double tol = 1e-6;
    std::uint64_t seed = 0;
    // Hard threshold on unit-scaled codes; the l0 penalty per active code is its square.
    double code_threshold = 0.05;
    // Standard deviation of the seeded perturbation added to initial atoms.
    double jitter = 1e-3;
    // Start from these atoms (m x p) instead of residual directions.
    std::optional<Eigen::MatrixXd> initial_atoms;
};

/// Learned data-space atoms completing a known library. Atoms have unit l2
/// norm; `codes` are expressed against the unit-norm known columns followed
/// by the atoms, for unit-norm targets.
struct LearnedBasis {
    Eigen::MatrixXd atoms;
    int p = 0;
    std::vector<double> objective_trace;
    std::uint64_t seed = 0;
    Eigen::MatrixXd codes;
    int iterations = 0;

    // Atoms as library columns labelled <prefix>1..<prefix>p.
    std::vector<LibraryColumn> as_columns(const std::string& prefix = "N") const;
};

/// Alternating minimization of
///   sum_t ||y_t - [F, N] c_t||^2 + code_threshold^2 * |support(c_t)|
/// over atoms N and codes c, with at most `sparsity` atoms per target. Codes
/// are chosen by thresholded least squares refined by single add/remove
/// moves; atoms by a rank-one update of their users' residuals.
LearnedBasis learn_basis(const DerivativeMatrix& xdot, const FunctionLibrary& known, int p, int sparsity,
                         const LearnBasisConfig& config = {});

struct AtomMatch {
    int atom = 0;
    int withheld = 0;
    double correlation = 0.0;  // |Pearson correlation|
};

double abs_correlation(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

// Greedy maximum-|correlation| one-to-one assignment of atoms to withheld columns.
std::vector<AtomMatch> match_atoms(const LearnedBasis& basis, const Eigen::MatrixXd& withheld);

}  // namespace augsindy
