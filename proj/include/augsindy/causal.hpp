#pragma once

#include "augsindy/causal_mask.hpp"
#include "augsindy/differentiate.hpp"
#include "augsindy/library.hpp"
#include "augsindy/stls.hpp"
#include "augsindy/timeseries.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace augsindy {

enum class Correction { None, BenjaminiHochberg, Holm };
Correction parse_correction(const std::string& text);
std::string to_string(Correction c);

struct ScreeningConfig {
    double alpha = 0.05;
    int n_permutations = 1000;
    std::uint64_t seed = 0;
    // Polynomial degree of the library the group F-tests are run against.
    int degree = 1;
    Correction correction = Correction::BenjaminiHochberg;
    // Correct within each target's candidates; otherwise across the whole mask.
    bool per_target = true;
    // A target's own variable stays admissible whatever its test says. The
    // test still runs: a target with no significant variable at all is
    // reported as undriven.
    bool admit_self = true;
    // Variables whose equations are screened; empty screens all of them.
    std::vector<std::string> targets;
    // Test on at most this many evenly spaced rows; 0 uses every row.
    int max_rows = 0;
    // Sequential stopping: end a test once this many permuted statistics
    // reach the observed one (p = h / draws). 0 always draws n_permutations.
    int stop_after = 0;
};

/// Result of one (target, candidate) permutation test.
struct GroupTest {
    double statistic = 0.0;  // relative residual-sum-of-squares drop
    double p_value = 1.0;
    int group_size = 0;
    int draws = 0;  // permutations actually evaluated
};

/// Permutation-calibrated test of whether the terms depending on
/// `candidate` reduce the residual of `y` regressed on `terms` evaluated
/// over `values`. The null refits with row-permuted copies of the
/// candidate column. With `stop_after` = h > 0 the test stops at the h-th
/// exceedance after b draws and reports p = h / b.
GroupTest permutation_group_test(const Eigen::MatrixXd& values, const std::vector<TermDescriptor>& terms,
                                 const Eigen::Ref<const Eigen::VectorXd>& y, int candidate, int n_permutations,
                                 std::uint64_t seed, int stop_after = 0);

// Benjamini-Hochberg step-up; returns which hypotheses are rejected.
std::vector<bool> benjamini_hochberg(const std::vector<double>& p_values, double alpha);
// Holm step-down family-wise control.
std::vector<bool> holm(const std::vector<double>& p_values, double alpha);

CausalMask screen_variables(const TimeSeries& ts, const DerivativeMatrix& xdot, const ScreeningConfig& config);

/// Per target: restrict the library to the admissible variables, then STLS.
/// Coefficients of masked-out terms are exactly zero, and undriven targets
/// get the zero equation.
SparseModel fit_augmented(const TimeSeries& ts, const DerivativeMatrix& xdot, const FunctionLibrary& lib,
                          double lambda, const CausalMask& mask, const FitOptions& opts = {});

}  // namespace augsindy
