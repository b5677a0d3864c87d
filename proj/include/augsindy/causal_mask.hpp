#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace augsindy {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Per-target admissible predictor variables. Row r describes the equation
/// of variable targets[r]; column j is variable j of the source series.
struct CausalMask {
    std::vector<int> targets;
    std::vector<std::string> variable_names;
    BoolMatrix admissible;
    Eigen::MatrixXd p_values;  // NaN where no test was run
    // False for targets where no variable, the target's own included, showed
    // any association with the derivative; such equations are fitted as zero.
    std::vector<bool> driven;
    double alpha = 0.05;
    int n_permutations = 0;
    std::uint64_t seed = 0;

    // Every variable admissible for every listed target (all variables when empty).
    static CausalMask full(const std::vector<std::string>& names, std::vector<int> targets = {});

    // Row index for a target variable; throws when the target is not covered.
    Eigen::Index row_of(int target) const;
    bool admits(int target, int variable) const { return admissible(row_of(target), variable); }
    std::vector<int> admissible_variables(int target) const;
};

}  // namespace augsindy
