#pragma once

#include "augsindy/dictlearn.hpp"
#include "augsindy/stls.hpp"

#include <Eigen/Dense>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace augsindy {

// Elementwise nonzero indicator.
Eigen::VectorXi select(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Variables whose appearance in each equation is an error, keyed by the
/// equation's target name.
struct GroundTruthCausal {
    std::map<std::string, std::set<std::string>> incorrect_sets;

    // Every variable outside `true_parents[target]` is incorrect; targets
    // missing from the map (noise variables) treat every variable as incorrect.
    static GroundTruthCausal from_parents(const std::vector<std::string>& variables,
                                          const std::map<std::string, std::set<std::string>>& true_parents);
};

// Variables with a nonzero coefficient on some term of equation k.
std::set<std::string> variables_in_equation(const SparseModel& model, Eigen::Index k,
                                            const std::vector<std::string>& variable_names);

/// Fraction of possible incorrect variables: incorrect appearances over the
/// total size of the incorrect sets, each variable counted once per equation.
double fpiv(const SparseModel& model, const GroundTruthCausal& truth, const std::vector<std::string>& variable_names);

struct FdesOptions {
    // Selected atoms count as the withheld term they match at or above this |corr|.
    double match_threshold = 0.8;
    // Unnormalized per-equation mismatch count instead of the fraction correct.
    bool literal = false;
};

/// Learned-atom label -> (withheld term label, |corr|).
using AtomAssignment = std::map<std::string, std::pair<std::string, double>>;

AtomAssignment assign_atoms(const std::vector<AtomMatch>& matches, const std::vector<std::string>& atom_labels,
                            const std::vector<std::string>& withheld_labels);

/// Fraction of dictionary-slot decisions matching the ground-truth support,
/// averaged over equations. Slots are the truth model's terms plus any
/// learned atom that does not stand in for a withheld term.
double fdes(const SparseModel& model, const SparseModel& truth, const AtomAssignment& atoms = {},
            const FdesOptions& opts = {});

enum class MetricKind { Fpiv, Fdes };
std::string to_string(MetricKind kind);
MetricKind parse_metric(const std::string& text);

/// Trial x lambda grid with per-lambda mean and sample standard deviation.
struct MetricReport {
    MetricKind metric = MetricKind::Fpiv;
    std::string title;
    std::vector<double> lambdas;
    Eigen::MatrixXd per_trial;  // trials x lambdas
    Eigen::VectorXd mean;
    Eigen::VectorXd std;
};

MetricReport aggregate(const Eigen::MatrixXd& values, const std::vector<double>& lambdas = {},
                       MetricKind metric = MetricKind::Fpiv);

// ".083" style: three decimals, leading zero dropped below one.
std::string format_value(double v);

/// Fixed-width table: one row per trial, one column per lambda, and an
/// "Average" footer of "mean ± (std)" cells.
std::string render_table(const MetricReport& report);
// Inverse of render_table at three-decimal precision.
MetricReport parse_table(const std::string& text);

std::string report_to_csv(const MetricReport& report);
MetricReport report_from_csv(const std::string& text);

}  // namespace augsindy
