#pragma once

#include "augsindy/causal_mask.hpp"
#include "augsindy/timeseries.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace augsindy {

enum class TermKind { Constant, Monomial, Trig, Custom, LearnedAtom };
enum class TrigFunction { Sin, Cos };

const char* to_string(TermKind kind);

/// One candidate function. `variables` lists the source-variable indices the
/// term depends on (sorted); learned atoms and the constant depend on none.
struct TermDescriptor {
    using Evaluator = std::function<double(const Eigen::Ref<const Eigen::RowVectorXd>&)>;

    TermKind kind = TermKind::Constant;
    std::vector<int> exponents;  // Monomial: per-variable powers
    std::vector<int> variables;
    std::string label;
    TrigFunction trig = TrigFunction::Sin;  // Trig: applied to variables[0]
    Evaluator custom;                       // Custom only

    double evaluate_at(const Eigen::Ref<const Eigen::RowVectorXd>& state) const;
    Eigen::VectorXd evaluate(const Eigen::MatrixXd& values) const;
    bool depends_on(int variable) const;
};

TermDescriptor constant_term();
TermDescriptor monomial_term(std::vector<int> exponents, const std::vector<std::string>& names);
TermDescriptor trig_term(TrigFunction fn, int variable, const std::vector<std::string>& names);
TermDescriptor custom_term(std::string label, std::vector<int> variables, TermDescriptor::Evaluator fn);
TermDescriptor learned_atom_term(std::string label);

// Every monomial of total degree <= degree (constant included), ordered by
// degree then lexicographically in variable index.
std::vector<TermDescriptor> polynomial_terms(const std::vector<std::string>& names, int degree);

/// Evaluated candidate-function matrix: column j holds terms[j] on every row.
class FunctionLibrary {
public:
    FunctionLibrary(Eigen::MatrixXd matrix, std::vector<TermDescriptor> terms,
                    std::vector<std::string> source_names);

    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    const std::vector<TermDescriptor>& terms() const noexcept { return terms_; }
    const std::vector<std::string>& source_names() const noexcept { return source_names_; }
    Eigen::Index size() const noexcept { return matrix_.cols(); }
    Eigen::Index samples() const noexcept { return matrix_.rows(); }

    std::vector<std::string> labels() const;
    // Column index of a label, or -1.
    Eigen::Index find(const std::string& label) const;

    FunctionLibrary subset(const std::vector<Eigen::Index>& columns) const;
    // Drops the named terms; unknown labels are an alignment error.
    FunctionLibrary without(const std::vector<std::string>& labels) const;

private:
    Eigen::MatrixXd matrix_;
    std::vector<TermDescriptor> terms_;
    std::vector<std::string> source_names_;
};

FunctionLibrary build_library(const TimeSeries& ts, std::vector<TermDescriptor> terms);
FunctionLibrary build_polynomial_library(const TimeSeries& ts, int degree);

struct LibraryColumn {
    TermDescriptor term;
    Eigen::VectorXd values;
};

FunctionLibrary extend_library(const FunctionLibrary& lib, const std::vector<LibraryColumn>& extra);

// Indices of terms whose variables all lie in `admissible` (constant and
// learned atoms always qualify).
std::vector<Eigen::Index> admissible_terms(const FunctionLibrary& lib, const std::vector<bool>& admissible);
FunctionLibrary restrict_library(const FunctionLibrary& lib, const CausalMask& mask, int target);

}  // namespace augsindy
