#include "augsindy/library.hpp"

#include "augsindy/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace augsindy {

const char* to_string(TermKind kind) {
    switch (kind) {
        case TermKind::Constant: return "constant";
        case TermKind::Monomial: return "monomial";
        case TermKind::Trig: return "trig";
        case TermKind::Custom: return "custom";
        case TermKind::LearnedAtom: return "learned-atom";
    }
    return "unknown";
}

double TermDescriptor::evaluate_at(const Eigen::Ref<const Eigen::RowVectorXd>& state) const {
    switch (kind) {
        case TermKind::Constant:
            return 1.0;
        case TermKind::Monomial: {
            double v = 1.0;
            for (int j : variables) {
                const double x = state(j);
                for (int p = 0; p < exponents[static_cast<std::size_t>(j)]; ++p) v *= x;
            }
            return v;
        }
        case TermKind::Trig: {
            const double x = state(variables.front());
            return trig == TrigFunction::Sin ? std::sin(x) : std::cos(x);
        }
        case TermKind::Custom:
            return custom(state);
        case TermKind::LearnedAtom:
            break;
    }
    throw Error(ErrorKind::Spec, "learned atom '" + label + "' has no state-space evaluator");
}

Eigen::VectorXd TermDescriptor::evaluate(const Eigen::MatrixXd& values) const {
    for (int j : variables) {
        if (j < 0 || j >= values.cols()) {
            throw Error(ErrorKind::Shape, "term '" + label + "' references variable " + std::to_string(j) +
                                              " of a " + std::to_string(values.cols()) + "-variable series");
        }
    }
    Eigen::VectorXd out(values.rows());
    switch (kind) {
        case TermKind::Constant:
            out.setOnes();
            return out;
        case TermKind::Monomial:
            out.setOnes();
            for (int j : variables)
                for (int p = 0; p < exponents[static_cast<std::size_t>(j)]; ++p) out.array() *= values.col(j).array();
            return out;
        case TermKind::Trig:
            if (trig == TrigFunction::Sin) out = values.col(variables.front()).array().sin();
            else out = values.col(variables.front()).array().cos();
            return out;
        default:
            break;
    }
    for (Eigen::Index i = 0; i < values.rows(); ++i) out(i) = evaluate_at(values.row(i));
    return out;
}

bool TermDescriptor::depends_on(int variable) const {
    return std::find(variables.begin(), variables.end(), variable) != variables.end();
}

TermDescriptor constant_term() {
    TermDescriptor t;
    t.kind = TermKind::Constant;
    t.label = "1";
    return t;
}

TermDescriptor monomial_term(std::vector<int> exponents, const std::vector<std::string>& names) {
    if (exponents.size() != names.size()) {
        throw Error(ErrorKind::Shape, "monomial exponents and variable names differ in length");
    }
    TermDescriptor t;
    t.kind = TermKind::Monomial;
    std::string label;
    for (std::size_t j = 0; j < exponents.size(); ++j) {
        const int p = exponents[j];
        if (p < 0) throw Error(ErrorKind::Parameter, "negative monomial exponent");
        if (p == 0) continue;
        t.variables.push_back(static_cast<int>(j));
        if (!label.empty()) label += '*';
        label += names[j];
        if (p > 1) label += '^' + std::to_string(p);
    }
    if (t.variables.empty()) return constant_term();
    t.exponents = std::move(exponents);
    t.label = std::move(label);
    return t;
}

TermDescriptor trig_term(TrigFunction fn, int variable, const std::vector<std::string>& names) {
    if (variable < 0 || variable >= static_cast<int>(names.size())) {
        throw Error(ErrorKind::Parameter, "trig term variable out of range");
    }
    TermDescriptor t;
    t.kind = TermKind::Trig;
    t.trig = fn;
    t.variables = {variable};
    t.label = std::string(fn == TrigFunction::Sin ? "sin(" : "cos(") + names[static_cast<std::size_t>(variable)] + ")";
    return t;
}

TermDescriptor custom_term(std::string label, std::vector<int> variables, TermDescriptor::Evaluator fn) {
    TermDescriptor t;
    t.kind = TermKind::Custom;
    std::sort(variables.begin(), variables.end());
    t.variables = std::move(variables);
    t.label = std::move(label);
    t.custom = std::move(fn);
    return t;
}

TermDescriptor learned_atom_term(std::string label) {
    TermDescriptor t;
    t.kind = TermKind::LearnedAtom;
    t.label = std::move(label);
    return t;
}

std::vector<TermDescriptor> polynomial_terms(const std::vector<std::string>& names, int degree) {
    if (degree < 1) throw Error(ErrorKind::Parameter, "polynomial degree must be >= 1, got " + std::to_string(degree));
    const int n = static_cast<int>(names.size());
    std::vector<TermDescriptor> terms{constant_term()};
    // Non-decreasing index tuples of length d enumerate degree-d monomials.
    for (int d = 1; d <= degree; ++d) {
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        while (true) {
            std::vector<int> exps(static_cast<std::size_t>(n), 0);
            for (int i : idx) ++exps[static_cast<std::size_t>(i)];
            terms.push_back(monomial_term(std::move(exps), names));
            int pos = d - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - 1) --pos;
            if (pos < 0) break;
            const int next = idx[static_cast<std::size_t>(pos)] + 1;
            for (int k = pos; k < d; ++k) idx[static_cast<std::size_t>(k)] = next;
        }
    }
    return terms;
}

FunctionLibrary::FunctionLibrary(Eigen::MatrixXd matrix, std::vector<TermDescriptor> terms,
                                 std::vector<std::string> source_names)
    : matrix_(std::move(matrix)), terms_(std::move(terms)), source_names_(std::move(source_names)) {
    if (static_cast<Eigen::Index>(terms_.size()) != matrix_.cols()) {
        throw Error(ErrorKind::Shape, "library has " + std::to_string(matrix_.cols()) + " columns but " +
                                          std::to_string(terms_.size()) + " term descriptors");
    }
    std::set<std::string> seen;
    for (const auto& t : terms_) {
        if (!seen.insert(t.label).second) throw Error(ErrorKind::Collision, "duplicate term label '" + t.label + "'");
    }
}

std::vector<std::string> FunctionLibrary::labels() const {
    std::vector<std::string> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.label);
    return out;
}

Eigen::Index FunctionLibrary::find(const std::string& label) const {
    for (std::size_t j = 0; j < terms_.size(); ++j)
        if (terms_[j].label == label) return static_cast<Eigen::Index>(j);
    return -1;
}

FunctionLibrary FunctionLibrary::subset(const std::vector<Eigen::Index>& columns) const {
    Eigen::MatrixXd m(matrix_.rows(), static_cast<Eigen::Index>(columns.size()));
    std::vector<TermDescriptor> terms;
    terms.reserve(columns.size());
    for (std::size_t k = 0; k < columns.size(); ++k) {
        m.col(static_cast<Eigen::Index>(k)) = matrix_.col(columns[k]);
        terms.push_back(terms_[static_cast<std::size_t>(columns[k])]);
    }
    return FunctionLibrary(std::move(m), std::move(terms), source_names_);
}

FunctionLibrary FunctionLibrary::without(const std::vector<std::string>& labels) const {
    std::set<std::string> drop(labels.begin(), labels.end());
    for (const auto& l : drop)
        if (find(l) < 0) throw Error(ErrorKind::Alignment, "library has no term '" + l + "'");
    std::vector<Eigen::Index> keep;
    for (std::size_t j = 0; j < terms_.size(); ++j)
        if (!drop.count(terms_[j].label)) keep.push_back(static_cast<Eigen::Index>(j));
    return subset(keep);
}

FunctionLibrary build_library(const TimeSeries& ts, std::vector<TermDescriptor> terms) {
    Eigen::MatrixXd m(ts.samples(), static_cast<Eigen::Index>(terms.size()));
    for (std::size_t j = 0; j < terms.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = terms[j].evaluate(ts.values());
    if (!m.allFinite()) throw Error(ErrorKind::Data, "library evaluation produced non-finite values");
    return FunctionLibrary(std::move(m), std::move(terms), ts.names());
}

FunctionLibrary build_polynomial_library(const TimeSeries& ts, int degree) {
    return build_library(ts, polynomial_terms(ts.names(), degree));
}

FunctionLibrary extend_library(const FunctionLibrary& lib, const std::vector<LibraryColumn>& extra) {
    if (extra.empty()) return lib;
    const Eigen::Index m = lib.samples();
    Eigen::MatrixXd mat(m, lib.size() + static_cast<Eigen::Index>(extra.size()));
    mat.leftCols(lib.size()) = lib.matrix();
    auto terms = lib.terms();
    for (std::size_t k = 0; k < extra.size(); ++k) {
        if (extra[k].values.size() != m) {
            throw Error(ErrorKind::Shape, "extra column '" + extra[k].term.label + "' has " +
                                              std::to_string(extra[k].values.size()) + " rows, library has " +
                                              std::to_string(m));
        }
        auto term = extra[k].term;
        if (term.kind == TermKind::LearnedAtom) term.variables.clear();
        mat.col(lib.size() + static_cast<Eigen::Index>(k)) = extra[k].values;
        terms.push_back(std::move(term));
    }
    return FunctionLibrary(std::move(mat), std::move(terms), lib.source_names());
}

std::vector<Eigen::Index> admissible_terms(const FunctionLibrary& lib, const std::vector<bool>& admissible) {
    std::vector<Eigen::Index> keep;
    for (std::size_t j = 0; j < lib.terms().size(); ++j) {
        const auto& vars = lib.terms()[j].variables;
        bool ok = std::all_of(vars.begin(), vars.end(), [&](int v) {
            return v >= 0 && static_cast<std::size_t>(v) < admissible.size() && admissible[static_cast<std::size_t>(v)];
        });
        if (ok) keep.push_back(static_cast<Eigen::Index>(j));
    }
    return keep;
}

FunctionLibrary restrict_library(const FunctionLibrary& lib, const CausalMask& mask, int target) {
    const Eigen::Index row = mask.row_of(target);
    std::vector<bool> adm(static_cast<std::size_t>(mask.admissible.cols()));
    for (Eigen::Index j = 0; j < mask.admissible.cols(); ++j) adm[static_cast<std::size_t>(j)] = mask.admissible(row, j);
    return lib.subset(admissible_terms(lib, adm));
}

}  // namespace augsindy
