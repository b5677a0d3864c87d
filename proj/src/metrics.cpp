#include "augsindy/metrics.hpp"

#include "augsindy/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace augsindy {

Eigen::VectorXi select(const Eigen::Ref<const Eigen::VectorXd>& v) {
    return (v.array() != 0.0).cast<int>().matrix();
}

GroundTruthCausal GroundTruthCausal::from_parents(const std::vector<std::string>& variables,
                                                  const std::map<std::string, std::set<std::string>>& true_parents) {
    auto known = [&](const std::string& name) {
        return std::find(variables.begin(), variables.end(), name) != variables.end();
    };
    for (const auto& [target, parents] : true_parents) {
        if (!known(target)) throw Error(ErrorKind::Alignment, "ground truth names unknown target '" + target + "'");
        for (const auto& p : parents)
            if (!known(p)) throw Error(ErrorKind::Alignment, "ground truth names unknown parent '" + p + "'");
    }
    GroundTruthCausal truth;
    for (const auto& target : variables) {
        auto it = true_parents.find(target);
        std::set<std::string> incorrect;
        for (const auto& v : variables)
            if (it == true_parents.end() || !it->second.count(v)) incorrect.insert(v);
        truth.incorrect_sets[target] = std::move(incorrect);
    }
    return truth;
}

std::set<std::string> variables_in_equation(const SparseModel& model, Eigen::Index k,
                                            const std::vector<std::string>& variable_names) {
    std::set<std::string> out;
    for (Eigen::Index j = 0; j < model.xi.rows(); ++j) {
        if (model.xi(j, k) == 0.0) continue;
        for (int v : model.terms[static_cast<std::size_t>(j)].variables) {
            if (v < 0 || v >= static_cast<int>(variable_names.size())) {
                throw Error(ErrorKind::Alignment, "term references variable outside the name list");
            }
            out.insert(variable_names[static_cast<std::size_t>(v)]);
        }
    }
    return out;
}

double fpiv(const SparseModel& model, const GroundTruthCausal& truth, const std::vector<std::string>& variable_names) {
    std::size_t denominator = 0;
    for (const auto& [target, set] : truth.incorrect_sets) {
        for (const auto& v : set) {
            if (std::find(variable_names.begin(), variable_names.end(), v) == variable_names.end()) {
                throw Error(ErrorKind::Alignment, "ground truth names unknown variable '" + v + "'");
            }
        }
        denominator += set.size();
    }
    if (denominator == 0) throw Error(ErrorKind::UndefinedMetric, "FPIV is undefined when no variable is incorrect anywhere");
    std::size_t incorrect = 0;
    for (const auto& [target, set] : truth.incorrect_sets) {
        const Eigen::Index k = model.target_index(target);
        for (const auto& v : variables_in_equation(model, k, variable_names)) incorrect += set.count(v);
    }
    return static_cast<double>(incorrect) / static_cast<double>(denominator);
}

AtomAssignment assign_atoms(const std::vector<AtomMatch>& matches, const std::vector<std::string>& atom_labels,
                            const std::vector<std::string>& withheld_labels) {
    AtomAssignment out;
    for (const auto& m : matches) {
        if (m.atom < 0 || m.atom >= static_cast<int>(atom_labels.size()) || m.withheld < 0 ||
            m.withheld >= static_cast<int>(withheld_labels.size())) {
            throw Error(ErrorKind::Alignment, "atom match index out of range");
        }
        out[atom_labels[static_cast<std::size_t>(m.atom)]] = {withheld_labels[static_cast<std::size_t>(m.withheld)], m.correlation};
    }
    return out;
}

double fdes(const SparseModel& model, const SparseModel& truth, const AtomAssignment& atoms, const FdesOptions& opts) {
    const auto k = static_cast<Eigen::Index>(truth.targets.size());
    if (k == 0) throw Error(ErrorKind::UndefinedMetric, "ground truth has no equations");

    std::map<std::string, Eigen::Index> slot_of;
    for (std::size_t j = 0; j < truth.terms.size(); ++j) slot_of[truth.terms[j].label] = static_cast<Eigen::Index>(j);
    Eigen::Index slots = static_cast<Eigen::Index>(truth.terms.size());

    // Model column -> slot.
    std::vector<Eigen::Index> column_slot(model.terms.size());
    for (std::size_t j = 0; j < model.terms.size(); ++j) {
        const auto& term = model.terms[j];
        auto it = slot_of.find(term.label);
        if (it != slot_of.end()) {
            column_slot[j] = it->second;
            continue;
        }
        if (term.kind != TermKind::LearnedAtom) {
            throw Error(ErrorKind::Alignment, "model term '" + term.label + "' is not in the ground-truth dictionary");
        }
        auto match = atoms.find(term.label);
        if (match != atoms.end() && match->second.second >= opts.match_threshold) {
            auto target_slot = slot_of.find(match->second.first);
            if (target_slot == slot_of.end()) {
                throw Error(ErrorKind::Alignment, "atom matched to unknown term '" + match->second.first + "'");
            }
            column_slot[j] = target_slot->second;
        } else {
            column_slot[j] = slots++;
        }
    }

    double mismatches = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::Index mk = model.target_index(truth.targets[static_cast<std::size_t>(i)]);
        Eigen::VectorXi chosen = Eigen::VectorXi::Zero(slots);
        for (std::size_t j = 0; j < model.terms.size(); ++j)
            if (model.xi(static_cast<Eigen::Index>(j), mk) != 0.0) chosen(column_slot[j]) = 1;
        Eigen::VectorXi expected = Eigen::VectorXi::Zero(slots);
        expected.head(static_cast<Eigen::Index>(truth.terms.size())) = select(truth.xi.col(i));
        mismatches += static_cast<double>((chosen - expected).cwiseAbs().sum());
    }
    if (opts.literal) return mismatches / static_cast<double>(k);
    return 1.0 - mismatches / static_cast<double>(k * slots);
}

std::string to_string(MetricKind kind) { return kind == MetricKind::Fpiv ? "fpiv" : "fdes"; }

MetricKind parse_metric(const std::string& text) {
    if (text == "fpiv") return MetricKind::Fpiv;
    if (text == "fdes") return MetricKind::Fdes;
    throw Error(ErrorKind::Parse, "unknown metric '" + text + "'");
}

MetricReport aggregate(const Eigen::MatrixXd& values, const std::vector<double>& lambdas, MetricKind metric) {
    if (values.rows() == 0 || values.cols() == 0) throw Error(ErrorKind::Parameter, "cannot aggregate an empty grid");
    if (!lambdas.empty() && static_cast<Eigen::Index>(lambdas.size()) != values.cols()) {
        throw Error(ErrorKind::Shape, "lambda count differs from grid width");
    }
    MetricReport r;
    r.metric = metric;
    r.lambdas = lambdas;
    r.per_trial = values;
    r.mean = values.colwise().mean().transpose();
    r.std = Eigen::VectorXd::Zero(values.cols());
    if (values.rows() > 1) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            r.std(j) = std::sqrt((values.col(j).array() - r.mean(j)).square().sum() / static_cast<double>(values.rows() - 1));
        }
    }
    return r;
}

namespace {

std::string strip_leading_zero(std::string s) {
    if (s.rfind("0.", 0) == 0) s.erase(0, 1);
    else if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& text) {
    std::string t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw Error(ErrorKind::Parse, "not a number: '" + text + "'");
    return v;
}

std::string pad(const std::string& s, std::size_t width) {
    // Column width counts code points so "±" and "λ" align.
    std::size_t cps = 0;
    for (unsigned char c : s) cps += (c & 0xC0) != 0x80;
    return cps >= width ? s : s + std::string(width - cps, ' ');
}

constexpr std::size_t kFirstWidth = 10;
constexpr std::size_t kCellWidth = 16;

std::string format_lambda(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return strip_leading_zero(buf);
}

}  // namespace

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return strip_leading_zero(buf);
}

std::string render_table(const MetricReport& report) {
    const Eigen::Index cols = report.per_trial.cols();
    std::string out;
    if (!report.title.empty()) out += "# " + report.title + "\n";
    out += "# metric: " + to_string(report.metric) + "\n";
    out += pad("", kFirstWidth);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const double lam = report.lambdas.empty() ? static_cast<double>(j + 1) : report.lambdas[static_cast<std::size_t>(j)];
        out += "| " + pad("λ = " + format_lambda(lam), kCellWidth - 2);
    }
    out += "\n";
    for (Eigen::Index i = 0; i < report.per_trial.rows(); ++i) {
        out += pad("Trial " + std::to_string(i + 1), kFirstWidth);
        for (Eigen::Index j = 0; j < cols; ++j) out += "| " + pad(format_value(report.per_trial(i, j)), kCellWidth - 2);
        out += "\n";
    }
    out += pad("Average", kFirstWidth);
    for (Eigen::Index j = 0; j < cols; ++j) {
        out += "| " + pad(format_value(report.mean(j)) + " ± (" + format_value(report.std(j)) + ")", kCellWidth - 2);
    }
    out += "\n";
    return out;
}

MetricReport parse_table(const std::string& text) {
    MetricReport r;
    std::vector<std::vector<double>> rows;
    std::vector<double> means, stds;
    bool have_header = false;
    for (const auto& raw : split(text, '\n')) {
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.rfind("# metric:", 0) == 0) {
            r.metric = parse_metric(trim(line.substr(9)));
            continue;
        }
        if (line[0] == '#') {
            r.title = trim(line.substr(1));
            continue;
        }
        auto cells = split(line, '|');
        for (auto& c : cells) c = trim(c);
        const std::string head = cells.front();
        cells.erase(cells.begin());
        if (!have_header) {
            for (const auto& c : cells) {
                auto eq = c.find('=');
                if (eq == std::string::npos) throw Error(ErrorKind::Parse, "bad header cell '" + c + "'");
                r.lambdas.push_back(to_double(c.substr(eq + 1)));
            }
            have_header = true;
        } else if (head == "Average") {
            for (const auto& c : cells) {
                auto pm = c.find("±");
                if (pm == std::string::npos) throw Error(ErrorKind::Parse, "bad average cell '" + c + "'");
                means.push_back(to_double(c.substr(0, pm)));
                auto open = c.find('(', pm), close = c.find(')', pm);
                if (open == std::string::npos || close == std::string::npos) {
                    throw Error(ErrorKind::Parse, "bad average cell '" + c + "'");
                }
                stds.push_back(to_double(c.substr(open + 1, close - open - 1)));
            }
        } else {
            std::vector<double> row;
            for (const auto& c : cells) row.push_back(to_double(c));
            if (row.size() != r.lambdas.size()) throw Error(ErrorKind::Parse, "row width differs from header in '" + line + "'");
            rows.push_back(std::move(row));
        }
    }
    if (!have_header || rows.empty()) throw Error(ErrorKind::Parse, "table has no header or no trial rows");
    const auto n = static_cast<Eigen::Index>(r.lambdas.size());
    r.per_trial.resize(static_cast<Eigen::Index>(rows.size()), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (Eigen::Index j = 0; j < n; ++j) r.per_trial(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    if (static_cast<Eigen::Index>(means.size()) == n) {
        r.mean = Eigen::Map<Eigen::VectorXd>(means.data(), n);
        r.std = Eigen::Map<Eigen::VectorXd>(stds.data(), n);
    } else {
        auto agg = aggregate(r.per_trial, r.lambdas, r.metric);
        r.mean = agg.mean;
        r.std = agg.std;
    }
    return r;
}

std::string report_to_csv(const MetricReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "metric," << to_string(report.metric) << "\n";
    if (!report.title.empty()) out << "title," << report.title << "\n";
    out << "trial";
    for (Eigen::Index j = 0; j < report.per_trial.cols(); ++j) {
        out << ',' << (report.lambdas.empty() ? static_cast<double>(j + 1) : report.lambdas[static_cast<std::size_t>(j)]);
    }
    out << "\n";
    for (Eigen::Index i = 0; i < report.per_trial.rows(); ++i) {
        out << (i + 1);
        for (Eigen::Index j = 0; j < report.per_trial.cols(); ++j) out << ',' << report.per_trial(i, j);
        out << "\n";
    }
    out << "mean";
    for (Eigen::Index j = 0; j < report.mean.size(); ++j) out << ',' << report.mean(j);
    out << "\nstd";
    for (Eigen::Index j = 0; j < report.std.size(); ++j) out << ',' << report.std(j);
    out << "\n";
    return out.str();
}

MetricReport report_from_csv(const std::string& text) {
    MetricReport r;
    std::vector<std::vector<double>> rows;
    for (const auto& raw : split(text, '\n')) {
        const std::string line = trim(raw);
        if (line.empty()) continue;
        auto cells = split(line, ',');
        const std::string head = cells.front();
        if (head == "metric") {
            r.metric = parse_metric(trim(cells.at(1)));
        } else if (head == "title") {
            r.title = line.substr(6);
        } else if (head == "trial") {
            for (std::size_t j = 1; j < cells.size(); ++j) r.lambdas.push_back(to_double(cells[j]));
        } else if (head == "mean" || head == "std") {
            continue;
        } else {
            std::vector<double> row;
            for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(to_double(cells[j]));
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) throw Error(ErrorKind::Parse, "report has no trial rows");
    Eigen::MatrixXd grid(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size()) throw Error(ErrorKind::Parse, "ragged report rows");
        for (std::size_t j = 0; j < rows[i].size(); ++j) grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    auto out = aggregate(grid, r.lambdas, r.metric);
    out.title = r.title;
    return out;
}

}  // namespace augsindy
