#include "augsindy/timeseries.hpp"

#include "augsindy/errors.hpp"
#include "augsindy/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace augsindy {

namespace {

std::string trim(std::string_view s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string_view rest(line);
    while (true) {
        auto comma = rest.find(',');
        cells.push_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

TimeSeries::TimeSeries(Eigen::VectorXd times, Eigen::MatrixXd values, std::vector<std::string> names)
    : times_(std::move(times)), values_(std::move(values)), names_(std::move(names)) {
    if (times_.size() != values_.rows()) {
        throw Error(ErrorKind::Shape, "time vector has " + std::to_string(times_.size()) +
                                          " entries but value matrix has " +
                                          std::to_string(values_.rows()) + " rows");
    }
    if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
        throw Error(ErrorKind::Shape, "expected " + std::to_string(values_.cols()) +
                                          " variable names, got " + std::to_string(names_.size()));
    }
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw Error(ErrorKind::Data, "empty variable name");
        if (!seen.insert(n).second) throw Error(ErrorKind::Data, "duplicate variable name '" + n + "'");
    }
    for (Eigen::Index i = 0; i < times_.size(); ++i) {
        if (!std::isfinite(times_(i))) throw Error(ErrorKind::Data, "non-finite time at row " + std::to_string(i));
        if (i > 0 && !(times_(i) > times_(i - 1))) {
            throw Error(ErrorKind::Data, "times not strictly increasing at row " + std::to_string(i));
        }
    }
    if (!values_.allFinite()) throw Error(ErrorKind::Data, "value matrix contains NaN or Inf");
}

std::optional<Eigen::Index> TimeSeries::index_of(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<Eigen::Index>(it - names_.begin());
}

Eigen::VectorXd TimeSeries::column(const std::string& name) const {
    auto idx = index_of(name);
    if (!idx) throw Error(ErrorKind::Spec, "unknown variable '" + name + "'");
    return values_.col(*idx);
}

TimeSeries TimeSeries::select(const std::vector<std::string>& names) const {
    Eigen::MatrixXd out(samples(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = column(names[j]);
    return TimeSeries(times_, std::move(out), names);
}

TimeSeries TimeSeries::with_values(Eigen::MatrixXd values) const {
    return TimeSeries(times_, std::move(values), names_);
}

TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Schema, "'" + path.string() + "' has no header row");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
    const auto header = split_csv_line(line);

    auto find_col = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorKind::Schema, "missing column '" + name + "' in " + path.string());
        return static_cast<std::size_t>(it - header.begin());
    };

    const std::size_t time_idx = find_col(schema.time_column);
    std::vector<std::string> value_names = schema.value_columns;
    if (value_names.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (c != time_idx) value_names.push_back(header[c]);
    }
    if (value_names.empty()) throw Error(ErrorKind::Schema, "no value columns in " + path.string());
    std::vector<std::size_t> value_idx;
    for (const auto& n : value_names) value_idx.push_back(find_col(n));

    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorKind::Parse, "row " + std::to_string(line_no) + ": expected " +
                                              std::to_string(header.size()) + " cells, got " +
                                              std::to_string(cells.size()));
        }
        double t = 0.0;
        if (!parse_double(cells[time_idx], t)) {
            throw Error(ErrorKind::Parse, "row " + std::to_string(line_no) + ": non-numeric time '" +
                                              cells[time_idx] + "'");
        }
        std::vector<double> row;
        row.reserve(value_idx.size());
        for (std::size_t k = 0; k < value_idx.size(); ++k) {
            double v = 0.0;
            if (!parse_double(cells[value_idx[k]], v) || !std::isfinite(v)) {
                throw Error(ErrorKind::Parse, "row " + std::to_string(line_no) + ", column '" +
                                                  value_names[k] + "': non-numeric value '" +
                                                  cells[value_idx[k]] + "'");
            }
            row.push_back(v);
        }
        times.push_back(t);
        rows.push_back(std::move(row));
    }

    if (rows.size() < 2) {
        throw Error(ErrorKind::Data, path.string() + " has " + std::to_string(rows.size()) +
                                         " data rows; at least 2 are needed to differentiate");
    }

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });

    const auto m = static_cast<Eigen::Index>(rows.size());
    const auto n = static_cast<Eigen::Index>(value_idx.size());
    Eigen::VectorXd tv(m);
    Eigen::MatrixXd values(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto src = order[static_cast<std::size_t>(i)];
        tv(i) = times[src];
        if (i > 0 && tv(i) == tv(i - 1)) {
            throw Error(ErrorKind::Data, "duplicate timestamp " + std::to_string(tv(i)) + " in " + path.string());
        }
        for (Eigen::Index j = 0; j < n; ++j) values(i, j) = rows[src][static_cast<std::size_t>(j)];
    }
    return TimeSeries(std::move(tv), std::move(values), std::move(value_names));
}

TimeSeries load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Schema, "'" + path.string() + "' has no header row");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
    auto header = split_csv_line(line);
    return load_csv(path, CsvSchema{header.front(), {}});
}

void save_csv(const TimeSeries& ts, const std::filesystem::path& path, const std::string& time_column) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << time_column;
    for (const auto& n : ts.names()) out << ',' << n;
    out << '\n';
    char buf[64];
    auto put = [&](double v) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        out.write(buf, ptr - buf);
    };
    for (Eigen::Index i = 0; i < ts.samples(); ++i) {
        put(ts.times()(i));
        for (Eigen::Index j = 0; j < ts.variables(); ++j) {
            out << ',';
            put(ts.values()(i, j));
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

NoiseMode parse_noise_mode(const std::string& text) {
    if (text == "matched-moments") return NoiseMode::MatchedMoments;
    if (text == "standard-normal") return NoiseMode::StandardNormal;
    throw Error(ErrorKind::Spec, "unknown noise mode '" + text + "'");
}

std::string to_string(NoiseMode mode) {
    return mode == NoiseMode::MatchedMoments ? "matched-moments" : "standard-normal";
}

double sample_mean(const Eigen::Ref<const Eigen::VectorXd>& v) {
    return v.size() == 0 ? 0.0 : v.mean();
}

double sample_std(const Eigen::Ref<const Eigen::VectorXd>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = v.mean();
    return std::sqrt((v.array() - mu).square().sum() / static_cast<double>(v.size() - 1));
}

TimeSeries augment_with_noise(const TimeSeries& ts, const NoiseSpec& spec) {
    if (spec.count < 0) throw Error(ErrorKind::Spec, "noise count must be non-negative");
    if (spec.count == 0) return ts;
    if (spec.mode == NoiseMode::MatchedMoments &&
        static_cast<int>(spec.mirror_of.size()) != spec.count) {
        throw Error(ErrorKind::Spec, "matched-moments needs one mirror_of entry per synthetic variable");
    }
    if (!spec.names.empty() && static_cast<int>(spec.names.size()) != spec.count) {
        throw Error(ErrorKind::Spec, "names must have one entry per synthetic variable");
    }

    std::vector<double> means(static_cast<std::size_t>(spec.count), 0.0);
    std::vector<double> stds(static_cast<std::size_t>(spec.count), 1.0);
    if (spec.mode == NoiseMode::MatchedMoments) {
        for (int k = 0; k < spec.count; ++k) {
            const auto& src = spec.mirror_of[static_cast<std::size_t>(k)];
            auto idx = ts.index_of(src);
            if (!idx) throw Error(ErrorKind::Spec, "mirror_of names unknown variable '" + src + "'");
            means[static_cast<std::size_t>(k)] = sample_mean(ts.values().col(*idx));
            stds[static_cast<std::size_t>(k)] = sample_std(ts.values().col(*idx));
        }
    }

    const Eigen::Index m = ts.samples();
    const Eigen::Index n = ts.variables();
    Eigen::MatrixXd values(m, n + spec.count);
    values.leftCols(n) = ts.values();
    std::vector<std::string> names = ts.names();

    Rng rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < spec.count; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        for (Eigen::Index i = 0; i < m; ++i) values(i, n + k) = means[kk] + stds[kk] * normal(rng);
        names.push_back(spec.names.empty() ? "x" + std::to_string(k + 1) : spec.names[kk]);
    }
    return TimeSeries(ts.times(), std::move(values), std::move(names));
}

TimeSeries zscore(const TimeSeries& ts) {
    Eigen::MatrixXd values = ts.values();
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        const double mu = sample_mean(values.col(j));
        const double sd = sample_std(values.col(j));
        values.col(j).array() -= mu;
        if (sd > 0.0) values.col(j) /= sd;
    }
    return ts.with_values(std::move(values));
}

}  // namespace augsindy
