#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace augsindy {

/// Sampled trajectory: m strictly increasing sample times, an m x n value
/// matrix and n unique variable names. Validated on construction and
/// immutable afterwards.
class TimeSeries {
public:
    TimeSeries(Eigen::VectorXd times, Eigen::MatrixXd values, std::vector<std::string> names);

    const Eigen::VectorXd& times() const noexcept { return times_; }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    Eigen::Index samples() const noexcept { return values_.rows(); }
    Eigen::Index variables() const noexcept { return values_.cols(); }

    // Column index of `name`, or nullopt.
    std::optional<Eigen::Index> index_of(const std::string& name) const;
    Eigen::VectorXd column(const std::string& name) const;

    TimeSeries select(const std::vector<std::string>& names) const;
    TimeSeries with_values(Eigen::MatrixXd values) const;

private:
    Eigen::VectorXd times_;
    Eigen::MatrixXd values_;
    std::vector<std::string> names_;
};

struct CsvSchema {
    std::string time_column;
    // Empty selects every non-time column in file order.
    std::vector<std::string> value_columns;
};

TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema);
// Schema defaults to: first column is time, the rest are variables.
TimeSeries load_csv(const std::filesystem::path& path);
void save_csv(const TimeSeries& ts, const std::filesystem::path& path,
              const std::string& time_column = "time");

enum class NoiseMode { MatchedMoments, StandardNormal };

struct NoiseSpec {
    NoiseMode mode = NoiseMode::StandardNormal;
    std::vector<std::string> mirror_of;  // matched-moments only
    int count = 0;
    std::uint64_t seed = 0;
    // Names for the synthetic columns; defaults to x1..x<count>.
    std::vector<std::string> names;
};

NoiseMode parse_noise_mode(const std::string& text);
std::string to_string(NoiseMode mode);

/// Appends `spec.count` i.i.d. Gaussian columns. Original columns are copied
/// bit-for-bit; matched-moments columns use the full-series sample mean and
/// standard deviation of their source column.
TimeSeries augment_with_noise(const TimeSeries& ts, const NoiseSpec& spec);

/// Centers each column and scales it to unit sample standard deviation.
/// Constant columns are centered only.
TimeSeries zscore(const TimeSeries& ts);

// Sample mean and (n-1) standard deviation of a column.
double sample_mean(const Eigen::Ref<const Eigen::VectorXd>& v);
double sample_std(const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace augsindy
