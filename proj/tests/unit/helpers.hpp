#pragma once

#include "augsindy/errors.hpp"
#include "augsindy/timeseries.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testing {

// Runs `fn` and checks that it throws an augsindy::Error of `kind`.
template <typename Fn>
void expect_error(augsindy::ErrorKind kind, Fn&& fn) {
    bool thrown = false;
    try {
        fn();
    } catch (const augsindy::Error& e) {
        thrown = true;
        CHECK_MESSAGE(e.kind() == kind, "got: " << e.what());
    }
    CHECK_MESSAGE(thrown, "expected an error of kind " << augsindy::to_string(kind));
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("augsindy_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    return path;
}

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = n(rng);
    return out;
}

// Uniform grid 0, dt, 2dt, ... with one column per function of t.
template <typename... Fns>
augsindy::TimeSeries grid_series(Eigen::Index m, double dt, std::vector<std::string> names, Fns... fns) {
    Eigen::VectorXd t(m);
    Eigen::MatrixXd v(m, static_cast<Eigen::Index>(sizeof...(fns)));
    for (Eigen::Index i = 0; i < m; ++i) {
        t(i) = static_cast<double>(i) * dt;
        Eigen::Index j = 0;
        ((v(i, j++) = fns(t(i))), ...);
    }
    return augsindy::TimeSeries(t, v, std::move(names));
}

}  // namespace testing
