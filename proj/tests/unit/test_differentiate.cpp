#include "augsindy/differentiate.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace augsindy;
using testing::expect_error;
using testing::grid_series;

TEST_SUITE("differentiate") {

TEST_CASE("central differences are exact on lines and quadratics") {
    const auto lin = finite_diff(grid_series(20, 0.1, {"x"}, [](double t) { return 3 * t; }));
    CHECK((lin.values.array() - 3.0).abs().maxCoeff() < 1e-12);

    const auto ts = grid_series(20, 0.1, {"x"}, [](double t) { return t * t; });
    const auto quad = finite_diff(ts);
    for (Eigen::Index i = 1; i + 1 < 20; ++i) CHECK(std::abs(quad.values(i, 0) - 2 * ts.times()(i)) < 1e-10);
}

TEST_CASE("central differences on sin t") {
    const auto ts = grid_series(5000, 1e-3, {"x"}, [](double t) { return std::sin(t); });
    const auto d = finite_diff(ts);
    double err = 0.0;
    for (Eigen::Index i = 1; i + 1 < ts.samples(); ++i) err = std::max(err, std::abs(d.values(i, 0) - std::cos(ts.times()(i))));
    CHECK(err < 1e-5);
}

TEST_CASE("non-uniform spacing stays exact on quadratics") {
    Eigen::VectorXd t(6);
    t << 0.0, 0.1, 0.35, 0.4, 0.9, 1.7;
    Eigen::MatrixXd v = t.array().square().matrix();
    const auto d = finite_diff(TimeSeries(t, v, {"x"}));
    CHECK((d.values.col(0) - 2 * t).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fewer than three samples is insufficient") {
    expect_error(ErrorKind::InsufficientData, [] { finite_diff(grid_series(2, 1.0, {"x"}, [](double t) { return t; })); });
}

TEST_CASE("window 3 reduces to central differences") {
    const auto ts = grid_series(30, 0.2, {"x"}, [](double t) { return t * t; });
    CHECK((smooth_diff(ts, 3).values - finite_diff(ts).values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("window 5 is exact on a quadratic") {
    const auto ts = grid_series(200, 1e-2, {"x"}, [](double t) { return 2 * t * t - t + 1; });
    const auto d = smooth_diff(ts, 5);
    for (Eigen::Index i = 0; i < ts.samples(); ++i) CHECK(std::abs(d.values(i, 0) - (4 * ts.times()(i) - 1)) < 1e-8);
}

TEST_CASE("window 5 on a cubic carries the known slope bias") {
    // Interior least-squares slope over k = -2..2 picks up f''' h^2 (sum k^4 / sum k^2) / 6.
    const double h = 1e-2;
    const auto ts = grid_series(200, h, {"x"}, [](double t) { return t * t * t - 2 * t; });
    const auto d = smooth_diff(ts, 5);
    const double bias = 6.0 * h * h * (34.0 / 10.0) / 6.0;
    for (Eigen::Index i = 2; i + 2 < ts.samples(); ++i) {
        const double t = ts.times()(i);
        CHECK(d.values(i, 0) - (3 * t * t - 2) == doctest::Approx(bias).epsilon(1e-6));
    }
}

TEST_CASE("smoothing beats raw differences on noisy data") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto noise = testing::gaussian(1000, 1, seed) * 0.01;
        auto ts = grid_series(1000, 0.01, {"x"}, [](double t) { return std::sin(t); });
        ts = ts.with_values(ts.values() + noise);
        const auto a = finite_diff(ts).values;
        const auto b = smooth_diff(ts, 7).values;
        Eigen::VectorXd truth = ts.times().array().cos();
        const double rmse_a = std::sqrt((a.col(0) - truth).squaredNorm() / 1000.0);
        const double rmse_b = std::sqrt((b.col(0) - truth).squaredNorm() / 1000.0);
        CHECK(rmse_b < rmse_a);
    }
}

TEST_CASE("window validation") {
    const auto ts = grid_series(10, 1.0, {"x"}, [](double t) { return t; });
    expect_error(ErrorKind::Parameter, [&] { smooth_diff(ts, 4); });
    expect_error(ErrorKind::Parameter, [&] { smooth_diff(ts, 11); });
    expect_error(ErrorKind::Parameter, [&] { DiffMethod::parse("spline"); });
}

TEST_CASE("both estimators are linear and shape preserving") {
    const auto x = grid_series(50, 0.05, {"a", "b"}, [](double t) { return std::exp(t); }, [](double t) { return std::cos(3 * t); });
    const auto y = x.with_values(testing::gaussian(50, 2, 3));
    const auto combo = x.with_values(2.5 * x.values() - 0.7 * y.values());
    for (auto method : {DiffMethod::parse("central"), DiffMethod::parse("smooth:5")}) {
        const auto dx = differentiate(x, method).values;
        const auto dy = differentiate(y, method).values;
        const auto dc = differentiate(combo, method).values;
        CHECK(dc.rows() == 50);
        CHECK(dc.cols() == 2);
        CHECK((dc - (2.5 * dx - 0.7 * dy)).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, dc.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("method strings round-trip") {
    CHECK(DiffMethod::parse("smooth:7").to_string() == "smooth:7");
    CHECK(DiffMethod::parse("central").to_string() == "central");
}

}
