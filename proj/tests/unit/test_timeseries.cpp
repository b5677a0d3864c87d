#include "augsindy/harness.hpp"
#include "augsindy/timeseries.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace augsindy;
using testing::expect_error;

TEST_SUITE("timeseries") {

TEST_CASE("lynx-hare fixture loads as [h, l]") {
    const auto ts = load_csv(std::filesystem::path(AUGSINDY_TEST_DATA_DIR) / "lynx_hare.csv", CsvSchema{"year", {}});
    CHECK(ts.names() == std::vector<std::string>{"h", "l"});
    CHECK(ts.variables() == 2);
    CHECK(ts.samples() == 21);
}

TEST_CASE("sardine-anchovy fixture loads") {
    const auto ts = load_csv(std::filesystem::path(AUGSINDY_TEST_DATA_DIR) / "sardine_anchovy.csv");
    CHECK(ts.names() == std::vector<std::string>{"a", "s"});
    CHECK(ts.samples() > 30);
}

TEST_CASE("single-row file is a data error") {
    auto dir = testing::scratch_dir("single_row");
    auto f = testing::write_file(dir / "one.csv", "t,x\n0,1\n");
    expect_error(ErrorKind::Data, [&] { load_csv(f); });
}

TEST_CASE("shuffled rows load identically to sorted rows") {
    auto dir = testing::scratch_dir("shuffled");
    auto sorted = testing::write_file(dir / "sorted.csv", "t,x,y\n0,1,5\n1,2,6\n2,3,7\n3,4,8\n");
    auto shuffled = testing::write_file(dir / "shuffled.csv", "t,x,y\n2,3,7\n0,1,5\n3,4,8\n1,2,6\n");
    const auto a = load_csv(sorted);
    const auto b = load_csv(shuffled);
    CHECK(a.times() == b.times());
    CHECK(a.values() == b.values());
}

TEST_CASE("ingestion errors name their cause") {
    auto dir = testing::scratch_dir("errors");
    SUBCASE("missing column") {
        auto f = testing::write_file(dir / "a.csv", "t,x\n0,1\n1,2\n");
        expect_error(ErrorKind::Schema, [&] { load_csv(f, CsvSchema{"t", {"y"}}); });
    }
    SUBCASE("non-numeric cell") {
        auto f = testing::write_file(dir / "b.csv", "t,x\n0,1\n1,abc\n2,3\n");
        try {
            load_csv(f);
            FAIL("expected a parse error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
            CHECK(std::string(e.what()).find("row") != std::string::npos);
        }
    }
    SUBCASE("duplicate timestamps") {
        auto f = testing::write_file(dir / "c.csv", "t,x\n0,1\n1,2\n1,3\n");
        expect_error(ErrorKind::Data, [&] { load_csv(f); });
    }
    SUBCASE("missing file") { expect_error(ErrorKind::Io, [&] { load_csv(dir / "nope.csv"); }); }
}

TEST_CASE("TimeSeries rejects broken invariants") {
    Eigen::VectorXd t(3);
    t << 0, 1, 1;
    expect_error(ErrorKind::Data, [&] { TimeSeries(t, Eigen::MatrixXd::Zero(3, 1), {"x"}); });
    t << 0, 1, 2;
    expect_error(ErrorKind::Data, [&] { TimeSeries(t, Eigen::MatrixXd::Zero(3, 2), {"x", "x"}); });
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 1);
    v(1, 0) = std::nan("");
    expect_error(ErrorKind::Data, [&] { TimeSeries(t, v, {"x"}); });
}

TEST_CASE("save then load is the identity") {
    auto dir = testing::scratch_dir("roundtrip");
    Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(50, 0.0, 4.9);
    const TimeSeries ts(t, testing::gaussian(50, 3, 11) * 1e3, {"a", "b", "c"});
    save_csv(ts, dir / "ts.csv");
    const auto back = load_csv(dir / "ts.csv");
    CHECK(back.names() == ts.names());
    CHECK(back.times() == ts.times());
    CHECK(back.values() == ts.values());
}

TEST_CASE("matched-moments noise mirrors its sources") {
    const auto ts = load_csv(std::filesystem::path(AUGSINDY_TEST_DATA_DIR) / "lynx_hare.csv");
    const auto aug = augment_with_noise(ts, NoiseSpec{NoiseMode::MatchedMoments, {"l", "h"}, 2, 7, {}});
    REQUIRE(aug.variables() == 4);
    CHECK(aug.names() == std::vector<std::string>{"h", "l", "x1", "x2"});
    CHECK(aug.values().leftCols(2) == ts.values());
}

TEST_CASE("zero noise columns leave the series untouched") {
    const auto ts = testing::grid_series(10, 0.1, {"x"}, [](double t) { return t * t; });
    const auto aug = augment_with_noise(ts, NoiseSpec{NoiseMode::StandardNormal, {}, 0, 3, {}});
    CHECK(aug.names() == ts.names());
    CHECK(aug.values() == ts.values());
}

TEST_CASE("standard-normal noise has unit moments") {
    const Eigen::Index m = 10000;
    const auto ts = testing::grid_series(m, 1.0, {"x"}, [](double) { return 0.0; });
    const auto aug = augment_with_noise(ts, NoiseSpec{NoiseMode::StandardNormal, {}, 1, 42, {}});
    const Eigen::VectorXd x1 = aug.column("x1");
    CHECK(std::abs(sample_mean(x1)) < 3.0 / std::sqrt(static_cast<double>(m)));
    CHECK(std::abs(sample_std(x1) - 1.0) < 0.05);
}

TEST_CASE("matched-moments moments converge at large m") {
    const Eigen::Index m = 100000;
    const auto ts = testing::grid_series(m, 1.0, {"x"}, [](double t) { return 5.0 + 3.0 * std::sin(0.01 * t); });
    const auto aug = augment_with_noise(ts, NoiseSpec{NoiseMode::MatchedMoments, {"x"}, 1, 5, {}});
    const Eigen::VectorXd src = ts.column("x");
    const Eigen::VectorXd syn = aug.column("x1");
    CHECK(std::abs(sample_mean(syn) / sample_mean(src) - 1.0) < 0.02);
    CHECK(std::abs(sample_std(syn) / sample_std(src) - 1.0) < 0.02);
}

TEST_CASE("noise is seed-deterministic") {
    const auto ts = testing::grid_series(100, 1.0, {"x"}, [](double t) { return t; });
    const NoiseSpec a{NoiseMode::StandardNormal, {}, 2, 9, {}};
    NoiseSpec b = a;
    b.seed = 10;
    CHECK(augment_with_noise(ts, a).values() == augment_with_noise(ts, a).values());
    CHECK(augment_with_noise(ts, a).values() != augment_with_noise(ts, b).values());
}

TEST_CASE("noise configuration errors") {
    const auto ts = testing::grid_series(10, 1.0, {"x"}, [](double t) { return t; });
    expect_error(ErrorKind::Spec, [&] { augment_with_noise(ts, NoiseSpec{NoiseMode::MatchedMoments, {"q"}, 1, 0, {}}); });
    expect_error(ErrorKind::Spec, [&] { augment_with_noise(ts, NoiseSpec{NoiseMode::MatchedMoments, {"x"}, 2, 0, {}}); });
    expect_error(ErrorKind::Spec, [&] { parse_noise_mode("uniform"); });
}

TEST_CASE("zscore gives zero mean and unit std") {
    const auto ts = testing::grid_series(200, 0.1, {"a", "b"}, [](double t) { return 3 + std::sin(t); },
                                         [](double t) { return 100 * t; });
    const auto z = zscore(ts);
    for (Eigen::Index j = 0; j < 2; ++j) {
        CHECK(std::abs(sample_mean(z.values().col(j))) < 1e-12);
        CHECK(std::abs(sample_std(z.values().col(j)) - 1.0) < 1e-12);
    }
}

}
