#include "augsindy/causal.hpp"
#include "augsindy/harness.hpp"
#include "augsindy/metrics.hpp"
#include "helpers.hpp"

using namespace augsindy;
using testing::expect_error;

namespace {

TimeSeries two_columns(Eigen::Index m, std::uint64_t seed) {
    return TimeSeries(Eigen::VectorXd::LinSpaced(m, 0, static_cast<double>(m - 1)), testing::gaussian(m, 2, seed), {"t", "j"});
}

ScreeningConfig quick(std::uint64_t seed) {
    ScreeningConfig c;
    c.n_permutations = 200;
    c.stop_after = 10;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_SUITE("causal") {

TEST_CASE("planted dependence is detected") {
    int admitted = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto ts = two_columns(200, seed);
        Eigen::MatrixXd d(200, 2);
        d.col(0) = 2 * ts.values().col(1) + 0.01 * testing::gaussian(200, 1, seed + 1000).col(0);
        d.col(1) = testing::gaussian(200, 1, seed + 2000).col(0);
        if (screen_variables(ts, DerivativeMatrix{d, "planted"}, quick(seed)).admits(0, 1)) ++admitted;
    }
    CHECK(admitted >= 99);
}

TEST_CASE("independent noise is rarely admitted") {
    int admitted = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto ts = two_columns(200, seed);
        const Eigen::MatrixXd d = testing::gaussian(200, 2, seed + 500);
        if (screen_variables(ts, DerivativeMatrix{d, "planted"}, quick(seed)).admits(0, 1)) ++admitted;
    }
    CHECK(admitted <= 10);
}

TEST_CASE("own variable is always admissible, undriven rows are flagged") {
    const auto ts = two_columns(200, 4);
    const Eigen::MatrixXd d = testing::gaussian(200, 2, 99);
    const auto mask = screen_variables(ts, DerivativeMatrix{d, "noise"}, quick(4));
    CHECK(mask.admits(0, 0));
    CHECK(mask.admits(1, 1));
    CHECK_FALSE(mask.driven[0]);
}

TEST_CASE("masks are deterministic and monotone in alpha") {
    const Eigen::Index m = 150;
    const TimeSeries ts(Eigen::VectorXd::LinSpaced(m, 0, 1), testing::gaussian(m, 4, 21), {"a", "b", "c", "d"});
    Eigen::MatrixXd d(m, 4);
    d.col(0) = ts.values().col(1) + 0.8 * testing::gaussian(m, 1, 1).col(0);
    d.col(1) = 0.3 * ts.values().col(2) + testing::gaussian(m, 1, 2).col(0);
    d.col(2) = testing::gaussian(m, 1, 3).col(0);
    d.col(3) = 0.2 * ts.values().col(0) + testing::gaussian(m, 1, 4).col(0);
    const DerivativeMatrix xdot{d, "planted"};

    ScreeningConfig c;
    c.n_permutations = 300;
    c.seed = 17;
    const auto a = screen_variables(ts, xdot, c);
    const auto b = screen_variables(ts, xdot, c);
    CHECK((a.admissible == b.admissible).all());
    CHECK(a.p_values == b.p_values);

    BoolMatrix previous = BoolMatrix::Constant(4, 4, false);
    for (double alpha : {0.01, 0.05, 0.1}) {
        c.alpha = alpha;
        const auto mask = screen_variables(ts, xdot, c);
        CHECK(((previous && !mask.admissible).count()) == 0);
        previous = mask.admissible;
    }
}

TEST_CASE("screening configuration errors") {
    const auto ts = two_columns(50, 1);
    const DerivativeMatrix d{testing::gaussian(50, 2, 2), "x"};
    ScreeningConfig c;
    c.n_permutations = 199;
    expect_error(ErrorKind::Config, [&] { screen_variables(ts, d, c); });
    c.n_permutations = 200;
    c.alpha = 1.5;
    expect_error(ErrorKind::Config, [&] { screen_variables(ts, d, c); });
    expect_error(ErrorKind::Config, [] { parse_correction("bonferroni"); });
}

TEST_CASE("Benjamini-Hochberg and Holm") {
    const std::vector<double> p{0.001, 0.008, 0.039, 0.041, 0.6};
    CHECK(benjamini_hochberg(p, 0.05) == std::vector<bool>{true, true, false, false, false});
    CHECK(holm(p, 0.05) == std::vector<bool>{true, true, false, false, false});
    CHECK(holm({0.01, 0.02}, 0.05) == std::vector<bool>{true, true});
    CHECK(benjamini_hochberg({0.04, 0.045}, 0.05) == std::vector<bool>{true, true});
}

TEST_CASE("full mask reproduces plain SINDy; masked terms are structural zeros") {
    const Eigen::Index m = 200;
    const TimeSeries ts(Eigen::VectorXd::LinSpaced(m, 0, 1), testing::gaussian(m, 3, 5), {"a", "b", "z"});
    const auto lib = build_polynomial_library(ts, 2);
    Eigen::MatrixXd d(m, 3);
    d.col(0) = 0.5 * ts.values().col(1) + 0.3 * testing::gaussian(m, 1, 6).col(0);
    d.col(1) = -ts.values().col(0) + 0.3 * testing::gaussian(m, 1, 7).col(0);
    d.col(2) = testing::gaussian(m, 1, 8).col(0);
    const DerivativeMatrix xdot{d, "planted"};

    const auto full = CausalMask::full(ts.names());
    CHECK(fit_augmented(ts, xdot, lib, 0.05, full).xi == fit_sindy(ts, xdot, lib, 0.05).xi);

    auto mask = full;
    mask.admissible(0, 2) = mask.admissible(1, 2) = false;
    mask.driven[2] = false;
    const auto model = fit_augmented(ts, xdot, lib, 0.05, mask);
    for (std::size_t j = 0; j < lib.terms().size(); ++j) {
        if (lib.terms()[j].depends_on(2)) {
            CHECK(model.xi(static_cast<Eigen::Index>(j), 0) == 0.0);
            CHECK(model.xi(static_cast<Eigen::Index>(j), 1) == 0.0);
        }
    }
    CHECK(model.xi.col(2).isZero(0.0));

    // Excluding only non-causal variables never raises FPIV.
    const auto truth = GroundTruthCausal::from_parents(ts.names(), {{"a", {"a", "b"}}, {"b", {"a", "b"}}});
    CHECK(fpiv(model, truth, ts.names()) <= fpiv(fit_sindy(ts, xdot, lib, 0.05), truth, ts.names()));
}

TEST_CASE("lynx-hare screening rejects both noise columns in every trial") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::LynxHare;
    cfg.seed = 1;
    cfg.data_dir = AUGSINDY_TEST_DATA_DIR;
    const auto resolved = resolve(cfg);
    const auto data = load_dataset(resolved);
    for (int trial = 0; trial < 10; ++trial) {
        const auto cell = run_variable_cell(resolved, data, resolved.lambdas.front(), cell_seed(resolved.seed, trial, 0));
        CAPTURE(trial);
        const auto& names = cell.mask.variable_names;
        const auto x1 = std::find(names.begin(), names.end(), "x1") - names.begin();
        const auto x2 = std::find(names.begin(), names.end(), "x2") - names.begin();
        for (int target : {0, 1}) {
            const bool excluded = !cell.mask.driven[static_cast<std::size_t>(cell.mask.row_of(target))] ||
                                  (!cell.mask.admits(target, static_cast<int>(x1)) && !cell.mask.admits(target, static_cast<int>(x2)));
            CHECK(excluded);
        }
    }
}

}
