#include "augsindy/dictlearn.hpp"
#include "augsindy/simulate.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace augsindy;
using testing::expect_error;

namespace {

struct Setup {
    DerivativeMatrix xdot;
    FunctionLibrary full;
};

Setup lorenz() {
    const auto sys = make_system("lorenz");
    const auto ts = integrate(sys, default_config(sys));
    return {finite_diff(ts), build_library(ts, sys.canonical_terms(ts.names()))};
}

Eigen::VectorXd column(const FunctionLibrary& lib, const std::string& label) { return lib.matrix().col(lib.find(label)); }

}  // namespace

TEST_SUITE("dictlearn") {

TEST_CASE("Lorenz without x*y recovers it") {
    const auto s = lorenz();
    const auto basis = learn_basis(s.xdot, s.full.without({"x*y"}), 1, 1);
    CHECK(basis.atoms.cols() == 1);
    CHECK(std::abs(basis.atoms.col(0).norm() - 1.0) < 1e-12);
    CHECK(abs_correlation(basis.atoms.col(0), column(s.full, "x*y")) >= 0.9);
}

TEST_CASE("complete dictionary leaves the atom unused") {
    const auto s = lorenz();
    const auto basis = learn_basis(s.xdot, s.full, 1, 1);
    const Eigen::Index f = s.full.size();
    const double atom_weight = basis.codes.row(f).cwiseAbs().maxCoeff();
    const double known_weight = basis.codes.topRows(f).cwiseAbs().maxCoeff();
    CHECK(atom_weight <= 1e-3 * known_weight);
}

TEST_CASE("objective trace never increases and atoms stay unit norm") {
    const auto s = lorenz();
    for (int p : {1, 2, 3}) {
        LearnBasisConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(p);
        const auto basis = learn_basis(s.xdot, s.full.without({"x", "x*z", "y"}), p, p, cfg);
        for (std::size_t i = 1; i < basis.objective_trace.size(); ++i)
            CHECK(basis.objective_trace[i] <= basis.objective_trace[i - 1] * (1 + 1e-12));
        for (Eigen::Index q = 0; q < p; ++q) CHECK(std::abs(basis.atoms.col(q).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("true atoms are a fixed point of one alternation") {
    // Exact derivatives, so x*y completes the known library with zero residual.
    const auto sys = make_system("lorenz");
    const auto ts = integrate(sys, default_config(sys));
    Eigen::MatrixXd exact(ts.samples(), 3);
    for (Eigen::Index i = 0; i < ts.samples(); ++i) exact.row(i) = sys.rhs(ts.values().row(i).transpose()).transpose();
    const auto full = build_library(ts, sys.canonical_terms(ts.names()));
    const Eigen::VectorXd xy = column(full, "x*y");
    LearnBasisConfig cfg;
    cfg.max_iter = 1;
    cfg.initial_atoms = Eigen::MatrixXd(xy);
    const auto basis = learn_basis(DerivativeMatrix{exact, "exact"}, full.without({"x*y"}), 1, 1, cfg);
    const Eigen::VectorXd unit = xy.normalized();
    const double sign = basis.atoms.col(0).dot(unit) < 0 ? -1.0 : 1.0;
    CHECK((sign * basis.atoms.col(0) - unit).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("two planted atoms are both found") {
    // Each atom feeds three targets. An atom equal to a single target would
    // code that target with one term but cost the other two an extra code
    // each, so the planted pair is the unique sparsest completion.
    const Eigen::Index m = 500;
    const Eigen::MatrixXd f = testing::gaussian(m, 5, 1);
    const Eigen::MatrixXd g = testing::gaussian(m, 2, 2);
    Eigen::MatrixXd y(m, 6);
    y.col(0) = 0.8 * f.col(0) + g.col(0);
    y.col(1) = -0.5 * f.col(3) + 0.6 * g.col(0);
    y.col(2) = f.col(2) - 1.2 * g.col(0);
    y.col(3) = -0.5 * f.col(3) + 1.5 * g.col(1);
    y.col(4) = f.col(1) - 0.7 * g.col(1);
    y.col(5) = 0.9 * f.col(4) + g.col(1);
    std::vector<TermDescriptor> terms;
    for (int j = 0; j < 5; ++j) terms.push_back(learned_atom_term("f" + std::to_string(j)));
    const FunctionLibrary known(f, terms, {});
    const auto basis = learn_basis(DerivativeMatrix{y, "planted"}, known, 2, 1);
    const auto matches = match_atoms(basis, g);
    REQUIRE(matches.size() == 2);
    for (const auto& mt : matches) CHECK(mt.correlation > 0.9);
}

TEST_CASE("matching is invariant to sign and scale") {
    const Eigen::MatrixXd w = testing::gaussian(100, 1, 3);
    LearnedBasis b;
    b.atoms = -3.0 * w;
    b.p = 1;
    const auto m = match_atoms(b, w);
    CHECK(m.front().correlation == doctest::Approx(1.0));
}

TEST_CASE("random atoms rarely correlate with a withheld column") {
    int low = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        LearnedBasis b;
        b.atoms = testing::gaussian(500, 1, seed);
        b.p = 1;
        if (match_atoms(b, testing::gaussian(500, 1, seed + 10000)).front().correlation < 0.2) ++low;
    }
    CHECK(low > 190);
}

TEST_CASE("argument validation") {
    const auto s = lorenz();
    expect_error(ErrorKind::Parameter, [&] { learn_basis(s.xdot, s.full, 0, 1); });
    expect_error(ErrorKind::Parameter, [&] { learn_basis(s.xdot, s.full, 1, 0); });
    LearnedBasis b;
    b.atoms = Eigen::MatrixXd::Ones(10, 1);
    expect_error(ErrorKind::Parameter, [&] { match_atoms(b, Eigen::MatrixXd(10, 0)); });
    expect_error(ErrorKind::Shape, [&] { match_atoms(b, Eigen::MatrixXd::Ones(9, 1)); });
}

TEST_CASE("deterministic under a fixed seed") {
    const auto s = lorenz();
    LearnBasisConfig cfg;
    cfg.seed = 5;
    const auto known = s.full.without({"x", "z"});
    CHECK(learn_basis(s.xdot, known, 2, 2, cfg).atoms == learn_basis(s.xdot, known, 2, 2, cfg).atoms);
}

}
