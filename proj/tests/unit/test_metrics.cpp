#include "augsindy/metrics.hpp"
#include "augsindy/library.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace augsindy;
using testing::expect_error;

namespace {

const std::vector<std::string> kVars{"h", "l", "x1", "x2"};

// Linear model over {1, h, l, x1, x2} from rows of coefficients.
SparseModel linear_model(const std::vector<std::vector<double>>& rows) {
    SparseModel m;
    m.terms = polynomial_terms(kVars, 1);
    for (std::size_t k = 0; k < rows.size(); ++k) m.targets.push_back(kVars[k]);
    m.xi = Eigen::MatrixXd::Zero(5, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t j = 0; j < 4; ++j) m.xi(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(k)) = rows[k][j];
    m.scaled_xi = m.xi;
    return m;
}

GroundTruthCausal lynx_truth() { return GroundTruthCausal::from_parents(kVars, {{"h", {"h", "l"}}, {"l", {"h", "l"}}}); }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("select") {
    Eigen::VectorXd v(4);
    v << 0, 0.5, -0.3, 0;
    CHECK(select(v) == (Eigen::VectorXi(4) << 0, 1, 1, 0).finished());
    CHECK(select(Eigen::VectorXd::Zero(3)).isZero());
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Eigen::VectorXd r = testing::gaussian(12, 1, seed).col(0);
        for (Eigen::Index i = 0; i < r.size(); i += 3) r(i) = 0.0;
        const Eigen::VectorXi s = select(r);
        for (Eigen::Index i = 0; i < r.size(); ++i) CHECK(s(i) == (r(i) != 0.0 ? 1 : 0));
        CHECK(select(s.cast<double>()) == s);
        CHECK(select(-2.5 * r) == s);
    }
}

TEST_CASE("FPIV of the four-variable lynx-hare fit is 10/12") {
    const auto eq4 = linear_model({{0.1650, -0.554, 0.077, 0.134},
                                   {0.137, -0.114, -0.038, -0.034},
                                   {-0.022, 0.0, -0.040, 0.134},
                                   {-0.027, 0.119, -0.023, 0.0}});
    CHECK(fpiv(eq4, lynx_truth(), kVars) == 10.0 / 12.0);
}

TEST_CASE("FPIV of the screened lynx-hare fit is 0") {
    const auto eq5 = linear_model({{0.186, -0.426, 0, 0}, {0.128, -0.160, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
    CHECK(fpiv(eq5, lynx_truth(), kVars) == 0.0);
}

TEST_CASE("an equation for l with x1 only scores 0.5") {
    SparseModel m = linear_model({{0, 0, 0, 0}, {0, 0, 0.3, 0}});
    m.targets = {"l"};
    m.xi = m.xi.col(1).eval();
    const auto truth = GroundTruthCausal::from_parents(kVars, {{"l", {"h", "l"}}});
    GroundTruthCausal only_l;
    only_l.incorrect_sets["l"] = truth.incorrect_sets.at("l");
    CHECK(fpiv(m, only_l, kVars) == 0.5);
}

TEST_CASE("FPIV is monotone and bounded") {
    std::mt19937 rng(4);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<std::vector<double>> rows(4, std::vector<double>(4, 0.0));
        for (auto& r : rows)
            for (auto& c : r) c = rng() % 3 == 0 ? 0.5 : 0.0;
        auto m = linear_model(rows);
        const double before = fpiv(m, lynx_truth(), kVars);
        CHECK(before >= 0.0);
        CHECK(before <= 1.0);
        m.xi(3, 0) = 1.0;  // h equation picks up x1
        CHECK(fpiv(m, lynx_truth(), kVars) >= before);
    }
}

TEST_CASE("FPIV errors") {
    GroundTruthCausal empty;
    empty.incorrect_sets["h"] = {};
    const auto m = linear_model({{1, 0, 0, 0}});
    expect_error(ErrorKind::UndefinedMetric, [&] { fpiv(m, empty, kVars); });
    expect_error(ErrorKind::Alignment, [&] {
        GroundTruthCausal::from_parents(kVars, {{"h", {"q"}}});
    });
}

TEST_CASE("FDES extremes and equivalence") {
    auto truth = linear_model({{0.5, -0.4, 0, 0}, {0.1, 0.2, 0, 0}});
    CHECK(fdes(truth, truth) == 1.0);

    auto all_wrong = truth;
    for (Eigen::Index i = 0; i < all_wrong.xi.size(); ++i) all_wrong.xi(i) = truth.xi(i) == 0.0 ? 1.0 : 0.0;
    CHECK(fdes(all_wrong, truth) == 0.0);

    std::mt19937 rng(8);
    for (int rep = 0; rep < 100; ++rep) {
        auto m = truth;
        for (Eigen::Index i = 0; i < m.xi.size(); ++i)
            if (rng() % 4 == 0) m.xi(i) = m.xi(i) == 0.0 ? 0.7 : 0.0;
        const double v = fdes(m, truth);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK((v == 1.0) == (select(Eigen::Map<Eigen::VectorXd>(m.xi.data(), m.xi.size())) ==
                             select(Eigen::Map<Eigen::VectorXd>(truth.xi.data(), truth.xi.size()))));
    }
}

TEST_CASE("FDES literal form counts mismatches per equation") {
    auto truth = linear_model({{0.5, -0.4, 0, 0}, {0.1, 0.2, 0, 0}});
    auto m = truth;
    m.xi(3, 0) = 1.0;
    m.xi(1, 1) = 0.0;
    FdesOptions literal;
    literal.literal = true;
    CHECK(fdes(m, truth, {}, literal) == doctest::Approx(1.0));
    CHECK(fdes(m, truth) == doctest::Approx(1.0 - 2.0 / 10.0));
}

TEST_CASE("FDES credits matched atoms and penalizes unmatched ones") {
    auto truth = linear_model({{0.5, -0.4, 0, 0}, {0.1, 0.2, 0, 0}});
    SparseModel m;
    m.terms = polynomial_terms(kVars, 1);
    m.terms.erase(m.terms.begin() + 1);  // "h" withheld
    m.terms.push_back(learned_atom_term("N1"));
    m.targets = truth.targets;
    m.xi = Eigen::MatrixXd::Zero(5, 2);
    m.xi(1, 0) = -0.4;  // l
    m.xi(4, 0) = 0.5;   // N1 for h
    m.xi(1, 1) = 0.2;
    m.xi(4, 1) = 0.1;
    m.scaled_xi = m.xi;
    CHECK(fdes(m, truth, {{"N1", {"h", 0.95}}}) == 1.0);
    CHECK(fdes(m, truth, {{"N1", {"h", 0.5}}}) < 1.0);

    auto bad = m;
    bad.terms[0] = learned_atom_term("zz");
    bad.terms[0].kind = TermKind::Monomial;
    expect_error(ErrorKind::Alignment, [&] { fdes(bad, truth); });
}

TEST_CASE("aggregate") {
    CHECK(aggregate(Eigen::MatrixXd::Zero(10, 5)).mean.isZero());
    CHECK(aggregate(Eigen::MatrixXd::Zero(10, 5)).std.isZero());

    Eigen::MatrixXd col(10, 1);
    col << .083, .083, .333, .083, .250, .083, .083, .083, .250, .000;
    const auto r = aggregate(col, {0.09});
    CHECK(format_value(r.mean(0)) == ".133");
    CHECK(format_value(r.std(0)) == ".105");

    const auto single = aggregate(Eigen::MatrixXd::Constant(1, 2, 0.4));
    CHECK(single.std.isZero());
    expect_error(ErrorKind::Parameter, [] { aggregate(Eigen::MatrixXd(0, 0)); });
}

TEST_CASE("table rendering") {
    const auto zeros = aggregate(Eigen::MatrixXd::Zero(10, 5), {0.09, 0.081, 0.0729, 0.0656, 0.059});
    const std::string text = render_table(zeros);
    CHECK(text.find("λ = .0900") != std::string::npos);
    CHECK(text.find("λ = .0590") != std::string::npos);
    CHECK(text.find(".000 ± (.000)") != std::string::npos);
    CHECK(text.find("Trial 10") != std::string::npos);

    const auto one = aggregate(Eigen::MatrixXd::Constant(1, 1, 0.5), {0.09});
    const std::string t1 = render_table(one);
    CHECK(t1.find(".500 ± (.000)") != std::string::npos);
    CHECK(t1.find("Trial 2") == std::string::npos);
}

TEST_CASE("table and CSV round-trips") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd v(10, 5);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std::round(u(rng) * 1000.0) / 1000.0;
    auto r = aggregate(v, {0.09, 0.081, 0.0729, 0.0656, 0.059}, MetricKind::Fdes);
    r.title = "sample";

    const auto back = parse_table(render_table(r));
    CHECK(back.metric == MetricKind::Fdes);
    CHECK(back.lambdas == r.lambdas);
    CHECK((back.per_trial - r.per_trial).cwiseAbs().maxCoeff() < 5e-4);
    CHECK((back.mean - r.mean).cwiseAbs().maxCoeff() < 5e-4);

    const auto csv = report_from_csv(report_to_csv(r));
    CHECK(csv.per_trial == r.per_trial);
    CHECK(csv.lambdas == r.lambdas);
    CHECK((csv.mean - r.mean).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(csv.title == "sample");
}

TEST_CASE("value formatting") {
    CHECK(format_value(0.0) == ".000");
    CHECK(format_value(1.0) == "1.000");
    CHECK(format_value(0.8333333) == ".833");
    CHECK(parse_metric("fdes") == MetricKind::Fdes);
    expect_error(ErrorKind::Parse, [] { parse_metric("auc"); });
}

}
