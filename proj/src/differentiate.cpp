#include "augsindy/differentiate.hpp"

#include "augsindy/errors.hpp"

#include <algorithm>

namespace augsindy {

namespace {

// Weights w such that sum_k w_k f(nodes_k) is the derivative at `at` of the
// quadratic interpolating f on the three nodes.
Eigen::Vector3d lagrange3_derivative_weights(double at, double a, double b, double c) {
    Eigen::Vector3d w;
    w(0) = ((at - b) + (at - c)) / ((a - b) * (a - c));
    w(1) = ((at - a) + (at - c)) / ((b - a) * (b - c));
    w(2) = ((at - a) + (at - b)) / ((c - a) * (c - b));
    return w;
}

}  // namespace

DerivativeMatrix finite_diff(const TimeSeries& ts) {
    const Eigen::Index m = ts.samples();
    if (m < 3) {
        throw Error(ErrorKind::InsufficientData,
                    "finite differences need at least 3 samples, got " + std::to_string(m));
    }
    const auto& t = ts.times();
    const auto& x = ts.values();
    Eigen::MatrixXd d(m, x.cols());
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index s = std::clamp<Eigen::Index>(i - 1, 0, m - 3);
        const Eigen::Vector3d w = lagrange3_derivative_weights(t(i), t(s), t(s + 1), t(s + 2));
        d.row(i) = w(0) * x.row(s) + w(1) * x.row(s + 1) + w(2) * x.row(s + 2);
    }
    return {std::move(d), "central"};
}

DerivativeMatrix smooth_diff(const TimeSeries& ts, int window) {
    const Eigen::Index m = ts.samples();
    if (window % 2 == 0) throw Error(ErrorKind::Parameter, "smoothing window must be odd, got " + std::to_string(window));
    if (window < 3 || window > m) {
        throw Error(ErrorKind::Parameter, "smoothing window " + std::to_string(window) +
                                              " outside [3, " + std::to_string(m) + "]");
    }
    const auto& t = ts.times();
    const auto& x = ts.values();
    const Eigen::Index w = window;
    Eigen::MatrixXd d(m, x.cols());
    Eigen::MatrixXd design(w, 3);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index s = std::clamp<Eigen::Index>(i - w / 2, 0, m - w);
        const double scale = (t(s + w - 1) - t(s)) / 2.0;
        for (Eigen::Index k = 0; k < w; ++k) {
            const double u = (t(s + k) - t(i)) / scale;
            design(k, 0) = 1.0;
            design(k, 1) = u;
            design(k, 2) = u * u;
        }
        // Row 1 of the pseudo-inverse maps window samples to the slope at t(i).
        const Eigen::MatrixXd pinv = design.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(w, w));
        const Eigen::RowVectorXd weights = pinv.row(1) / scale;
        d.row(i) = weights * x.middleRows(s, w);
    }
    return {std::move(d), "smooth:" + std::to_string(window)};
}

DiffMethod DiffMethod::parse(const std::string& text) {
    if (text == "central") return {Kind::Central, 0};
    const std::string prefix = "smooth:";
    if (text.rfind(prefix, 0) == 0) {
        try {
            std::size_t used = 0;
            int w = std::stoi(text.substr(prefix.size()), &used);
            if (used == text.size() - prefix.size()) return {Kind::Smooth, w};
        } catch (const std::exception&) {
        }
    }
    throw Error(ErrorKind::Parameter, "unknown differentiation method '" + text + "' (expected central or smooth:<w>)");
}

std::string DiffMethod::to_string() const {
    return kind == Kind::Central ? "central" : "smooth:" + std::to_string(window);
}

DerivativeMatrix differentiate(const TimeSeries& ts, const DiffMethod& method) {
    if (method.kind == DiffMethod::Kind::Central) return finite_diff(ts);
    return smooth_diff(ts, method.window);
}

}  // namespace augsindy
