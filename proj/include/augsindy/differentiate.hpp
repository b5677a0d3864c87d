#pragma once

#include "augsindy/timeseries.hpp"

#include <Eigen/Dense>

#include <string>

namespace augsindy {

/// Derivative estimate aligned row-for-row with its source series.
struct DerivativeMatrix {
    Eigen::MatrixXd values;
    std::string method;
};

// Three-point differences: central on interior rows, second-order one-sided
// at both ends. Exact on quadratics for any spacing.
DerivativeMatrix finite_diff(const TimeSeries& ts);

// Local least-squares quadratic over `window` samples (odd, 3 <= window <= m),
// differentiated at the sample. Windows are shifted inward near the ends.
DerivativeMatrix smooth_diff(const TimeSeries& ts, int window);

struct DiffMethod {
    enum class Kind { Central, Smooth } kind = Kind::Central;
    int window = 5;

    // "central" or "smooth:<w>"
    static DiffMethod parse(const std::string& text);
    std::string to_string() const;
};

DerivativeMatrix differentiate(const TimeSeries& ts, const DiffMethod& method);

}  // namespace augsindy
