#pragma once

// Per-path statistics: running maximum with argmax, discrete Hölder modulus,
// and trapezoid quadrature weights.  These feed both the estimators and the
// per-sample inequality checks, so tie-breaking and weight conventions are
// fixed here once.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fbm/types.hpp"

namespace fbm {

// (max value, earliest grid time attaining it).  Ties break to the earliest
// time; the constant-zero path on {0, h} returns (0, 0).
inline std::pair<double, double> sup_and_argmax(const SamplePath& path) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < path.values.size(); ++i)
        if (path.values[i] > path.values[best]) best = i;
    return {path.values[best], path.grid.points[best]};
}

inline std::size_t argmax_index(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

// Discrete Hölder modulus at exponent gamma on a unit-horizon grid:
//   S = max over all grid pairs of |X(t)-X(s)| / |t-s|^gamma.
// The caller must pass a path on [0,1]; rescaling to the unit horizon is the
// caller's business (via self-similarity), not this function's.
//
// On uniform grids only n distinct gaps occur, so we precompute gap^gamma per
// lag and scan lags with a handful of running maxima; this keeps the O(n^2)
// pair scan at a few cycles per pair instead of a pow() per pair.
inline double holder_modulus(const SamplePath& path, double gamma) {
    if (!(gamma > 0.0) || !(gamma <= 1.0))
        throw std::domain_error("holder_modulus: gamma must be in (0,1]");
    if (path.grid.horizon() != 1.0)
        throw std::domain_error("holder_modulus: path must live on [0,1]");

    const std::vector<double>& t = path.grid.points;
    const std::vector<double>& v = path.values;
    const std::size_t n = t.size();

    bool uniform = true;
    const double step = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < n && uniform; ++i)
        if (std::abs((t[i + 1] - t[i]) - step) > 1e-12 * step) uniform = false;

    double best = 0.0;
    if (uniform) {
        for (std::size_t lag = 1; lag < n; ++lag) {
            double m0 = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0;
            std::size_t i = 0;
            const std::size_t limit = n - lag;
            for (; i + 4 <= limit; i += 4) {
                m0 = std::max(m0, std::abs(v[i + lag] - v[i]));
                m1 = std::max(m1, std::abs(v[i + 1 + lag] - v[i + 1]));
                m2 = std::max(m2, std::abs(v[i + 2 + lag] - v[i + 2]));
                m3 = std::max(m3, std::abs(v[i + 3 + lag] - v[i + 3]));
            }
            for (; i < limit; ++i) m0 = std::max(m0, std::abs(v[i + lag] - v[i]));
            const double gap = static_cast<double>(lag) * step;
            const double ratio = std::max(std::max(m0, m1), std::max(m2, m3)) /
                                 std::exp(gamma * std::log(gap));
            best = std::max(best, ratio);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double ratio =
                    std::abs(v[j] - v[i]) / std::exp(gamma * std::log(t[j] - t[i]));
                best = std::max(best, ratio);
            }
    }
    return best;
}

// Trapezoid weights w_i with sum(w_i f(t_i)) the trapezoid rule on the grid.
inline std::vector<double> trapezoid_weights(const TimeGrid& grid) {
    const std::size_t n = grid.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double half = 0.5 * (grid.points[i + 1] - grid.points[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    return w;
}

}  // namespace fbm
