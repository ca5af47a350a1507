#pragma once

// Overflow-safe log of a weighted sum of exponentials.  Everything involving
// exp(T^H X(u)) goes through here: at T = 512 and H = 0.7 the exponent can
// exceed 100, far past what a naive sum survives in double precision.

#include <cmath>
#include <limits>
#include <span>

namespace fbm {

// log( sum_i w_i exp(x_i) ) for nonnegative weights; returns -inf when the
// effective sum is empty.  Weights of zero are skipped so that log(0) never
// appears.
inline double log_sum_exp(std::span<const double> x, std::span<const double> w) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (w[i] > 0.0 && x[i] > m) m = x[i];
    if (m == -std::numeric_limits<double>::infinity()) return m;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (w[i] > 0.0) acc += w[i] * std::exp(x[i] - m);
    return m + std::log(acc);
}

}  // namespace fbm
