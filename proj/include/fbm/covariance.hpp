#pragma once

// Covariance structure of fractional Brownian motion and the Gaussian
// absolute-moment constants used by the chain-of-inequalities checks.
//
// The analytic functions are templated on the scalar so the verification
// suite can re-evaluate them in long double as an independent precision
// oracle.  `double` aliases are provided for everyday use.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "fbm/types.hpp"

namespace fbm {

// x^e evaluated as exp(e log x) for x > 0 and exactly 0 at x = 0.  Routing
// every fractional power through one helper keeps results bit-stable across
// call sites, which matters for the exact-identity tests.
template <typename Scalar>
Scalar rpow(Scalar x, Scalar e) {
    if (x == Scalar(0)) return Scalar(0);
    return std::exp(e * std::log(x));
}

// r(t,s) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2 for t,s >= 0.
template <typename Scalar>
Scalar fbm_covariance_t(Scalar h, Scalar t, Scalar s) {
    if (t < Scalar(0) || s < Scalar(0))
        throw std::domain_error("fbm_covariance: times must be nonnegative");
    const Scalar two_h = Scalar(2) * h;
    return (rpow(t, two_h) + rpow(s, two_h) - rpow(std::abs(t - s), two_h)) / Scalar(2);
}

inline double fbm_covariance(HurstParam h, double t, double s) {
    return fbm_covariance_t<double>(h.value, t, s);
}

// Autocovariance of the stationary increment sequence on a uniform grid of
// step `step`:  gamma(k) = step^{2H} ((k+1)^{2H} + |k-1|^{2H} - 2 k^{2H}) / 2.
inline double fgn_autocovariance(HurstParam h, std::int64_t lag, double step) {
    if (lag < 0)
        throw std::domain_error("fgn_autocovariance: lag must be nonnegative");
    if (!(step > 0.0))
        throw std::domain_error("fgn_autocovariance: step must be positive");
    const double two_h = 2.0 * h.value;
    const double k = static_cast<double>(lag);
    return 0.5 * rpow(step, two_h) *
           (rpow(k + 1.0, two_h) + rpow(std::abs(k - 1.0), two_h) - 2.0 * rpow(k, two_h));
}

// Covariance matrix of (X(t_1), ..., X(t_N)) over the grid points excluding
// t_0 = 0, where the process is pinned to zero and contributes nothing.
inline Matrix covariance_matrix(HurstParam h, const TimeGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size()) - 1;
    Matrix cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = fbm_covariance(h, grid.points[i + 1], grid.points[j + 1]);
            cov(i, j) = v;
            cov(j, i) = v;
        }
    return cov;
}

// (E|N(0,1)|^a)^{1/a} with E|N|^a = 2^{a/2} Gamma((a+1)/2) / sqrt(pi), a > 0.
// Evaluated through lgamma so large moments do not overflow.
template <typename Scalar>
Scalar gaussian_abs_moment_t(Scalar a) {
    if (!(a > Scalar(0)))
        throw std::domain_error("gaussian_abs_moment: order must be positive");
    const Scalar log_moment = a / Scalar(2) * std::log(Scalar(2)) +
                              std::lgamma((a + Scalar(1)) / Scalar(2)) -
                              std::log(std::numbers::pi_v<Scalar>) / Scalar(2);
    return std::exp(log_moment / a);
}

inline double gaussian_abs_moment(double a) { return gaussian_abs_moment_t<double>(a); }

}  // namespace fbm
