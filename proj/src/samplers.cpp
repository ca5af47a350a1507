#include "fbm/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include "fbm/covariance.hpp"
#include "fbm/rng.hpp"

namespace fbm {

namespace {

constexpr double kEigenvalueTol = 1e-10;  // relative to the largest eigenvalue

// FFT plans are cached per thread; Eigen's FFT object is not thread-safe but
// a thread_local instance is, and it reuses plans across calls and sizes.
Eigen::FFT<double>& thread_fft() {
    thread_local Eigen::FFT<double> fft;
    return fft;
}

}  // namespace

CholeskySampler::CholeskySampler(HurstParam h, TimeGrid grid, std::size_t cap)
    : grid_(std::move(grid)) {
    const std::size_t n = grid_.size() - 1;
    if (n > cap)
        throw std::invalid_argument(
            "CholeskySampler: grid has " + std::to_string(n) + " points beyond t=0; the " +
            std::to_string(cap) + "-point cap applies (use the circulant sampler)");

    Matrix cov = covariance_matrix(h, grid_);
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) {
        // One retry with a tiny diagonal jitter; fBM covariance matrices are
        // positive definite in exact arithmetic but can graze zero in double.
        cov.diagonal().array() += 1e-12;
        llt.compute(cov);
        if (llt.info() != Eigen::Success) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
            throw std::runtime_error(
                "CholeskySampler: covariance not positive definite even after 1e-12 jitter; "
                "smallest eigenvalue " +
                std::to_string(es.eigenvalues().minCoeff()));
        }
    }
    chol_ = llt.matrixL();
}

SamplePath CholeskySampler::sample(const RngSpec& rng) const {
    const auto n = chol_.rows();
    NormalSource normal(rng);
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal();
    Vector x = chol_.triangularView<Eigen::Lower>() * z;

    std::vector<double> values(grid_.size());
    values[0] = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i) + 1] = x[i];
    return SamplePath(grid_, std::move(values));
}

CirculantSampler::CirculantSampler(HurstParam h, std::size_t n, double horizon)
    : grid_(TimeGrid::uniform(horizon, n)) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument(
            "CirculantSampler: step count must be a power of two >= 2, got " +
            std::to_string(n));
    const double step = horizon / static_cast<double>(n);

    // Circulant embedding of the increment autocovariance: first row
    // [gamma(0) .. gamma(n), gamma(n-1) .. gamma(1)], length m = 2n.
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> row(m), spectrum(m);
    for (std::size_t k = 0; k <= n; ++k)
        row[k] = fgn_autocovariance(h, static_cast<std::int64_t>(k), step);
    for (std::size_t k = 1; k < n; ++k) row[m - k] = row[k];

    thread_fft().fwd(spectrum, row);

    lambda_.resize(m);
    double max_lambda = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        lambda_[j] = spectrum[j].real();
        max_lambda = std::max(max_lambda, lambda_[j]);
    }
    const double floor = -kEigenvalueTol * max_lambda;
    for (std::size_t j = 0; j < m; ++j) {
        if (lambda_[j] < floor)
            throw std::runtime_error(
                "CirculantSampler: embedding eigenvalue " + std::to_string(lambda_[j]) +
                " below tolerance " + std::to_string(floor) + " at index " + std::to_string(j));
        if (lambda_[j] < 0.0) lambda_[j] = 0.0;  // clamp roundoff-negative values
    }

    weight_.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        weight_[j] = std::sqrt(lambda_[j] / static_cast<double>(m));
}

SamplePath CirculantSampler::sample(const RngSpec& rng) const {
    const std::size_t n = grid_.size() - 1;
    const std::size_t m = 2 * n;
    NormalSource normal(rng);

    // Hermitian Gaussian spectrum: V_0 and V_n real, V_j = (a+ib)/sqrt(2) for
    // 0 < j < n mirrored as conjugates.  Draw order is part of the sampler's
    // contract: V_0, V_n, then (Re, Im) pairs for j = 1..n-1.
    std::vector<std::complex<double>> freq(m);
    freq[0] = weight_[0] * normal();
    freq[n] = weight_[n] * normal();
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    for (std::size_t j = 1; j < n; ++j) {
        const double re = normal() * inv_sqrt2;
        const double im = normal() * inv_sqrt2;
        freq[j] = weight_[j] * std::complex<double>(re, im);
        freq[m - j] = std::conj(freq[j]);
    }

    std::vector<std::complex<double>> out(m);
    thread_fft().fwd(out, freq);

    std::vector<double> values(grid_.size());
    values[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) values[i + 1] = values[i] + out[i].real();
    return SamplePath(grid_, std::move(values));
}

SamplePath sample_cholesky(HurstParam h, const TimeGrid& grid, const RngSpec& rng) {
    return CholeskySampler(h, grid).sample(rng);
}

SamplePath sample_circulant(HurstParam h, std::size_t n, double horizon, const RngSpec& rng) {
    return CirculantSampler(h, n, horizon).sample(rng);
}

std::unique_ptr<PathSource> make_default_source(HurstParam h, std::size_t n, double horizon) {
    if (n >= 2 && (n & (n - 1)) == 0)
        return std::make_unique<CirculantSampler>(h, n, horizon);
    return std::make_unique<CholeskySampler>(h, TimeGrid::uniform(horizon, n));
}

}  // namespace fbm
