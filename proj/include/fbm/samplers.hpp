#pragma once

// Exact (distributionally unbiased up to floating point) samplers for
// fractional Brownian motion on a grid.
//
//  * CholeskySampler: any strictly increasing grid, O(N^2) per path after an
//    O(N^3) factorisation; refuses grids beyond 4096 points.
//  * CirculantSampler: uniform grids with a power-of-two step count,
//    O(n log n) per path via circulant embedding of the increment process.
//
// Both pin X(0) = 0 exactly and draw from a NormalSource in a canonical
// order, so a given (seed, stream) reproduces the same path bit for bit.

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "fbm/types.hpp"

namespace fbm {

// Anything that can produce i.i.d. sample paths on a fixed grid.  Estimators
// are written against this interface so tests can inject deterministic stubs
// (for example, the independent-halves construction used by the Slepian
// checker's self-test).
class PathSource {
public:
    virtual ~PathSource() = default;
    virtual const TimeGrid& grid() const = 0;
    virtual SamplePath sample(const RngSpec& rng) const = 0;
};

class CholeskySampler final : public PathSource {
public:
    CholeskySampler(HurstParam h, TimeGrid grid, std::size_t cap = 4096);

    const TimeGrid& grid() const override { return grid_; }
    SamplePath sample(const RngSpec& rng) const override;

private:
    TimeGrid grid_;
    Matrix chol_;  // lower-triangular factor of the covariance over t_1..t_N
};

class CirculantSampler final : public PathSource {
public:
    // Uniform grid of n steps (n a power of two, n >= 2) over [0, horizon].
    CirculantSampler(HurstParam h, std::size_t n, double horizon);

    const TimeGrid& grid() const override { return grid_; }
    SamplePath sample(const RngSpec& rng) const override;

    // Nonnegative circulant eigenvalues after clamping; exposed for tests.
    const std::vector<double>& eigenvalues() const { return lambda_; }

private:
    TimeGrid grid_;
    std::vector<double> lambda_;   // eigenvalues of the embedded circulant
    std::vector<double> weight_;   // sqrt(lambda_j / m), the synthesis weights
};

// One-shot conveniences mirroring the sampler classes.
SamplePath sample_cholesky(HurstParam h, const TimeGrid& grid, const RngSpec& rng);
SamplePath sample_circulant(HurstParam h, std::size_t n, double horizon, const RngSpec& rng);

// Circulant when n is a power of two (>= 2), Cholesky otherwise; this is the
// default path source for every estimator.
std::unique_ptr<PathSource> make_default_source(HurstParam h, std::size_t n, double horizon);

}  // namespace fbm
