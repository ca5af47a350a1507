#pragma once

// Core value types shared by the sampling / estimation / verification layers.
// Every type validates its invariants on construction and throws
// std::invalid_argument naming the offending field, so downstream code can
// assume well-formed inputs.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fbm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Hurst parameter H of fractional Brownian motion, strictly inside (0,1).
// H = 1/2 is ordinary Brownian motion and is allowed; the endpoints are not.
struct HurstParam {
    double value;

    explicit HurstParam(double h) : value(h) {
        if (!(h > 0.0) || !(h < 1.0))
            throw std::invalid_argument(
                "HurstParam: H must satisfy 0 < H < 1, got " + std::to_string(h));
    }
};

// Deterministic RNG coordinates.  Equal (seed, stream) pairs must reproduce
// bit-identical sample paths; distinct streams are independent for practical
// purposes.  Streams index Monte Carlo samples, which makes every estimator
// independent of thread scheduling.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Strictly increasing evaluation times starting at 0 and ending at the
// horizon.  The point t = 0 is always present; samplers pin X(0) = 0 there.
struct TimeGrid {
    std::vector<double> points;

    explicit TimeGrid(std::vector<double> pts) : points(std::move(pts)) {
        if (points.size() < 2)
            throw std::invalid_argument("TimeGrid: need at least 2 points (has " +
                                        std::to_string(points.size()) + ")");
        if (points.front() != 0.0)
            throw std::invalid_argument("TimeGrid: first point must be exactly 0");
        for (std::size_t i = 1; i < points.size(); ++i)
            if (!(points[i] > points[i - 1]))
                throw std::invalid_argument(
                    "TimeGrid: points must be strictly increasing (violated at index " +
                    std::to_string(i) + ")");
    }

    // n equal steps over [0, horizon]: n+1 points including both endpoints.
    static TimeGrid uniform(double horizon, std::size_t n_steps) {
        if (!(horizon > 0.0))
            throw std::invalid_argument("TimeGrid: horizon must be positive, got " +
                                        std::to_string(horizon));
        if (n_steps < 1)
            throw std::invalid_argument("TimeGrid: need at least 1 step");
        std::vector<double> pts(n_steps + 1);
        for (std::size_t i = 0; i <= n_steps; ++i)
            pts[i] = horizon * (static_cast<double>(i) / static_cast<double>(n_steps));
        pts[0] = 0.0;
        pts[n_steps] = horizon;
        return TimeGrid(std::move(pts));
    }

    double horizon() const { return points.back(); }
    std::size_t size() const { return points.size(); }
};

// One realisation of the process on a grid; values[i] = X(points[i]) and
// values[0] == 0 exactly (not merely to rounding).
struct SamplePath {
    TimeGrid grid;
    std::vector<double> values;

    SamplePath(TimeGrid g, std::vector<double> v)
        : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("SamplePath: values/grid size mismatch (" +
                                        std::to_string(values.size()) + " vs " +
                                        std::to_string(grid.size()) + ")");
        if (values.front() != 0.0)
            throw std::invalid_argument("SamplePath: X(0) must be exactly 0");
    }
};

}  // namespace fbm
