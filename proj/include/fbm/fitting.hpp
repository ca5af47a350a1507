#pragma once

// Survival-exponent fitting from (T, estimate) decay tables and grid
// refinement extrapolation for sup-discretization bias control.

#include <cstdint>
#include <optional>
#include <vector>

#include "fbm/types.hpp"

namespace fbm {

struct DecayRow {
    double horizon;
    double estimate;
    double std_err;
    std::size_t grid_points;
};

// Rows of (T, estimate, stderr, grid): T strictly increasing, estimates in
// (0,1], at least 3 rows.  Validated on construction.
struct DecayTable {
    std::vector<DecayRow> rows;
    explicit DecayTable(std::vector<DecayRow> r);
};

struct FitResult {
    double theta = 0.0;         // -slope of log(estimate) vs log T
    double theta_stderr = 0.0;
    std::optional<double> log_correction;  // -coefficient of log log T if fitted
    double log_correction_stderr = 0.0;
    double intercept = 0.0;
    double residual_norm = 0.0;  // unweighted l2 norm of log-space residuals
    double condition_number = 0.0;
    bool collinear = false;      // condition number of the design exceeded 1e6
};

// Weighted least squares of log(estimate) on [1, log T]; weights are inverse
// squared relative stderr (the model is multiplicative).  Rows with zero
// stderr get weight from a 1e-12 relative floor; an all-exact table is fit
// unweighted.
FitResult fit_power_law(const DecayTable& table);

// Two-regressor model log F = intercept - theta log T - c log log T.
// Requires >= 4 rows and T >= e^2 throughout.  Flags collinearity when the
// weighted design's condition number exceeds 1e6 (expected at desk scale).
FitResult fit_with_log_correction(const DecayTable& table);

struct RefineLevel {
    std::size_t grid_points;
    double value;
    double std_err;  // 0 means exact (monotonicity checked strictly)
};

struct RefineResult {
    double value = 0.0;    // extrapolated v_inf
    double std_err = 0.0;  // propagated assuming independent levels (conservative)
    double p = 0.0;        // fitted decay rate of the bias term, in [0.2, 1.5]
    double b = 0.0;        // fitted bias amplitude: v(n) ~ v_inf + b n^{-p}
    bool bias_resolved = false;
    std::vector<double> weights;  // value == sum(weights[i] * level[i].value)
};

// Fits value(n) = v_inf + b n^{-p} over >= 3 doubling refinement levels with
// p free in [0.2, 1.5] and returns v_inf.  Values must be non-increasing in n
// up to 2*(stderr_i + stderr_{i+1}) slack (exit probabilities decrease as the
// grid refines); otherwise the finest value is returned with
// bias_resolved = false.
RefineResult refine_extrapolate(std::vector<RefineLevel> levels);

}  // namespace fbm
