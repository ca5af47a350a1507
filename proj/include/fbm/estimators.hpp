#pragma once

// Monte Carlo estimators for the exit probability F(T), the lower-tail
// probability P(X*_1 <= eps), the Molchan functional I(T), and the Laplace
// functional g(T), plus the coupled multi-resolution runner used for
// extrapolated estimates.
//
// Every estimator draws sample i from (rng.seed, rng.stream + i), accumulates
// per-sample statistics into preallocated slots, and reduces sequentially, so
// results are bit-stable across thread counts.

#include <cstdint>
#include <vector>

#include "fbm/fitting.hpp"
#include "fbm/samplers.hpp"
#include "fbm/types.hpp"

namespace fbm {

struct MCEstimate {
    double value = 0.0;
    double std_err = 0.0;  // sample standard deviation / sqrt(n_samples)
    std::size_t n_samples = 0;
    std::size_t grid_points = 0;  // uniform steps (grid size excluding t=0)
    std::uint64_t seed = 0;
};

// P(grid-sup of X on [0,horizon] <= barrier).  Grid-sup <= true sup, so this
// estimates F upward-biased; callers extrapolate over grid refinements.
// horizon == 0 is the degenerate single-point grid {0}: the value is exactly
// 1{0 <= barrier} with zero variance.  When `src` is given it supplies both
// grid and law (n is ignored); it must live on [0, horizon].
MCEstimate estimate_exit_prob(HurstParam h, double horizon, double barrier, std::size_t n,
                              std::size_t m, const RngSpec& rng,
                              const PathSource* src = nullptr);

// P(X*_1 <= eps) = exit probability on horizon 1 with barrier eps.
MCEstimate estimate_lower_tail(HurstParam h, double eps, std::size_t n, std::size_t m,
                               const RngSpec& rng, const PathSource* src = nullptr);

// I(T) = E[(T * int_0^1 e^{T^H X(u)} du)^{-1}] by self-similarity, trapezoid
// rule on a unit-horizon grid, evaluated through log-sum-exp.  An injected
// source must live on [0,1].
MCEstimate estimate_molchan_I(HurstParam h, double horizon, std::size_t n, std::size_t m,
                              const RngSpec& rng, const PathSource* src = nullptr);

// g(T) = E[e^{-T^H X*_1}] with X*_1 the grid-sup of a unit-horizon path.
MCEstimate estimate_laplace_g(HurstParam h, double horizon, std::size_t n, std::size_t m,
                              const RngSpec& rng, const PathSource* src = nullptr);

// Molchan estimates for several horizons from one shared set of unit-horizon
// paths (estimates across horizons are correlated; each is unbiased).
std::vector<MCEstimate> estimate_molchan_multi(HurstParam h, const std::vector<double>& horizons,
                                               std::size_t n, std::size_t m, const RngSpec& rng,
                                               const PathSource* src = nullptr);

// ---- coupled multi-resolution estimates -----------------------------------

// Per-horizon refinement table: level estimates on nested dyadic subgrids of
// one shared set of finest-grid paths, the refine_extrapolate fit over them,
// and the combined estimate.  Because levels share samples, the combined
// stderr is computed exactly from the per-sample weighted statistic rather
// than from the (conservative) independent-level propagation.
struct LevelTable {
    double horizon = 0.0;
    std::vector<MCEstimate> levels;  // coarse -> fine
    RefineResult fit;
    MCEstimate combined;
};

struct CoupledSupTables {
    std::vector<std::size_t> grid_steps;  // per level, coarse -> fine
    std::vector<LevelTable> exit;         // one per horizon
    std::vector<LevelTable> laplace;      // one per horizon; empty unless requested
};

// Samples m unit-horizon paths once at `finest` steps (power of two) and
// evaluates, for every horizon T and every dyadic level, the exit indicator
// {sup <= barrier * T^-H} and optionally the Laplace statistic e^{-T^H sup}.
// Equivalent in law to sampling [0, T] at each grid separately, by
// self-similarity; far cheaper, and level differences are measured on shared
// paths which makes the extrapolation statistically stable.
CoupledSupTables coupled_sup_tables(HurstParam h, const std::vector<double>& horizons,
                                    double barrier, std::size_t finest, std::size_t n_levels,
                                    std::size_t m, const RngSpec& rng, bool with_laplace);

}  // namespace fbm
