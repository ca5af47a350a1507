#pragma once

// Per-sample deterministic verification of the crucial inequality chain, the
// drift lower bound, and the Slepian factorization test.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "fbm/drift.hpp"
#include "fbm/estimators.hpp"
#include "fbm/samplers.hpp"
#include "fbm/types.hpp"

namespace fbm {

// Outcome of a per-sample deterministic suite: `violations` counts samples
// where some asserted inequality fails beyond 1e-9 relative; the worst margin
// and the stream index of its sample are kept so a failure can be replayed.
struct ChainReport {
    std::size_t n_samples = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;
    double hurst = 0.0;
    double horizon = 0.0;
    double gamma = 0.0;  // the chain's gamma; reused for kappa in drift reports
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> witness_stream;  // sample holding worst_margin
    std::string note;
};

// For each sampled unit-horizon path (self-similarity maps it to [0, T]):
// S = holder_modulus(path, gamma), eps = (T^H S)^{-1/gamma} /\ 1, and the
// three deterministic assertions
//   (1) T^H S eps^gamma <= 1,
//   (2) eps^{-1} <= (T^H S)^{1/gamma} + 1,
//   (3) sum over the grid window |u - u*| <= eps of w_u e^{T^H(X(u) - X*)}
//         >= (realized window measure) x e^{-T^H S eps^gamma},
// where u* is the (earliest) grid argmax and w are the window's trapezoid
// weights.  (3) is the I-integrand bound of the crucial chain with the
// window length taken as the realized grid measure.  gamma must lie in
// (H/2, H) strictly.
ChainReport check_crucial_chain(HurstParam h, double horizon, double gamma, std::size_t n,
                                std::size_t m, const RngSpec& rng,
                                const PathSource* src = nullptr);

// True iff values[i] <= barrier(t_i) at every grid point.
bool barrier_stays_below(const SamplePath& path, const std::function<double(double)>& barrier);

// check_drift_lower_bound's return: the per-sample domination verdicts in
// `chain` plus the shared-sample aggregate and the closed-form integral bound.
struct DriftBoundReport {
    ChainReport chain;           // gamma slot carries kappa
    double i_hat = 0.0;          // mean of (int_0^T e^X)^{-1} over the run
    double p_below = 0.0;        // fraction of paths staying below phi
    double log_phi_integral = 0.0;  // log int_0^T e^phi (trapezoid, same grid)
    double aggregate_margin = 0.0;  // relative margin of i_hat >= p_below e^{-log_phi_integral}
    bool aggregate_holds = false;
    PhiIntegralBound analytic;   // e A + (T-A)T^{-kappa} <= 2 e A
};

// Per sample: if the path stays below phi at every grid node then the
// trapezoid of e^X is dominated by the trapezoid of e^phi on the identical
// grid (termwise, so exactly), i.e. (int e^X)^{-1} >= (int e^phi)^{-1}.
// Aggregated over shared samples this is I^(T) >= P^(below) (int e^phi)^{-1}.
DriftBoundReport check_drift_lower_bound(HurstParam h, double horizon, double kappa,
                                         std::size_t n, std::size_t m, const RngSpec& rng,
                                         const PathSource* src = nullptr);

// Slepian factorization P(A cap B) >= P(A)P(B) tested one-sidedly at three
// standard errors, with A = {sup_{[0,split]} X <= 1} and
// B = {sup_{[split,T]} X <= 1} on shared samples.  For H >= 1/2 the
// increment decomposition A' = {sup_{[split,T]}(X(t) - X(split)) <= 1},
// B' = {X(split) <= -2} is additionally tested (its components are
// nonnegatively correlated exactly when H >= 1/2).
struct SlepianReport {
    MCEstimate joint;   // P(A cap B)
    MCEstimate first;   // P(A)
    MCEstimate second;  // P(B)
    double product = 0.0;
    double diff = 0.0;         // P(A cap B) - P(A)P(B)
    double diff_stderr = 0.0;  // influence-function standard error of diff
    bool passed = false;       // diff >= -3 diff_stderr
    bool low_power = false;    // 3 diff_stderr > 0.1 P(A)P(B): gap unresolvable
    bool increment_variant_run = false;
    double inc_diff = 0.0;
    double inc_diff_stderr = 0.0;
    bool inc_passed = false;
};

// split must coincide with a grid point of the n-step horizon grid.
SlepianReport slepian_factorization_check(HurstParam h, double horizon, double split,
                                          std::size_t m, const RngSpec& rng,
                                          std::size_t n = std::size_t{1} << 12,
                                          const PathSource* src = nullptr);

}  // namespace fbm
