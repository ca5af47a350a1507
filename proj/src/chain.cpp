#include "fbm/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fbm/covariance.hpp"
#include "fbm/parallel.hpp"
#include "fbm/path_stats.hpp"

namespace fbm {

namespace {

constexpr double kNoAssertion = std::numeric_limits<double>::infinity();

// Same sequential Welford reduction the estimators use (fixed slot order, so
// results are independent of thread scheduling).
MCEstimate reduce_column(const std::vector<double>& slots, std::size_t grid_steps,
                         std::uint64_t seed) {
    double mean = 0.0, m2 = 0.0;
    std::size_t count = 0;
    for (double v : slots) {
        ++count;
        const double d = v - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (v - mean);
    }
    MCEstimate est;
    est.value = mean;
    est.n_samples = count;
    est.grid_points = grid_steps;
    est.seed = seed;
    est.std_err = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1) /
                                        static_cast<double>(count))
                            : 0.0;
    return est;
}

// Fold per-sample margins (kNoAssertion = nothing asserted for that sample)
// into violation count / worst margin / witness stream.
void fold_margins(ChainReport& report, const std::vector<double>& margins,
                  const RngSpec& rng) {
    report.n_samples = margins.size();
    double worst = kNoAssertion;
    std::size_t worst_at = 0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        if (margins[i] == kNoAssertion) continue;
        if (margins[i] < -kIneqTol) ++report.violations;
        if (margins[i] < worst) {
            worst = margins[i];
            worst_at = i;
        }
    }
    if (worst == kNoAssertion) {
        report.worst_margin = 0.0;
        report.note = "no sample triggered the per-sample assertion";
    } else {
        report.worst_margin = worst;
        report.witness_stream = rng.stream + worst_at;
    }
}

}  // namespace

ChainReport check_crucial_chain(HurstParam h, double horizon, double gamma, std::size_t n,
                                std::size_t m, const RngSpec& rng, const PathSource* src) {
    if (!(gamma > h.value / 2.0) || !(gamma < h.value))
        throw std::invalid_argument("check_crucial_chain: gamma must lie in (H/2, H)");
    if (!(horizon > 0.0))
        throw std::invalid_argument("check_crucial_chain: horizon must be > 0");
    if (m < 1) throw std::invalid_argument("check_crucial_chain: need at least 1 sample");

    std::unique_ptr<PathSource> owned;
    if (!src) {
        owned = make_default_source(h, n, 1.0);
        src = owned.get();
    }
    if (src->grid().horizon() != 1.0)
        throw std::invalid_argument("check_crucial_chain: path source must live on [0,1]");

    const double a = rpow(horizon, h.value);  // T^H
    const std::vector<double>& t = src->grid().points;
    const std::size_t grid_n = t.size();

    std::vector<double> margins(m);
    parallel_for(m, [&](std::size_t idx) {
        const SamplePath path = src->sample({rng.seed, rng.stream + idx});
        const std::vector<double>& v = path.values;

        const double s_mod = holder_modulus(path, gamma);
        const double as = a * s_mod;
        const double eps = s_mod == 0.0 ? 1.0 : std::min(rpow(as, -1.0 / gamma), 1.0);
        const double exponent = as * rpow(eps, gamma);  // T^H S eps^gamma

        // (1) T^H S eps^gamma <= 1 (absolute margin; the scale is 1).
        const double margin1 = 1.0 - exponent;
        // (2) eps^{-1} <= (T^H S)^{1/gamma} + 1.
        const double margin2 = rel_margin(rpow(as, 1.0 / gamma) + 1.0, 1.0 / eps);

        // (3) window bound.  For grid nodes with |u - u*| <= eps the Hölder
        // modulus gives X(u*) - X(u) <= S eps^gamma termwise, so with shared
        // trapezoid weights the sum dominates W e^{-T^H S eps^gamma} exactly.
        const std::size_t star = argmax_index(v);
        const double t_star = t[star];
        std::size_t lo = star, hi = star;
        while (lo > 0 && t_star - t[lo - 1] <= eps) --lo;
        while (hi + 1 < grid_n && t[hi + 1] - t_star <= eps) ++hi;

        double margin3 = 0.0;
        if (hi > lo) {
            double lhs = 0.0;
            const double w_sum = t[hi] - t[lo];  // realized window measure
            for (std::size_t j = lo; j <= hi; ++j) {
                double w = 0.0;
                if (j > lo) w += 0.5 * (t[j] - t[j - 1]);
                if (j < hi) w += 0.5 * (t[j + 1] - t[j]);
                lhs += w * std::exp(a * (v[j] - v[star]));
            }
            margin3 = (lhs - w_sum * std::exp(-exponent)) / w_sum;
        }
        // hi == lo: the window contains only the argmax node and the realized
        // grid measure is zero -- both sides vanish and nothing is asserted.

        margins[idx] = std::min({margin1, margin2, margin3});
    });

    ChainReport report;
    report.hurst = h.value;
    report.horizon = horizon;
    report.gamma = gamma;
    report.seed = rng.seed;
    fold_margins(report, margins, rng);
    return report;
}

bool barrier_stays_below(const SamplePath& path, const std::function<double(double)>& barrier) {
    for (std::size_t i = 0; i < path.values.size(); ++i)
        if (path.values[i] > barrier(path.grid.points[i])) return false;
    return true;
}

DriftBoundReport check_drift_lower_bound(HurstParam h, double horizon, double kappa,
                                         std::size_t n, std::size_t m, const RngSpec& rng,
                                         const PathSource* src) {
    const DriftSpec spec(kappa, horizon, h);
    if (m < 1) throw std::invalid_argument("check_drift_lower_bound: need at least 1 sample");

    std::unique_ptr<PathSource> owned;
    if (!src) {
        owned = make_default_source(h, n, 1.0);
        src = owned.get();
    }
    if (src->grid().horizon() != 1.0)
        throw std::invalid_argument("check_drift_lower_bound: path source must live on [0,1]");

    const double a = rpow(horizon, h.value);  // T^H: X_T(T u) = T^H X(u) in law
    const double log_t = std::log(horizon);
    const std::vector<double>& u = src->grid().points;
    const std::vector<double> w = trapezoid_weights(src->grid());

    // phi sampled at the image grid T u_i; log int_0^T e^phi by the identical
    // trapezoid rule, so the per-sample domination is termwise.
    std::vector<double> phi_at(u.size());
    double phi_acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        phi_at[i] = phi(horizon * u[i], spec);
        phi_acc += w[i] * std::exp(phi_at[i]);
    }
    const double log_phi_integral = log_t + std::log(phi_acc);

    std::vector<double> margins(m);
    std::vector<double> inv_integrals(m);
    std::vector<double> below(m);
    parallel_for(m, [&](std::size_t idx) {
        const SamplePath path = src->sample({rng.seed, rng.stream + idx});
        const std::vector<double>& v = path.values;

        double peak = a * v[0];
        for (double x : v) peak = std::max(peak, a * x);
        double acc = 0.0;
        bool stays_below = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            acc += w[i] * std::exp(a * v[i] - peak);
            if (a * v[i] > phi_at[i]) stays_below = false;
        }
        const double log_x_integral = log_t + peak + std::log(acc);
        inv_integrals[idx] = std::exp(-log_x_integral);
        below[idx] = stays_below ? 1.0 : 0.0;
        margins[idx] =
            stays_below ? rel_margin(log_phi_integral, log_x_integral) : kNoAssertion;
    });

    DriftBoundReport out;
    out.chain.hurst = h.value;
    out.chain.horizon = horizon;
    out.chain.gamma = kappa;
    out.chain.seed = rng.seed;
    fold_margins(out.chain, margins, rng);

    out.i_hat = reduce_column(inv_integrals, src->grid().size() - 1, rng.seed).value;
    out.p_below = reduce_column(below, src->grid().size() - 1, rng.seed).value;
    out.log_phi_integral = log_phi_integral;
    const double rhs = out.p_below * std::exp(-log_phi_integral);
    out.aggregate_margin = rel_margin(out.i_hat, rhs);
    out.aggregate_holds = out.aggregate_margin >= -kIneqTol;
    out.analytic = phi_integral_bound(spec);
    return out;
}

SlepianReport slepian_factorization_check(HurstParam h, double horizon, double split,
                                          std::size_t m, const RngSpec& rng, std::size_t n,
                                          const PathSource* src) {
    if (!(split > 0.0) || !(split < horizon))
        throw std::invalid_argument("slepian_factorization_check: need 0 < split < horizon");
    if (m < 2) throw std::invalid_argument("slepian_factorization_check: need >= 2 samples");

    std::unique_ptr<PathSource> owned;
    if (!src) {
        owned = make_default_source(h, n, 1.0);
        src = owned.get();
    }
    if (src->grid().horizon() != 1.0)
        throw std::invalid_argument("slepian_factorization_check: path source must live on [0,1]");

    const std::vector<double>& u = src->grid().points;
    const std::size_t grid_n = u.size();
    std::size_t i_split = grid_n;
    for (std::size_t i = 0; i < grid_n; ++i)
        if (std::abs(u[i] * horizon - split) <= 1e-9 * horizon) {
            i_split = i;
            break;
        }
    if (i_split == grid_n)
        throw std::invalid_argument(
            "slepian_factorization_check: split must lie on the sampling grid");

    const double a = rpow(horizon, h.value);
    const bool with_increments = h.value >= 0.5;

    std::vector<double> ind_a(m), ind_b(m), ind_ai(m), ind_bi(m);
    parallel_for(m, [&](std::size_t idx) {
        const SamplePath path = src->sample({rng.seed, rng.stream + idx});
        const std::vector<double>& v = path.values;

        double sup_left = v[0];
        for (std::size_t i = 0; i <= i_split; ++i) sup_left = std::max(sup_left, v[i]);
        double sup_right = v[i_split];
        double sup_right_inc = 0.0;  // sup of X(t) - X(split), attained at t = split
        for (std::size_t i = i_split; i < grid_n; ++i) {
            sup_right = std::max(sup_right, v[i]);
            sup_right_inc = std::max(sup_right_inc, v[i] - v[i_split]);
        }

        ind_a[idx] = a * sup_left <= 1.0 ? 1.0 : 0.0;
        ind_b[idx] = a * sup_right <= 1.0 ? 1.0 : 0.0;
        ind_ai[idx] = a * sup_right_inc <= 1.0 ? 1.0 : 0.0;
        ind_bi[idx] = a * v[i_split] <= -2.0 ? 1.0 : 0.0;
    });

    const std::size_t steps = grid_n - 1;
    SlepianReport out;
    out.first = reduce_column(ind_a, steps, rng.seed);
    out.second = reduce_column(ind_b, steps, rng.seed);

    std::vector<double> joint(m);
    for (std::size_t i = 0; i < m; ++i) joint[i] = ind_a[i] * ind_b[i];
    out.joint = reduce_column(joint, steps, rng.seed);

    // Influence function of D = p_ab - p_a p_b; its sample spread gives the
    // standard error of the plug-in difference without an independence
    // assumption between the three indicator estimates.
    const auto diff_stderr = [m](const std::vector<double>& xa, const std::vector<double>& xb,
                                 double p_a, double p_b, double p_ab) {
        double mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double psi = (xa[i] * xb[i] - p_ab) - p_b * (xa[i] - p_a) -
                               p_a * (xb[i] - p_b);
            const double d = psi - mean;
            mean += d / static_cast<double>(i + 1);
            m2 += d * (psi - mean);
        }
        return std::sqrt(m2 / static_cast<double>(m - 1) / static_cast<double>(m));
    };

    out.product = out.first.value * out.second.value;
    out.diff = out.joint.value - out.product;
    out.diff_stderr = diff_stderr(ind_a, ind_b, out.first.value, out.second.value,
                                  out.joint.value);
    out.passed = out.diff >= -3.0 * out.diff_stderr;
    out.low_power = 3.0 * out.diff_stderr > 0.1 * out.product;

    if (with_increments) {
        out.increment_variant_run = true;
        double p_ai = 0.0, p_bi = 0.0, p_abi = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            p_ai += ind_ai[i];
            p_bi += ind_bi[i];
            p_abi += ind_ai[i] * ind_bi[i];
        }
        p_ai /= static_cast<double>(m);
        p_bi /= static_cast<double>(m);
        p_abi /= static_cast<double>(m);
        out.inc_diff = p_abi - p_ai * p_bi;
        out.inc_diff_stderr = diff_stderr(ind_ai, ind_bi, p_ai, p_bi, p_abi);
        out.inc_passed = out.inc_diff >= -3.0 * out.inc_diff_stderr;
    }
    return out;
}

}  // namespace fbm
