#pragma once

// The explicit drift/barrier functions of the lower-bound argument and the
// report type shared by every deterministic inequality check.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbm/covariance.hpp"
#include "fbm/types.hpp"

namespace fbm {

// Parameters of the piecewise barrier phi: phi(t) = 1 below the changepoint
// (kappa log T)^{1/H}, and -kappa log T from the changepoint on.  kappa > 1
// strictly (the integral bound fails otherwise); horizon > 1 so that log T
// is positive and the changepoint is defined.
struct DriftSpec {
    double kappa;
    double horizon;
    HurstParam h;

    DriftSpec(double kappa_, double horizon_, HurstParam h_)
        : kappa(kappa_), horizon(horizon_), h(h_) {
        if (!(kappa > 1.0))
            throw std::invalid_argument("DriftSpec: kappa must be > 1 strictly, got " +
                                        std::to_string(kappa_));
        if (!(horizon > 1.0))
            throw std::invalid_argument(
                "DriftSpec: horizon must exceed 1 (the changepoint (kappa log T)^{1/H} "
                "requires log T > 0), got " +
                std::to_string(horizon_));
    }

    // (kappa log T)^{1/H}, the barrier changepoint.
    double changepoint() const { return rpow(kappa * std::log(horizon), 1.0 / h.value); }
};

// Loglog scale parameter of ell(t) = 2 (log log(t e^e))^lambda; lambda = 1/4
// is the value the comparison lemma uses.
struct LogLogScale {
    double lambda = 0.25;

    LogLogScale() = default;
    explicit LogLogScale(double lam) : lambda(lam) {
        if (!(lam > 0.0))
            throw std::invalid_argument("LogLogScale: lambda must be positive, got " +
                                        std::to_string(lam));
    }
};

// Outcome of one deterministic inequality evaluation (or sweep).  Margins are
// relative: raw margin divided by the larger absolute side, so `passed` is
// exactly `worst_margin >= -1e-9`.  `out_of_domain` marks points where a
// radicand/denominator/branch precondition failed; those carry no meaningful
// margin and are never counted as violations.
struct IneqReport {
    bool passed = false;
    bool out_of_domain = false;
    double worst_margin = 0.0;
    std::vector<double> witness;  // parameter tuple of the worst point
    std::string grid_spec;
    std::string note;
};

constexpr double kIneqTol = 1e-9;

// Relative margin of lhs >= rhs, scaled by the larger absolute side.
inline double rel_margin(double lhs, double rhs) {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale == 0.0) return 0.0;
    return (lhs - rhs) / scale;
}

inline IneqReport point_report(double margin, std::vector<double> witness, std::string note = "") {
    IneqReport rep;
    rep.passed = margin >= -kIneqTol;
    rep.worst_margin = margin;
    rep.witness = std::move(witness);
    rep.grid_spec = "point";
    rep.note = std::move(note);
    return rep;
}

inline IneqReport domain_report(std::vector<double> witness, std::string note) {
    IneqReport rep;
    rep.passed = false;
    rep.out_of_domain = true;
    rep.worst_margin = 0.0;
    rep.witness = std::move(witness);
    rep.grid_spec = "point";
    rep.note = std::move(note);
    return rep;
}

// phi(t): 1 before the changepoint, -kappa log T from it on (the boundary
// point takes the lower branch, which shrinks the stay-below event and so
// only strengthens every inequality derived from it).
inline double phi(double t, const DriftSpec& spec) {
    if (t < 0.0 || t > spec.horizon)
        throw std::domain_error("phi: t must lie in [0, horizon], got " + std::to_string(t));
    return t < spec.changepoint() ? 1.0 : -spec.kappa * std::log(spec.horizon);
}

// Closed-form check of int_0^T e^phi = e A + (T - A) T^{-kappa} <= 2 e A with
// A the changepoint.  `holds` compares the closed forms as printed; the
// precondition A <= T (under which the closed form equals the integral) is
// reported separately, not asserted.
struct PhiIntegralBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    bool precondition_ok = false;  // changepoint <= horizon
};

inline PhiIntegralBound phi_integral_bound(const DriftSpec& spec) {
    PhiIntegralBound out;
    const double a = spec.changepoint();
    const double t = spec.horizon;
    out.precondition_ok = a <= t;
    const double e = std::exp(1.0);
    out.lhs = e * a + (t - a) * rpow(t, -spec.kappa);
    out.rhs = 2.0 * e * a;
    out.holds = out.lhs <= out.rhs;
    return out;
}

// tilde_phi(t) = 1 - kappa log_+ t.
inline double tilde_phi(double t, double kappa) {
    if (t < 0.0) throw std::domain_error("tilde_phi: t must be nonnegative");
    return t <= 1.0 ? 1.0 : 1.0 - kappa * std::log(t);
}

}  // namespace fbm
