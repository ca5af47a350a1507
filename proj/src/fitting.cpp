#include "fbm/fitting.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fbm/covariance.hpp"

namespace fbm {

namespace {

constexpr double kRelStderrFloor = 1e-12;
constexpr double kCollinearThreshold = 1e6;

// Weighted least squares of log(estimate) on the given regressor columns.
// Weights are inverse squared relative stderr (the stderr of log estimate),
// so the coefficient covariance is (X^T W X)^{-1} directly.
FitResult wls_log_fit(const DecayTable& table,
                      const std::vector<std::vector<double>>& regressors) {
    const std::size_t n = table.rows.size();
    const std::size_t k = regressors.size() + 1;

    Matrix design(n, k);
    Matrix weighted(n, k);
    Vector y(n), wy(n);
    for (std::size_t i = 0; i < n; ++i) {
        const DecayRow& row = table.rows[i];
        const double rel = std::max(row.std_err / row.estimate, kRelStderrFloor);
        const double sw = 1.0 / rel;  // sqrt of the weight
        design(i, 0) = 1.0;
        for (std::size_t j = 0; j < regressors.size(); ++j)
            design(i, j + 1) = regressors[j][i];
        y(i) = std::log(row.estimate);
        weighted.row(i) = sw * design.row(i);
        wy(i) = sw * y(i);
    }

    const Eigen::JacobiSVD<Matrix> svd(weighted, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector beta = svd.solve(wy);
    const Matrix cov = (weighted.transpose() * weighted).inverse();

    FitResult fit;
    fit.intercept = beta(0);
    fit.theta = -beta(1);
    fit.theta_stderr = std::sqrt(std::max(cov(1, 1), 0.0));
    if (k > 2) {
        fit.log_correction = -beta(2);
        fit.log_correction_stderr = std::sqrt(std::max(cov(2, 2), 0.0));
    }
    fit.residual_norm = (y - design * beta).norm();
    const double smin = svd.singularValues()(k - 1);
    fit.condition_number =
        smin > 0.0 ? svd.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
    fit.collinear = fit.condition_number > kCollinearThreshold;
    return fit;
}

}  // namespace

DecayTable::DecayTable(std::vector<DecayRow> r) : rows(std::move(r)) {
    if (rows.size() < 3)
        throw std::invalid_argument("DecayTable: at least 3 rows required for any fit");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].horizon > 0.0))
            throw std::invalid_argument("DecayTable: horizons must be positive");
        if (i > 0 && !(rows[i].horizon > rows[i - 1].horizon))
            throw std::invalid_argument("DecayTable: horizons must be strictly increasing");
        if (!(rows[i].estimate > 0.0) || !(rows[i].estimate <= 1.0))
            throw std::invalid_argument("DecayTable: estimates must lie in (0,1]");
        if (!(rows[i].std_err >= 0.0))
            throw std::invalid_argument("DecayTable: stderr must be nonnegative");
    }
}

FitResult fit_power_law(const DecayTable& table) {
    std::vector<double> log_t(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        log_t[i] = std::log(table.rows[i].horizon);
    return wls_log_fit(table, {log_t});
}

FitResult fit_with_log_correction(const DecayTable& table) {
    if (table.rows.size() < 4)
        throw std::invalid_argument("fit_with_log_correction: at least 4 rows required");
    std::vector<double> log_t(table.rows.size()), loglog_t(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const double lt = std::log(table.rows[i].horizon);
        if (!(lt >= 2.0))
            throw std::invalid_argument(
                "fit_with_log_correction: horizons must be >= e^2 so log log T stays positive");
        log_t[i] = lt;
        loglog_t[i] = std::log(lt);
    }
    return wls_log_fit(table, {log_t, loglog_t});
}

RefineResult refine_extrapolate(std::vector<RefineLevel> levels) {
    if (levels.size() < 3)
        throw std::invalid_argument("refine_extrapolate: at least 3 refinement levels required");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].grid_points < 2)
            throw std::invalid_argument("refine_extrapolate: grid_points must be >= 2");
        if (i > 0 && levels[i].grid_points <= levels[i - 1].grid_points)
            throw std::invalid_argument(
                "refine_extrapolate: grid_points must be strictly increasing");
        if (!(levels[i].std_err >= 0.0))
            throw std::invalid_argument("refine_extrapolate: stderr must be nonnegative");
    }
    const std::size_t n = levels.size();

    // Non-increasing up to 2x the joint stderr slack; violation means the
    // bias is not resolved at this sample size and the finest value stands.
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (levels[i + 1].value >
            levels[i].value + 2.0 * (levels[i].std_err + levels[i + 1].std_err))
            monotone = false;

    RefineResult out;
    out.weights.assign(n, 0.0);
    if (!monotone) {
        out.value = levels.back().value;
        out.std_err = levels.back().std_err;
        out.bias_resolved = false;
        out.weights.back() = 1.0;
        return out;
    }

    // Grid search the bias rate p; for each p the (v_inf, b) fit is linear.
    double scale = 0.0;
    for (const RefineLevel& l : levels) scale = std::max(scale, std::abs(l.value));
    const double floor2 =
        scale > 0.0 ? (kRelStderrFloor * scale) * (kRelStderrFloor * scale) : kRelStderrFloor;

    double best_ssr = std::numeric_limits<double>::infinity();
    for (int pi = 20; pi <= 150; ++pi) {
        const double p = static_cast<double>(pi) / 100.0;
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, sy = 0.0, sxy = 0.0;
        for (const RefineLevel& l : levels) {
            const double x = rpow(static_cast<double>(l.grid_points), -p);
            const double w = 1.0 / (l.std_err * l.std_err + floor2);
            s0 += w;
            s1 += w * x;
            s2 += w * x * x;
            sy += w * l.value;
            sxy += w * x * l.value;
        }
        const double det = s0 * s2 - s1 * s1;
        if (!(det > 0.0)) continue;
        const double v_inf = (s2 * sy - s1 * sxy) / det;
        const double b = (s0 * sxy - s1 * sy) / det;
        double ssr = 0.0;
        for (const RefineLevel& l : levels) {
            const double x = rpow(static_cast<double>(l.grid_points), -p);
            const double w = 1.0 / (l.std_err * l.std_err + floor2);
            const double r = l.value - v_inf - b * x;
            ssr += w * r * r;
        }
        if (ssr < best_ssr) {
            best_ssr = ssr;
            out.value = v_inf;
            out.b = b;
            out.p = p;
            // v_inf as a linear combination of the level values: the weights
            // follow from the closed-form normal equations.
            for (std::size_t i = 0; i < n; ++i) {
                const double x = rpow(static_cast<double>(levels[i].grid_points), -p);
                const double w = 1.0 / (levels[i].std_err * levels[i].std_err + floor2);
                out.weights[i] = w * (s2 - s1 * x) / det;
            }
        }
    }
    if (!std::isfinite(best_ssr)) {  // cannot happen for validated input
        out.value = levels.back().value;
        out.std_err = levels.back().std_err;
        out.bias_resolved = false;
        out.weights.assign(n, 0.0);
        out.weights.back() = 1.0;
        return out;
    }

    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        var += out.weights[i] * out.weights[i] * levels[i].std_err * levels[i].std_err;
    out.std_err = std::sqrt(var);
    out.bias_resolved = true;
    return out;
}

}  // namespace fbm
