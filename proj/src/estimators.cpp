#include "fbm/estimators.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "fbm/covariance.hpp"
#include "fbm/parallel.hpp"
#include "fbm/path_stats.hpp"
#include "fbm/rng.hpp"

namespace fbm {

namespace {

// Sequential Welford reduction over per-sample slots; the reduction order is
// fixed by the slot index, so results do not depend on thread scheduling.
MCEstimate reduce_slots(const std::vector<double>& slots, std::size_t grid_steps,
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

double grid_sup(const std::vector<double>& values) {
    double s = values[0];
    for (double v : values) s = std::max(s, v);
    return s;
}

// Per-sample slot filler shared by all estimators.
std::vector<double> collect(const PathSource& src, std::size_t m, const RngSpec& rng,
                            const std::function<double(const SamplePath&)>& stat) {
    if (m < 1) throw std::invalid_argument("estimator: need at least 1 sample");
    std::vector<double> slots(m);
    parallel_for(m, [&](std::size_t i) {
        const SamplePath path = src.sample({rng.seed, rng.stream + i});
        slots[i] = stat(path);
    });
    return slots;
}

void require_unit_source(const PathSource& src, const char* who) {
    if (src.grid().horizon() != 1.0)
        throw std::invalid_argument(std::string(who) + ": path source must live on [0,1]");
}

}  // namespace

MCEstimate estimate_exit_prob(HurstParam h, double horizon, double barrier, std::size_t n,
                              std::size_t m, const RngSpec& rng, const PathSource* src) {
    if (horizon < 0.0) throw std::invalid_argument("estimate_exit_prob: negative horizon");
    if (horizon == 0.0) {
        // Degenerate grid {0}: every path is the single pinned point X(0) = 0.
        MCEstimate est;
        est.value = (0.0 <= barrier) ? 1.0 : 0.0;
        est.n_samples = m;
        est.grid_points = 1;
        est.seed = rng.seed;
        return est;
    }
    std::unique_ptr<PathSource> owned;
    if (!src) {
        owned = make_default_source(h, n, horizon);
        src = owned.get();
    }
    const std::vector<double> slots = collect(*src, m, rng, [&](const SamplePath& p) {
        return grid_sup(p.values) <= barrier ? 1.0 : 0.0;
    });
    return reduce_slots(slots, src->grid().size() - 1, rng.seed);
}

MCEstimate estimate_lower_tail(HurstParam h, double eps, std::size_t n, std::size_t m,
                               const RngSpec& rng, const PathSource* src) {
    if (!(eps > 0.0)) throw std::invalid_argument("estimate_lower_tail: eps must be positive");
    if (src) require_unit_source(*src, "estimate_lower_tail");
    return estimate_exit_prob(h, 1.0, eps, n, m, rng, src);
}

MCEstimate estimate_molchan_I(HurstParam h, double horizon, std::size_t n, std::size_t m,
                              const RngSpec& rng, const PathSource* src) {
    if (!(horizon > 0.0)) throw std::invalid_argument("estimate_molchan_I: horizon must be > 0");
    std::unique_ptr<PathSource> owned;
    if (!src) {
        owned = make_default_source(h, n, 1.0);
        src = owned.get();
    }
    require_unit_source(*src, "estimate_molchan_I");

    const double a = rpow(horizon, h.value);  // T^H
    const double log_t = std::log(horizon);
    const std::vector<double> w = trapezoid_weights(src->grid());
    const std::vector<double> slots = collect(*src, m, rng, [&](const SamplePath& p) {
        // (T * int_0^1 e^{a X(u)} du)^{-1}, trapezoid + log-sum-exp.
        const std::vector<double>& v = p.values;
        const double peak = a * grid_sup(v);
        double acc = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) acc += w[i] * std::exp(a * v[i] - peak);
        return std::exp(-(log_t + peak + std::log(acc)));
    });
    return reduce_slots(slots, src->grid().size() - 1, rng.seed);
}

MCEstimate estimate_laplace_g(HurstParam h, double horizon, std::size_t n, std::size_t m,
                              const RngSpec& rng, const PathSource* src) {
    if (!(horizon > 0.0)) throw std::invalid_argument("estimate_laplace_g: horizon must be > 0");
    std::unique_ptr<PathSource> owned;
    if (!src) {
        owned = make_default_source(h, n, 1.0);
        src = owned.get();
    }
    require_unit_source(*src, "estimate_laplace_g");

    const double a = rpow(horizon, h.value);
    const std::vector<double> slots = collect(*src, m, rng, [&](const SamplePath& p) {
        return std::exp(-a * grid_sup(p.values));
    });
    return reduce_slots(slots, src->grid().size() - 1, rng.seed);
}

std::vector<MCEstimate> estimate_molchan_multi(HurstParam h, const std::vector<double>& horizons,
                                               std::size_t n, std::size_t m, const RngSpec& rng,
                                               const PathSource* src) {
    std::unique_ptr<PathSource> owned;
    if (!src) {
        owned = make_default_source(h, n, 1.0);
        src = owned.get();
    }
    require_unit_source(*src, "estimate_molchan_multi");
    for (double t : horizons)
        if (!(t > 0.0))
            throw std::invalid_argument("estimate_molchan_multi: horizons must be > 0");

    const std::size_t nt = horizons.size();
    std::vector<double> a(nt), log_t(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        a[k] = rpow(horizons[k], h.value);
        log_t[k] = std::log(horizons[k]);
    }
    const std::vector<double> w = trapezoid_weights(src->grid());

    if (m < 1) throw std::invalid_argument("estimator: need at least 1 sample");
    std::vector<double> slots(m * nt);
    parallel_for(m, [&](std::size_t i) {
        const SamplePath path = src->sample({rng.seed, rng.stream + i});
        const std::vector<double>& v = path.values;
        const double sup = grid_sup(v);
        for (std::size_t k = 0; k < nt; ++k) {
            const double peak = a[k] * sup;
            double acc = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j)
                acc += w[j] * std::exp(a[k] * v[j] - peak);
            slots[i * nt + k] = std::exp(-(log_t[k] + peak + std::log(acc)));
        }
    });

    std::vector<MCEstimate> out(nt);
    std::vector<double> column(m);
    for (std::size_t k = 0; k < nt; ++k) {
        for (std::size_t i = 0; i < m; ++i) column[i] = slots[i * nt + k];
        out[k] = reduce_slots(column, src->grid().size() - 1, rng.seed);
    }
    return out;
}

CoupledSupTables coupled_sup_tables(HurstParam h, const std::vector<double>& horizons,
                                    double barrier, std::size_t finest, std::size_t n_levels,
                                    std::size_t m, const RngSpec& rng, bool with_laplace) {
    if (horizons.empty()) throw std::invalid_argument("coupled_sup_tables: no horizons");
    if (n_levels < 1 || (std::size_t(1) << (n_levels - 1)) > finest)
        throw std::invalid_argument("coupled_sup_tables: invalid level count");
    if (m < 1) throw std::invalid_argument("coupled_sup_tables: need at least 1 sample");
    for (double t : horizons)
        if (!(t > 0.0)) throw std::invalid_argument("coupled_sup_tables: horizons must be > 0");

    CoupledSupTables out;
    out.grid_steps.resize(n_levels);
    for (std::size_t l = 0; l < n_levels; ++l)
        out.grid_steps[l] = finest >> (n_levels - 1 - l);

    const CirculantSampler sampler(h, finest, 1.0);

    // Per-sample grid-sups on each dyadic subgrid (coarse -> fine, shared
    // paths).  Everything downstream is a pure function of this matrix.
    std::vector<double> sups(m * n_levels);
    parallel_for(m, [&](std::size_t i) {
        const SamplePath path = sampler.sample({rng.seed, rng.stream + i});
        const std::vector<double>& v = path.values;
        for (std::size_t l = 0; l < n_levels; ++l) {
            const std::size_t stride = std::size_t(1) << (n_levels - 1 - l);
            double s = v[0];
            for (std::size_t j = 0; j < finest + 1; j += stride) s = std::max(s, v[j]);
            sups[i * n_levels + l] = s;
        }
    });

    // stat(sup) per horizon: exit indicator and optionally the Laplace value.
    auto build_table = [&](double horizon, const std::function<double(double)>& stat) {
        LevelTable table;
        table.horizon = horizon;
        std::vector<double> column(m);
        std::vector<RefineLevel> rl(n_levels);
        for (std::size_t l = 0; l < n_levels; ++l) {
            for (std::size_t i = 0; i < m; ++i) column[i] = stat(sups[i * n_levels + l]);
            MCEstimate est = reduce_slots(column, out.grid_steps[l], rng.seed);
            rl[l] = {out.grid_steps[l], est.value, est.std_err};
            table.levels.push_back(est);
        }
        table.fit = refine_extrapolate(rl);
        // Exact stderr of the extrapolated combination: apply the fitted
        // level weights per sample and take the spread of that statistic.
        for (std::size_t i = 0; i < m; ++i) {
            double xi = 0.0;
            for (std::size_t l = 0; l < n_levels; ++l)
                xi += table.fit.weights[l] * stat(sups[i * n_levels + l]);
            column[i] = xi;
        }
        table.combined = reduce_slots(column, finest, rng.seed);
        return table;
    };

    for (double horizon : horizons) {
        const double a = rpow(horizon, h.value);  // T^H
        const double threshold = barrier / a;
        out.exit.push_back(build_table(
            horizon, [threshold](double sup) { return sup <= threshold ? 1.0 : 0.0; }));
        if (with_laplace)
            out.laplace.push_back(
                build_table(horizon, [a](double sup) { return std::exp(-a * sup); }));
    }
    return out;
}

}  // namespace fbm
