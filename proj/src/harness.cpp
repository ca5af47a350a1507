#include "fbm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "fbm/appendix.hpp"
#include "fbm/chain.hpp"
#include "fbm/estimators.hpp"
#include "fbm/fitting.hpp"
#include "fbm/samplers.hpp"
#include "fbm/types.hpp"

namespace fbm::harness {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_to_csv(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            if constexpr (std::is_same_v<T, std::uint64_t>) return std::to_string(v);
            if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            if constexpr (std::is_same_v<T, std::string>) return csv_escape(v);
        },
        cell);
}

json cell_to_json(const Cell& cell) {
    return std::visit([](const auto& v) -> json { return v; }, cell);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// One (horizon, grid) cell of the dispatch matrix.
struct GridCell {
    double horizon;
    std::size_t grid;
    std::uint64_t stream_base;
};

std::vector<GridCell> cartesian_cells(const ExperimentSpec& spec) {
    std::vector<GridCell> cells;
    std::uint64_t index = 0;
    for (double t : spec.horizons)
        for (std::size_t n : spec.grids) {
            cells.push_back({t, n, index * spec.samples});
            ++index;
        }
    return cells;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument("ExperimentSpec: " + message);
}

void validate(const ExperimentSpec& spec) {
    static const std::vector<std::string> kinds = {
        "sample",  "exit",    "lower-tail",      "molchan", "laplace",
        "chain",   "drift-bound", "slepian",     "verify-appendix", "fit"};
    require(std::find(kinds.begin(), kinds.end(), spec.kind) != kinds.end(),
            "unknown kind '" + spec.kind + "'");
    require(!spec.out.empty(), "output path required");
    require(spec.format == "csv" || spec.format == "json",
            "format must be csv or json, got '" + spec.format + "'");

    if (spec.kind == "fit") {
        require(!spec.input.empty(), "fit requires an input decay table (input path)");
        return;
    }
    if (spec.kind == "verify-appendix") {
        LogLogScale check(spec.lambda);  // validates lambda > 0
        for (double a : spec.horizons)
            require(a > 0.0 && a <= 1.0, "verify-appendix alpha values must lie in (0,1]");
        return;
    }

    const HurstParam h(spec.hurst);  // validates 0 < H < 1
    require(!spec.horizons.empty(), "at least one horizon required");
    require(!spec.grids.empty(), "at least one grid required");
    require(spec.samples >= 1, "samples must be >= 1");
    for (double t : spec.horizons) require(t > 0.0, "horizons must be positive");
    for (std::size_t n : spec.grids) require(n >= 1, "grids must have >= 1 step");

    if (spec.kind == "chain") {
        const double g = spec.gamma == 0.0 ? 0.75 * h.value : spec.gamma;
        require(g > h.value / 2.0 && g < h.value,
                "gamma must lie in (H/2, H); got gamma = " + std::to_string(g) +
                    " for H = " + std::to_string(h.value));
    }
    if (spec.kind == "drift-bound") {
        require(spec.kappa > 1.0,
                "kappa must be > 1 (the kappa > 1 constraint of the drift bound), got " +
                    std::to_string(spec.kappa));
        for (double t : spec.horizons)
            require(t > 1.0, "drift-bound horizons must exceed 1");
    }
    if (spec.kind == "slepian")
        for (double t : spec.horizons)
            require(spec.split > 0.0 && spec.split < t,
                    "slepian split must satisfy 0 < split < horizon");
}

// ---- per-kind table builders ------------------------------------------------

struct KindResult {
    ResultTable table;
    int exit_code = 0;
    std::string failure;
};

KindResult run_estimators(const ExperimentSpec& spec, const std::vector<GridCell>& cells) {
    const HurstParam h(spec.hurst);
    KindResult out;
    out.table.columns = {"hurst", "horizon", "grid_points", "samples",
                         "value", "stderr",  "seed"};
    for (const GridCell& cell : cells) {
        const RngSpec rng{spec.seed, cell.stream_base};
        MCEstimate est;
        if (spec.kind == "exit")
            est = estimate_exit_prob(h, cell.horizon, spec.barrier, cell.grid, spec.samples, rng);
        else if (spec.kind == "lower-tail")
            est = estimate_lower_tail(h, cell.horizon, cell.grid, spec.samples, rng);
        else if (spec.kind == "molchan")
            est = estimate_molchan_I(h, cell.horizon, cell.grid, spec.samples, rng);
        else
            est = estimate_laplace_g(h, cell.horizon, cell.grid, spec.samples, rng);
        out.table.rows.push_back({spec.hurst, cell.horizon,
                                  static_cast<std::uint64_t>(est.grid_points),
                                  static_cast<std::uint64_t>(est.n_samples), est.value,
                                  est.std_err, static_cast<std::uint64_t>(est.seed)});
    }
    return out;
}

KindResult run_sample(const ExperimentSpec& spec, const std::vector<GridCell>& cells) {
    const HurstParam h(spec.hurst);
    KindResult out;
    out.table.columns = {"hurst", "horizon", "grid_points", "stream", "t", "value"};
    for (const GridCell& cell : cells) {
        const auto src = make_default_source(h, cell.grid, cell.horizon);
        for (std::size_t j = 0; j < spec.samples; ++j) {
            const std::uint64_t stream = cell.stream_base + j;
            const SamplePath path = src->sample({spec.seed, stream});
            for (std::size_t i = 0; i < path.values.size(); ++i)
                out.table.rows.push_back({spec.hurst, cell.horizon,
                                          static_cast<std::uint64_t>(cell.grid), stream,
                                          path.grid.points[i], path.values[i]});
        }
    }
    return out;
}

KindResult run_chain(const ExperimentSpec& spec, const std::vector<GridCell>& cells) {
    const HurstParam h(spec.hurst);
    const double gamma = spec.gamma == 0.0 ? 0.75 * h.value : spec.gamma;
    KindResult out;
    out.table.columns = {"hurst",      "horizon",      "gamma", "grid_points",
                         "samples",    "violations",   "worst_margin",
                         "seed",       "witness_stream"};
    for (const GridCell& cell : cells) {
        const ChainReport rep = check_crucial_chain(h, cell.horizon, gamma, cell.grid,
                                                    spec.samples, {spec.seed, cell.stream_base});
        out.table.rows.push_back(
            {spec.hurst, cell.horizon, gamma, static_cast<std::uint64_t>(cell.grid),
             static_cast<std::uint64_t>(rep.n_samples),
             static_cast<std::uint64_t>(rep.violations), rep.worst_margin,
             static_cast<std::uint64_t>(rep.seed),
             rep.witness_stream ? Cell(*rep.witness_stream) : Cell(std::string())});
        if (rep.violations > 0) {
            out.exit_code = 2;
            out.failure = "chain violation at horizon " + format_double(cell.horizon) +
                          ", grid " + std::to_string(cell.grid) + ", worst margin " +
                          format_double(rep.worst_margin);
            break;  // fail fast; the witness row above is the interesting output
        }
    }
    return out;
}

KindResult run_drift(const ExperimentSpec& spec, const std::vector<GridCell>& cells) {
    const HurstParam h(spec.hurst);
    KindResult out;
    out.table.columns = {"hurst",          "horizon",        "kappa",
                         "grid_points",    "samples",        "violations",
                         "worst_margin",   "i_hat",          "p_below",
                         "log_phi_integral", "aggregate_margin", "aggregate_holds",
                         "analytic_lhs",   "analytic_rhs",   "analytic_holds",
                         "analytic_precondition_ok", "seed"};
    for (const GridCell& cell : cells) {
        const DriftBoundReport rep = check_drift_lower_bound(
            h, cell.horizon, spec.kappa, cell.grid, spec.samples, {spec.seed, cell.stream_base});
        out.table.rows.push_back(
            {spec.hurst, cell.horizon, spec.kappa, static_cast<std::uint64_t>(cell.grid),
             static_cast<std::uint64_t>(rep.chain.n_samples),
             static_cast<std::uint64_t>(rep.chain.violations), rep.chain.worst_margin,
             rep.i_hat, rep.p_below, rep.log_phi_integral, rep.aggregate_margin,
             rep.aggregate_holds, rep.analytic.lhs, rep.analytic.rhs, rep.analytic.holds,
             rep.analytic.precondition_ok, static_cast<std::uint64_t>(rep.chain.seed)});
        const bool analytic_bad = rep.analytic.precondition_ok && !rep.analytic.holds;
        if (rep.chain.violations > 0 || !rep.aggregate_holds || analytic_bad) {
            out.exit_code = 2;
            out.failure = "drift bound violation at horizon " + format_double(cell.horizon) +
                          ", grid " + std::to_string(cell.grid);
            break;
        }
    }
    return out;
}

KindResult run_slepian(const ExperimentSpec& spec, const std::vector<GridCell>& cells) {
    const HurstParam h(spec.hurst);
    KindResult out;
    out.table.columns = {"hurst",   "horizon",  "split",       "grid_points",
                         "samples", "p_joint",  "p_first",     "p_second",
                         "product", "diff",     "diff_stderr", "passed",
                         "low_power", "increment_variant", "inc_diff",
                         "inc_diff_stderr", "inc_passed", "seed"};
    for (const GridCell& cell : cells) {
        const SlepianReport rep = slepian_factorization_check(
            h, cell.horizon, spec.split, spec.samples, {spec.seed, cell.stream_base}, cell.grid);
        out.table.rows.push_back(
            {spec.hurst, cell.horizon, spec.split, static_cast<std::uint64_t>(cell.grid),
             static_cast<std::uint64_t>(spec.samples), rep.joint.value, rep.first.value,
             rep.second.value, rep.product, rep.diff, rep.diff_stderr, rep.passed,
             rep.low_power, rep.increment_variant_run, rep.inc_diff, rep.inc_diff_stderr,
             rep.inc_passed, static_cast<std::uint64_t>(spec.seed)});
        if (!rep.passed || (rep.increment_variant_run && !rep.inc_passed)) {
            out.exit_code = 2;
            out.failure = "slepian factorization rejected at horizon " +
                          format_double(cell.horizon) + ", grid " + std::to_string(cell.grid);
            break;
        }
    }
    return out;
}

KindResult run_verify_appendix(const ExperimentSpec& spec) {
    const LogLogScale scale(spec.lambda);
    KindResult out;
    out.table.columns = {"name",        "alpha",        "points", "violations",
                         "out_of_domain", "worst_margin", "passed", "detail"};

    std::vector<double> alphas = spec.horizons;
    if (alphas.empty())
        for (int i = 1; i <= 10; ++i) alphas.push_back(static_cast<double>(i) / 10.0);

    bool failed = false;
    const auto push_sweep = [&](const std::string& name, double alpha, const SweepReport& rep,
                                const std::string& detail) {
        out.table.rows.push_back({name, alpha, static_cast<std::uint64_t>(rep.points),
                                  static_cast<std::uint64_t>(rep.violations),
                                  static_cast<std::uint64_t>(rep.out_of_domain),
                                  rep.worst_margin, rep.passed(),
                                  detail.empty() ? rep.grid_spec : detail});
        if (!rep.passed()) {
            failed = true;
            out.failure = "appendix check '" + name + "' failed, worst margin " +
                          format_double(rep.worst_margin);
        }
        return rep.passed();
    };

    // Point-inequality sweeps over the full alpha list.
    if (push_sweep("step1", 0.0, sweep_step1(alphas), "") &&
        push_sweep("indrad", 0.0, sweep_indrad(alphas), ""))
        push_sweep("step4", 0.0, sweep_step4(alphas, spec.samples, spec.seed), "");

    // Growth + E Y(t)X(1) checks across the comparison regime H < 1/2.
    const std::vector<double> hursts = {0.1, 0.2, 0.3, 0.4, 0.45};
    if (!failed && std::abs(spec.lambda - 0.25) < 1e-12) {
        for (double hv : hursts) {
            if (failed) break;
            const GrowthReport rep = check_f_growth(HurstParam(hv), scale);
            out.table.rows.push_back({std::string("growth"), 2.0 * hv, std::uint64_t{1},
                                      std::uint64_t{rep.report.passed ? 0u : 1u},
                                      std::uint64_t{0}, rep.report.worst_margin,
                                      rep.report.passed,
                                      "empirical k = " + format_double(rep.empirical_k)});
            if (!rep.report.passed) {
                failed = true;
                out.failure = "appendix check 'growth' failed at H = " + format_double(hv);
            }
        }
    }
    if (!failed) {
        const std::vector<double> ts = log_grid(1.0, 1e8, 50);
        for (double hv : hursts) {
            if (failed) break;
            SweepReport rep;
            double worst = std::numeric_limits<double>::infinity();
            for (double t : ts) {
                const IneqReport point = check_Y_X1_nonneg(t, HurstParam(hv), scale);
                ++rep.points;
                if (!point.passed) ++rep.violations;
                worst = std::min(worst, point.worst_margin);
            }
            rep.worst_margin = worst;
            rep.grid_spec = "t in [1, 1e8], 50/decade";
            if (!push_sweep("y_x1", 2.0 * hv, rep, "")) failed = true;
        }
    }

    // Lemma + comparison above the found s0, verdicts required to coincide.
    if (!failed) {
        for (double alpha : alphas) {
            const LemmaSweepReport rep = sweep_lemma_and_comparison(alpha, scale);
            out.table.rows.push_back(
                {std::string("s0"), alpha, static_cast<std::uint64_t>(rep.s0.checked_pairs),
                 std::uint64_t{rep.s0.found ? 0u : 1u}, std::uint64_t{0},
                 rep.s0.found ? rep.s0.s0 : -1.0, rep.s0.found,
                 std::string(rep.s0.found ? "s0 value in worst_margin column" : "not found")});
            if (!rep.s0.found) {
                failed = true;
                out.failure = "appendix lemma: no s0 found at alpha " + format_double(alpha);
                break;
            }
            if (!push_sweep("lemma", alpha, rep.lemma, "")) {
                failed = true;
                break;
            }
            if (rep.comparison.points > 0 && !push_sweep("comparison", alpha, rep.comparison, "")) {
                failed = true;
                break;
            }
            if (rep.verdict_mismatches != 0) {
                out.table.rows.push_back({std::string("verdicts"), alpha,
                                          static_cast<std::uint64_t>(rep.lemma.points),
                                          static_cast<std::uint64_t>(rep.verdict_mismatches),
                                          std::uint64_t{0}, 0.0, false,
                                          std::string("lemma/comparison verdict mismatch")});
                failed = true;
                out.failure = "appendix lemma/comparison verdicts diverge at alpha " +
                              format_double(alpha);
                break;
            }
        }
    }

    // Closed-form derivatives against central finite differences.
    if (!failed) {
        const FdReport fd = step2_finite_difference_check(std::max<std::size_t>(spec.samples, 100),
                                                          spec.seed, scale);
        out.table.rows.push_back({std::string("step2_fd"), 0.0,
                                  static_cast<std::uint64_t>(fd.points),
                                  std::uint64_t{fd.passed ? 0u : 1u}, std::uint64_t{0},
                                  fd.worst_rel_error, fd.passed,
                                  std::string("worst relative derivative error")});
        if (!fd.passed) {
            failed = true;
            out.failure = "appendix step2 finite-difference agreement failed";
        }
    }

    out.exit_code = failed ? 2 : 0;
    return out;
}

// Minimal CSV reader for our own emitted tables (no quoted fields needed).
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

KindResult run_fit(const ExperimentSpec& spec) {
    const auto rows = read_csv(spec.input);
    if (rows.size() < 2) throw std::invalid_argument("fit: input table has no data rows");
    const std::vector<std::string>& header = rows.front();
    const auto col = [&](const std::string& name) -> std::ptrdiff_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
        return -1;
    };
    const std::ptrdiff_t c_t = col("horizon");
    const std::ptrdiff_t c_v = col("value");
    const std::ptrdiff_t c_e = col("stderr");
    const std::ptrdiff_t c_g = col("grid_points");
    if (c_t < 0 || c_v < 0 || c_e < 0)
        throw std::invalid_argument("fit: input needs horizon, value, stderr columns");

    std::vector<DecayRow> decay;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        DecayRow row{};
        row.horizon = std::stod(rows[i][static_cast<std::size_t>(c_t)]);
        row.estimate = std::stod(rows[i][static_cast<std::size_t>(c_v)]);
        row.std_err = std::stod(rows[i][static_cast<std::size_t>(c_e)]);
        row.grid_points =
            c_g >= 0 ? static_cast<std::size_t>(
                           std::stoull(rows[i][static_cast<std::size_t>(c_g)]))
                     : 0;
        decay.push_back(row);
    }
    const DecayTable table(std::move(decay));

    KindResult out;
    out.table.columns = {"model",         "rows",        "theta",
                         "theta_stderr",  "intercept",   "log_correction",
                         "log_correction_stderr", "residual_norm", "condition_number",
                         "collinear"};
    const auto push_fit = [&](const std::string& model, const FitResult& fit) {
        out.table.rows.push_back(
            {model, static_cast<std::uint64_t>(table.rows.size()), fit.theta,
             fit.theta_stderr, fit.intercept,
             fit.log_correction ? Cell(*fit.log_correction) : Cell(std::string()),
             fit.log_correction ? Cell(fit.log_correction_stderr) : Cell(std::string()),
             fit.residual_norm, fit.condition_number, fit.collinear});
    };
    push_fit("power_law", fit_power_law(table));
    const bool log_fit_ok =
        table.rows.size() >= 4 &&
        std::all_of(table.rows.begin(), table.rows.end(),
                    [](const DecayRow& r) { return std::log(r.horizon) >= 2.0; });
    if (log_fit_ok) push_fit("with_log_correction", fit_with_log_correction(table));
    return out;
}

}  // namespace

void emit_csv(const ResultTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const std::vector<Cell>& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::runtime_error("emit_csv: row width does not match schema");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << cell_to_csv(row[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_json(const ResultTable& table, const std::string& path) {
    json array = json::array();
    for (const std::vector<Cell>& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::runtime_error("emit_json: row width does not match schema");
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_to_json(row[i]);
        array.push_back(std::move(obj));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << array.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for digest: " + path);
    std::uint64_t hash = 14695981039346656037ULL;
    char byte;
    while (in.get(byte)) {
        hash ^= static_cast<unsigned char>(byte);
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::string spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["kind"] = spec.kind;
    j["hurst"] = spec.hurst;
    j["horizons"] = spec.horizons;
    j["grids"] = spec.grids;
    j["samples"] = spec.samples;
    j["kappa"] = spec.kappa;
    j["gamma"] = spec.gamma;
    j["lambda"] = spec.lambda;
    j["barrier"] = spec.barrier;
    j["split"] = spec.split;
    j["seed"] = spec.seed;
    j["input"] = spec.input;
    j["out"] = spec.out;
    j["format"] = spec.format;
    return j.dump(2);
}

ExperimentSpec spec_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    ExperimentSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (key == "kind") spec.kind = value.get<std::string>();
        else if (key == "hurst") spec.hurst = value.get<double>();
        else if (key == "horizons") spec.horizons = value.get<std::vector<double>>();
        else if (key == "grids") spec.grids = value.get<std::vector<std::size_t>>();
        else if (key == "samples") spec.samples = value.get<std::size_t>();
        else if (key == "kappa") spec.kappa = value.get<double>();
        else if (key == "gamma") spec.gamma = value.get<double>();
        else if (key == "lambda") spec.lambda = value.get<double>();
        else if (key == "barrier") spec.barrier = value.get<double>();
        else if (key == "split") spec.split = value.get<double>();
        else if (key == "seed") spec.seed = value.get<std::uint64_t>();
        else if (key == "input") spec.input = value.get<std::string>();
        else if (key == "out") spec.out = value.get<std::string>();
        else if (key == "format") spec.format = value.get<std::string>();
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return spec;
}

RunManifest run(const ExperimentSpec& spec) {
    validate(spec);
    const auto start = std::chrono::steady_clock::now();

    RunManifest manifest;
    manifest.kind = spec.kind;
    manifest.spec_json = spec_to_json(spec);
    manifest.code_version = kCodeVersion;
    manifest.timestamp = utc_timestamp();

    KindResult result;
    std::vector<GridCell> cells;
    if (spec.kind == "verify-appendix") {
        result = run_verify_appendix(spec);
    } else if (spec.kind == "fit") {
        result = run_fit(spec);
    } else {
        cells = cartesian_cells(spec);
        for (const GridCell& cell : cells) manifest.cell_stream_bases.push_back(cell.stream_base);
        if (spec.kind == "sample") result = run_sample(spec, cells);
        else if (spec.kind == "chain") result = run_chain(spec, cells);
        else if (spec.kind == "drift-bound") result = run_drift(spec, cells);
        else if (spec.kind == "slepian") result = run_slepian(spec, cells);
        else result = run_estimators(spec, cells);
    }

    if (spec.format == "csv")
        emit_csv(result.table, spec.out);
    else
        emit_json(result.table, spec.out);

    manifest.result_paths.push_back(spec.out);
    manifest.result_digests.push_back(fnv1a_file(spec.out));
    manifest.exit_code = result.exit_code;
    manifest.failure = result.failure;
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json mj;
    mj["kind"] = manifest.kind;
    mj["spec"] = json::parse(manifest.spec_json);
    mj["code_version"] = manifest.code_version;
    mj["timestamp"] = manifest.timestamp;
    mj["wall_seconds"] = manifest.wall_seconds;
    mj["results"] = json::array();
    for (std::size_t i = 0; i < manifest.result_paths.size(); ++i) {
        char digest[32];
        std::snprintf(digest, sizeof(digest), "0x%016llx",
                      static_cast<unsigned long long>(manifest.result_digests[i]));
        mj["results"].push_back({{"path", manifest.result_paths[i]}, {"fnv1a", digest}});
    }
    mj["cell_stream_bases"] = manifest.cell_stream_bases;
    mj["exit_code"] = manifest.exit_code;
    mj["failure"] = manifest.failure;
    std::ofstream mout(spec.out + ".manifest.json", std::ios::binary);
    if (!mout) throw std::runtime_error("cannot open manifest file: " + spec.out + ".manifest.json");
    mout << mj.dump(2) << '\n';

    return manifest;
}

}  // namespace fbm::harness
