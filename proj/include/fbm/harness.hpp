#pragma once

// Experiment orchestration: a validated ExperimentSpec dispatches to the
// estimator / verification operations over the Cartesian grid of
// (horizons x grids), writes one result row per cell (CSV or JSON), and
// returns a RunManifest with content digests.  Result files are a pure
// function of the spec, byte for byte, regardless of worker count.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace fbm::harness {

inline constexpr const char* kCodeVersion = "0.1.0";

struct ExperimentSpec {
    std::string kind;  // sample | exit | lower-tail | molchan | laplace | chain |
                       // drift-bound | slepian | verify-appendix | fit
    double hurst = 0.5;
    std::vector<double> horizons;      // lower-tail reads its eps values here;
                                       // verify-appendix reads alpha values
    std::vector<std::size_t> grids;    // steps per grid (power of two -> FFT path)
    std::size_t samples = 10000;
    double kappa = 1.5;    // drift-bound
    double gamma = 0.0;    // chain; 0 means "use 0.75 H"
    double lambda = 0.25;  // verify-appendix loglog scale
    double barrier = 1.0;
    double split = 1.0;    // slepian split point
    std::uint64_t seed = 1;
    std::string input;     // fit: CSV decay table to read
    std::string out;       // result file path
    std::string format = "csv";  // csv | json
};

// Everything needed to audit or bit-exactly reproduce a run.  The result
// files are deterministic; the manifest additionally records when it ran and
// how long it took, so two manifests of identical runs differ only there.
struct RunManifest {
    std::string kind;
    std::string spec_json;     // spec echo, serialized
    std::string code_version;
    std::string timestamp;     // UTC, ISO 8601
    double wall_seconds = 0.0;
    std::vector<std::string> result_paths;
    std::vector<std::uint64_t> result_digests;  // FNV-1a 64 over file bytes
    std::vector<std::uint64_t> cell_stream_bases;  // per-cell seed provenance
    int exit_code = 0;         // 0 ok; 2 a verification kind found a violation
    std::string failure;       // fail-fast record: first violating cell, or ""
};

// Validates the spec against the target operation's preconditions, runs it,
// writes results + "<out>.manifest.json", and returns the manifest.
// Throws std::invalid_argument for validation errors (before any sampling)
// and std::runtime_error for IO failures.
RunManifest run(const ExperimentSpec& spec);

// ---- serialization helpers (exposed for tests) -----------------------------

using Cell = std::variant<double, std::uint64_t, std::int64_t, bool, std::string>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Header then rows; doubles with 17 significant digits; newline-terminated.
void emit_csv(const ResultTable& table, const std::string& path);

// The same table as a JSON array of objects.
void emit_json(const ResultTable& table, const std::string& path);

// FNV-1a 64-bit digest of a file's bytes.
std::uint64_t fnv1a_file(const std::string& path);

// Loads ExperimentSpec fields from a flat JSON object; unknown keys are an
// error, absent keys keep their defaults.
ExperimentSpec spec_from_json_file(const std::string& path);

std::string spec_to_json(const ExperimentSpec& spec);

}  // namespace fbm::harness
