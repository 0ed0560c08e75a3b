#pragma once

// Experiment configs, field files, CSV tables, run manifests and atomic writes.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fspde/levy.hpp"
#include "fspde/params.hpp"
#include "fspde/solver.hpp"
#include "fspde/torus.hpp"
#include "fspde/verify.hpp"
#include "json.hpp"

namespace fspde::io {

using json = nlohmann::json;

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

/// Field file: 32-byte header (magic "FSPDEF1\0", int64 d, int64 N, float64 L),
/// then N^d little-endian float64 values, row-major.
std::string encode_field(const Field& f);
Field decode_field(const std::string& bytes);
void write_field(const std::filesystem::path& path, const Field& f);
Field read_field(const std::filesystem::path& path);

/// Shortest round-trip formatting is not used: every number gets 17 significant
/// digits, '.' as decimal point, independent of the locale.
std::string format_double(double v);
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// JSON dump with sorted keys and no whitespace.
std::string canonical_dump(const json& j);
/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string digest(const json& j);

/// Parsed experiment config.
struct Experiment {
    json raw;
    ProblemParams params;
    TorusGrid grid;
    TimeGrid time;
    std::optional<LevySpec> levy;
    int wiener_copies = 0;
    int white_basis = 0;  ///< K of the white-noise expansion, 0 when unused
    std::vector<std::uint64_t> seeds{1};
    SolveOptions solver;
    json data;
    json verify;
};

/// Validates the document and throws ConfigError carrying the JSON pointer of the
/// first offending key. Parameter inequalities are reported the same way.
Experiment parse_experiment(const json& doc);

/// Field described by a preset name ("zero", "cos1", "sin2", "bump") or by
/// {"modes": [{"k": [m...], "cos": a, "sin": b}, ...]}.
Field field_from_spec(const json& spec, const TorusGrid& grid, const std::string& pointer);

/// Problem data of an experiment, without noise.
ProblemData build_problem(const Experiment& e);
/// Noise realization for one seed.
NoiseRealization build_noise(const Experiment& e, std::uint64_t seed);

/// Solves the experiment for one seed: white noise, semilinear or linear as configured.
SolutionField run_experiment(const Experiment& e, std::uint64_t seed);

/// Claim names accepted by run_verification.
const std::vector<std::string>& verification_claims();

/// Runs one verification claim configured by an experiment-style document:
/// /params, /grid/L, /time/T, /seeds/0 and /noise/levy where the claim needs them,
/// claim-specific settings under /verify. Returns the report JSON.
json run_verification(const std::string& claim, const json& doc);

struct Manifest {
    std::string digest;
    std::vector<std::uint64_t> seeds;
    json derived;
    json extra;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;
};

json to_json(const Manifest& m);

}  // namespace fspde::io
