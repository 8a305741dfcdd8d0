#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lps/analysis.hpp"
#include "lps/solvers.hpp"
#include "lps/types.hpp"

// File formats shared by the CLI and the tests.
//
// Matrix/vector text: first line "rows cols", then `rows` lines of `cols`
// whitespace-separated decimal literals. Vectors are stored as a single
// column ("m 1"); a single row ("1 m") is also accepted on input.
namespace lps::io {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kCsvSchema = "lps-trials/1";

DenseMatrix read_matrix(std::istream& in, const std::string& what = "matrix");
DenseMatrix read_matrix_file(const std::string& path);
Vector read_vector_file(const std::string& path);
void write_matrix(std::ostream& out, const DenseMatrix& a);
void write_matrix_file(const std::string& path, const DenseMatrix& a);
void write_vector_file(const std::string& path, const Vector& v);

/// Shortest decimal that parses back to the same double ("%.17g" trimmed).
std::string format_double(double v);

/// Result document for one solve.
nlohmann::json result_document(const solvers::ProblemInstance& inst,
                               const solvers::SolveResult& res, double support_tol);

/// Parses an experiment config; throws invalid_input listing every missing or
/// invalid field. `kind` is genericity, recovery or perturbation.
struct PerturbationConfig {
  Index m = 12;
  Index n = 24;
  Index sparsity = 2;
  int trials = 100;
  std::uint64_t master_seed = 0;
  std::vector<double> deltas{0.0, 1e-6};
  solvers::SolverConfig solver;
};
analysis::ExperimentConfig parse_experiment_config(const nlohmann::json& j);
PerturbationConfig parse_perturbation_config(const nlohmann::json& j);

/// Trial rows followed by a summary block. With omit_timing the wall_time_ms
/// column is written as 0 so that outputs can be compared byte for byte.
void write_trials_csv(std::ostream& out, const analysis::ExperimentStats& stats,
                      bool omit_timing = false);
void write_perturbation_csv(std::ostream& out, const std::vector<analysis::PerturbationRow>& rows);

/// 64-bit FNV-1a of the canonical (sorted-key, compact) JSON dump, as hex.
std::string config_digest(const nlohmann::json& config);

struct RunManifest {
  std::string command;
  std::string config_digest;
  std::uint64_t master_seed = 0;
  std::string tool_version = kToolVersion;
  std::string started;
  std::string finished;
};
nlohmann::json to_json(const RunManifest& m);
/// Current UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace lps::io
