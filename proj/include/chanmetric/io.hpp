#pragma once

// JSON text formats.
//
// Instance:  {"k": int, "l": int, "channel": [[...] x l], "tangent": [[...] x l],
//             "solver": {"tol", "max_iter", "grid_fallback_dim", "svd_cutoff"}}
// Channel object:  {"k": int, "l": int, "channel": [[...] x l]}
// Tangent object:  {"k": int, "l": int, "tangent": [[...] x l]}
// Mixture program: {"q": [...], "delta": [...], "lambda": channel object}
// Sandwich program: {"lambda_a", "psi", "lambda_b": channel objects, "dpsi": tangent object}
//
// Matrices are written row by row: row y, column x holds the value at (y|x).

#include "chanmetric/core.hpp"
#include "chanmetric/metrics.hpp"
#include "chanmetric/simulation.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace chanmetric::io {

/// Malformed or invalid input; the message names the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  LocalData data;
  SolverConfig config;
};

Instance parse_instance(const nlohmann::json& doc);
Instance load_instance(const std::filesystem::path& path);
nlohmann::json load_json(const std::filesystem::path& path);

Channel parse_channel_object(const nlohmann::json& doc, const std::string& field);
TangentChannel parse_tangent_object(const nlohmann::json& doc, const std::string& field);
SolverConfig parse_solver_config(const nlohmann::json& doc);

MixtureProgram parse_mixture_program(const nlohmann::json& doc);
SandwichProgram parse_sandwich_program(const nlohmann::json& doc);

nlohmann::json matrix_rows(const Eigen::MatrixXd& m);
nlohmann::json to_json(const Channel& channel);
nlohmann::json to_json(const TangentChannel& tangent);
nlohmann::json to_json(const MixtureProgram& program);
nlohmann::json to_json(const SandwichProgram& program);
nlohmann::json instance_to_json(const LocalData& data);

/// Number rounded to 12 significant digits; infinities become "inf"/"-inf".
nlohmann::json json_number(double value);

/// Same rounding for plain-text output such as CSV.
std::string format_number(double value);

nlohmann::json report_to_json(const MetricReport& report);

}  // namespace chanmetric::io
