#include "chanmetric/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chanmetric::io {

namespace {

using nlohmann::json;

std::size_t read_size(const json& doc, const std::string& field) {
  if (!doc.contains(field)) throw ParseError("missing field '" + field + "'");
  const json& v = doc.at(field);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ParseError("field '" + field + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

Eigen::MatrixXd read_matrix(const json& doc, const std::string& field, std::size_t rows, std::size_t cols) {
  if (!doc.contains(field)) throw ParseError("missing field '" + field + "'");
  const json& m = doc.at(field);
  if (!m.is_array() || m.size() != rows) {
    throw ParseError("field '" + field + "' must be an array of " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t y = 0; y < rows; ++y) {
    const json& row = m.at(y);
    if (!row.is_array() || row.size() != cols) {
      throw ParseError("field '" + field + "' row " + std::to_string(y) + " must have " + std::to_string(cols) +
                       " entries");
    }
    for (std::size_t x = 0; x < cols; ++x) {
      if (!row.at(x).is_number()) {
        throw ParseError("field '" + field + "' entry (" + std::to_string(y) + ", " + std::to_string(x) +
                         ") is not a number");
      }
      out(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = row.at(x).get<double>();
    }
  }
  return out;
}

Eigen::VectorXd read_vector(const json& doc, const std::string& field) {
  if (!doc.contains(field)) throw ParseError("missing field '" + field + "'");
  const json& v = doc.at(field);
  if (!v.is_array() || v.empty()) throw ParseError("field '" + field + "' must be a non-empty array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v.at(i).is_number()) {
      throw ParseError("field '" + field + "' entry " + std::to_string(i) + " is not a number");
    }
    out(static_cast<Eigen::Index>(i)) = v.at(i).get<double>();
  }
  return out;
}

const json& object_field(const json& doc, const std::string& field) {
  if (!doc.contains(field)) throw ParseError("missing field '" + field + "'");
  const json& v = doc.at(field);
  if (!v.is_object()) throw ParseError("field '" + field + "' must be an object");
  return v;
}

// Runs a constructor, re-labelling invariant violations with the field name.
template <typename F>
auto validated(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const ValidationError& e) {
    throw ParseError("field '" + field + "': " + e.what());
  } catch (const DimensionError& e) {
    throw ParseError("field '" + field + "': " + e.what());
  }
}

template <typename Shape>
json shape_header(const Shape& s) {
  return json{{"k", s.inputs()}, {"l", s.outputs()}};
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json_number(v(i)));
  return out;
}

}  // namespace

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

SolverConfig parse_solver_config(const json& doc) {
  SolverConfig config;
  if (!doc.is_object()) throw ParseError("field 'solver' must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) throw ParseError("solver field '" + key + "' must be a number");
    if (key == "tol") {
      config.tol = value.get<double>();
    } else if (key == "max_iter") {
      config.max_iter = value.get<int>();
    } else if (key == "grid_fallback_dim") {
      config.grid_fallback_dim = value.get<int>();
    } else if (key == "svd_cutoff") {
      config.svd_cutoff = value.get<double>();
    } else {
      throw ParseError("unknown solver field '" + key + "'");
    }
  }
  if (!(config.tol > 0.0) || config.max_iter <= 0 || !(config.svd_cutoff > 0.0)) {
    throw ParseError("solver tol, max_iter and svd_cutoff must be positive");
  }
  return config;
}

Channel parse_channel_object(const json& doc, const std::string& field) {
  const json& obj = object_field(doc, field);
  const std::size_t k = read_size(obj, "k");
  const std::size_t l = read_size(obj, "l");
  Eigen::MatrixXd m = read_matrix(obj, "channel", l, k);
  return validated(field, [&] { return Channel(std::move(m)); });
}

TangentChannel parse_tangent_object(const json& doc, const std::string& field) {
  const json& obj = object_field(doc, field);
  const std::size_t k = read_size(obj, "k");
  const std::size_t l = read_size(obj, "l");
  Eigen::MatrixXd m = read_matrix(obj, "tangent", l, k);
  return validated(field, [&] { return TangentChannel(std::move(m)); });
}

Instance parse_instance(const json& doc) {
  if (!doc.is_object()) throw ParseError("instance must be a JSON object");
  const std::size_t k = read_size(doc, "k");
  const std::size_t l = read_size(doc, "l");
  Eigen::MatrixXd channel = read_matrix(doc, "channel", l, k);
  Eigen::MatrixXd tangent = read_matrix(doc, "tangent", l, k);
  SolverConfig config = doc.contains("solver") ? parse_solver_config(doc.at("solver")) : SolverConfig{};
  return Instance{LocalData(validated("channel", [&] { return Channel(std::move(channel)); }),
                            validated("tangent", [&] { return TangentChannel(std::move(tangent)); })),
                  config};
}

Instance load_instance(const std::filesystem::path& path) { return parse_instance(load_json(path)); }

MixtureProgram parse_mixture_program(const json& doc) {
  Eigen::VectorXd q = read_vector(doc, "q");
  Eigen::VectorXd delta = read_vector(doc, "delta");
  Channel processor = parse_channel_object(doc, "lambda");
  return validated("program", [&] {
    return MixtureProgram(Distribution(std::move(q)), TangentDistribution(std::move(delta)), std::move(processor));
  });
}

SandwichProgram parse_sandwich_program(const json& doc) {
  Channel pre = parse_channel_object(doc, "lambda_a");
  Channel resource = parse_channel_object(doc, "psi");
  TangentChannel resource_tangent = parse_tangent_object(doc, "dpsi");
  Channel post = parse_channel_object(doc, "lambda_b");
  return validated("program", [&] {
    return SandwichProgram(std::move(pre), std::move(resource), std::move(resource_tangent), std::move(post));
  });
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index y = 0; y < m.rows(); ++y) {
    json row = json::array();
    for (Eigen::Index x = 0; x < m.cols(); ++x) row.push_back(json_number(m(y, x)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const Channel& channel) {
  json out = shape_header(channel);
  out["channel"] = matrix_rows(channel.matrix());
  return out;
}

json to_json(const TangentChannel& tangent) {
  json out = shape_header(tangent);
  out["tangent"] = matrix_rows(tangent.matrix());
  return out;
}

json to_json(const MixtureProgram& program) {
  return json{{"q", vector_json(program.q.probs())},
              {"delta", vector_json(program.delta.deltas())},
              {"lambda", to_json(program.processor)}};
}

json to_json(const SandwichProgram& program) {
  return json{{"lambda_a", to_json(program.pre)},
              {"psi", to_json(program.resource)},
              {"dpsi", to_json(program.resource_tangent)},
              {"lambda_b", to_json(program.post)}};
}

json instance_to_json(const LocalData& data) {
  json out = shape_header(data.channel);
  out["channel"] = matrix_rows(data.channel.matrix());
  out["tangent"] = matrix_rows(data.tangent.matrix());
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

json json_number(double value) {
  if (!std::isfinite(value)) return format_number(value);
  // Parsing the 12-digit text back gives the double whose shortest
  // round-trip representation is that text.
  const double rounded = std::stod(format_number(value));
  return rounded == 0.0 ? json(0.0) : json(rounded);
}

json report_to_json(const MetricReport& report) {
  const GmaxResult& g = report.gmax;
  return json{{"gmin", json_number(report.gmin)},
              {"gmin_witness", report.gmin_witness},
              {"gmax", json_number(g.value)},
              {"decomposition", {{"q", vector_json(g.decomposition.weights)},
                                 {"delta", vector_json(g.decomposition.signed_weights)}}},
              {"converged", g.converged},
              {"iterations", g.iterations},
              {"gap", json_number(g.gap)},
              {"gradient_norm", json_number(g.gradient_norm)}};
}

}  // namespace chanmetric::io
