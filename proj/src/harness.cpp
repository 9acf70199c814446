#include "chanmetric/harness.hpp"

#include "chanmetric/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chanmetric::harness {

namespace {

struct Evaluated {
  double value;
  bool converged;
};

Evaluated evaluate(Metric metric, const LocalData& data, const SolverConfig& config) {
  if (metric == Metric::gmin) return {g_min(data).value, true};
  const GmaxResult r = g_max(data, config);
  return {r.value, r.converged};
}

std::string describe(const LocalData& data) {
  std::ostringstream os;
  os << "C_{" << data.channel.inputs() << "," << data.channel.outputs() << "}";
  return os.str();
}

// left >= right - slack, with infinite sides handled explicitly.
void judge_inequality(AxiomCheck& check) {
  if (std::isinf(check.right) && !std::isinf(check.left)) {
    check.verdict = Verdict::fail;
    check.note = "right side infinite against finite left side; needs review";
    return;
  }
  if (std::isinf(check.left)) {
    check.verdict = Verdict::pass;
    return;
  }
  check.verdict = check.left >= check.right - check.slack ? Verdict::pass : Verdict::fail;
}

void judge_equality(AxiomCheck& check) {
  if (std::isinf(check.left) || std::isinf(check.right)) {
    check.verdict = check.left == check.right ? Verdict::pass : Verdict::fail;
    return;
  }
  check.verdict = std::abs(check.left - check.right) <= check.slack ? Verdict::pass : Verdict::fail;
}

double relative(double rel, double reference) { return rel * (std::isfinite(reference) ? std::abs(reference) : 0.0); }

}  // namespace

const char* to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::m1: return "M1";
    case Axiom::m2: return "M2";
    case Axiom::e: return "E";
    case Axiom::n: return "N";
    case Axiom::gmax_geq_gmin: return "GMAXGEQ";
  }
  return "?";
}

const char* to_string(Metric metric) { return metric == Metric::gmin ? "gmin" : "gmax"; }

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: return "skipped";
  }
  return "?";
}

std::optional<Axiom> parse_axiom(const std::string& tag) {
  for (Axiom a : {Axiom::m1, Axiom::m2, Axiom::e, Axiom::n, Axiom::gmax_geq_gmin}) {
    if (tag == to_string(a)) return a;
  }
  return std::nullopt;
}

std::optional<Metric> parse_metric(const std::string& name) {
  if (name == "gmin") return Metric::gmin;
  if (name == "gmax") return Metric::gmax;
  return std::nullopt;
}

AxiomCheck check_axiom(Axiom tag, const LocalData& data, const std::optional<Channel>& aux, Metric metric,
                       const SolverConfig& config, const Slacks& slacks) {
  AxiomCheck check;
  check.tag = tag;
  check.metric = metric;
  check.instance = describe(data);

  if (tag == Axiom::gmax_geq_gmin) {
    const GmaxResult upper = g_max(data, config);
    check.left = upper.value;
    check.right = g_min(data).value;
    check.slack = slacks.ordering;
    judge_inequality(check);
    return check;
  }

  const Evaluated base = evaluate(metric, data, config);
  check.left = base.value;

  switch (tag) {
    case Axiom::m1:
    case Axiom::m2: {
      if (!aux) throw std::invalid_argument("monotonicity checks need an auxiliary channel");
      const bool pre = tag == Axiom::m1;
      const LocalData moved = pre ? LocalData(compose(data.channel, *aux), compose(data.tangent, *aux))
                                  : LocalData(compose(*aux, data.channel), compose(*aux, data.tangent));
      const Evaluated other = evaluate(metric, moved, config);
      check.right = other.value;
      check.slack = metric == Metric::gmin ? slacks.gmin : relative(slacks.gmax_inequality, other.value);
      if (!base.converged || !other.converged) {
        check.verdict = Verdict::skipped;
        check.note = "solver did not converge";
        return check;
      }
      judge_inequality(check);
      return check;
    }
    case Axiom::e: {
      const Channel identity = aux ? *aux : Channel::identity(2);
      if (!identity.matrix().isIdentity(0.0)) {
        throw std::invalid_argument("tensor invariance check needs an identity channel");
      }
      const LocalData widened(tensor(data.channel, identity), tensor(data.tangent, identity));
      const Evaluated other = evaluate(metric, widened, config);
      check.right = other.value;
      check.slack = metric == Metric::gmin ? slacks.gmin : relative(slacks.gmax_tensor_equality, base.value);
      if (!other.converged) check.note = "solver did not converge";
      judge_equality(check);
      return check;
    }
    case Axiom::n: {
      if (!is_constant(data.channel.matrix()) || !is_constant(data.tangent.matrix())) {
        throw std::invalid_argument("normalisation check needs a constant channel and tangent");
      }
      check.right = fisher_information(data.channel.column(0), data.tangent.column(0));
      check.slack = metric == Metric::gmin ? slacks.gmin : relative(slacks.gmax_constant_equality, check.right);
      judge_equality(check);
      return check;
    }
    case Axiom::gmax_geq_gmin: break;
  }
  return check;
}

QuadraticFit fit_quadratic(const std::vector<double>& a, const std::vector<double>& values) {
  if (a.size() != values.size() || a.size() < 3) {
    throw std::invalid_argument("quadratic fit needs at least three matching samples");
  }
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = a[static_cast<std::size_t>(i)];
    design.row(i) << 1.0, x, x * x;
    rhs(i) = values[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
  return QuadraticFit{c(0), c(1), c(2)};
}

double admissible_radius(double t, double s) {
  return std::min({(1.0 - s) / t, s / t, (1.0 - s) / (1.0 - t), s / (1.0 - t)});
}

DirectionProbe probe_direction(const Channel& channel, const TangentChannel& first, const TangentChannel& second,
                               const std::vector<double>& coefficients, const SolverConfig& config) {
  DirectionProbe probe;
  probe.coefficients = coefficients;
  for (double a : coefficients) {
    const LocalData data(channel, TangentChannel(first.matrix() + a * second.matrix()));
    probe.gmax_values.push_back(g_max(data, config).value);
    probe.gmin_values.push_back(g_min(data).value);
  }
  probe.gmax_fit = fit_quadratic(coefficients, probe.gmax_values);
  probe.gmin_fit = fit_quadratic(coefficients, probe.gmin_values);
  return probe;
}

BilinearityProbe probe_bilinearity(double t, double s, int samples, const SolverConfig& config) {
  if (!(t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0)) {
    throw ValidationError("bilinearity probe needs an interior point 0 < t, s < 1");
  }
  if (samples < 5) throw std::invalid_argument("bilinearity probe needs at least 5 samples");

  BilinearityProbe probe;
  probe.t = t;
  probe.s = s;
  probe.radius = admissible_radius(t, s);
  probe.constant_value = 1.0 / t + 1.0 / (1.0 - t);
  probe.bilinear_prediction = 1.0 / s + 1.0 / (1.0 - s);

  Eigen::Matrix2d phi;
  phi << 1.0 - t, s, t, 1.0 - s;
  Eigen::Matrix2d first;
  first << 1.0, 0.0, -1.0, 0.0;
  Eigen::Matrix2d second;
  second << 0.0, 1.0, 0.0, -1.0;

  // Open interval (-radius, radius), symmetric, includes 0 for odd counts.
  std::vector<double> coefficients;
  for (int j = 1; j <= samples; ++j) {
    coefficients.push_back(probe.radius * (2.0 * j / (samples + 1) - 1.0));
  }
  DirectionProbe along = probe_direction(Channel(phi), TangentChannel(first), TangentChannel(second), coefficients,
                                         config);
  probe.coefficients = std::move(along.coefficients);
  probe.gmax_values = std::move(along.gmax_values);
  probe.gmin_values = std::move(along.gmin_values);
  probe.gmax_fit = along.gmax_fit;
  probe.gmin_fit = along.gmin_fit;
  return probe;
}

double brute_force_gmax(const LocalData& data, int resolution) {
  const Channel& phi = data.channel;
  const std::size_t k = phi.inputs();
  const std::size_t l = phi.outputs();
  const ExtremeBasis basis(k, l);

  if (k == 1 || l == 1) {
    // Unique decomposition: with one input the weights are the column itself.
    const Eigen::VectorXd q = k == 1 ? Eigen::VectorXd(phi.matrix().col(0)) : Eigen::VectorXd::Ones(1);
    return decomposition_value(basis, q, phi, data.tangent).value;
  }
  if (k != 2 || l != 2) {
    throw DimensionError("brute force search supports decomposition polytopes of dimension <= 2");
  }
  if (resolution < 2) throw std::invalid_argument("brute force needs at least two grid points");

  const double p = phi(0, 0);
  const double c = phi(0, 1);
  const double lo = std::max(0.0, p + c - 1.0);
  const double hi = std::min(p, c);
  const std::size_t id = lex_index(BinaryExtreme::identity);
  const std::size_t second = lex_index(BinaryExtreme::constant_second);
  const std::size_t flip = lex_index(BinaryExtreme::flip);
  const std::size_t first = lex_index(BinaryExtreme::constant_first);

  double best = kInfinity;
  for (int j = 0; j < resolution; ++j) {
    const double u = j == resolution - 1 ? hi : lo + (hi - lo) * j / (resolution - 1);
    Eigen::VectorXd q(4);
    q(static_cast<Eigen::Index>(id)) = p - u;
    q(static_cast<Eigen::Index>(second)) = 1.0 - p - c + u;
    q(static_cast<Eigen::Index>(flip)) = c - u;
    q(static_cast<Eigen::Index>(first)) = u;
    q = q.cwiseMax(0.0);
    best = std::min(best, decomposition_value(basis, q, phi, data.tangent).value);
  }
  return best;
}

FamilyProfile binary_family_profile(double a, double c, double u) {
  const double b = 1.0 - a - c;
  const double denom = -u * u + 2.0 * a * c * u + a * b * c;
  FamilyProfile out;
  out.inner_argmin = (a - c) * u * (u + b) / denom;
  out.value = (2.0 * u + a * b + b * c) / denom;
  const double s = out.inner_argmin;
  double objective = (1.0 + s) * (1.0 + s) / (a - u) + (1.0 - s) * (1.0 - s) / (c - u);
  if (s != 0.0) objective += s * s / (b + u) + s * s / u;
  out.objective_at_argmin = objective;
  return out;
}

Channel random_channel(Rng& rng, std::size_t inputs, std::size_t outputs, double margin) {
  if (!(margin >= 0.0 && margin * static_cast<double>(outputs) < 1.0)) {
    throw ValidationError("channel margin must lie in [0, 1/l)");
  }
  const double free_mass = 1.0 - margin * static_cast<double>(outputs);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(inputs));
  for (Eigen::Index x = 0; x < m.cols(); ++x) {
    // Flat Dirichlet via normalised exponentials.
    Eigen::VectorXd w(m.rows());
    for (Eigen::Index y = 0; y < m.rows(); ++y) w(y) = -std::log1p(-rng.uniform());
    w /= w.sum();
    m.col(x) = (margin + free_mass * w.array()).matrix();
    m(m.rows() - 1, x) = 1.0 - m.col(x).head(m.rows() - 1).sum();
  }
  return Channel(std::move(m));
}

TangentChannel random_tangent(Rng& rng, std::size_t inputs, std::size_t outputs) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(inputs));
  for (Eigen::Index x = 0; x < m.cols(); ++x) {
    for (Eigen::Index y = 0; y < m.rows(); ++y) m(y, x) = 2.0 * rng.uniform() - 1.0;
    m.col(x).array() -= m.col(x).mean();
  }
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale > 0.0) m /= scale;
  for (Eigen::Index x = 0; x < m.cols(); ++x) {
    m(m.rows() - 1, x) = -m.col(x).head(m.rows() - 1).sum();
  }
  return TangentChannel(std::move(m));
}

LocalData random_instance(std::uint64_t seed, std::size_t inputs, std::size_t outputs, double margin) {
  if (!(margin > 0.0 && margin * static_cast<double>(outputs) < 1.0)) {
    throw ValidationError("instance margin must lie in (0, 1/l)");
  }
  Rng rng(seed);
  Channel channel = random_channel(rng, inputs, outputs, margin);
  return LocalData(std::move(channel), random_tangent(rng, inputs, outputs));
}

std::vector<AxiomCheck> run_axiom_suite(const SuiteOptions& options) {
  std::vector<AxiomCheck> checks;
  checks.reserve(static_cast<std::size_t>(std::max(options.trials, 0)));
  const std::size_t k = options.inputs;
  const std::size_t l = options.outputs;
  const double margin = 0.2 / static_cast<double>(std::max(k, l));

  for (int i = 0; i < options.trials; ++i) {
    const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(i);
    Rng aux_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    AxiomCheck check;
    switch (options.tag) {
      case Axiom::m1:
        check = check_axiom(options.tag, random_instance(seed, k, l, margin), random_channel(aux_rng, k, k, margin),
                            options.metric, options.config, options.slacks);
        break;
      case Axiom::m2:
        check = check_axiom(options.tag, random_instance(seed, k, l, margin), random_channel(aux_rng, l, l, margin),
                            options.metric, options.config, options.slacks);
        break;
      case Axiom::e:
        check = check_axiom(options.tag, random_instance(seed, k, l, margin), Channel::identity(2), options.metric,
                            options.config, options.slacks);
        break;
      case Axiom::n: {
        const LocalData source = random_instance(seed, 1, l, margin);
        const LocalData constant(embed_distribution(source.channel.column(0), k),
                                 embed_distribution(source.tangent.column(0), k));
        check = check_axiom(options.tag, constant, std::nullopt, options.metric, options.config, options.slacks);
        break;
      }
      case Axiom::gmax_geq_gmin:
        check = check_axiom(options.tag, random_instance(seed, k, l, margin), std::nullopt, Metric::gmax,
                            options.config, options.slacks);
        break;
    }
    check.instance += " seed=" + std::to_string(seed);
    checks.push_back(std::move(check));
  }
  return checks;
}

nlohmann::json to_json(const AxiomCheck& check, std::uint64_t seed) {
  nlohmann::json out{{"tag", to_string(check.tag)},
                     {"metric", to_string(check.metric)},
                     {"seed", seed},
                     {"instance", check.instance},
                     {"left", io::json_number(check.left)},
                     {"right", io::json_number(check.right)},
                     {"slack", io::json_number(check.slack)},
                     {"verdict", to_string(check.verdict)}};
  if (!check.note.empty()) out["note"] = check.note;
  return out;
}

nlohmann::json to_json(const BilinearityProbe& probe) {
  auto numbers = [](const std::vector<double>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (double x : v) out.push_back(io::json_number(x));
    return out;
  };
  auto fit = [](const QuadraticFit& f) {
    return nlohmann::json{{"c0", io::json_number(f.c0)}, {"c1", io::json_number(f.c1)}, {"c2", io::json_number(f.c2)}};
  };
  return nlohmann::json{{"tag", "BILINEAR"},
                        {"t", io::json_number(probe.t)},
                        {"s", io::json_number(probe.s)},
                        {"radius", io::json_number(probe.radius)},
                        {"coefficients", numbers(probe.coefficients)},
                        {"gmax", numbers(probe.gmax_values)},
                        {"gmin", numbers(probe.gmin_values)},
                        {"gmax_fit", fit(probe.gmax_fit)},
                        {"gmin_fit", fit(probe.gmin_fit)},
                        {"constant_value", io::json_number(probe.constant_value)},
                        {"bilinear_prediction", io::json_number(probe.bilinear_prediction)}};
}

}  // namespace chanmetric::harness
