#pragma once

// Property checks for monotone channel norms: monotonicity under pre- and
// post-processing (M1, M2), invariance under tensoring an identity (E),
// agreement with Fisher information on constant channels (N), the ordering
// gmax >= gmin, and the non-bilinearity probe on binary channels.

#include "chanmetric/core.hpp"
#include "chanmetric/metrics.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace chanmetric::harness {

enum class Axiom { m1, m2, e, n, gmax_geq_gmin };
enum class Metric { gmin, gmax };
enum class Verdict { pass, fail, skipped };

const char* to_string(Axiom axiom);
const char* to_string(Metric metric);
const char* to_string(Verdict verdict);
std::optional<Axiom> parse_axiom(const std::string& tag);
std::optional<Metric> parse_metric(const std::string& name);

struct Slacks {
  double gmin = 1e-10;                 ///< absolute, gmin is an exact formula
  double gmax_inequality = 1e-3;       ///< relative to the right-hand side
  double gmax_tensor_equality = 1e-3;  ///< relative
  double gmax_constant_equality = 1e-6;
  double ordering = 1e-8;              ///< gmax >= gmin - ordering
};

struct AxiomCheck {
  Axiom tag = Axiom::m1;
  Metric metric = Metric::gmin;
  std::string instance;
  double left = 0.0;
  double right = 0.0;
  double slack = 0.0;
  Verdict verdict = Verdict::fail;
  std::string note;
};

/// Evaluates both sides of an axiom on one instance.
///   M1: G(Phi, Delta) >= G(Phi o Psi, Delta o Psi), aux = Psi
///   M2: G(Phi, Delta) >= G(Psi o Phi, Psi o Delta), aux = Psi
///   E : G(Phi, Delta) == G(Phi (x) I, Delta (x) I), aux = identity (default size 2)
///   N : G(p, delta) == J_p(delta) for constant data
///   GMAXGEQ: gmax >= gmin (metric ignored)
/// gmax inequality checks are skipped when a solver call did not converge.
/// An infinite right side against a finite left side is reported as a
/// failure with a note rather than silently passed.
AxiomCheck check_axiom(Axiom tag, const LocalData& data, const std::optional<Channel>& aux, Metric metric,
                       const SolverConfig& config = {}, const Slacks& slacks = {});

struct QuadraticFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Least-squares fit of c0 + c1 a + c2 a^2.
QuadraticFit fit_quadratic(const std::vector<double>& a, const std::vector<double>& values);

struct BilinearityProbe {
  double t = 0.0;
  double s = 0.0;
  double radius = 0.0;
  std::vector<double> coefficients;
  std::vector<double> gmax_values;
  std::vector<double> gmin_values;
  QuadraticFit gmax_fit;
  QuadraticFit gmin_fit;
  double constant_value = 0.0;         ///< 1/t + 1/(1-t)
  double bilinear_prediction = 0.0;    ///< c2 forced by a bilinear form: 1/s + 1/(1-s)
};

/// min{(1-s)/t, s/t, (1-s)/(1-t), s/(1-t)}.
double admissible_radius(double t, double s);

/// Evaluates G(Delta_1 + a Delta_2) at Phi = [[1-t, s], [t, 1-s]] with
/// Delta_1 = [[1, 0], [-1, 0]], Delta_2 = [[0, 1], [0, -1]] for m coefficients
/// spread evenly strictly inside the admissible radius.
BilinearityProbe probe_bilinearity(double t, double s, int samples, const SolverConfig& config = {});

struct DirectionProbe {
  std::vector<double> coefficients;
  std::vector<double> gmax_values;
  std::vector<double> gmin_values;
  QuadraticFit gmax_fit;
  QuadraticFit gmin_fit;
};

/// Same evaluation along Delta_1 + a Delta_2 for arbitrary shapes and
/// caller-chosen coefficients (no admissible-radius formula).
DirectionProbe probe_direction(const Channel& channel, const TangentChannel& first, const TangentChannel& second,
                               const std::vector<double>& coefficients, const SolverConfig& config = {});

/// gmax by exhaustive grid search over the decomposition polytope, using the
/// explicit parameterisation of binary decompositions
///   q = (p - u, 1 - p - c + u, c - u, u) on (identity, const-second, flip, const-first)
/// for Phi = [[p, c], [1-p, 1-c]], and the unique decomposition when k = 1 or
/// l = 1. Throws DimensionError for larger polytopes.
double brute_force_gmax(const LocalData& data, int resolution);

/// Inner optimum over the free coefficient of the binary family
/// Phi = [[a, c], [1-a, 1-c]], Delta = [[-1, 1], [1, -1]], at weight u on the
/// constant-first channel:
///   s* = (a - c) u (u + b) / (-u^2 + 2 a c u + a b c),
///   value = (2u + ab + bc) / (-u^2 + 2 a c u + a b c),  b = 1 - a - c.
struct FamilyProfile {
  double inner_argmin = 0.0;
  double value = 0.0;
  /// Objective (1+s)^2/(a-u) + s^2/(b+u) + (1-s)^2/(c-u) + s^2/u at s*.
  double objective_at_argmin = 0.0;
};

FamilyProfile binary_family_profile(double a, double c, double u);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Interior channel with every entry >= margin.
Channel random_channel(Rng& rng, std::size_t inputs, std::size_t outputs, double margin);
/// Zero-column-sum tangent with max |entry| = 1.
TangentChannel random_tangent(Rng& rng, std::size_t inputs, std::size_t outputs);
/// Deterministic in (seed, k, l, margin). Requires 0 < margin < 1/l.
LocalData random_instance(std::uint64_t seed, std::size_t inputs, std::size_t outputs, double margin);

struct SuiteOptions {
  Axiom tag = Axiom::gmax_geq_gmin;
  int trials = 100;
  std::uint64_t seed = 1;
  std::size_t inputs = 2;
  std::size_t outputs = 2;
  Metric metric = Metric::gmin;
  SolverConfig config;
  Slacks slacks;
};

/// Randomised trials of one axiom; trial i uses seed + i.
std::vector<AxiomCheck> run_axiom_suite(const SuiteOptions& options);

nlohmann::json to_json(const AxiomCheck& check, std::uint64_t seed);
nlohmann::json to_json(const BilinearityProbe& probe);

}  // namespace chanmetric::harness
