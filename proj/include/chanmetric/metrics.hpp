#pragma once

// Extremal monotone norms on the tangent space of finite channels, with the
// Fisher information as the base metric on distributions.
//
//   gmin(Phi, Delta) = max_x  J_{Phi(.|x)}(Delta(.|x))
//   gmax(Phi, Delta) = min over decompositions Phi = sum_i q_i U_i,
//                      Delta = sum_i delta_i U_i  of  J_q(delta)
//
// where U_i runs over the deterministic channels. For fixed weights q the
// inner minimisation over delta is a weighted least-squares problem with a
// closed form; the outer problem over q is convex and is solved either by a
// direct search (when the weight polytope has dimension <= 2) or by pairwise
// Frank-Wolfe.

#include "chanmetric/core.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <vector>

namespace chanmetric {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct SolverConfig {
  double tol = 1e-9;              ///< Frank-Wolfe gap target, relative to 1 + value
  int max_iter = 10'000;
  int grid_fallback_dim = 2;      ///< direct search when the weight polytope is this small
  double svd_cutoff = 1e-11;      ///< relative eigenvalue cutoff for the pseudo-inverse
  std::size_t extreme_point_cap = kDefaultExtremePointCap;
};

/// sum_x delta_x^2 / p_x with 0^2/0 = 0; +inf when delta_x != 0 at p_x = 0.
double fisher_information(const Distribution& p, const TangentDistribution& delta);

struct GminResult {
  double value = 0.0;
  std::size_t witness = 0;  ///< input letter attaining the maximum (smallest on ties)
};

GminResult g_min(const LocalData& data);

/// Deterministic channels of C_{k,l} laid out as the columns of the
/// (l*k) x n matrix B of vectorised (column-major) extreme points.
class ExtremeBasis {
 public:
  ExtremeBasis(std::size_t inputs, std::size_t outputs, std::size_t cap = kDefaultExtremePointCap);

  [[nodiscard]] std::size_t inputs() const noexcept { return inputs_; }
  [[nodiscard]] std::size_t outputs() const noexcept { return outputs_; }
  [[nodiscard]] std::size_t size() const noexcept { return maps_.size(); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return b_; }
  /// Output chosen for input x by extreme point i.
  [[nodiscard]] std::size_t image(std::size_t i, std::size_t x) const { return maps_[i][x]; }
  [[nodiscard]] Channel point(std::size_t i) const;

  /// sum_i w_i U_i as an l x k matrix.
  [[nodiscard]] Eigen::MatrixXd combine(const Eigen::VectorXd& weights) const;
  /// Row i is b_i^T v for a vectorised l x k matrix v.
  [[nodiscard]] Eigen::VectorXd project(const Eigen::VectorXd& vec) const;

  /// Full-row-rank equality system equivalent to B q = vec(target) for
  /// column-stochastic targets: rows (y, x) for y < l-1, then sum q = 1.
  [[nodiscard]] Eigen::MatrixXd reduced_constraints() const;
  [[nodiscard]] Eigen::VectorXd reduced_rhs(const Channel& target) const;

  /// Dimension of {q >= 0, B q = vec(Phi)} for an interior Phi.
  [[nodiscard]] std::size_t polytope_dimension() const noexcept;

 private:
  std::size_t inputs_;
  std::size_t outputs_;
  std::vector<std::vector<std::size_t>> maps_;
  Eigen::MatrixXd b_;
};

Eigen::VectorXd vectorize(const Eigen::MatrixXd& m);

struct DecompositionValue {
  double value = 0.0;            ///< J_q(delta), or +inf if Delta is not representable on supp(q)
  Eigen::VectorXd delta;         ///< optimal signed weights (zero off the support of q)
  Eigen::VectorXd multiplier;    ///< minimum-norm solution of M(q) lambda = vec(Delta)
  Eigen::VectorXd gradient;      ///< dF/dq_i = -(b_i . lambda)^2
};

/// Inner minimisation over delta at fixed weights q. Throws ValidationError
/// when q is not a decomposition of the channel (tolerance 1e-9).
DecompositionValue decomposition_value(const ExtremeBasis& basis, const Eigen::VectorXd& q, const Channel& channel,
                                       const TangentChannel& tangent, double svd_cutoff = 1e-11);

DecompositionValue decomposition_value(const Eigen::VectorXd& q, const Channel& channel,
                                       const TangentChannel& tangent, double svd_cutoff = 1e-11);

/// A simulation program over the deterministic channels, indexed in
/// extreme_points() order.
struct Decomposition {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  Eigen::VectorXd weights;
  Eigen::VectorXd signed_weights;

  [[nodiscard]] Eigen::MatrixXd channel_matrix() const;
  [[nodiscard]] Eigen::MatrixXd tangent_matrix() const;
};

struct GmaxResult {
  double value = 0.0;
  Decomposition decomposition;
  int iterations = 0;
  bool converged = false;
  double gap = 0.0;             ///< Frank-Wolfe duality gap at the returned weights
  double gradient_norm = 0.0;
  bool direct_search = false;   ///< low-dimensional path was used
};

GmaxResult g_max(const LocalData& data, const SolverConfig& config = {});

struct MetricReport {
  double gmin = 0.0;
  std::size_t gmin_witness = 0;
  GmaxResult gmax;
};

MetricReport compute_metrics(const LocalData& data, const SolverConfig& config = {});

/// Closed forms for Phi = [[a, c], [1-a, 1-c]] with a + c <= 1 and
/// Delta = [[-1, 1], [1, -1]].
struct BinaryClosedForm {
  double gmax = 0.0;
  double gmin = 0.0;
};

BinaryClosedForm closed_form_binary(double a, double c);

/// Line through two channels: Delta = slope (psi_a - psi_b) and
/// Phi = weight psi_a + (1 - weight) psi_b.
struct MixingLine {
  double slope = 0.0;
  double weight = 0.0;
};

/// Throws ValidationError when (Phi, Delta) is not on the line (residual 1e-9)
/// or the weight is not strictly inside (0, 1).
MixingLine fit_mixing_line(const Channel& channel, const TangentChannel& tangent, const Channel& psi_a,
                           const Channel& psi_b);

/// Fisher information of the two-point program mixing psi_a and psi_b:
/// slope^2 / weight + slope^2 / (1 - weight).
double mixing_bound(const Channel& channel, const TangentChannel& tangent, const Channel& psi_a, const Channel& psi_b);

}  // namespace chanmetric
