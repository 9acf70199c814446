#pragma once

// Convex minimisation over polytopes {q >= 0, A q = b} (A full row rank).
// Objectives may return +inf; the feasible domain of finite values is assumed
// convex, as it is for perspective-type objectives.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace chanmetric::solver {

struct Polytope {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;

  [[nodiscard]] Eigen::Index ambient_dimension() const { return a.cols(); }
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
/// Returns the value and writes the gradient when the value is finite.
using SmoothObjective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Linear minimisation oracle: argmin_{v in P} c^T v (a vertex), or nullopt
/// when the LP fails.
std::optional<Eigen::VectorXd> lmo(const Polytope& polytope, const Eigen::VectorXd& cost);

/// A point of the relative interior: maximises min_i q_i, falling back to an
/// average of coordinate-maximising vertices when that minimum is zero.
/// Returns nullopt when the polytope is empty.
std::optional<Eigen::VectorXd> relative_interior_point(const Polytope& polytope);

/// Minimiser of a convex function of one variable on [lo, hi]: dense grid to
/// bracket, then golden-section refinement. Endpoints are always evaluated.
struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

ScalarMinimum minimize_convex_scalar(const std::function<double(double)>& f, double lo, double hi,
                                     int grid_points = 65);

/// Direct search for polytopes of dimension <= 2, parameterised through the
/// kernel of A around a feasible point.
struct DirectResult {
  Eigen::VectorXd q;
  double value = 0.0;
  int evaluations = 0;
  Eigen::Index dimension = 0;
};

DirectResult minimize_low_dimensional(const Polytope& polytope, const Eigen::VectorXd& feasible,
                                      const Objective& objective, int grid_points = 65);

struct FrankWolfeOptions {
  double tol = 1e-9;
  int max_iter = 10'000;
};

struct FrankWolfeResult {
  Eigen::VectorXd q;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double gap = 0.0;
  double gradient_norm = 0.0;
};

/// Pairwise Frank-Wolfe: atoms are the start point and LP vertices; each step
/// moves weight from the worst active atom to the FW vertex with an exact
/// line search. Stops when the FW gap <= tol * (1 + value).
FrankWolfeResult frank_wolfe(const Polytope& polytope, const Eigen::VectorXd& start, const SmoothObjective& objective,
                             const FrankWolfeOptions& options = {});

/// grad^T (q - v) for the LMO vertex v; +inf if the LMO fails.
double frank_wolfe_gap(const Polytope& polytope, const Eigen::VectorXd& q, const Eigen::VectorXd& gradient);

}  // namespace chanmetric::solver
