#pragma once

// Dense two-phase simplex for small standard-form linear programs
//
//     minimize c^T x   subject to   A x = b,  x >= 0.
//
// Sized for the decomposition polytopes used by the metric solver (tens of
// rows, at most a few thousand columns). Bland's rule is used throughout so
// degenerate vertices cannot cycle.

#include <Eigen/Dense>

namespace chanmetric::lp {

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Result {
  Status status = Status::infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

struct Options {
  double tolerance = 1e-10;
  int max_pivots = 50'000;
};

Result minimize(const Eigen::VectorXd& cost, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                const Options& options = {});

const char* to_string(Status status);

}  // namespace chanmetric::lp
