#include "chanmetric/solver.hpp"

#include "chanmetric/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chanmetric::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroWeight = 1e-14;
constexpr double kGoldenRatio = 0.6180339887498949;

// Clears rounding residue so that points on a face sit exactly on it.
Eigen::VectorXd clean(Eigen::VectorXd q) {
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q(i) < kZeroWeight) q(i) = 0.0;
  }
  return q;
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double threshold = 1e-12 * (sv.size() > 0 ? std::max(1.0, sv(0)) : 1.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++rank;
  }
  return svd.matrixV().rightCols(a.cols() - rank);
}

// Feasible interval of t for offset + direction * t >= 0.
std::pair<double, double> feasible_interval(const Eigen::VectorXd& offset, const Eigen::VectorXd& direction) {
  double lo = -kInf;
  double hi = kInf;
  for (Eigen::Index i = 0; i < offset.size(); ++i) {
    const double d = direction(i);
    if (d > 1e-14) {
      lo = std::max(lo, -offset(i) / d);
    } else if (d < -1e-14) {
      hi = std::min(hi, -offset(i) / d);
    } else if (offset(i) < -1e-10) {
      return {kInf, -kInf};
    }
  }
  return {lo, hi};
}

struct LineEval {
  double value;
  double slope;
};

// Minimises a convex phi on [0, gmax] given phi(0) and phi'(0) < 0.
// Safeguarded secant on the derivative, alternating with bisection.
double exact_line_search(const std::function<LineEval(double)>& eval, double gmax, const LineEval& at_zero) {
  const LineEval end = eval(gmax);
  if (std::isfinite(end.value) && end.slope <= 0.0) return gmax;

  double lo = 0.0;
  double hi = gmax;
  double slope_lo = at_zero.slope;
  double slope_hi = std::isfinite(end.value) ? end.slope : kInf;
  double best_gamma = 0.0;
  double best_value = at_zero.value;
  if (std::isfinite(end.value) && end.value < best_value) {
    best_gamma = gmax;
    best_value = end.value;
  }

  for (int it = 0; it < 80; ++it) {
    const double width = hi - lo;
    if (width <= 1e-16 * gmax) break;
    double gamma = 0.5 * (lo + hi);
    if (it % 2 == 0 && std::isfinite(slope_hi)) {
      const double secant = lo - slope_lo * width / (slope_hi - slope_lo);
      if (secant > lo + 0.01 * width && secant < hi - 0.01 * width) gamma = secant;
    }
    const LineEval e = eval(gamma);
    if (!std::isfinite(e.value)) {
      hi = gamma;
      slope_hi = kInf;
      continue;
    }
    if (e.value < best_value) {
      best_value = e.value;
      best_gamma = gamma;
    }
    if (std::abs(e.slope) <= 1e-13 * std::abs(at_zero.slope)) return gamma;
    if (e.slope < 0.0) {
      lo = gamma;
      slope_lo = e.slope;
    } else {
      hi = gamma;
      slope_hi = e.slope;
    }
  }
  // Near the optimum value differences drown in rounding while slopes do not;
  // by convexity phi'(lo) < 0 already certifies descent up to lo.
  return std::max(best_gamma, lo);
}

}  // namespace

std::optional<Eigen::VectorXd> lmo(const Polytope& polytope, const Eigen::VectorXd& cost) {
  const lp::Result r = lp::minimize(cost, polytope.a, polytope.b);
  if (r.status != lp::Status::optimal) return std::nullopt;
  return r.x;
}

std::optional<Eigen::VectorXd> relative_interior_point(const Polytope& polytope) {
  const Eigen::Index n = polytope.a.cols();
  const Eigen::Index m = polytope.a.rows();

  // maximise tau subject to A (s + tau 1) = b, s >= 0, tau >= 0.
  Eigen::MatrixXd lifted(m, n + 1);
  lifted.leftCols(n) = polytope.a;
  lifted.col(n) = polytope.a.rowwise().sum();
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + 1);
  cost(n) = -1.0;
  const lp::Result maxmin = lp::minimize(cost, lifted, polytope.b);
  if (maxmin.status == lp::Status::infeasible) return std::nullopt;
  if (maxmin.status == lp::Status::optimal && maxmin.x(n) > 1e-12) {
    return clean(maxmin.x.head(n).array() + maxmin.x(n));
  }

  // Some coordinates vanish on the whole polytope: average the vertices that
  // maximise each coordinate so every coordinate that can be positive is.
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  int count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    c(i) = -1.0;
    const lp::Result r = lp::minimize(c, polytope.a, polytope.b);
    if (r.status != lp::Status::optimal) continue;
    sum += r.x;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return clean(sum / count);
}

ScalarMinimum minimize_convex_scalar(const std::function<double(double)>& f, double lo, double hi, int grid_points) {
  ScalarMinimum best{lo, kInf, 0};
  auto consider = [&](double z) {
    const double v = f(z);
    ++best.evaluations;
    if (v < best.value) {
      best.value = v;
      best.argmin = z;
    }
    return v;
  };

  if (!(hi > lo)) {
    consider(lo);
    return best;
  }

  grid_points = std::max(grid_points, 3);
  const double step = (hi - lo) / (grid_points - 1);
  int best_j = 0;
  double best_grid = kInf;
  for (int j = 0; j < grid_points; ++j) {
    const double z = j == grid_points - 1 ? hi : lo + step * j;
    const double v = consider(z);
    if (v < best_grid) {
      best_grid = v;
      best_j = j;
    }
  }
  if (!std::isfinite(best_grid)) return best;

  double a = lo + step * std::max(best_j - 1, 0);
  double b = best_j + 1 >= grid_points - 1 ? hi : lo + step * (best_j + 1);
  double c = b - kGoldenRatio * (b - a);
  double d = a + kGoldenRatio * (b - a);
  double fc = consider(c);
  double fd = consider(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max({1.0, std::abs(a), std::abs(b)}); ++it) {
    bool keep_left = fc < fd;
    if (!std::isfinite(fc) && !std::isfinite(fd)) {
      keep_left = best.argmin < c;
      if (best.argmin >= c && best.argmin <= d) {
        a = c;
        b = d;
        c = b - kGoldenRatio * (b - a);
        d = a + kGoldenRatio * (b - a);
        fc = consider(c);
        fd = consider(d);
        continue;
      }
    }
    if (keep_left) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGoldenRatio * (b - a);
      fc = consider(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGoldenRatio * (b - a);
      fd = consider(d);
    }
  }
  return best;
}

DirectResult minimize_low_dimensional(const Polytope& polytope, const Eigen::VectorXd& feasible,
                                      const Objective& objective, int grid_points) {
  const Eigen::MatrixXd kernel = kernel_basis(polytope.a);
  DirectResult out;
  out.dimension = kernel.cols();
  int evaluations = 0;
  auto eval = [&](const Eigen::VectorXd& q) {
    ++evaluations;
    return objective(q);
  };

  if (kernel.cols() == 0) {
    out.q = clean(feasible);
    out.value = eval(out.q);
  } else if (kernel.cols() == 1) {
    auto [lo, hi] = feasible_interval(feasible, kernel.col(0));
    if (lo > hi) lo = hi = 0.0;
    auto at = [&](double z) { return clean(feasible + z * kernel.col(0)); };
    const ScalarMinimum m = minimize_convex_scalar([&](double z) { return eval(at(z)); }, lo, hi, grid_points);
    out.q = at(m.argmin);
    out.value = m.value;
  } else if (kernel.cols() == 2) {
    // Range of the first coordinate from the polygon's vertices.
    const Eigen::Index n = feasible.size();
    double z1_lo = kInf;
    double z1_hi = -kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        Eigen::Matrix2d sys;
        sys << kernel.row(i), kernel.row(j);
        if (std::abs(sys.determinant()) < 1e-14) continue;
        const Eigen::Vector2d z = sys.partialPivLu().solve(Eigen::Vector2d(-feasible(i), -feasible(j)));
        if ((feasible + kernel * z).minCoeff() < -1e-10) continue;
        z1_lo = std::min(z1_lo, z(0));
        z1_hi = std::max(z1_hi, z(0));
      }
    }
    if (z1_lo > z1_hi) z1_lo = z1_hi = 0.0;

    auto inner = [&](double z1) {
      const Eigen::VectorXd offset = feasible + z1 * kernel.col(0);
      auto [lo, hi] = feasible_interval(offset, kernel.col(1));
      if (lo > hi) return ScalarMinimum{0.0, kInf, 0};
      return minimize_convex_scalar([&](double z2) { return eval(clean(offset + z2 * kernel.col(1))); }, lo, hi,
                                    grid_points);
    };
    const ScalarMinimum outer =
        minimize_convex_scalar([&](double z1) { return inner(z1).value; }, z1_lo, z1_hi, grid_points);
    const ScalarMinimum last = inner(outer.argmin);
    out.q = clean(feasible + outer.argmin * kernel.col(0) + last.argmin * kernel.col(1));
    out.value = objective(out.q);
  } else {
    throw std::invalid_argument("direct search supports polytopes of dimension <= 2, got " +
                                std::to_string(kernel.cols()));
  }
  out.evaluations = evaluations;
  return out;
}

double frank_wolfe_gap(const Polytope& polytope, const Eigen::VectorXd& q, const Eigen::VectorXd& gradient) {
  const auto v = lmo(polytope, gradient);
  if (!v) return kInf;
  return std::max(0.0, gradient.dot(q - *v));
}

FrankWolfeResult frank_wolfe(const Polytope& polytope, const Eigen::VectorXd& start, const SmoothObjective& objective,
                             const FrankWolfeOptions& options) {
  FrankWolfeResult out;
  Eigen::VectorXd q = clean(start);
  Eigen::VectorXd grad(q.size());
  double value = objective(q, grad);
  if (!std::isfinite(value)) {
    // The start has maximal support, so no point of the polytope does better.
    out.q = q;
    out.value = value;
    out.converged = true;
    out.gap = 0.0;
    return out;
  }

  std::vector<Eigen::VectorXd> atoms{q};
  std::vector<double> alpha{1.0};
  Eigen::VectorXd trial_grad(q.size());

  for (int it = 0; it < options.max_iter; ++it) {
    out.iterations = it;
    const auto vertex = lmo(polytope, grad);
    if (!vertex) break;
    const double gap = grad.dot(q - *vertex);
    out.gap = std::max(0.0, gap);
    if (gap <= options.tol * (1.0 + std::abs(value))) {
      out.converged = true;
      break;
    }

    std::size_t away = 0;
    double worst = -kInf;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      const double s = grad.dot(atoms[j]);
      if (s > worst) {
        worst = s;
        away = j;
      }
    }
    Eigen::VectorXd direction = *vertex - atoms[away];
    double gmax = alpha[away];
    bool pairwise = true;
    if (grad.dot(direction) >= 0.0) {
      direction = *vertex - q;
      gmax = 1.0;
      pairwise = false;
    }

    auto eval = [&](double gamma) {
      const Eigen::VectorXd trial = (q + gamma * direction).cwiseMax(0.0);
      const double v = objective(trial, trial_grad);
      return LineEval{v, std::isfinite(v) ? trial_grad.dot(direction) : kInf};
    };
    double gamma = exact_line_search(eval, gmax, LineEval{value, grad.dot(direction)});
    if (gamma <= 0.0 && pairwise) {
      direction = *vertex - q;
      gmax = 1.0;
      pairwise = false;
      gamma = exact_line_search(eval, gmax, LineEval{value, grad.dot(direction)});
    }
    if (gamma <= 0.0) break;

    q = (q + gamma * direction).cwiseMax(0.0);
    if (pairwise) {
      alpha[away] -= gamma;
    } else {
      for (double& a : alpha) a *= (1.0 - gamma);
    }
    auto existing = std::find_if(atoms.begin(), atoms.end(),
                                 [&](const Eigen::VectorXd& a) { return (a - *vertex).cwiseAbs().maxCoeff() < 1e-12; });
    if (existing != atoms.end()) {
      alpha[static_cast<std::size_t>(existing - atoms.begin())] += gamma;
    } else {
      atoms.push_back(*vertex);
      alpha.push_back(gamma);
    }
    for (std::size_t j = atoms.size(); j-- > 0;) {
      if (alpha[j] <= 1e-15) {
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(j));
        alpha.erase(alpha.begin() + static_cast<std::ptrdiff_t>(j));
      }
    }
    value = objective(q, grad);
    out.iterations = it + 1;
  }

  out.q = q;
  out.value = value;
  out.gradient_norm = grad.norm();
  return out;
}

}  // namespace chanmetric::solver
