#include "chanmetric/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace chanmetric::lp {

namespace {

// Tableau with m constraint rows and one objective row at index m. Column
// `cols` holds the right-hand side.
class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), basis_(rows) {}

  Eigen::MatrixXd& data() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }
  [[nodiscard]] Eigen::Index rows() const { return t_.rows() - 1; }
  [[nodiscard]] Eigen::Index rhs_col() const { return t_.cols() - 1; }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index r = 0; r < t_.rows(); ++r) {
      if (r != row && t_(r, col) != 0.0) {
        t_.row(r) -= t_(r, col) * t_.row(row);
      }
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Runs simplex iterations on the objective row over columns [0, allowed).
  Status optimize(Eigen::Index allowed, const Options& opt, int& pivots) {
    const Eigen::Index obj = rows();
    while (true) {
      if (pivots >= opt.max_pivots) return Status::iteration_limit;
      // Bland: smallest index with negative reduced cost.
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (t_(obj, j) < -opt.tolerance) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::optimal;

      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < obj; ++r) {
        const double coef = t_(r, enter);
        if (coef > opt.tolerance) {
          const double ratio = t_(r, rhs_col()) / coef;
          const bool tie = leave >= 0 && std::abs(ratio - best) <= opt.tolerance;
          if (leave < 0 || (!tie && ratio < best) ||
              (tie && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return Status::unbounded;
      pivot(leave, enter);
      ++pivots;
    }
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

Result minimize(const Eigen::VectorXd& cost, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                const Options& options) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (cost.size() != n || b.size() != m) {
    throw std::invalid_argument("lp::minimize: inconsistent problem dimensions");
  }

  Result result;
  result.x = Eigen::VectorXd::Zero(n);

  // Columns: n structural, m artificial, then rhs.
  Tableau tab(m, n + m);
  auto& t = tab.data();
  for (Eigen::Index r = 0; r < m; ++r) {
    const double sign = b(r) < 0.0 ? -1.0 : 1.0;
    t.row(r).head(n) = sign * a.row(r);
    t(r, n + r) = 1.0;
    t(r, tab.rhs_col()) = sign * b(r);
    tab.basis()[static_cast<std::size_t>(r)] = n + r;
  }

  // Phase 1: minimise the sum of artificials.
  for (Eigen::Index r = 0; r < m; ++r) {
    t.row(m) -= t.row(r);
  }
  for (Eigen::Index r = 0; r < m; ++r) t(m, n + r) = 0.0;

  const double scale = 1.0 + b.cwiseAbs().sum();
  Status status = tab.optimize(n + m, options, result.pivots);
  if (status == Status::iteration_limit) {
    result.status = status;
    return result;
  }
  if (-t(m, tab.rhs_col()) > options.tolerance * scale * 10.0) {
    result.status = Status::infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis. Rows with no structural
  // support are redundant and get zeroed.
  for (Eigen::Index r = 0; r < m; ++r) {
    if (tab.basis()[static_cast<std::size_t>(r)] < n) continue;
    Eigen::Index col = -1;
    t.row(r).head(n).cwiseAbs().maxCoeff(&col);
    if (std::abs(t(r, col)) > options.tolerance) {
      tab.pivot(r, col);
    } else {
      t.row(r).setZero();
    }
  }

  // Phase 2 objective row: reduced costs c_j - c_B^T B^{-1} a_j.
  t.row(m).setZero();
  t.row(m).head(n) = cost.transpose();
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index bcol = tab.basis()[static_cast<std::size_t>(r)];
    if (bcol < n && t(m, bcol) != 0.0) {
      t.row(m) -= t(m, bcol) * t.row(r);
    }
  }

  status = tab.optimize(n, options, result.pivots);
  result.status = status;
  if (status != Status::optimal) return result;

  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index bcol = tab.basis()[static_cast<std::size_t>(r)];
    if (bcol < n) result.x(bcol) = std::max(0.0, t(r, tab.rhs_col()));
  }
  result.objective = cost.dot(result.x);
  return result;
}

const char* to_string(Status status) {
  switch (status) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

}  // namespace chanmetric::lp
