#include "chanmetric/metrics.hpp"

#include "chanmetric/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace chanmetric {

namespace {

constexpr double kReproductionTolerance = 1e-9;
constexpr double kRangeTolerance = 1e-9;

void require_same_shape(const ExtremeBasis& basis, const Channel& channel, const TangentChannel& tangent) {
  if (channel.inputs() != basis.inputs() || channel.outputs() != basis.outputs() ||
      tangent.inputs() != basis.inputs() || tangent.outputs() != basis.outputs()) {
    throw DimensionError("decomposition basis does not match the channel/tangent shape");
  }
}

}  // namespace

double fisher_information(const Distribution& p, const TangentDistribution& delta) {
  if (p.size() != delta.size()) {
    throw DimensionError("distribution and tangent lengths differ (" + std::to_string(p.size()) + " vs " +
                         std::to_string(delta.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = delta[i];
    if (d == 0.0) continue;
    if (p[i] == 0.0) return kInfinity;
    sum += d * d / p[i];
  }
  return sum;
}

GminResult g_min(const LocalData& data) {
  GminResult best{-1.0, 0};
  for (std::size_t x = 0; x < data.channel.inputs(); ++x) {
    const double v = fisher_information(data.channel.column(x), data.tangent.column(x));
    if (v > best.value) best = {v, x};
  }
  return best;
}

ExtremeBasis::ExtremeBasis(std::size_t inputs, std::size_t outputs, std::size_t cap)
    : inputs_(inputs), outputs_(outputs) {
  const std::size_t count = extreme_point_count(inputs, outputs, cap);
  maps_.reserve(count);
  std::vector<std::size_t> map(inputs, 0);
  for (std::size_t n = 0; n < count; ++n) {
    maps_.push_back(map);
    for (std::size_t x = inputs; x-- > 0;) {
      if (++map[x] < outputs) break;
      map[x] = 0;
    }
  }
  const auto l = static_cast<Eigen::Index>(outputs);
  b_ = Eigen::MatrixXd::Zero(l * static_cast<Eigen::Index>(inputs), static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t x = 0; x < inputs; ++x) {
      b_(static_cast<Eigen::Index>(x) * l + static_cast<Eigen::Index>(maps_[i][x]), static_cast<Eigen::Index>(i)) = 1.0;
    }
  }
}

Channel ExtremeBasis::point(std::size_t i) const { return Channel::deterministic(maps_.at(i), outputs_); }

Eigen::MatrixXd ExtremeBasis::combine(const Eigen::VectorXd& weights) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(outputs_), static_cast<Eigen::Index>(inputs_));
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const double w = weights(static_cast<Eigen::Index>(i));
    if (w == 0.0) continue;
    for (std::size_t x = 0; x < inputs_; ++x) {
      out(static_cast<Eigen::Index>(maps_[i][x]), static_cast<Eigen::Index>(x)) += w;
    }
  }
  return out;
}

Eigen::VectorXd ExtremeBasis::project(const Eigen::VectorXd& vec) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(maps_.size()));
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    double s = 0.0;
    for (std::size_t x = 0; x < inputs_; ++x) {
      s += vec(static_cast<Eigen::Index>(x * outputs_ + maps_[i][x]));
    }
    out(static_cast<Eigen::Index>(i)) = s;
  }
  return out;
}

Eigen::MatrixXd ExtremeBasis::reduced_constraints() const {
  const std::size_t rows = inputs_ * (outputs_ - 1) + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(maps_.size()));
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    for (std::size_t x = 0; x < inputs_; ++x) {
      if (maps_[i][x] + 1 < outputs_) {
        a(static_cast<Eigen::Index>(x * (outputs_ - 1) + maps_[i][x]), static_cast<Eigen::Index>(i)) = 1.0;
      }
    }
  }
  a.row(static_cast<Eigen::Index>(rows - 1)).setOnes();
  return a;
}

Eigen::VectorXd ExtremeBasis::reduced_rhs(const Channel& target) const {
  const std::size_t rows = inputs_ * (outputs_ - 1) + 1;
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows));
  for (std::size_t x = 0; x < inputs_; ++x) {
    for (std::size_t y = 0; y + 1 < outputs_; ++y) {
      b(static_cast<Eigen::Index>(x * (outputs_ - 1) + y)) = target(y, x);
    }
  }
  b(static_cast<Eigen::Index>(rows - 1)) = 1.0;
  return b;
}

std::size_t ExtremeBasis::polytope_dimension() const noexcept {
  return maps_.size() - (inputs_ * (outputs_ - 1) + 1);
}

Eigen::VectorXd vectorize(const Eigen::MatrixXd& m) { return m.reshaped(); }

DecompositionValue decomposition_value(const ExtremeBasis& basis, const Eigen::VectorXd& q, const Channel& channel,
                                       const TangentChannel& tangent, double svd_cutoff) {
  require_same_shape(basis, channel, tangent);
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (q.size() != n) {
    throw DimensionError("weight vector has length " + std::to_string(q.size()) + ", expected " + std::to_string(n));
  }
  if (q.minCoeff() < 0.0) {
    throw ValidationError("decomposition weights must be non-negative");
  }
  const double mismatch = (basis.combine(q) - channel.matrix()).cwiseAbs().maxCoeff();
  if (mismatch > kReproductionTolerance) {
    throw ValidationError("weights do not reproduce the channel (max deviation " + std::to_string(mismatch) + ")");
  }

  const Eigen::VectorXd d = vectorize(tangent.matrix());
  const Eigen::Index dim = d.size();
  DecompositionValue out;
  out.delta = Eigen::VectorXd::Zero(n);
  out.multiplier = Eigen::VectorXd::Zero(dim);
  out.gradient = Eigen::VectorXd::Zero(n);
  const double d_norm = d.norm();
  if (d_norm == 0.0) return out;

  // M(q) = B diag(q) B^T, accumulated from the k nonzeros of each b_i.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  const std::size_t k = basis.inputs();
  const std::size_t l = basis.outputs();
  std::vector<Eigen::Index> rows(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = q(i);
    if (w == 0.0) continue;
    for (std::size_t x = 0; x < k; ++x) {
      rows[x] = static_cast<Eigen::Index>(x * l + basis.image(static_cast<std::size_t>(i), x));
    }
    for (std::size_t x1 = 0; x1 < k; ++x1) {
      for (std::size_t x2 = 0; x2 < k; ++x2) {
        m(rows[x1], rows[x2]) += w;
      }
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const Eigen::MatrixXd& vecs = eig.eigenvectors();
  const double cutoff = svd_cutoff * std::max(ev.maxCoeff(), 0.0);

  Eigen::VectorXd projected = Eigen::VectorXd::Zero(dim);
  double value = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (ev(j) <= cutoff) continue;
    const double c = vecs.col(j).dot(d);
    projected += c * vecs.col(j);
    out.multiplier += (c / ev(j)) * vecs.col(j);
    value += c * c / ev(j);
  }
  if ((d - projected).norm() > kRangeTolerance * d_norm) {
    out.value = kInfinity;
    out.multiplier.setZero();
    return out;
  }

  const Eigen::VectorXd s = basis.project(out.multiplier);
  out.delta = q.cwiseProduct(s);
  out.gradient = -s.cwiseAbs2();
  out.value = value;
  return out;
}

DecompositionValue decomposition_value(const Eigen::VectorXd& q, const Channel& channel,
                                       const TangentChannel& tangent, double svd_cutoff) {
  const ExtremeBasis basis(channel.inputs(), channel.outputs());
  return decomposition_value(basis, q, channel, tangent, svd_cutoff);
}

Eigen::MatrixXd Decomposition::channel_matrix() const {
  return ExtremeBasis(inputs, outputs).combine(weights);
}

Eigen::MatrixXd Decomposition::tangent_matrix() const {
  return ExtremeBasis(inputs, outputs).combine(signed_weights);
}

GmaxResult g_max(const LocalData& data, const SolverConfig& config) {
  const Channel& channel = data.channel;
  const TangentChannel& tangent = data.tangent;
  const ExtremeBasis basis(channel.inputs(), channel.outputs(), config.extreme_point_cap);
  const solver::Polytope polytope{basis.reduced_constraints(), basis.reduced_rhs(channel)};

  const auto start = solver::relative_interior_point(polytope);
  if (!start) {
    throw std::runtime_error("channel admits no decomposition into deterministic channels");
  }

  GmaxResult out;
  out.decomposition.inputs = channel.inputs();
  out.decomposition.outputs = channel.outputs();

  auto evaluate = [&](const Eigen::VectorXd& q) {
    return decomposition_value(basis, q, channel, tangent, config.svd_cutoff);
  };

  Eigen::VectorXd q;
  if (tangent.matrix().isZero(0.0)) {
    q = *start;
    out.converged = true;
  } else if (basis.polytope_dimension() <= static_cast<std::size_t>(std::max(config.grid_fallback_dim, 0))) {
    const solver::DirectResult r = solver::minimize_low_dimensional(
        polytope, *start, [&](const Eigen::VectorXd& w) { return evaluate(w).value; });
    q = r.q;
    out.iterations = r.evaluations;
    out.converged = true;
    out.direct_search = true;
  } else {
    const solver::FrankWolfeResult r = solver::frank_wolfe(
        polytope, *start,
        [&](const Eigen::VectorXd& w, Eigen::VectorXd& grad) {
          DecompositionValue dv = evaluate(w);
          grad = std::move(dv.gradient);
          return dv.value;
        },
        solver::FrankWolfeOptions{config.tol, config.max_iter});
    q = r.q;
    out.iterations = r.iterations;
    out.converged = r.converged;
  }

  const DecompositionValue final_value = evaluate(q);
  out.value = final_value.value;
  out.decomposition.weights = q;
  out.decomposition.signed_weights = final_value.delta;
  out.gradient_norm = final_value.gradient.norm();
  out.gap = std::isfinite(out.value) ? solver::frank_wolfe_gap(polytope, q, final_value.gradient) : 0.0;
  return out;
}

MetricReport compute_metrics(const LocalData& data, const SolverConfig& config) {
  const GminResult lower = g_min(data);
  return MetricReport{lower.value, lower.witness, g_max(data, config)};
}

BinaryClosedForm closed_form_binary(double a, double c) {
  if (!(a > 0.0) || !(c > 0.0) || !(a + c <= 1.0 + kSumTolerance)) {
    throw ValidationError("closed form requires a > 0, c > 0 and a + c <= 1");
  }
  return BinaryClosedForm{1.0 / a + 1.0 / c, std::max(1.0 / a + 1.0 / (1.0 - a), 1.0 / c + 1.0 / (1.0 - c))};
}

MixingLine fit_mixing_line(const Channel& channel, const TangentChannel& tangent, const Channel& psi_a,
                           const Channel& psi_b) {
  for (const auto* m : {&psi_a.matrix(), &psi_b.matrix(), &tangent.matrix()}) {
    if (m->rows() != channel.matrix().rows() || m->cols() != channel.matrix().cols()) {
      throw DimensionError("mixing line operands have different shapes");
    }
  }
  const Eigen::MatrixXd diff = psi_a.matrix() - psi_b.matrix();
  const double norm2 = diff.squaredNorm();
  if (norm2 < 1e-24) {
    throw ValidationError("mixing line needs two distinct channels");
  }
  const Eigen::MatrixXd offset = channel.matrix() - psi_b.matrix();
  MixingLine line{diff.cwiseProduct(tangent.matrix()).sum() / norm2, diff.cwiseProduct(offset).sum() / norm2};

  const double tangent_scale = std::max(1.0, tangent.matrix().cwiseAbs().maxCoeff());
  if ((line.slope * diff - tangent.matrix()).cwiseAbs().maxCoeff() > 1e-9 * tangent_scale) {
    throw ValidationError("tangent is not parallel to the line through the two channels");
  }
  if ((line.weight * diff - offset).cwiseAbs().maxCoeff() > 1e-9) {
    throw ValidationError("channel is not on the line through the two channels");
  }
  if (!(line.weight > 0.0 && line.weight < 1.0)) {
    throw ValidationError("channel is not strictly between the two channels (weight " + std::to_string(line.weight) +
                          ")");
  }
  return line;
}

double mixing_bound(const Channel& channel, const TangentChannel& tangent, const Channel& psi_a, const Channel& psi_b) {
  const MixingLine line = fit_mixing_line(channel, tangent, psi_a, psi_b);
  return line.slope * line.slope / line.weight + line.slope * line.slope / (1.0 - line.weight);
}

}  // namespace chanmetric
