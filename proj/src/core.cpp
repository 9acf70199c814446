#include "chanmetric/core.hpp"

#include <cmath>
#include <sstream>

namespace chanmetric {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + " has non-finite entries");
  }
}

void require_nonempty(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows == 0 || cols == 0) {
    throw ValidationError(std::string(what) + " must have at least one row and one column");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <typename Derived>
Eigen::MatrixXd kron(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void require_chain(std::size_t earlier_out, std::size_t later_in) {
  if (earlier_out != later_in) {
    throw DimensionError("cannot compose: earlier map has " + std::to_string(earlier_out) +
                         " outputs but later map takes " + std::to_string(later_in) + " inputs");
  }
}

}  // namespace

Distribution::Distribution(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  require_nonempty(probs_.size(), 1, "distribution");
  require_finite(probs_, "distribution");
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (probs_(i) < 0.0) {
      throw ValidationError("distribution entry " + std::to_string(i) + " is negative (" + fmt(probs_(i)) + ")");
    }
  }
  const double sum = probs_.sum();
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError("distribution sums to " + fmt(sum) + ", expected 1");
  }
}

TangentDistribution::TangentDistribution(Eigen::VectorXd deltas) : deltas_(std::move(deltas)) {
  require_nonempty(deltas_.size(), 1, "tangent distribution");
  require_finite(deltas_, "tangent distribution");
  const double sum = deltas_.sum();
  if (std::abs(sum) > kSumTolerance) {
    throw ValidationError("tangent distribution sums to " + fmt(sum) + ", expected 0");
  }
}

Channel::Channel(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  require_nonempty(matrix_.rows(), matrix_.cols(), "channel");
  require_finite(matrix_, "channel");
  for (Eigen::Index x = 0; x < matrix_.cols(); ++x) {
    for (Eigen::Index y = 0; y < matrix_.rows(); ++y) {
      if (matrix_(y, x) < 0.0) {
        throw ValidationError("channel entry (" + std::to_string(y) + ", " + std::to_string(x) +
                              ") is negative (" + fmt(matrix_(y, x)) + ")");
      }
    }
    const double sum = matrix_.col(x).sum();
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw ValidationError("channel column " + std::to_string(x) + " sums to " + fmt(sum) + ", expected 1");
    }
  }
}

Channel Channel::identity(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  return Channel(Eigen::MatrixXd::Identity(size, size));
}

Channel Channel::deterministic(const std::vector<std::size_t>& map, std::size_t outputs) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(map.size()));
  for (std::size_t x = 0; x < map.size(); ++x) {
    if (map[x] >= outputs) {
      throw DimensionError("deterministic map sends input " + std::to_string(x) + " to output " +
                           std::to_string(map[x]) + " outside alphabet of size " + std::to_string(outputs));
    }
    m(static_cast<Eigen::Index>(map[x]), static_cast<Eigen::Index>(x)) = 1.0;
  }
  return Channel(std::move(m));
}

Distribution Channel::column(std::size_t x) const {
  return Distribution(matrix_.col(static_cast<Eigen::Index>(x)));
}

TangentChannel::TangentChannel(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  require_nonempty(matrix_.rows(), matrix_.cols(), "tangent");
  require_finite(matrix_, "tangent");
  for (Eigen::Index x = 0; x < matrix_.cols(); ++x) {
    const double sum = matrix_.col(x).sum();
    if (std::abs(sum) > kSumTolerance) {
      throw ValidationError("tangent column " + std::to_string(x) + " sums to " + fmt(sum) + ", expected 0");
    }
  }
}

TangentChannel TangentChannel::zero(std::size_t outputs, std::size_t inputs) {
  return TangentChannel(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(inputs)));
}

TangentDistribution TangentChannel::column(std::size_t x) const {
  return TangentDistribution(matrix_.col(static_cast<Eigen::Index>(x)));
}

TangentChannel TangentChannel::scaled(double factor) const {
  return TangentChannel(factor * matrix_);
}

LocalData::LocalData(Channel channel_, TangentChannel tangent_)
    : channel(std::move(channel_)), tangent(std::move(tangent_)) {
  if (channel.inputs() != tangent.inputs() || channel.outputs() != tangent.outputs()) {
    throw DimensionError("tangent is " + std::to_string(tangent.outputs()) + "x" + std::to_string(tangent.inputs()) +
                         " but channel is " + std::to_string(channel.outputs()) + "x" +
                         std::to_string(channel.inputs()));
  }
}

Distribution apply(const Channel& channel, const Distribution& p) {
  if (p.size() != channel.inputs()) {
    throw DimensionError("distribution of length " + std::to_string(p.size()) + " applied to channel with " +
                         std::to_string(channel.inputs()) + " inputs");
  }
  return Distribution(channel.matrix() * p.probs());
}

Channel compose(const Channel& later, const Channel& earlier) {
  require_chain(earlier.outputs(), later.inputs());
  return Channel(later.matrix() * earlier.matrix());
}

TangentChannel compose(const Channel& later, const TangentChannel& earlier) {
  require_chain(earlier.outputs(), later.inputs());
  return TangentChannel(later.matrix() * earlier.matrix());
}

TangentChannel compose(const TangentChannel& later, const Channel& earlier) {
  require_chain(earlier.outputs(), later.inputs());
  return TangentChannel(later.matrix() * earlier.matrix());
}

Channel tensor(const Channel& a, const Channel& b) { return Channel(kron(a.matrix(), b.matrix())); }

TangentChannel tensor(const TangentChannel& a, const Channel& b) {
  return TangentChannel(kron(a.matrix(), b.matrix()));
}

TangentChannel tensor(const Channel& a, const TangentChannel& b) {
  return TangentChannel(kron(a.matrix(), b.matrix()));
}

std::size_t extreme_point_count(std::size_t inputs, std::size_t outputs, std::size_t cap) {
  if (inputs == 0 || outputs == 0) {
    throw DimensionError("alphabet sizes must be positive");
  }
  std::size_t count = 1;
  for (std::size_t i = 0; i < inputs; ++i) {
    if (count > cap / outputs) {
      throw ResourceError(std::to_string(outputs) + "^" + std::to_string(inputs) +
                          " extreme points exceed the cap of " + std::to_string(cap));
    }
    count *= outputs;
  }
  if (count > cap) {
    throw ResourceError("extreme point count " + std::to_string(count) + " exceeds the cap of " + std::to_string(cap));
  }
  return count;
}

std::vector<Channel> extreme_points(std::size_t inputs, std::size_t outputs, std::size_t cap) {
  const std::size_t count = extreme_point_count(inputs, outputs, cap);
  std::vector<Channel> points;
  points.reserve(count);
  std::vector<std::size_t> map(inputs, 0);
  for (std::size_t n = 0; n < count; ++n) {
    points.push_back(Channel::deterministic(map, outputs));
    // Odometer increment with the last input as the fastest digit.
    for (std::size_t x = inputs; x-- > 0;) {
      if (++map[x] < outputs) break;
      map[x] = 0;
    }
  }
  return points;
}

std::size_t lex_index(BinaryExtreme label) {
  switch (label) {
    case BinaryExtreme::identity: return 1;         // (0 -> 0, 1 -> 1)
    case BinaryExtreme::constant_second: return 3;  // (0 -> 1, 1 -> 1)
    case BinaryExtreme::flip: return 2;             // (0 -> 1, 1 -> 0)
    case BinaryExtreme::constant_first: return 0;   // (0 -> 0, 1 -> 0)
  }
  throw std::invalid_argument("unknown binary extreme label");
}

Channel binary_extreme(BinaryExtreme label) { return extreme_points(2, 2)[lex_index(label)]; }

Channel embed_distribution(const Distribution& p, std::size_t inputs) {
  return Channel(p.probs().replicate(1, static_cast<Eigen::Index>(inputs)));
}

TangentChannel embed_distribution(const TangentDistribution& delta, std::size_t inputs) {
  return TangentChannel(delta.deltas().replicate(1, static_cast<Eigen::Index>(inputs)));
}

bool is_constant(const Eigen::MatrixXd& m, double tol) {
  for (Eigen::Index x = 1; x < m.cols(); ++x) {
    if ((m.col(x) - m.col(0)).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace chanmetric
