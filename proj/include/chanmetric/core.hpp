#pragma once

// Finite-alphabet channel algebra.
//
// A channel from a k-letter input alphabet to an l-letter output alphabet is
// stored as an l x k column-stochastic matrix: entry (y, x) is the probability
// of output y given input x. Tangent channels share the layout but only need
// zero column sums. All types are immutable values validated at construction.

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chanmetric {

inline constexpr double kSumTolerance = 1e-12;
inline constexpr std::size_t kDefaultExtremePointCap = 1'000'000;

/// Input that violates a probability/tangent invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operands whose alphabet sizes do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested enumeration would exceed the configured size cap.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class Distribution {
 public:
  explicit Distribution(Eigen::VectorXd probs);

  [[nodiscard]] const Eigen::VectorXd& probs() const noexcept { return probs_; }
  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(probs_.size()); }
  [[nodiscard]] double operator[](std::size_t i) const { return probs_(static_cast<Eigen::Index>(i)); }

 private:
  Eigen::VectorXd probs_;
};

class TangentDistribution {
 public:
  explicit TangentDistribution(Eigen::VectorXd deltas);

  [[nodiscard]] const Eigen::VectorXd& deltas() const noexcept { return deltas_; }
  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(deltas_.size()); }
  [[nodiscard]] double operator[](std::size_t i) const { return deltas_(static_cast<Eigen::Index>(i)); }

 private:
  Eigen::VectorXd deltas_;
};

/// Column-stochastic l x k matrix.
class Channel {
 public:
  explicit Channel(Eigen::MatrixXd matrix);

  static Channel identity(std::size_t n);

  /// Deterministic channel sending input x to output map[x].
  static Channel deterministic(const std::vector<std::size_t>& map, std::size_t outputs);

  [[nodiscard]] std::size_t inputs() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }
  [[nodiscard]] std::size_t outputs() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  [[nodiscard]] double operator()(std::size_t y, std::size_t x) const {
    return matrix_(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
  }
  [[nodiscard]] Distribution column(std::size_t x) const;

 private:
  Eigen::MatrixXd matrix_;
};

/// l x k matrix with zero column sums.
class TangentChannel {
 public:
  explicit TangentChannel(Eigen::MatrixXd matrix);

  static TangentChannel zero(std::size_t outputs, std::size_t inputs);

  [[nodiscard]] std::size_t inputs() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }
  [[nodiscard]] std::size_t outputs() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  [[nodiscard]] double operator()(std::size_t y, std::size_t x) const {
    return matrix_(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
  }
  [[nodiscard]] TangentDistribution column(std::size_t x) const;
  [[nodiscard]] TangentChannel scaled(double factor) const;

 private:
  Eigen::MatrixXd matrix_;
};

/// A channel together with a tangent direction at it.
struct LocalData {
  LocalData(Channel channel_, TangentChannel tangent_);

  Channel channel;
  TangentChannel tangent;
};

Distribution apply(const Channel& channel, const Distribution& p);

// Composition `later o earlier` is the matrix product later * earlier.
Channel compose(const Channel& later, const Channel& earlier);
TangentChannel compose(const Channel& later, const TangentChannel& earlier);
TangentChannel compose(const TangentChannel& later, const Channel& earlier);

// Kronecker product. Composite letter (a, b) has index a * size_b + b on both
// the input and the output side.
Channel tensor(const Channel& a, const Channel& b);
TangentChannel tensor(const TangentChannel& a, const Channel& b);
TangentChannel tensor(const Channel& a, const TangentChannel& b);

/// All l^k deterministic channels, ordered lexicographically by the tuple
/// (f(0), f(1), ..., f(k-1)) of the map x -> f(x), f(0) most significant.
std::vector<Channel> extreme_points(std::size_t inputs, std::size_t outputs,
                                    std::size_t cap = kDefaultExtremePointCap);

/// Number of deterministic channels, or throws ResourceError above `cap`.
std::size_t extreme_point_count(std::size_t inputs, std::size_t outputs,
                                std::size_t cap = kDefaultExtremePointCap);

/// The four deterministic binary channels under their conventional labels:
/// identity (1), constant-to-second-letter (2), flip (3), constant-to-first (4).
enum class BinaryExtreme { identity = 1, constant_second = 2, flip = 3, constant_first = 4 };

/// Position of a labelled binary extreme point in extreme_points(2, 2).
std::size_t lex_index(BinaryExtreme label);

Channel binary_extreme(BinaryExtreme label);

// Constant channels: every one of the k columns equals p (or delta).
Channel embed_distribution(const Distribution& p, std::size_t inputs);
TangentChannel embed_distribution(const TangentDistribution& delta, std::size_t inputs);

/// True when every column equals the first one within `tol`.
bool is_constant(const Eigen::MatrixXd& m, double tol = kSumTolerance);

}  // namespace chanmetric
