#include "chanmetric/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chanmetric {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_target_shape(std::size_t inputs, std::size_t outputs, const LocalData& target) {
  if (target.channel.inputs() != inputs || target.channel.outputs() != outputs) {
    throw DimensionError("program realises a " + std::to_string(outputs) + "x" + std::to_string(inputs) +
                         " channel but the target is " + std::to_string(target.channel.outputs()) + "x" +
                         std::to_string(target.channel.inputs()));
  }
}

bool is_one(double v) { return std::abs(v - 1.0) <= kProgramTolerance; }

}  // namespace

MixtureProgram::MixtureProgram(Distribution q_, TangentDistribution delta_, Channel processor_)
    : q(std::move(q_)), delta(std::move(delta_)), processor(std::move(processor_)) {
  if (q.size() != delta.size()) {
    throw DimensionError("program distribution and tangent lengths differ");
  }
  if (processor.inputs() % q.size() != 0) {
    throw DimensionError("processor input alphabet " + std::to_string(processor.inputs()) +
                         " is not a multiple of the program alphabet " + std::to_string(q.size()));
  }
}

SandwichProgram::SandwichProgram(Channel pre_, Channel resource_, TangentChannel resource_tangent_, Channel post_)
    : pre(std::move(pre_)),
      resource(std::move(resource_)),
      resource_tangent(std::move(resource_tangent_)),
      post(std::move(post_)) {
  if (resource_tangent.inputs() != resource.inputs() || resource_tangent.outputs() != resource.outputs()) {
    throw DimensionError("resource tangent shape differs from the resource channel");
  }
  if (pre.outputs() % resource.inputs() != 0) {
    throw DimensionError("pre-processing output " + std::to_string(pre.outputs()) +
                         " is not a multiple of the resource input " + std::to_string(resource.inputs()));
  }
  if (post.inputs() != resource.outputs() * side_size()) {
    throw DimensionError("post-processing input " + std::to_string(post.inputs()) + " does not match resource output " +
                         std::to_string(resource.outputs()) + " x side " + std::to_string(side_size()));
  }
}

Verification verify_mixture_program(const MixtureProgram& program, const LocalData& target) {
  const std::size_t inputs = program.processor.inputs() / program.q.size();
  require_target_shape(inputs, program.processor.outputs(), target);

  const Channel identity = Channel::identity(inputs);
  const Channel realised = compose(program.processor, tensor(identity, embed_distribution(program.q, 1)));
  const TangentChannel realised_tangent =
      compose(program.processor, tensor(identity, embed_distribution(program.delta, 1)));

  Verification v;
  v.channel_residual = max_abs(realised.matrix() - target.channel.matrix());
  v.tangent_residual = max_abs(realised_tangent.matrix() - target.tangent.matrix());
  v.pass = v.channel_residual <= kProgramTolerance && v.tangent_residual <= kProgramTolerance;
  return v;
}

Verification verify_sandwich_program(const SandwichProgram& program, const LocalData& target) {
  require_target_shape(program.pre.inputs(), program.post.outputs(), target);

  const Channel side = Channel::identity(program.side_size());
  const Channel realised = compose(program.post, compose(tensor(program.resource, side), program.pre));
  const TangentChannel realised_tangent =
      compose(program.post, compose(tensor(program.resource_tangent, side), program.pre));

  Verification v;
  v.channel_residual = max_abs(realised.matrix() - target.channel.matrix());
  v.tangent_residual = max_abs(realised_tangent.matrix() - target.tangent.matrix());
  v.pass = v.channel_residual <= kProgramTolerance && v.tangent_residual <= kProgramTolerance;
  return v;
}

Channel mixture_processor(std::size_t inputs, std::size_t outputs) {
  const ExtremeBasis basis(inputs, outputs);
  const std::size_t n = basis.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(inputs * n));
  for (std::size_t x = 0; x < inputs; ++x) {
    for (std::size_t i = 0; i < n; ++i) {
      m(static_cast<Eigen::Index>(basis.image(i, x)), static_cast<Eigen::Index>(x * n + i)) = 1.0;
    }
  }
  return Channel(std::move(m));
}

MixtureProgram program_from_decomposition(const Decomposition& decomposition) {
  Eigen::VectorXd q = decomposition.weights.cwiseMax(0.0);
  q /= q.sum();

  // Remove rounding drift from sum(delta) on the support only, so that
  // delta stays zero wherever q is.
  Eigen::VectorXd delta = decomposition.signed_weights;
  const auto support = static_cast<double>((q.array() > 0.0).count());
  const double drift = delta.sum() / support;
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    if (q(i) > 0.0) delta(i) -= drift;
  }
  return MixtureProgram(Distribution(std::move(q)), TangentDistribution(std::move(delta)),
                        mixture_processor(decomposition.inputs, decomposition.outputs));
}

Channel binary_channel(double t, double s) {
  Eigen::Matrix2d m;
  m << 1.0 - t, s, t, 1.0 - s;
  return Channel(m);
}

TangentLine tangent_line_mixture(const LocalData& data) {
  if (data.channel.inputs() != 2 || data.channel.outputs() != 2) {
    throw DimensionError("tangent-line mixture is defined for binary channels");
  }
  const double t = data.channel(1, 0);
  const double s = data.channel(0, 1);
  if (!(t > 0.0 && t < 1.0 && s > 0.0 && s < 1.0)) {
    throw ValidationError("channel lies on the boundary of the binary channel square");
  }
  const double dt = data.tangent(1, 0);
  const double ds = data.tangent(0, 1);
  if (dt == 0.0 && ds == 0.0) {
    throw ValidationError("tangent-line mixture needs a nonzero tangent");
  }

  // Largest steps forward/backward keeping both parameters in [0, 1].
  double forward = std::numeric_limits<double>::infinity();
  double backward = -std::numeric_limits<double>::infinity();
  for (const auto& [value, rate] : {std::pair{t, dt}, std::pair{s, ds}}) {
    if (rate > 0.0) {
      forward = std::min(forward, (1.0 - value) / rate);
      backward = std::max(backward, -value / rate);
    } else if (rate < 0.0) {
      forward = std::min(forward, -value / rate);
      backward = std::max(backward, (1.0 - value) / rate);
    }
  }

  auto at = [&](double u) {
    return binary_channel(std::clamp(t + u * dt, 0.0, 1.0), std::clamp(s + u * ds, 0.0, 1.0));
  };
  const double span = forward - backward;
  return TangentLine{at(forward), at(backward), 1.0 / span, -backward / span};
}

Discrimination perfectly_discriminable(const Channel& psi_a, const Channel& psi_b) {
  if (psi_a.inputs() != 2 || psi_a.outputs() != 2 || psi_b.inputs() != 2 || psi_b.outputs() != 2) {
    throw DimensionError("discriminability test is defined for binary channels");
  }
  for (std::size_t x = 0; x < 2; ++x) {
    if ((is_one(psi_a(1, x)) && is_one(psi_b(0, x))) || (is_one(psi_a(0, x)) && is_one(psi_b(1, x)))) {
      return Discrimination{true, x};
    }
  }
  return Discrimination{false, 0};
}

}  // namespace chanmetric
