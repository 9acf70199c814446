#pragma once

// Channel simulation programs and their verification.
//
// A mixture program realises Phi = L o (I (x) q) and Delta = L o (I (x) delta)
// with a fixed processing map L reading the original input together with a
// program letter drawn from q. A sandwich program realises
// Phi = L_b o (Psi (x) I) o L_a (and likewise for the tangent) from a resource
// channel Psi.

#include "chanmetric/core.hpp"
#include "chanmetric/metrics.hpp"

#include <cstddef>

namespace chanmetric {

inline constexpr double kProgramTolerance = 1e-9;

struct MixtureProgram {
  MixtureProgram(Distribution q_, TangentDistribution delta_, Channel processor_);

  Distribution q;
  TangentDistribution delta;
  /// Input letter (x, i) has index x * q.size() + i.
  Channel processor;
};

struct SandwichProgram {
  SandwichProgram(Channel pre_, Channel resource_, TangentChannel resource_tangent_, Channel post_);

  Channel pre;
  Channel resource;
  TangentChannel resource_tangent;
  Channel post;

  /// Size of the identity tensored onto the resource.
  [[nodiscard]] std::size_t side_size() const noexcept { return pre.outputs() / resource.inputs(); }
};

struct Verification {
  bool pass = false;
  double channel_residual = 0.0;  ///< max |entry| of the channel mismatch
  double tangent_residual = 0.0;  ///< max |entry| of the tangent mismatch
};

Verification verify_mixture_program(const MixtureProgram& program, const LocalData& target);
Verification verify_sandwich_program(const SandwichProgram& program, const LocalData& target);

/// Processing map that applies the i-th deterministic channel of C_{k,l}
/// (extreme_points order) when the program letter is i.
Channel mixture_processor(std::size_t inputs, std::size_t outputs);

/// Mixture program running a decomposition over the deterministic channels.
MixtureProgram program_from_decomposition(const Decomposition& decomposition);

/// Binary channel [[1 - t, s], [t, 1 - s]].
Channel binary_channel(double t, double s);

struct TangentLine {
  Channel psi_a;  ///< boundary crossing in the +Delta direction
  Channel psi_b;  ///< boundary crossing in the -Delta direction
  double slope = 0.0;   ///< Delta = slope (psi_a - psi_b)
  double weight = 0.0;  ///< Phi = weight psi_a + (1 - weight) psi_b
};

/// Intersections of the line Phi + u Delta with the boundary of the square
/// C_{2,2}. Requires Phi strictly interior and Delta != 0.
TangentLine tangent_line_mixture(const LocalData& data);

struct Discrimination {
  bool discriminable = false;
  std::size_t witness = 0;  ///< input letter whose outputs are disjoint point masses
};

/// Whether some input makes the two binary channels output distinct point
/// masses, so one observation tells them apart.
Discrimination perfectly_discriminable(const Channel& psi_a, const Channel& psi_b);

}  // namespace chanmetric
