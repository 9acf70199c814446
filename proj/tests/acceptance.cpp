// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every tolerance and sample size used below is fixed here.

#include "chanmetric/harness.hpp"
#include "chanmetric/metrics.hpp"
#include "chanmetric/simulation.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace chanmetric;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Channel binary_family(double a, double c) { return Channel(Eigen::Matrix2d{{a, c}, {1 - a, 1 - c}}); }

TangentChannel family_tangent() { return TangentChannel(Eigen::Matrix2d{{-1, 1}, {1, -1}}); }

// 1. gmax and gmin against the closed forms on the 9x9 interior grid.
Outcome closed_forms() {
  constexpr double kAbs = 1e-4;
  constexpr double kRel = 1e-5;
  constexpr double kGmin = 1e-12;
  double worst_gmax = 0.0;  // error / allowed
  double worst_gmin = 0.0;
  int points = 0;
  for (int i = 1; i <= 9; ++i) {
    for (int j = 1; j <= 9; ++j) {
      if (i + j > 10) continue;
      const double a = i / 10.0;
      const double c = j / 10.0;
      const BinaryClosedForm oracle = closed_form_binary(a, c);
      const MetricReport r = compute_metrics(LocalData(binary_family(a, c), family_tangent()));
      const double allowed = std::max(kAbs, kRel * oracle.gmax);
      worst_gmax = std::max(worst_gmax, std::abs(r.gmax.value - oracle.gmax) / allowed);
      worst_gmin = std::max(worst_gmin, std::abs(r.gmin - oracle.gmin));
      ++points;
    }
  }
  return {worst_gmax <= 1.0 && worst_gmin <= kGmin,
          fmt("%d grid points; worst gmax error %.3g of allowed max(%g abs, %g rel); worst gmin error %.3g (tol %g)",
              points, worst_gmax, kAbs, kRel, worst_gmin, kGmin)};
}

// 2. gmax == gmin at the uniform channel for any tangent.
Outcome uniform_equality() {
  constexpr double kRel = 1e-6;
  constexpr int kTangents = 50;
  harness::Rng rng(2024);
  const Channel uniform(Eigen::MatrixXd::Constant(2, 2, 0.5));
  double worst = 0.0;
  for (int i = 0; i < kTangents; ++i) {
    const MetricReport r = compute_metrics(LocalData(uniform, harness::random_tangent(rng, 2, 2)));
    worst = std::max(worst, rel_diff(r.gmax.value, r.gmin));
  }
  return {worst <= kRel, fmt("%d random tangents; worst |gmax-gmin|/gmin %.3g (tol %g)", kTangents, worst, kRel)};
}

// 3. gmax >= gmin - 1e-8.
Outcome ordering() {
  harness::Slacks slacks;
  slacks.ordering = 1e-8;
  int failures = 0;
  int total = 0;
  double worst = -kInfinity;  // max of gmin - gmax
  const struct {
    std::size_t k, l;
    int trials;
  } shapes[] = {{2, 2, 1000}, {2, 3, 200}, {3, 2, 200}};
  for (const auto& shape : shapes) {
    harness::SuiteOptions options;
    options.tag = harness::Axiom::gmax_geq_gmin;
    options.trials = shape.trials;
    options.seed = 1;
    options.inputs = shape.k;
    options.outputs = shape.l;
    options.slacks = slacks;
    for (const harness::AxiomCheck& c : harness::run_axiom_suite(options)) {
      ++total;
      if (c.verdict != harness::Verdict::pass) ++failures;
      worst = std::max(worst, c.right - c.left);
    }
  }
  return {failures == 0, fmt("%d instances (1000 C_{2,2}, 200 C_{2,3}, 200 C_{3,2}); %d failures; max gmin-gmax %.3g "
                             "(slack %g)",
                             total, failures, worst, slacks.ordering)};
}

// 4. Axiom suite.
Outcome axioms() {
  harness::Slacks slacks;
  slacks.gmin = 1e-10;
  slacks.gmax_inequality = 1e-3;
  slacks.gmax_tensor_equality = 1e-3;
  slacks.gmax_constant_equality = 1e-6;

  std::string detail;
  bool pass = true;
  auto run = [&](harness::Axiom tag, harness::Metric metric, std::size_t k, std::size_t l, int trials,
                 const harness::Slacks& s) {
    harness::SuiteOptions options;
    options.tag = tag;
    options.metric = metric;
    options.inputs = k;
    options.outputs = l;
    options.trials = trials;
    options.seed = 1;
    options.slacks = s;
    int ok = 0;
    int skipped = 0;
    int failed = 0;
    for (const harness::AxiomCheck& c : harness::run_axiom_suite(options)) {
      if (c.verdict == harness::Verdict::pass) ++ok;
      if (c.verdict == harness::Verdict::skipped) ++skipped;
      if (c.verdict == harness::Verdict::fail) ++failed;
      if (tag == harness::Axiom::e && !c.note.empty()) ++failed;  // equality must come from a converged solve
    }
    pass = pass && failed == 0;
    detail += fmt("%s/%s C_{%zu,%zu}: %d pass %d skipped %d fail; ", harness::to_string(tag),
                  harness::to_string(metric), k, l, ok, skipped, failed);
  };

  for (harness::Metric metric : {harness::Metric::gmin, harness::Metric::gmax}) {
    for (harness::Axiom tag : {harness::Axiom::m1, harness::Axiom::m2}) {
      run(tag, metric, 2, 2, 1000, slacks);
      run(tag, metric, 2, 3, 100, slacks);
      run(tag, metric, 3, 2, 100, slacks);
    }
  }
  harness::Slacks exact = slacks;
  exact.gmin = 0.0;
  run(harness::Axiom::e, harness::Metric::gmin, 2, 2, 200, exact);
  run(harness::Axiom::e, harness::Metric::gmin, 3, 3, 50, exact);
  run(harness::Axiom::e, harness::Metric::gmax, 2, 2, 10, slacks);  // 4x4 with 256 extreme points
  run(harness::Axiom::n, harness::Metric::gmin, 2, 2, 200, slacks);
  run(harness::Axiom::n, harness::Metric::gmax, 2, 2, 200, slacks);
  run(harness::Axiom::n, harness::Metric::gmax, 3, 3, 20, slacks);
  detail += fmt("slacks: gmin %g, gmax inequality %g rel, E gmin exact, E gmax %g rel, N %g rel", slacks.gmin,
                slacks.gmax_inequality, slacks.gmax_tensor_equality, slacks.gmax_constant_equality);
  return {pass, detail};
}

// 5. Non-bilinearity probe.
Outcome bilinearity() {
  constexpr double kFlat = 1e-3;
  constexpr double kConstant = 1e-6;
  constexpr double kPredictionFloor = 4.0;
  constexpr double kPredictionSlack = 1e-12;
  constexpr int kSamples = 9;
  bool pass = true;
  std::string detail;
  for (auto [t, s] : {std::pair{0.25, 0.4}, std::pair{0.5, 0.5}, std::pair{0.7, 0.3}}) {
    const harness::BilinearityProbe p = harness::probe_bilinearity(t, s, kSamples);
    const double expected = 1.0 / t + 1.0 / (1.0 - t);
    const bool flat = std::abs(p.gmax_fit.c1) <= kFlat && std::abs(p.gmax_fit.c2) <= kFlat;
    const bool constant = std::abs(p.gmax_fit.c0 - expected) <= kConstant;
    // 1/s + 1/(1-s) >= 4 with equality at s = 1/2; a bilinear form would need c2
    // to equal it, while the fitted c2 vanishes.
    const bool contradiction = p.bilinear_prediction >= kPredictionFloor - kPredictionSlack &&
                               p.bilinear_prediction - std::abs(p.gmax_fit.c2) > kPredictionFloor - kFlat;
    pass = pass && flat && constant && contradiction;
    detail += fmt("(t=%g,s=%g): c0-const %.2g c1 %.2g c2 %.2g prediction %.6g; ", t, s, p.gmax_fit.c0 - expected,
                  p.gmax_fit.c1, p.gmax_fit.c2, p.bilinear_prediction);
  }
  detail += fmt("tol |c1|,|c2| <= %g, c0 %g, prediction >= %g - %g", kFlat, kConstant, kPredictionFloor,
                kPredictionSlack);
  return {pass, detail};
}

// 6. Solver vs brute force, and the boundary optimum of the binary family.
Outcome brute_force() {
  constexpr double kTol = 1e-4;
  constexpr int kResolution = 2001;
  constexpr int kInstances = 100;
  constexpr double kBoundaryWeight = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const LocalData data = harness::random_instance(1000 + static_cast<std::uint64_t>(i), 2, 2, 0.1);
    worst = std::max(worst, std::abs(g_max(data).value - harness::brute_force_gmax(data, kResolution)));
  }
  double heaviest = 0.0;
  for (int i = 1; i <= 9; ++i) {
    for (int j = 1; j <= 9; ++j) {
      if (i + j > 10) continue;
      const GmaxResult r = g_max(LocalData(binary_family(i / 10.0, j / 10.0), family_tangent()));
      heaviest = std::max(
          heaviest, r.decomposition.weights(static_cast<Eigen::Index>(lex_index(BinaryExtreme::constant_first))));
    }
  }
  return {worst <= kTol && heaviest <= kBoundaryWeight,
          fmt("%d instances, resolution %d: worst |solver-brute| %.3g (tol %g); max weight on constant_first over "
              "the family grid %.3g (tol %g)",
              kInstances, kResolution, worst, kTol, heaviest, kBoundaryWeight)};
}

// 7. Two-point mixing bound along the tangent line.
Outcome mixing_sandwich() {
  constexpr double kUpper = 1e-6;
  constexpr double kRel = 1e-6;
  constexpr int kInstances = 100;
  int discriminable = 0;
  double worst_upper = -kInfinity;  // max of gmax - bound
  double worst_equal = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const LocalData data = harness::random_instance(5000 + static_cast<std::uint64_t>(i), 2, 2, 0.05);
    const TangentLine line = tangent_line_mixture(data);
    const double bound = mixing_bound(data.channel, data.tangent, line.psi_a, line.psi_b);
    const MetricReport r = compute_metrics(data);
    worst_upper = std::max(worst_upper, r.gmax.value - bound);
    if (perfectly_discriminable(line.psi_a, line.psi_b).discriminable) {
      ++discriminable;
      worst_equal = std::max({worst_equal, rel_diff(r.gmin, bound), rel_diff(r.gmax.value, bound)});
    }
  }
  return {worst_upper <= kUpper && worst_equal <= kRel,
          fmt("%d instances: max gmax-bound %.3g (tol %g); %d discriminable, worst relative gap to gmin/gmax %.3g "
              "(tol %g)",
              kInstances, worst_upper, kUpper, discriminable, worst_equal, kRel)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 closed-form reproduction", closed_forms},
      {"2 uniform-channel equality", uniform_equality},
      {"3 gmax >= gmin", ordering},
      {"4 axiom suite", axioms},
      {"5 non-bilinearity probe", bilinearity},
      {"6 brute-force oracle", brute_force},
      {"7 mixing-bound sandwich", mixing_sandwich},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %s  [%.1fs]  %s\n", outcome.pass ? "PASS" : "FAIL", name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failed;
  }
  std::printf("%d of 7 criteria passed\n", 7 - failed);
  return failed == 0 ? 0 : 1;
}
