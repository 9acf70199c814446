#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chanmetric/harness.hpp"
#include "chanmetric/metrics.hpp"

#include <cmath>

using namespace chanmetric;

namespace {

Channel uniform() { return Channel(Eigen::MatrixXd::Constant(2, 2, 0.5)); }

TangentChannel swap_tangent(double scale = 1.0) {
  return TangentChannel(scale * Eigen::Matrix2d{{-1, 1}, {1, -1}});
}

Channel binary(double a, double c) { return Channel(Eigen::Matrix2d{{a, c}, {1 - a, 1 - c}}); }

Eigen::VectorXd on_binary(double identity, double constant_second, double flip, double constant_first) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(4);
  q(static_cast<Eigen::Index>(lex_index(BinaryExtreme::identity))) = identity;
  q(static_cast<Eigen::Index>(lex_index(BinaryExtreme::constant_second))) = constant_second;
  q(static_cast<Eigen::Index>(lex_index(BinaryExtreme::flip))) = flip;
  q(static_cast<Eigen::Index>(lex_index(BinaryExtreme::constant_first))) = constant_first;
  return q;
}

// Reference values from an independent conic solver, frozen here.
struct Reference {
  Eigen::MatrixXd channel;
  Eigen::MatrixXd tangent;
  double gmax;
  double gmin;
};

std::vector<Reference> references() {
  return {
      {Eigen::MatrixXd{{0.315, 0.24}, {0.412, 0.132}, {0.273, 0.628}},
       Eigen::MatrixXd{{-0.847, 0.697}, {1.0, -0.127}, {-0.153, -0.57}}, 4.9212135641168215, 4.79042060765556},
      {Eigen::MatrixXd{{0.263, 0.138}, {0.295, 0.637}, {0.442, 0.225}},
       Eigen::MatrixXd{{-0.237, 0.718}, {-0.583, -1.0}, {0.82, 0.282}}, 5.749734629535207, 5.658979872136145},
      {Eigen::MatrixXd{{0.144, 0.502, 0.119}, {0.856, 0.498, 0.881}},
       Eigen::MatrixXd{{-1.0, 0.014, 0.256}, {1.0, -0.014, -0.256}}, 8.246233616906524, 8.112668743509865},
      {Eigen::MatrixXd{{0.249, 0.106, 0.239}, {0.456, 0.379, 0.64}, {0.295, 0.515, 0.121}},
       Eigen::MatrixXd{{-0.229, -0.391, -0.925}, {0.122, 1.0, 0.012}, {0.107, -0.609, 0.913}}, 10.513083260695545,
       10.469245920502093},
      {Eigen::MatrixXd{{0.5, 0.25}, {0.5, 0.75}}, Eigen::MatrixXd{{-1, 1}, {1, -1}}, 6.0, 16.0 / 3.0},
  };
}

}  // namespace

TEST_CASE("fisher information") {
  CHECK(fisher_information(Distribution(Eigen::Vector2d(0.5, 0.5)), TangentDistribution(Eigen::Vector2d(1, -1))) ==
        doctest::Approx(4.0));
  CHECK(fisher_information(Distribution(Eigen::Vector2d(0.75, 0.25)), TangentDistribution(Eigen::Vector2d(1, -1))) ==
        doctest::Approx(16.0 / 3.0));
  CHECK(fisher_information(Distribution(Eigen::Vector2d(1, 0)), TangentDistribution(Eigen::Vector2d(0, 0))) == 0.0);
  CHECK(std::isinf(
      fisher_information(Distribution(Eigen::Vector2d(1, 0)), TangentDistribution(Eigen::Vector2d(1, -1)))));
}

TEST_CASE("g_min") {
  const GminResult r = g_min(LocalData(binary(0.5, 0.25), swap_tangent()));
  CHECK(r.value == doctest::Approx(16.0 / 3.0).epsilon(1e-15));
  CHECK(r.witness == 1);
  CHECK(g_min(LocalData(uniform(), swap_tangent())).value == doctest::Approx(4.0));
  CHECK(g_min(LocalData(binary(0.3, 0.6), TangentChannel::zero(2, 2))).value == 0.0);
  // Ties go to the smallest letter.
  CHECK(g_min(LocalData(uniform(), swap_tangent())).witness == 0);
}

TEST_CASE("decomposition value") {
  const TangentChannel flip_minus_identity(binary_extreme(BinaryExtreme::flip).matrix() -
                                           binary_extreme(BinaryExtreme::identity).matrix());
  const DecompositionValue dv = decomposition_value(on_binary(0.5, 0, 0.5, 0), uniform(), flip_minus_identity);
  CHECK(dv.value == doctest::Approx(4.0));
  CHECK((dv.delta - on_binary(-1, 0, 1, 0)).cwiseAbs().maxCoeff() < 1e-12);

  const DecompositionValue zero = decomposition_value(on_binary(0.5, 0, 0.5, 0), uniform(), TangentChannel::zero(2, 2));
  CHECK(zero.value == 0.0);
  CHECK(zero.delta.cwiseAbs().maxCoeff() == 0.0);

  const DecompositionValue point =
      decomposition_value(on_binary(1, 0, 0, 0), Channel::identity(2), flip_minus_identity);
  CHECK(std::isinf(point.value));

  // q that does not reproduce the channel.
  CHECK_THROWS_AS(decomposition_value(on_binary(1, 0, 0, 0), uniform(), flip_minus_identity), ValidationError);
  CHECK_THROWS_AS(decomposition_value(on_binary(1.5, 0, -0.5, 0), uniform(), flip_minus_identity), ValidationError);
}

TEST_CASE("decomposition value gradient matches finite differences") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const LocalData data = harness::random_instance(seed, 2, 3, 0.05);
    const ExtremeBasis basis(2, 3);
    const Eigen::MatrixXd a = basis.reduced_constraints();
    // Interior q and a direction in the kernel of the constraints.
    const GmaxResult g = g_max(data);
    Eigen::VectorXd q = 0.5 * g.decomposition.weights;
    {
      Eigen::VectorXd uniform_q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
      for (std::size_t i = 0; i < basis.size(); ++i) {
        double w = 1.0;
        for (std::size_t x = 0; x < 2; ++x) w *= data.channel(basis.image(i, x), x);
        uniform_q(static_cast<Eigen::Index>(i)) = w;  // product decomposition, strictly positive
      }
      q += 0.5 * uniform_q;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::MatrixXd kernel = lu.kernel();
    const Eigen::VectorXd dir = kernel.col(0) / kernel.col(0).norm();
    const DecompositionValue at = decomposition_value(basis, q, data.channel, data.tangent);
    const double h = 1e-6 * q.minCoeff();
    const double plus = decomposition_value(basis, q + h * dir, data.channel, data.tangent).value;
    const double minus = decomposition_value(basis, q - h * dir, data.channel, data.tangent).value;
    const double fd = (plus - minus) / (2 * h);
    const double analytic = at.gradient.dot(dir);
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("g_max examples") {
  const GmaxResult r = g_max(LocalData(binary(0.5, 0.25), swap_tangent()));
  CHECK(r.value == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(r.converged);
  CHECK((r.decomposition.channel_matrix() - binary(0.5, 0.25).matrix()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((r.decomposition.tangent_matrix() - swap_tangent().matrix()).cwiseAbs().maxCoeff() < 1e-9);

  CHECK(g_max(LocalData(uniform(), swap_tangent())).value == doctest::Approx(4.0).epsilon(1e-8));
  const GmaxResult zero = g_max(LocalData(binary(0.3, 0.2), TangentChannel::zero(2, 2)));
  CHECK(zero.value == 0.0);
  CHECK(zero.decomposition.signed_weights.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("g_max against frozen reference optima") {
  for (const Reference& ref : references()) {
    const LocalData data{Channel(ref.channel), TangentChannel(ref.tangent)};
    const MetricReport report = compute_metrics(data);
    CAPTURE(ref.gmax);
    CHECK(report.gmax.converged);
    CHECK(report.gmax.value == doctest::Approx(ref.gmax).epsilon(1e-6));
    CHECK(report.gmin == doctest::Approx(ref.gmin).epsilon(1e-12));
    // A returned decomposition is always feasible, so the value is an upper bound.
    CHECK(report.gmax.value >= ref.gmax - 1e-9);
    CHECK((report.gmax.decomposition.channel_matrix() - ref.channel).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((report.gmax.decomposition.tangent_matrix() - ref.tangent).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("quadratic scaling, ordering and constant channels") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const LocalData data = harness::random_instance(seed, 3, 2, 0.05);
    const LocalData doubled{data.channel, data.tangent.scaled(2.0)};
    const MetricReport r1 = compute_metrics(data);
    const MetricReport r2 = compute_metrics(doubled);
    CHECK(r2.gmin == doctest::Approx(4 * r1.gmin).epsilon(1e-12));
    CHECK(r2.gmax.value == doctest::Approx(4 * r1.gmax.value).epsilon(1e-6));
    CHECK(r1.gmax.value >= r1.gmin - 1e-8);
  }

  const Distribution p(Eigen::Vector3d(0.2, 0.5, 0.3));
  const TangentDistribution d(Eigen::Vector3d(0.4, -1.0, 0.6));
  const LocalData constant{embed_distribution(p, 2), embed_distribution(d, 2)};
  const double fisher = fisher_information(p, d);
  CHECK(g_min(constant).value == doctest::Approx(fisher).epsilon(1e-12));
  CHECK(g_max(constant).value == doctest::Approx(fisher).epsilon(1e-6));
}

TEST_CASE("binary family puts no weight on constant_first at the optimum") {
  for (double a : {0.2, 0.35, 0.5}) {
    for (double c : {0.1, 0.25, 0.4}) {
      const GmaxResult r = g_max(LocalData(binary(a, c), swap_tangent()));
      const double w = r.decomposition.weights(static_cast<Eigen::Index>(lex_index(BinaryExtreme::constant_first)));
      CAPTURE(a);
      CAPTURE(c);
      CHECK(w <= 1e-6);
    }
  }
}

TEST_CASE("frank-wolfe iterates descend") {
  const LocalData data = harness::random_instance(3, 2, 3, 0.05);
  double previous = kInfinity;
  for (int iters : {1, 2, 4, 8, 16, 64}) {
    SolverConfig config;
    config.max_iter = iters;
    const double value = g_max(data, config).value;
    CHECK(value <= previous + 1e-12);
    previous = value;
  }
}

TEST_CASE("closed forms and mixing bound") {
  const BinaryClosedForm f = closed_form_binary(0.5, 0.25);
  CHECK(f.gmax == doctest::Approx(6.0));
  CHECK(f.gmin == doctest::Approx(16.0 / 3.0));
  CHECK(closed_form_binary(0.5, 0.5).gmax == doctest::Approx(4.0));
  CHECK(closed_form_binary(0.5, 0.5).gmin == doctest::Approx(4.0));
  CHECK(closed_form_binary(0.25, 0.25).gmax == doctest::Approx(8.0));
  CHECK(closed_form_binary(0.25, 0.25).gmin == doctest::Approx(16.0 / 3.0));
  CHECK_THROWS(closed_form_binary(0.7, 0.5));

  const Channel flip = binary_extreme(BinaryExtreme::flip);
  const Channel identity = binary_extreme(BinaryExtreme::identity);
  CHECK(mixing_bound(uniform(), swap_tangent(), flip, identity) == doctest::Approx(4.0));
  CHECK(mixing_bound(uniform(), swap_tangent(0.5), flip, identity) == doctest::Approx(1.0));
  const Channel mix(0.75 * identity.matrix() + 0.25 * flip.matrix());
  const MixingLine line = fit_mixing_line(mix, swap_tangent(), flip, identity);
  CHECK(line.slope == doctest::Approx(1.0));
  CHECK(line.weight == doctest::Approx(0.25));
  CHECK(mixing_bound(mix, swap_tangent(), flip, identity) == doctest::Approx(16.0 / 3.0));
  CHECK_THROWS_AS(mixing_bound(binary(0.3, 0.6), swap_tangent(), flip, identity), ValidationError);
}

TEST_CASE("extreme basis") {
  const ExtremeBasis basis(2, 2);
  CHECK(basis.size() == 4);
  CHECK(basis.polytope_dimension() == 1);
  CHECK(ExtremeBasis(2, 3).polytope_dimension() == 4);
  CHECK(ExtremeBasis(3, 2).polytope_dimension() == 4);
  CHECK(ExtremeBasis(3, 3).polytope_dimension() == 20);
  CHECK(basis.reduced_constraints().rows() == 3);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ExtremeBasis(3, 3).reduced_constraints());
  CHECK(lu.rank() == 7);
  CHECK((basis.point(lex_index(BinaryExtreme::flip)).matrix() - binary_extreme(BinaryExtreme::flip).matrix())
            .cwiseAbs()
            .maxCoeff() == 0.0);
}
