#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chanmetric/lp.hpp"

using namespace chanmetric;

TEST_CASE("two-variable LP in standard form") {
  // min -x - 2y  s.t. x + y + s1 = 4, x + 3y + s2 = 6.  Optimum (3, 1), value -5.
  Eigen::MatrixXd a(2, 4);
  a << 1, 1, 1, 0,  //
      1, 3, 0, 1;
  const Eigen::Vector2d b(4, 6);
  const Eigen::Vector4d c(-1, -2, 0, 0);
  const lp::Result r = lp::minimize(c, a, b);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.objective == doctest::Approx(-5.0));
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(1) == doctest::Approx(1.0));
  CHECK((a * r.x - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("simplex over the probability simplex picks the cheapest vertex") {
  const Eigen::MatrixXd a = Eigen::RowVectorXd::Ones(5);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd c = (Eigen::VectorXd(5) << 3, 1, 4, 1, 5).finished();
  const lp::Result r = lp::minimize(c, a, b);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.objective == doctest::Approx(1.0));
  // Bland: lowest index among the ties.
  CHECK(r.x(1) == doctest::Approx(1.0));
}

TEST_CASE("redundant rows are tolerated") {
  Eigen::MatrixXd a(3, 3);
  a << 1, 1, 1,  //
      1, 0, 0,   //
      2, 1, 1;
  const Eigen::Vector3d b(1, 0.25, 1.25);
  const lp::Result r = lp::minimize(Eigen::Vector3d(0, 1, 2), a, b);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.x(0) == doctest::Approx(0.25));
  CHECK(r.x(1) == doctest::Approx(0.75));
  CHECK(r.objective == doctest::Approx(0.75));
}

TEST_CASE("degenerate LP terminates") {
  // Several constraints active at the origin.
  Eigen::MatrixXd a(3, 5);
  a << 1, -1, 1, 0, 0,  //
      -1, 1, 0, 1, 0,   //
      1, 1, 0, 0, 1;
  const Eigen::Vector3d b(0, 0, 2);
  const lp::Result r = lp::minimize((Eigen::VectorXd(5) << -1, -1, 0, 0, 0).finished(), a, b);
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.objective == doctest::Approx(-2.0));
}

TEST_CASE("infeasible and unbounded") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1,  //
      1, 1;
  CHECK(lp::minimize(Eigen::Vector2d(1, 1), a, Eigen::Vector2d(1, 2)).status == lp::Status::infeasible);

  Eigen::MatrixXd neg(1, 2);
  neg << 1, 1;
  CHECK(lp::minimize(Eigen::Vector2d(1, 1), neg, Eigen::VectorXd::Constant(1, -1)).status == lp::Status::infeasible);

  Eigen::MatrixXd ray(1, 2);
  ray << 1, -1;
  CHECK(lp::minimize(Eigen::Vector2d(0, -1), ray, Eigen::VectorXd::Constant(1, 1)).status == lp::Status::unbounded);
  CHECK(std::string(lp::to_string(lp::Status::unbounded)) == "unbounded");
}
