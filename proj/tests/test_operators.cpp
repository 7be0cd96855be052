#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include <spinwalk/operators.hpp>

using namespace spinwalk;

namespace {

double unitarity_defect(const Eigen::MatrixXcd& m) {
  return (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("coin is a rotation and its half-angle version squares back", "[operators]") {
  const double phi = 0.7;
  const auto c = coin(phi);
  REQUIRE(c.dim() == 2);
  REQUIRE(c.entries(0, 0) == cplx(std::cos(phi)));
  REQUIRE(c.entries(0, 1) == cplx(-std::sin(phi)));
  REQUIRE(c.entries(1, 0) == cplx(std::sin(phi)));
  REQUIRE(c.entries(1, 1) == cplx(std::cos(phi)));
  REQUIRE(unitarity_defect(c.entries) < 1e-15);

  const auto h = coin_sqrt(phi);
  REQUIRE(max_diff(h.entries * h.entries, c.entries) < 1e-15);
}

TEST_CASE("delta-potential scattering reduces to a coin rotation", "[operators]") {
  const double eps = 1.3, m = 0.8;
  const double phi = phi_from_dirac(eps, m);
  const auto sd = s_dirac(eps, m);
  REQUIRE(max_diff(sd.entries, coin(phi).entries) < 1e-15);
  REQUIRE(unitarity_defect(sd.entries) < 1e-15);

  // m = 2 eps kills the diagonal entirely
  const auto hard = s_dirac(1.0, 2.0);
  REQUIRE(std::abs(hard.entries(0, 0)) < 1e-15);
  REQUIRE(hard.entries(0, 1) == cplx(1.0));
  REQUIRE(hard.entries(1, 0) == cplx(-1.0));
  REQUIRE(phi_from_dirac(1.0, 2.0) == Catch::Approx(-M_PI / 2.0));

  REQUIRE_THROWS_AS(phi_from_dirac(0.0, 1.0), config_error);
  REQUIRE_THROWS_AS(s_dirac(-1.0, 1.0), config_error);
}

TEST_CASE("one-walker impurity block, planar coupling at unit strength", "[operators]") {
  // jx = jy = 1, jz = 0, eps = 1: the up-up channel is transparent and the
  // mixed channels swap with a quarter-turn phase
  const auto s = s_imp_1w(1.0, 1.0, 1.0, 0.0);
  Eigen::Matrix4cd want = Eigen::Matrix4cd::Zero();
  want(0, 0) = want(3, 3) = 1.0;
  want(1, 2) = want(2, 1) = iu;
  REQUIRE(max_diff(s.entries, want) < 1e-15);
}

TEST_CASE("one-walker impurity block, isotropic coupling at unit strength", "[operators]") {
  const auto s = s_imp_1w(1.0, 1.0, 1.0, 1.0);
  REQUIRE(std::abs(s.entries(0, 0) - cplx(0.6, 0.8)) < 1e-15);
  REQUIRE(std::abs(s.entries(0, 3)) < 1e-15);
  REQUIRE(std::abs(s.entries(1, 1) - cplx(7.0 / 65.0, -4.0 / 65.0)) < 1e-15);
  REQUIRE(std::abs(s.entries(1, 2) - cplx(32.0 / 65.0, 56.0 / 65.0)) < 1e-15);
  REQUIRE(unitarity_defect(s.entries) < 1e-14);
}

TEST_CASE("impurity blocks match their jump-condition reconstruction", "[operators]") {
  const double sets[][4] = {
      {1.0, 1.0, 1.0, 0.0},  // planar
      {1.0, 3.0, 3.0, 3.0},  // isotropic
      {1.1, 0.7, 0.3, 0.2},  // fully anisotropic
      {0.6, 2.0, -1.0, 0.5},
  };
  for (const auto& q : sets) {
    const auto closed = s_imp_1w(q[0], q[1], q[2], q[3]);
    const auto oracle = cayley_oracle_1w(q[0], q[1], q[2], q[3]);
    REQUIRE(max_diff(closed.entries, oracle.entries) < 1e-12);
    REQUIRE(unitarity_defect(closed.entries) < 1e-13);

    const auto closed2 = s_imp_2w(q[0], q[1], q[2], q[3]);
    const auto oracle2 = cayley_oracle_2w(q[0], q[1], q[2], q[3]);
    REQUIRE(max_diff(closed2.entries, oracle2.entries) < 1e-12);
    REQUIRE(unitarity_defect(closed2.entries) < 1e-13);
    // the scatterer is symmetric under transposition in this basis
    REQUIRE(max_diff(closed2.entries, closed2.entries.transpose()) < 1e-13);
  }
}

TEST_CASE("impurity blocks are the identity when the coupling vanishes", "[operators]") {
  REQUIRE(max_diff(s_imp_1w(1.0, 0.0, 0.0, 0.0).entries,
                   Eigen::MatrixXcd::Identity(4, 4)) < 1e-15);
  REQUIRE(max_diff(s_imp_2w(1.0, 0.0, 0.0, 0.0).entries,
                   Eigen::MatrixXcd::Identity(8, 8)) < 1e-15);
  REQUIRE(max_diff(s_imp_1w_sqrt(1.0, 0.0, 0.0, 0.0).entries,
                   Eigen::MatrixXcd::Identity(4, 4)) < 1e-15);
  REQUIRE(max_diff(s_imp_2w_sqrt(1.0, 0.0, Family::XX).entries,
                   Eigen::MatrixXcd::Identity(8, 8)) < 1e-15);
}

TEST_CASE("one-walker square root squares back and stays unitary", "[operators]") {
  const double sets[][4] = {
      {1.0, 1.0, 1.0, 0.0},
      {1.0, 20.0, 20.0, 0.0},
      {1.0, 1.0, 1.0, 1.0},
      {1.0, 10.0, 10.0, 10.0},
      {1.1, 0.7, 0.3, 0.2},
  };
  for (const auto& q : sets) {
    const auto r = s_imp_1w_sqrt(q[0], q[1], q[2], q[3]);
    const auto s = s_imp_1w(q[0], q[1], q[2], q[3]);
    REQUIRE(max_diff(r.entries * r.entries, s.entries) < 1e-13);
    REQUIRE(unitarity_defect(r.entries) < 1e-13);
  }
}

TEST_CASE("two-walker block, planar coupling at unit strength", "[operators]") {
  const auto s = s_imp_2w(1.0, 1.0, 1.0, 0.0);
  REQUIRE(std::abs(s.entries(0, 0) - cplx(1.0)) < 1e-15);
  REQUIRE(std::abs(s.entries(3, 3) - cplx(-1.0 / 3.0)) < 1e-15);
  REQUIRE(std::abs(s.entries(1, 1) - cplx(1.0 / 3.0)) < 1e-15);
  REQUIRE(std::abs(s.entries(1, 2) - cplx(-2.0 / 3.0)) < 1e-15);
  REQUIRE(std::abs(s.entries(3, 5) - cplx(0.0, 2.0 / 3.0)) < 1e-15);
  REQUIRE(std::abs(s.entries(0, 3)) < 1e-15);  // beta channel closed for jx = jy
  REQUIRE(std::abs(s.entries(0, 5)) < 1e-15);  // as is the eps_minus channel
}

TEST_CASE("two-walker square roots square back in both families", "[operators]") {
  for (double j : {0.5, 1.0, 3.0, 20.0})
    for (double eps : {1.0, 0.7}) {
      const auto r = s_imp_2w_sqrt(eps, j, Family::XX);
      const auto s = s_imp_2w(eps, j, j, 0.0);
      REQUIRE(max_diff(r.entries * r.entries, s.entries) < 1e-13);
      REQUIRE(unitarity_defect(r.entries) < 1e-13);
    }
  for (double j : {1.0, 5.0, 10.0, 20.0}) {
    const auto r = s_imp_2w_sqrt(1.0, j, Family::SU2);
    const auto s = s_imp_2w(1.0, j, j, j);
    REQUIRE(max_diff(r.entries * r.entries, s.entries) < 1e-13);
    REQUIRE(unitarity_defect(r.entries) < 1e-13);
  }
  REQUIRE_THROWS_AS(s_imp_2w_sqrt(0.9, 1.0, Family::SU2), unsupported_parameter_error);
}

TEST_CASE("coupling families are recognized from the three constants", "[operators]") {
  REQUIRE(classify_family(1.0, 1.0, 0.0) == Family::XX);
  REQUIRE(classify_family(0.0, 0.0, 0.0) == Family::XX);
  REQUIRE(classify_family(3.0, 3.0, 3.0) == Family::SU2);
  REQUIRE_FALSE(classify_family(1.0, 2.0, 0.0).has_value());
  REQUIRE_FALSE(classify_family(1.0, 1.0, 2.0).has_value());
  REQUIRE_FALSE(classify_family(0.7, 0.3, 0.2).has_value());
}

TEST_CASE("randomized couplings keep closed forms and oracles in lockstep", "[operators]") {
  std::mt19937 rng(491);
  std::uniform_real_distribution<double> jdist(-2.0, 2.0);
  std::uniform_real_distribution<double> edist(0.5, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double eps = edist(rng);
    const double jx = jdist(rng), jy = jdist(rng), jz = jdist(rng);
    const auto s1 = s_imp_1w(eps, jx, jy, jz);
    REQUIRE(max_diff(s1.entries, cayley_oracle_1w(eps, jx, jy, jz).entries) < 1e-11);
    REQUIRE(unitarity_defect(s1.entries) < 1e-12);
    const auto s2 = s_imp_2w(eps, jx, jy, jz);
    REQUIRE(max_diff(s2.entries, cayley_oracle_2w(eps, jx, jy, jz).entries) < 1e-11);
    REQUIRE(unitarity_defect(s2.entries) < 1e-12);
  }
}
