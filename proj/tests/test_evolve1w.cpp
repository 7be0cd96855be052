#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <spinwalk/bound.hpp>
#include <spinwalk/evolve1w.hpp>

using namespace spinwalk;

namespace {
constexpr double kPhi = M_PI / 10.0;

Eigen::MatrixXcd manual_coin_layer(double angle, int lx) {
  const int n = 4 * lx;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const double c = std::cos(angle), s = std::sin(angle);
  for (int site = 0; site < lx; ++site)
    for (int s0 = 0; s0 < 2; ++s0) {
      const int l = 4 * site + 2 * s0 + kLeft;
      const int r = 4 * site + 2 * s0 + kRight;
      m(l, l) = c;
      m(l, r) = -s;
      m(r, l) = s;
      m(r, r) = c;
    }
  return m;
}

Eigen::MatrixXcd manual_shift(int lx) {
  const int n = 4 * lx;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int site = 0; site < lx; ++site)
    for (int s0 = 0; s0 < 2; ++s0) {
      m(4 * site + 2 * s0 + kLeft, 4 * ((site + 1) % lx) + 2 * s0 + kLeft) = 1.0;
      m(4 * site + 2 * s0 + kRight, 4 * ((site + lx - 1) % lx) + 2 * s0 + kRight) = 1.0;
    }
  return m;
}

double unitarity_defect(const Eigen::MatrixXcd& m) {
  return (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols()))
      .cwiseAbs()
      .maxCoeff();
}
}  // namespace

TEST_CASE("walk operators are unitary in both frames", "[evolve1w]") {
  ModelParams p;
  p.phi = kPhi;
  p.lx = 21;
  p.j_x = p.j_y = 1.0;
  REQUIRE(unitarity_defect(build_u1w(p, Frame::Symmetric).u) < 1e-13);
  REQUIRE(unitarity_defect(build_u1w(p, Frame::Shifted).u) < 1e-13);
  p.j_x = p.j_y = p.j_z = 10.0;
  REQUIRE(unitarity_defect(build_u1w(p, Frame::Symmetric).u) < 1e-13);
}

TEST_CASE("uncoupled walk reduces to coin and shift layers", "[evolve1w]") {
  ModelParams p;
  p.phi = 0.6;
  p.lx = 9;
  const Eigen::MatrixXcd half = manual_coin_layer(0.3, p.lx);
  const Eigen::MatrixXcd full = manual_coin_layer(0.6, p.lx);
  const Eigen::MatrixXcd s = manual_shift(p.lx);

  const Unitary1W sym = build_u1w(p, Frame::Symmetric);
  REQUIRE((sym.u - half * s * half).cwiseAbs().maxCoeff() < 1e-14);

  const Unitary1W sh = build_u1w(p, Frame::Shifted);
  REQUIRE((sh.u - s * full).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("single step moves a localized packet as expected", "[evolve1w]") {
  ModelParams p;
  p.phi = 0.0;  // transparent coin: pure transport
  p.lx = 11;
  const Unitary1W u = build_u1w(p, Frame::Shifted);
  StateVector1W s(p.lx);
  s.at(2, kLeft, kUp) = 1.0;
  apply_u(u, s);
  REQUIRE(std::abs(s.at(1, kLeft, kUp) - cplx(1.0)) < 1e-15);
  REQUIRE(s.norm() == Catch::Approx(1.0));
}

TEST_CASE("both frames carry the same spectrum and mapped eigenvectors",
          "[evolve1w]") {
  ModelParams p;
  p.phi = kPhi;
  p.lx = 31;
  p.j_x = p.j_y = 1.0;
  const Unitary1W usym = build_u1w(p, Frame::Symmetric);
  const Unitary1W ush = build_u1w(p, Frame::Shifted);
  const SpectrumResult sym = spectrum(usym, p);
  const SpectrumResult sh = spectrum(ush, p);

  REQUIRE(sym.eigenvalues.size() == sh.eigenvalues.size());
  double dev = 0.0;
  for (Eigen::Index k = 0; k < sym.eigenvalues.size(); ++k)
    dev = std::max(dev, std::abs(sym.eigenvalues(k) - sh.eigenvalues(k)));
  REQUIRE(dev < 1e-12);

  REQUIRE(sh.bound_indices.size() == 4);
  for (const int k : sh.bound_indices) {
    const StateVector1W mapped =
        to_symmetric_frame(state_from_column(sh.eigenvectors.col(k), p.lx), p);
    REQUIRE(mapped.norm() == Catch::Approx(1.0).epsilon(1e-12));
    Eigen::Map<const Eigen::VectorXcd> mv(mapped.amp.data(),
                                          static_cast<Eigen::Index>(mapped.amp.size()));
    const double res = (usym.u * mv - sh.eigenvalues(k) * mv).norm();
    REQUIRE(res < 1e-10);
  }
}

TEST_CASE("planar-coupling spectrum carries four isolated eigenvalues",
          "[evolve1w]") {
  ModelParams p;
  p.phi = kPhi;
  p.lx = 201;
  p.j_x = p.j_y = 3.0;
  const SpectrumResult sp = spectrum(build_u1w(p, Frame::Symmetric), p);

  REQUIRE(sp.eigenvalues.size() == 804);
  REQUIRE(sp.bound_indices.size() == 4);
  for (std::size_t k = 0; k + 1 < sp.lambdas.size(); ++k)
    REQUIRE(sp.lambdas[k] <= sp.lambdas[k + 1]);

  const auto want = bound_eigenvalues_xx(kPhi, 3.0);
  std::size_t at = 0;
  for (const int k : sp.bound_indices) {
    REQUIRE(sp.classes[static_cast<std::size_t>(k)] == BandClass::Bound);
    REQUIRE(std::abs(sp.eigenvalues(k) - want[at]) < 1e-10);
    ++at;
  }

  // spectrum closed under conjugation: every conjugate has a near partner
  const std::vector<cplx> evs(sp.eigenvalues.data(),
                              sp.eigenvalues.data() + sp.eigenvalues.size());
  double cdev = 0.0;
  for (const cplx& w : evs) {
    double best = 4.0;
    for (const cplx& v : evs) best = std::min(best, std::abs(std::conj(w) - v));
    cdev = std::max(cdev, best);
  }
  REQUIRE(cdev < 1e-12);

  // fitted tail lengths agree with the closed form within a couple percent
  const double xi = localization_length_analytic(
      std::arg(want[0]) < 0 ? std::arg(want[0]) + 2 * M_PI : std::arg(want[0]), kPhi);
  for (const double len : sp.bound_loc_lengths) {
    REQUIRE_FALSE(std::isnan(len));
    REQUIRE(std::abs(len - xi) / xi < 0.02);
  }

  // gauge: the dominant component of every eigenvector is real positive
  for (int k : {0, 200, 400}) {
    Eigen::Index imax = 0;
    sp.eigenvectors.col(k).cwiseAbs().maxCoeff(&imax);
    const cplx piv = sp.eigenvectors.col(k)(imax);
    REQUIRE(std::abs(piv.imag()) < 1e-12);
    REQUIRE(piv.real() > 0.0);
  }
}

TEST_CASE("tail fit recovers the decay of an assembled bound state", "[evolve1w]") {
  ModelParams p;
  p.phi = kPhi;
  p.lx = 201;
  p.j_x = p.j_y = 2.0;
  const BoundStateSolution b = assemble_bound_state(kPhi, 2.0, 1, p.lx);
  Eigen::Map<const Eigen::VectorXcd> v(b.wavefunction.amp.data(),
                                       static_cast<Eigen::Index>(b.wavefunction.amp.size()));
  REQUIRE(localization_fit(v, p) == Catch::Approx(3.48827967981).epsilon(1e-6));

  // flat data carries no decay to fit
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(4 * p.lx);
  REQUIRE_THROWS_AS(localization_fit(ones, p), fit_quality_error);
}

TEST_CASE("isotropic coupling grows extra isolated states", "[evolve1w]") {
  ModelParams p;
  p.phi = kPhi;
  p.lx = 41;
  p.j_x = p.j_y = p.j_z = 1.0;
  REQUIRE(isolated_count(p) == 4);
  p.j_x = p.j_y = p.j_z = 10.0;
  REQUIRE(isolated_count(p) == 8);

  const auto profs = bound_profiles_numeric(p);
  REQUIRE(profs.size() == 4);
  const double want_origin[] = {0.1981319786, 0.1666892037, 0.1212434524, 0.0631167866};
  const double want_j10[] = {1.3583103637, 1.7819265244, 1.7778983771, 1.0718989393};
  const double want_singlet[] = {0.0, 0.3006254402, 0.2354784758, 0.0};
  for (std::size_t k = 0; k < profs.size(); ++k) {
    double w0 = 0.0;
    for (int sig = 0; sig < 2; ++sig)
      for (int s0 = 0; s0 < 2; ++s0) w0 += std::norm(profs[k].at(0, sig, s0));
    REQUIRE(w0 == Catch::Approx(want_origin[k]).margin(1e-8));
    REQUIRE(j10_squared(profs[k]) == Catch::Approx(want_j10[k]).margin(1e-8));
    REQUIRE(std::abs(singlet_amplitude(profs[k])) ==
            Catch::Approx(want_singlet[k]).margin(1e-8));
    REQUIRE(j10_squared(profs[k]) > 0.0);
    REQUIRE(j10_squared(profs[k]) < 2.0);
  }
}

TEST_CASE("origin channel projections behave on hand-built states", "[evolve1w]") {
  StateVector1W singlet(11);
  singlet.at(0, kLeft, kDown) = 1.0 / std::sqrt(2.0);
  singlet.at(0, kRight, kUp) = -1.0 / std::sqrt(2.0);
  REQUIRE(std::abs(singlet_amplitude(singlet) - cplx(1.0)) < 1e-15);
  REQUIRE(j10_squared(singlet) == Catch::Approx(0.0).margin(1e-15));
  for (const cplx& t : triplet_amplitudes(singlet)) REQUIRE(std::abs(t) < 1e-15);

  StateVector1W triplet0(11);
  triplet0.at(0, kLeft, kDown) = 1.0 / std::sqrt(2.0);
  triplet0.at(0, kRight, kUp) = 1.0 / std::sqrt(2.0);
  REQUIRE(std::abs(singlet_amplitude(triplet0)) < 1e-15);
  REQUIRE(j10_squared(triplet0) == Catch::Approx(2.0));
  REQUIRE(std::abs(triplet_amplitudes(triplet0)[1] - cplx(1.0)) < 1e-15);

  StateVector1W stretched(11);
  stretched.at(0, kLeft, kUp) = 1.0;
  REQUIRE(j10_squared(stretched) == Catch::Approx(2.0));
  REQUIRE(std::abs(triplet_amplitudes(stretched)[0] - cplx(1.0)) < 1e-15);

  REQUIRE_THROWS_AS(j10_squared(StateVector1W(11)), regime_error);
}
