#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "spinwalk/errors.hpp"
#include "spinwalk/hilbert.hpp"

namespace spinwalk {

namespace detail {

inline double ipow(double base, int n) {
  double r = 1.0;
  const int a = n < 0 ? -n : n;
  double b = n < 0 ? 1.0 / base : base;
  for (int k = 0; k < a; ++k) r *= b;
  return r;
}

}  // namespace detail

/// Bulk transfer matrix mapping (psi_Lu(x-1), psi_Ru(x), psi_Ld(x-1), psi_Rd(x))
/// one site to the right, at quasienergy lambda.
inline Eigen::Matrix4cd transfer_bulk(double lambda, double phi) {
  const double c = std::cos(phi);
  if (std::abs(c) < 1e-14)
    throw singular_parameter_error("coin angle with vanishing cos(phi) has no transfer matrix");
  const cplx em = std::exp(-iu * lambda);
  const cplx ep = std::exp(iu * lambda);
  const double s = std::sin(phi);
  Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
  t(0, 0) = em;
  t(0, 1) = -s;
  t(1, 0) = -s;
  t(1, 1) = ep;
  t(2, 2) = em;
  t(2, 3) = -s;
  t(3, 2) = -s;
  t(3, 3) = ep;
  return t / c;
}

/// Transfer matrix across the impurity site for the XX coupling at strength j.
inline Eigen::Matrix4cd transfer_origin(double lambda, double phi, double j) {
  const double den = 1.0 - 2.0 * j * j + std::cos(2.0 * phi);
  if (std::abs(den) < 1e-14)
    throw singular_parameter_error("impurity transfer matrix singular at this coupling");
  const cplx em = std::exp(-iu * lambda);
  const cplx ep = std::exp(iu * lambda);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double s2 = std::sin(2.0 * phi);
  const double j2 = j * j;
  Eigen::Matrix4cd t;
  t(0, 0) = 2.0 * em * (-j2 + c);
  t(0, 1) = -s2;
  t(0, 2) = 2.0 * iu * em * j * s;
  t(0, 3) = 2.0 * iu * j * (-1.0 + c);
  t(1, 0) = -s2;
  t(1, 1) = 2.0 * ep * (j2 + c);
  t(1, 2) = -2.0 * iu * j * (1.0 + c);
  t(1, 3) = 2.0 * iu * ep * j * s;
  t(2, 0) = -2.0 * iu * em * j * s;
  t(2, 1) = 2.0 * iu * j * (1.0 + c);
  t(2, 2) = 2.0 * em * (j2 + c);
  t(2, 3) = -s2;
  t(3, 0) = -2.0 * iu * j * (-1.0 + c);
  t(3, 1) = -2.0 * iu * ep * j * s;
  t(3, 2) = -s2;
  t(3, 3) = 2.0 * ep * (-j2 + c);
  return t / den;
}

struct TransferEigensystem {
  double zeta_plus;   // (cos l + s) / cos phi
  double zeta_minus;  // (cos l - s) / cos phi, reciprocal of zeta_plus
  Eigen::Vector4cd v1p, v1m;  // upper (impurity-up) doublet
  Eigen::Vector4cd v2p, v2m;  // lower (impurity-down) doublet
};

/// Eigenvalues and eigenvectors of the bulk transfer matrix outside the band.
inline TransferEigensystem transfer_eigensystem(double lambda, double phi) {
  const double cl = std::cos(lambda);
  const double cp = std::cos(phi);
  const double disc = cl * cl - cp * cp;
  if (disc <= 0.0)
    throw bulk_regime_error("quasienergy inside the propagating band");
  const double s = std::sqrt(disc);
  TransferEigensystem e;
  e.zeta_plus = (cl + s) / cp;
  e.zeta_minus = (cl - s) / cp;
  const cplx up = -iu * std::sin(lambda) - s;
  const cplx um = -iu * std::sin(lambda) + s;
  Eigen::Vector4cd v1p(std::sin(phi), up, 0.0, 0.0);
  Eigen::Vector4cd v1m(std::sin(phi), um, 0.0, 0.0);
  Eigen::Vector4cd v2p(0.0, 0.0, std::sin(phi), up);
  Eigen::Vector4cd v2m(0.0, 0.0, std::sin(phi), um);
  e.v1p = v1p / v1p.norm();
  e.v1m = v1m / v1m.norm();
  e.v2p = v2p / v2p.norm();
  e.v2m = v2m / v2m.norm();
  return e;
}

/// Closed-form transfer eigenvectors at the XX bound quasienergy with cos(lambda) > 0.
inline TransferEigensystem bound_transfer_vectors(double j) {
  const double nc = 1.0 / (std::sqrt(2.0) * std::pow(j * j + 1.0, 0.25));
  const cplx sp = std::sqrt(cplx(j, 1.0));
  const cplx sm = std::sqrt(cplx(j, -1.0));
  TransferEigensystem e{};
  e.v1p = nc * Eigen::Vector4cd(sp, -sm, 0.0, 0.0);
  e.v1m = nc * Eigen::Vector4cd(sm, sp, 0.0, 0.0);
  e.v2p = nc * Eigen::Vector4cd(0.0, 0.0, sp, -sm);
  e.v2m = nc * Eigen::Vector4cd(0.0, 0.0, sm, sp);
  return e;
}

/// The four isolated walk eigenvalues for the XX coupling, sorted by phase in [0, 2pi).
inline std::array<cplx, 4> bound_eigenvalues_xx(double phi, double j) {
  const double j2 = j * j;
  const double re = std::sqrt((1.0 + 2.0 * j2 + std::cos(2.0 * phi)) / 2.0) /
                    std::sqrt(1.0 + j2);
  const double im = std::abs(std::sin(phi)) / std::sqrt(1.0 + j2);
  const cplx w(re, im);
  return {w, -std::conj(w), -w, std::conj(w)};
}

/// Closed-form growing transfer eigenvalue at the XX bound quasienergy.
inline double zeta_plus_bound_xx(double phi, double j) {
  const double sp = std::sin(phi);
  const double j2 = j * j;
  return (std::sqrt(1.0 + j2 - sp * sp) + std::sqrt(j2 * sp * sp)) /
         (std::cos(phi) * std::sqrt(1.0 + j2));
}

/// Tail localization length of a bound state at quasienergy lambda.
inline double localization_length_analytic(double lambda, double phi) {
  const double cl = std::cos(lambda);
  const double cp = std::cos(phi);
  const double disc = cl * cl - cp * cp;
  if (disc <= 0.0)
    throw bulk_regime_error("quasienergy inside the propagating band");
  const double s = std::sqrt(disc);
  return 1.0 / std::log((std::abs(cl) + s) / std::abs(cp));
}

/// Matching determinant whose roots are the bound quasienergies.
/// Also available: the 2x2 matching matrix in the decaying-solution basis.
inline Eigen::Matrix2cd matching_matrix(double lambda, double phi, double j) {
  const Eigen::Matrix4cd t0 = transfer_origin(lambda, phi, j);
  const TransferEigensystem e = transfer_eigensystem(lambda, phi);
  const bool plus_big = std::abs(e.zeta_plus) > std::abs(e.zeta_minus);
  const Eigen::Vector4cd& v1 = plus_big ? e.v1p : e.v1m;
  const Eigen::Vector4cd& v2 = plus_big ? e.v2p : e.v2m;
  Eigen::Matrix2cd k;
  k(0, 0) = v1.transpose() * t0 * v1;
  k(0, 1) = v1.transpose() * t0 * v2;
  k(1, 0) = v2.transpose() * t0 * v1;
  k(1, 1) = v2.transpose() * t0 * v2;
  const double scale = std::max(1.0, std::abs(k(0, 1)));
  if (std::abs(k(0, 1) + k(1, 0)) > 1e-12 * scale)
    throw regime_error("matching matrix lost its antisymmetry");
  return k;
}

inline cplx determinant_condition(double lambda, double phi, double j) {
  const Eigen::Matrix2cd k = matching_matrix(lambda, phi, j);
  return k(0, 0) * k(1, 1) - k(0, 1) * k(1, 0);
}

enum class BoundBranch { CosPositive, CosNegative };

inline const char* bound_branch_name(BoundBranch b) {
  return b == BoundBranch::CosPositive ? "cos_positive" : "cos_negative";
}

struct BoundStateSolution {
  cplx eigenvalue;
  double lambda;
  BoundBranch branch;
  cplx a0, b0;  // weights of the growing-side transfer eigenvectors at x = 0
  cplx c0, d0;  // weights of the decaying-side transfer vectors at x = 1
  double zeta_plus, zeta_minus;
  double localization_length;
  StateVector1W wavefunction;  // unit norm, shifted-frame components
};

/// Assembles the normalized shifted-frame wavefunction of one XX bound state.
/// which selects among the four eigenvalues in bound_eigenvalues_xx order.
inline BoundStateSolution assemble_bound_state(double phi, double j, int which, int lx) {
  if (which < 1 || which > 4)
    throw config_error("bound state selector must be 1..4");
  if (lx < 3 || lx % 2 == 0)
    throw config_error("lattice size must be odd and at least 3");

  const cplx w = bound_eigenvalues_xx(phi, j)[static_cast<std::size_t>(which - 1)];
  double lambda = std::arg(w);
  if (lambda < 0) lambda += 2 * M_PI;

  // The transfer chain advances the conjugate quasienergy; running it at
  // 2 pi - lambda and then negating the R components lands on lambda itself.
  const double lam_m = 2 * M_PI - lambda;
  const Eigen::Matrix4cd t0 = transfer_origin(lam_m, phi, j);
  const TransferEigensystem e = transfer_eigensystem(lam_m, phi);
  const bool plus_big = std::abs(e.zeta_plus) > std::abs(e.zeta_minus);
  const double zeta_big = plus_big ? e.zeta_plus : e.zeta_minus;
  const double zeta_small = plus_big ? e.zeta_minus : e.zeta_plus;
  const Eigen::Vector4cd& v1b = plus_big ? e.v1p : e.v1m;
  const Eigen::Vector4cd& v2b = plus_big ? e.v2p : e.v2m;
  const Eigen::Vector4cd& v1s = plus_big ? e.v1m : e.v1p;
  const Eigen::Vector4cd& v2s = plus_big ? e.v2m : e.v2p;

  Eigen::Matrix2cd k;
  k(0, 0) = v1b.transpose() * t0 * v1b;
  k(0, 1) = v1b.transpose() * t0 * v2b;
  k(1, 0) = v2b.transpose() * t0 * v1b;
  k(1, 1) = v2b.transpose() * t0 * v2b;

  cplx a, b;
  if (k.row(0).norm() >= k.row(1).norm()) {
    a = k(0, 1);
    b = -k(0, 0);
  } else {
    a = k(1, 1);
    b = -k(1, 0);
  }
  const double ns = std::sqrt(std::norm(a) + std::norm(b));
  if (ns < 1e-14)
    throw regime_error("degenerate matching null space at the requested quasienergy");
  a /= ns;
  b /= ns;
  const cplx piv = std::abs(a) >= std::abs(b) ? a : b;
  const cplx phase = piv / std::abs(piv);
  a /= phase;
  b /= phase;

  const Eigen::Vector4cd psi0 = a * v1b + b * v2b;
  const Eigen::Vector4cd psi1 = t0 * psi0;

  Eigen::Matrix<cplx, 4, 2> vs;
  vs.col(0) = v1s;
  vs.col(1) = v2s;
  const Eigen::Vector2cd cd = vs.colPivHouseholderQr().solve(psi1);
  if ((vs * cd - psi1).norm() > 1e-10 * std::max(1.0, psi1.norm()))
    throw regime_error("origin-crossed solution leaks into the growing channel");

  BoundStateSolution sol;
  sol.eigenvalue = w;
  sol.lambda = lambda;
  sol.branch = std::cos(lambda) > 0 ? BoundBranch::CosPositive : BoundBranch::CosNegative;
  sol.a0 = a;
  sol.b0 = b;
  sol.c0 = cd(0);
  sol.d0 = cd(1);
  sol.zeta_plus = e.zeta_plus;
  sol.zeta_minus = e.zeta_minus;
  sol.localization_length = localization_length_analytic(lambda, phi);
  sol.wavefunction = StateVector1W(lx);

  // psi_hat(x) = (psi_Lu(x-1), psi_Ru(x), psi_Ld(x-1), psi_Rd(x))
  const auto psi_hat = [&](int x) -> Eigen::Vector4cd {
    if (x <= 0) return detail::ipow(zeta_big, x) * psi0;
    return detail::ipow(zeta_small, x - 1) * psi1;
  };
  for (int x = -(lx / 2); x <= lx / 2; ++x) {
    const Eigen::Vector4cd here = psi_hat(x);
    const Eigen::Vector4cd next = psi_hat(x + 1);
    sol.wavefunction.at(x, kLeft, kUp) = next(0);
    sol.wavefunction.at(x, kRight, kUp) = -here(1);
    sol.wavefunction.at(x, kLeft, kDown) = next(2);
    sol.wavefunction.at(x, kRight, kDown) = -here(3);
  }
  sol.wavefunction.normalize();
  return sol;
}

}  // namespace spinwalk
