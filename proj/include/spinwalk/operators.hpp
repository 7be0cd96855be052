#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <iostream>
#include <optional>

#include "spinwalk/errors.hpp"
#include "spinwalk/hilbert.hpp"

namespace spinwalk {

enum class MatrixLabel { Coin, CoinSqrt, SImp1w, SImp1wSqrt, SImp2w, SImp2wSqrt, SDirac };

/// A unitary building block of the walk (2x2 coin, 4x4 / 8x8 impurity scatterer).
struct ScatteringMatrix {
  MatrixLabel label;
  Eigen::MatrixXcd entries;
  int dim() const { return static_cast<int>(entries.rows()); }
};

enum class Family { XX, SU2 };

/// XX when j_z = 0 and j_x = j_y; SU2 when all three couplings coincide.
inline std::optional<Family> classify_family(double jx, double jy, double jz) {
  if (jz == 0.0 && jx == jy) return Family::XX;
  if (jx == jy && jy == jz) return Family::SU2;
  return std::nullopt;
}

namespace detail {

// Principal branch everywhere; arguments exactly on the cut are flagged because
// either branch squares correctly and the choice is then a convention.
inline cplx sqrt_principal(cplx z, const char* who) {
  if (z.real() < 0.0 && std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)))
    std::cerr << "spinwalk: warning: " << who << ": square-root argument (" << z.real() << ", "
              << z.imag() << "i) lies on the branch cut; principal value taken\n";
  return std::sqrt(z);
}

inline void check_denominator(cplx d, const char* who) {
  if (std::abs(d) < 1e-14)
    throw singular_parameter_error(std::string(who) + ": vanishing denominator");
}

}  // namespace detail

/// Coin rotation about sigma_y: [[cos phi, -sin phi], [sin phi, cos phi]].
inline ScatteringMatrix coin(double phi) {
  Eigen::MatrixXcd m(2, 2);
  m << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return {MatrixLabel::Coin, std::move(m)};
}

/// Half-angle coin; squares to coin(phi).
inline ScatteringMatrix coin_sqrt(double phi) {
  ScatteringMatrix m = coin(phi / 2.0);
  m.label = MatrixLabel::CoinSqrt;
  return m;
}

/// Coin angle equivalent to a continuum delta potential of strength m:
/// cos phi = (eps^2 - m^2/4) / (eps^2 + m^2/4), sin phi = -eps*m / (eps^2 + m^2/4).
inline double phi_from_dirac(double epsilon, double m) {
  if (!(epsilon > 0.0)) throw config_error("phi_from_dirac: epsilon must be positive");
  return std::atan2(-epsilon * m, epsilon * epsilon - m * m / 4.0);
}

/// Scattering matrix of the spinless delta potential; a pure coin rotation.
inline ScatteringMatrix s_dirac(double epsilon, double m) {
  if (!(epsilon > 0.0)) throw config_error("s_dirac: epsilon must be positive");
  const double den = epsilon * epsilon + m * m / 4.0;
  Eigen::MatrixXcd out(2, 2);
  out << (epsilon * epsilon - m * m / 4.0) / den, epsilon * m / den,
         -epsilon * m / den, (epsilon * epsilon - m * m / 4.0) / den;
  return {MatrixLabel::SDirac, std::move(out)};
}

namespace detail {

struct Imp1wEntries {
  cplx alpha, beta, gamma, delta;
};

inline Imp1wEntries imp_1w_entries(double eps, double jx, double jy, double jz) {
  if (!(eps > 0.0)) throw config_error("s_imp_1w: epsilon must be positive");
  const double jm = jx - jy, jp = jx + jy;
  const cplx dm = (2.0 * iu * eps + jz) * (2.0 * iu * eps + jz) - jm * jm;
  const cplx dp = (2.0 * iu * eps - jz) * (2.0 * iu * eps - jz) - jp * jp;
  check_denominator(dm, "s_imp_1w");
  check_denominator(dp, "s_imp_1w");
  return {-(4.0 * eps * eps - jm * jm + jz * jz) / dm,
          -4.0 * iu * eps * jm / dm,
          -(4.0 * eps * eps - jp * jp + jz * jz) / dp,
          -4.0 * iu * eps * jp / dp};
}

}  // namespace detail

/// One walker scattering off the impurity spin, in the (L up, R up, L down, R down) basis.
inline ScatteringMatrix s_imp_1w(double eps, double jx, double jy, double jz) {
  const auto e = detail::imp_1w_entries(eps, jx, jy, jz);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = e.alpha; m(0, 3) = e.beta;
  m(1, 1) = e.gamma; m(1, 2) = e.delta;
  m(2, 1) = e.delta; m(2, 2) = e.gamma;
  m(3, 0) = e.beta;  m(3, 3) = e.alpha;
  return {MatrixLabel::SImp1w, std::move(m)};
}

/// Square root of s_imp_1w with the same sparsity pattern.
inline ScatteringMatrix s_imp_1w_sqrt(double eps, double jx, double jy, double jz) {
  const auto e = detail::imp_1w_entries(eps, jx, jy, jz);
  const cplx a = detail::sqrt_principal(e.alpha + e.beta, "s_imp_1w_sqrt");
  const cplx b = detail::sqrt_principal(e.alpha - e.beta, "s_imp_1w_sqrt");
  const cplx c = detail::sqrt_principal(e.gamma + e.delta, "s_imp_1w_sqrt");
  const cplx d = detail::sqrt_principal(e.gamma - e.delta, "s_imp_1w_sqrt");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = (a + b) / 2.0; m(0, 3) = (a - b) / 2.0;
  m(1, 1) = (c + d) / 2.0; m(1, 2) = (c - d) / 2.0;
  m(2, 1) = (c - d) / 2.0; m(2, 2) = (c + d) / 2.0;
  m(3, 0) = (a - b) / 2.0; m(3, 3) = (a + b) / 2.0;
  return {MatrixLabel::SImp1wSqrt, std::move(m)};
}

namespace detail {

struct Imp2wEntries {
  cplx alpha_p, alpha_m, beta, gamma, delta, eps_p, eps_m;
};

inline Imp2wEntries imp_2w_entries(double eps, double jx, double jy, double jz) {
  if (!(eps > 0.0)) throw config_error("s_imp_2w: epsilon must be positive");
  const cplx den = -2.0 * iu * jx * jy * jz + (jx * jx + jy * jy + jz * jz) * eps +
                   eps * eps * eps;
  check_denominator(den, "s_imp_2w");
  const cplx core = 2.0 * iu * jx * jy * jz - jz * jz * eps + eps * eps * eps;
  const cplx swing = 2.0 * iu * jz * eps * eps + 2.0 * jx * jy * eps;
  return {(core + swing) / den,
          (core - swing) / den,
          (-jx * jx + jy * jy) * eps / den,
          (jz * jz * eps + eps * eps * eps) / den,
          (2.0 * iu * jx * jy * jz - (jx * jx + jy * jy) * eps) / den,
          +(jx + jy) * (jz + iu * eps) * eps / den,
          -(jx - jy) * (jz - iu * eps) * eps / den};
}

// Shared sparsity pattern of the 8x8 impurity block and its square root; basis
// (LL up, RL up, LR up, RR up, LL down, RL down, LR down, RR down).
inline Eigen::MatrixXcd imp_2w_layout(cplx ap, cplx am, cplx b, cplx g, cplx d, cplx ep,
                                      cplx em) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
  m(0, 0) = ap; m(0, 3) = b;  m(0, 5) = em; m(0, 6) = em;
  m(1, 1) = g;  m(1, 2) = d;  m(1, 4) = ep; m(1, 7) = em;
  m(2, 1) = d;  m(2, 2) = g;  m(2, 4) = ep; m(2, 7) = em;
  m(3, 0) = b;  m(3, 3) = am; m(3, 5) = ep; m(3, 6) = ep;
  m(4, 1) = ep; m(4, 2) = ep; m(4, 4) = am; m(4, 7) = b;
  m(5, 0) = em; m(5, 3) = ep; m(5, 5) = g;  m(5, 6) = d;
  m(6, 0) = em; m(6, 3) = ep; m(6, 5) = d;  m(6, 6) = g;
  m(7, 1) = em; m(7, 2) = em; m(7, 4) = b;  m(7, 7) = ap;
  return m;
}

}  // namespace detail

/// Both walkers at the origin scattering off the impurity simultaneously.
inline ScatteringMatrix s_imp_2w(double eps, double jx, double jy, double jz) {
  const auto e = detail::imp_2w_entries(eps, jx, jy, jz);
  return {MatrixLabel::SImp2w,
          detail::imp_2w_layout(e.alpha_p, e.alpha_m, e.beta, e.gamma, e.delta, e.eps_p,
                                e.eps_m)};
}

/// Closed-form square root of s_imp_2w. XX: any eps > 0. SU2: eps = 1 only.
inline ScatteringMatrix s_imp_2w_sqrt(double eps, double j, Family family) {
  cplx ap, am, g, d, ep;
  if (family == Family::XX) {
    if (!(eps > 0.0)) throw config_error("s_imp_2w_sqrt: epsilon must be positive");
    const double r = std::sqrt(2.0 * j * j + eps * eps);
    ap = 1.0;
    am = eps / r;
    g = 0.5 * (1.0 + eps / r);
    d = 0.5 * (-1.0 + eps / r);
    ep = iu * j / r;
  } else {
    if (std::abs(eps - 1.0) > 1e-12)
      throw unsupported_parameter_error(
          "s_imp_2w_sqrt: SU2 square root only available at epsilon = 1");
    const cplx u = detail::sqrt_principal((iu - j) / (iu + j), "s_imp_2w_sqrt");
    const cplx w = detail::sqrt_principal((iu + 2.0 * j) / (iu - 2.0 * j), "s_imp_2w_sqrt");
    ap = u;
    am = (2.0 * w + u) / 3.0;
    g = (3.0 + w + 2.0 * u) / 6.0;
    d = (-3.0 + w + 2.0 * u) / 6.0;
    ep = (-w + u) / 3.0;
  }
  // the beta and eps_minus channels vanish whenever j_x = j_y, here and in the square root
  return {MatrixLabel::SImp2wSqrt, detail::imp_2w_layout(ap, am, 0.0, g, d, ep, 0.0)};
}

/// Independent reconstruction of s_imp_1w from the midpoint jump condition: the
/// exchange Hamiltonian acts at the origin, and the 4x4 linear system relating
/// fields on either side is solved for outgoing in terms of incoming amplitudes.
inline ScatteringMatrix cayley_oracle_1w(double eps, double jx, double jy, double jz) {
  if (!(eps > 0.0)) throw config_error("cayley_oracle_1w: epsilon must be positive");
  const double jm = jx - jy, jp = jx + jy;
  Eigen::Matrix4cd h;
  h << jz, 0, 0, jm,
       0, -jz, jp, 0,
       0, jp, -jz, 0,
       jm, 0, 0, jz;
  Eigen::Matrix4cd d = Eigen::Matrix4cd::Zero();
  d.diagonal() << -1.0, 1.0, -1.0, 1.0;  // velocity sign of each channel
  const Eigen::Matrix4cd p = iu * eps * d + 0.5 * h;   // acts on fields just right of 0
  const Eigen::Matrix4cd q = iu * eps * d - 0.5 * h;   // acts on fields just left of 0
  // L components (slots 0, 2) leave through the left side, R components (1, 3)
  // through the right; regroup the jump condition accordingly.
  Eigen::Matrix4cd sel_r = Eigen::Matrix4cd::Zero();  // picks R slots
  sel_r(1, 1) = sel_r(3, 3) = 1.0;
  Eigen::Matrix4cd sel_l = Eigen::Matrix4cd::Zero();  // picks L slots
  sel_l(0, 0) = sel_l(2, 2) = 1.0;
  const Eigen::Matrix4cd lhs = p * sel_r - q * sel_l;
  const Eigen::Matrix4cd rhs = q * sel_r - p * sel_l;
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(lhs);
  if (!lu.isInvertible())
    throw singular_parameter_error("cayley_oracle_1w: singular jump-condition system");
  return {MatrixLabel::SImp1w, lu.solve(rhs)};
}

/// Independent reconstruction of s_imp_2w as a Cayley transform of the on-site
/// coupling matrix: (i eps I + M/2)^{-1} (i eps I - M/2).
inline ScatteringMatrix cayley_oracle_2w(double eps, double jx, double jy, double jz) {
  if (!(eps > 0.0)) throw config_error("cayley_oracle_2w: epsilon must be positive");
  const double jm = jx - jy, jp = jx + jy;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
  m(0, 0) = 2.0 * jz; m(0, 5) = jm; m(0, 6) = jm;
  m(1, 4) = jp; m(1, 7) = jm;
  m(2, 4) = jp; m(2, 7) = jm;
  m(3, 3) = -2.0 * jz; m(3, 5) = jp; m(3, 6) = jp;
  m(4, 1) = jp; m(4, 2) = jp; m(4, 4) = -2.0 * jz;
  m(5, 0) = jm; m(5, 3) = jp;
  m(6, 0) = jm; m(6, 3) = jp;
  m(7, 1) = jm; m(7, 2) = jm; m(7, 7) = 2.0 * jz;
  const Eigen::MatrixXcd lhs =
      iu * eps * Eigen::MatrixXcd::Identity(8, 8) + 0.5 * m;
  const Eigen::MatrixXcd rhs =
      iu * eps * Eigen::MatrixXcd::Identity(8, 8) - 0.5 * m;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(lhs);
  if (!lu.isInvertible())
    throw singular_parameter_error("cayley_oracle_2w: singular Cayley system");
  return {MatrixLabel::SImp2w, lu.solve(rhs)};
}

}  // namespace spinwalk
