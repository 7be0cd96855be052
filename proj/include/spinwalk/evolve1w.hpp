#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spinwalk/eig.hpp"
#include "spinwalk/errors.hpp"
#include "spinwalk/hilbert.hpp"
#include "spinwalk/operators.hpp"

namespace spinwalk {

enum class Frame { Symmetric, Shifted };

inline const char* frame_name(Frame f) {
  return f == Frame::Symmetric ? "symmetric" : "shifted";
}

struct Unitary1W {
  Frame frame;
  int lx;
  Eigen::MatrixXcd u;
};

namespace detail {

// Left-multiplies the per-site coin (acting on sigma for each s0) onto m.
inline void left_apply_coin_1w(Eigen::MatrixXcd& m, const Eigen::Matrix2cd& c, int lx) {
  const Eigen::Index n = m.cols();
  Eigen::RowVectorXcd tmp(n);
  for (int site = 0; site < lx; ++site)
    for (int s0 = 0; s0 < 2; ++s0) {
      const Eigen::Index r0 = 4 * site + 2 * s0 + kLeft;
      const Eigen::Index r1 = 4 * site + 2 * s0 + kRight;
      tmp = m.row(r0);
      m.row(r0) = c(0, 0) * tmp + c(0, 1) * m.row(r1);
      m.row(r1) = c(1, 0) * tmp + c(1, 1) * m.row(r1);
    }
}

// Left-multiplies a 4x4 block acting on (sigma, s0) at the origin site.
inline void left_apply_origin_1w(Eigen::MatrixXcd& m, const Eigen::Matrix4cd& b, int lx) {
  const Eigen::Index r = 4 * static_cast<Eigen::Index>(site_of(0, lx));
  const Eigen::MatrixXcd tmp = m.middleRows(r, 4);
  m.middleRows(r, 4) = b * tmp;
}

// Left-multiplies the periodic shift: L moves one site down, R one site up.
inline void left_apply_shift_1w(Eigen::MatrixXcd& m, int lx) {
  Eigen::MatrixXcd src = m;
  for (int site = 0; site < lx; ++site) {
    const int from_l = (site + 1) % lx;
    const int from_r = (site + lx - 1) % lx;
    for (int s0 = 0; s0 < 2; ++s0) {
      m.row(4 * site + 2 * s0 + kLeft) = src.row(4 * from_l + 2 * s0 + kLeft);
      m.row(4 * site + 2 * s0 + kRight) = src.row(4 * from_r + 2 * s0 + kRight);
    }
  }
}

}  // namespace detail

/// Dense one-step walk operator in the requested frame.
inline Unitary1W build_u1w(const ModelParams& p, Frame frame) {
  p.validate();
  const int n = 4 * p.lx;
  const Eigen::Matrix2cd ch = coin_sqrt(p.phi).entries;
  const Eigen::Matrix4cd imp = s_imp_1w(p.epsilon, p.j_x, p.j_y, p.j_z).entries;

  Unitary1W out{frame, p.lx, Eigen::MatrixXcd::Identity(n, n)};
  if (frame == Frame::Symmetric) {
    const Eigen::Matrix4cd imp_h = s_imp_1w_sqrt(p.epsilon, p.j_x, p.j_y, p.j_z).entries;
    detail::left_apply_origin_1w(out.u, imp_h, p.lx);
    detail::left_apply_coin_1w(out.u, ch, p.lx);
    detail::left_apply_shift_1w(out.u, p.lx);
    detail::left_apply_coin_1w(out.u, ch, p.lx);
    detail::left_apply_origin_1w(out.u, imp_h, p.lx);
  } else {
    detail::left_apply_coin_1w(out.u, ch, p.lx);
    detail::left_apply_origin_1w(out.u, imp, p.lx);
    detail::left_apply_coin_1w(out.u, ch, p.lx);
    detail::left_apply_shift_1w(out.u, p.lx);
  }
  return out;
}

inline void apply_u(const Unitary1W& u, StateVector1W& s) {
  Eigen::Map<Eigen::VectorXcd> v(s.amp.data(), static_cast<Eigen::Index>(s.amp.size()));
  v = (u.u * v).eval();
}

/// Maps a shifted-frame eigenvector to the symmetric frame: sqrt(C0) sqrt(C) psi.
/// Both factors are local in position, so the map preserves site support.
inline StateVector1W to_symmetric_frame(const StateVector1W& in, const ModelParams& p) {
  StateVector1W out = in;
  const Eigen::Matrix2cd ch = coin_sqrt(p.phi).entries;
  for (int site = 0; site < p.lx; ++site)
    for (int s0 = 0; s0 < 2; ++s0) {
      cplx& l = out.amp[static_cast<std::size_t>(4 * site + 2 * s0 + kLeft)];
      cplx& r = out.amp[static_cast<std::size_t>(4 * site + 2 * s0 + kRight)];
      const cplx t = l;
      l = ch(0, 0) * t + ch(0, 1) * r;
      r = ch(1, 0) * t + ch(1, 1) * r;
    }
  const Eigen::Matrix4cd imp_h = s_imp_1w_sqrt(p.epsilon, p.j_x, p.j_y, p.j_z).entries;
  const std::size_t base = 4 * site_of(0, p.lx);
  Eigen::Vector4cd v;
  for (int k = 0; k < 4; ++k) v(k) = out.amp[base + static_cast<std::size_t>(k)];
  v = (imp_h * v).eval();
  for (int k = 0; k < 4; ++k) out.amp[base + static_cast<std::size_t>(k)] = v(k);
  return out;
}

inline StateVector1W state_from_column(const Eigen::VectorXcd& vec, int lx) {
  StateVector1W s(lx);
  for (std::size_t i = 0; i < s.amp.size(); ++i) s.amp[i] = vec(static_cast<Eigen::Index>(i));
  return s;
}

enum class BandClass { Bulk, Bound };

inline const char* band_class_name(BandClass c) {
  return c == BandClass::Bound ? "bound" : "bulk";
}

struct SpectrumResult {
  Eigen::VectorXcd eigenvalues;   // sorted by phase in [0, 2pi)
  Eigen::MatrixXcd eigenvectors;  // unit-norm columns, largest component real positive
  std::vector<double> lambdas;
  std::vector<BandClass> classes;
  std::vector<int> bound_indices;
  std::vector<double> bound_loc_lengths;  // aligned with bound_indices, NaN if fit rejected
};

/// Fits the exponential tail of a bound eigenvector; returns the localization length.
inline double localization_fit(const Eigen::VectorXcd& vec, const ModelParams& p) {
  const int lx = p.lx;
  const double xcap = lx / 4.0;
  std::vector<double> xs, ys;
  for (int x = p.x_min(); x <= p.x_max(); ++x) {
    const double ax = std::abs(static_cast<double>(x));
    if (ax < 2.0 || ax > xcap) continue;
    const Eigen::Index r = 4 * static_cast<Eigen::Index>(site_of(x, lx));
    const double prob = vec.segment(r, 4).squaredNorm();
    if (prob < 1e-280) continue;
    xs.push_back(ax);
    ys.push_back(std::log(prob));
  }
  if (xs.size() < 3) throw fit_quality_error("too few usable tail sites for decay fit");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw fit_quality_error("degenerate decay fit data");
  const double slope = sxy / sxx;
  const double r2 = (sxy * sxy) / (sxx * syy);
  if (r2 < 0.99)
    throw fit_quality_error("decay fit rejected, r^2=" + std::to_string(r2));
  if (slope == 0.0) throw fit_quality_error("flat decay fit");
  return 2.0 / std::abs(slope);
}

/// Full eigensystem of a walk operator with band classification.
inline SpectrumResult spectrum(const Unitary1W& uw, const ModelParams& p) {
  EigPairs eig = general_eigenpairs(uw.u);
  const Eigen::Index n = eig.values.size();

  double max_res = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    eig.vectors.col(k).normalize();
    max_res = std::max(max_res,
                       (uw.u * eig.vectors.col(k) - eig.values(k) * eig.vectors.col(k)).norm());
  }
  if (max_res > 1e-9)
    throw regime_error("eigenpair residual " + std::to_string(max_res) +
                       " exceeds 1e-9; operator norm " + std::to_string(uw.u.norm()));

  std::vector<double> lam(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double l = std::arg(eig.values(k));
    if (l < 0) l += 2 * M_PI;
    lam[static_cast<std::size_t>(k)] = l;
  }
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return lam[static_cast<std::size_t>(a)] < lam[static_cast<std::size_t>(b)];
  });

  SpectrumResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  out.lambdas.resize(static_cast<std::size_t>(n));
  out.classes.resize(static_cast<std::size_t>(n));
  const double c2phi = std::cos(p.phi) * std::cos(p.phi);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index s = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = eig.values(s);
    Eigen::VectorXcd v = eig.vectors.col(s);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const cplx piv = v(imax);
    if (std::abs(piv) > 0) v *= std::abs(piv) / piv;
    out.eigenvectors.col(k) = v;
    const double l = lam[static_cast<std::size_t>(s)];
    out.lambdas[static_cast<std::size_t>(k)] = l;
    const double c2l = std::cos(l) * std::cos(l);
    const bool bound = c2l > c2phi + p.band_margin;
    out.classes[static_cast<std::size_t>(k)] = bound ? BandClass::Bound : BandClass::Bulk;
    if (bound) {
      out.bound_indices.push_back(static_cast<int>(k));
      double len = std::numeric_limits<double>::quiet_NaN();
      try {
        len = localization_fit(v, p);
      } catch (const fit_quality_error&) {
      }
      out.bound_loc_lengths.push_back(len);
    }
  }
  return out;
}

/// Number of eigenvalues outside the propagating band.
inline int isolated_count(const ModelParams& p, Frame frame = Frame::Symmetric) {
  return static_cast<int>(spectrum(build_u1w(p, frame), p).bound_indices.size());
}

/// Numerical bound eigenvectors with quasienergy in (0, pi), sharpest peak first.
inline std::vector<StateVector1W> bound_profiles_numeric(const ModelParams& p,
                                                         Frame frame = Frame::Symmetric) {
  const SpectrumResult sp = spectrum(build_u1w(p, frame), p);
  const Eigen::Index r0 = 4 * static_cast<Eigen::Index>(site_of(0, p.lx));
  std::vector<std::pair<double, int>> picks;  // (origin weight, column)
  for (const int k : sp.bound_indices) {
    const double l = sp.lambdas[static_cast<std::size_t>(k)];
    if (std::sin(l) <= 0) continue;
    picks.emplace_back(sp.eigenvectors.col(k).segment(r0, 4).squaredNorm(), k);
  }
  std::sort(picks.begin(), picks.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<StateVector1W> out;
  out.reserve(picks.size());
  for (const auto& [w, k] : picks)
    out.push_back(state_from_column(sp.eigenvectors.col(k), p.lx));
  return out;
}

/// Expectation of the squared walker+impurity spin sum at the origin channel basis.
inline double j10_squared(const StateVector1W& s) {
  double e = 0.0;
  for (int x = -(s.lx / 2); x <= s.lx / 2; ++x) {
    const cplx lu = s.at(x, kLeft, kUp);
    const cplx ru = s.at(x, kRight, kUp);
    const cplx ld = s.at(x, kLeft, kDown);
    const cplx rd = s.at(x, kRight, kDown);
    e += 2.0 * std::norm(lu) + std::norm(ru) + std::norm(ld) +
         2.0 * std::real(std::conj(ru) * ld) + 2.0 * std::norm(rd);
  }
  const double n2 = s.norm_sq();
  if (n2 <= 0.0) throw regime_error("zero-norm state in j10_squared");
  return e / n2;
}

inline double j10_squared(const Eigen::VectorXcd& vec, int lx) {
  return j10_squared(state_from_column(vec, lx));
}

/// Amplitude on the origin singlet channel (|L,down> - |R,up>)/sqrt(2).
inline cplx singlet_amplitude(const StateVector1W& s) {
  return (s.at(0, kLeft, kDown) - s.at(0, kRight, kUp)) / std::sqrt(2.0);
}

/// Amplitudes on the three origin triplet channels, ordered m = +1, 0, -1.
inline std::array<cplx, 3> triplet_amplitudes(const StateVector1W& s) {
  return {s.at(0, kLeft, kUp),
          (s.at(0, kLeft, kDown) + s.at(0, kRight, kUp)) / std::sqrt(2.0),
          s.at(0, kRight, kDown)};
}

}  // namespace spinwalk
