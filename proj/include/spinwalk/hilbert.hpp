#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinwalk/errors.hpp"

namespace spinwalk {

using cplx = std::complex<double>;
inline constexpr cplx iu{0.0, 1.0};

// walker chirality sigma: L moves left, R moves right
inline constexpr int kLeft = 0;
inline constexpr int kRight = 1;
// impurity spin S0
inline constexpr int kUp = 0;
inline constexpr int kDown = 1;

enum class ParticleStatistics { Fermion, Boson, Distinguishable };

/// All physical and numerical parameters of a run.
struct ModelParams {
  double phi = 0.0;         // coin rotation angle (radians)
  double epsilon = 1.0;     // kinetic scale of the underlying continuum model
  std::optional<double> m;  // optional delta-potential strength; only used to cross-check phi
  double j_x = 0.0;         // impurity exchange couplings
  double j_y = 0.0;
  double j_z = 0.0;
  int lx = 201;              // odd number of sites; positions x in [-(lx-1)/2, (lx-1)/2]
  double band_margin = 1e-9; // classification margin on cos^2(lambda) vs cos^2(phi)
  double support_eps = 0.0;  // occupation threshold for support pruning (0 keeps exact nonzeros)

  int half() const { return (lx - 1) / 2; }
  int x_min() const { return -half(); }
  int x_max() const { return half(); }

  void validate() const {
    if (lx < 3 || lx % 2 == 0)
      throw config_error("lx must be odd and >= 3, got " + std::to_string(lx));
    if (!(epsilon > 0.0))
      throw config_error("epsilon must be positive, got " + std::to_string(epsilon));
    if (m) {
      // coin angle implied by the delta-potential parameterization
      const double expected = std::atan2(-epsilon * *m, epsilon * epsilon - *m * *m / 4.0);
      const double diff = std::remainder(phi - expected, 2.0 * M_PI);
      if (std::abs(diff) > 1e-12)
        throw config_error("phi inconsistent with (epsilon, m): expected " +
                           std::to_string(expected) + ", got " + std::to_string(phi));
    }
  }
};

inline int site_of(int x, int lx) { return x + (lx - 1) / 2; }
inline int x_of_site(int site, int lx) { return site - (lx - 1) / 2; }

inline void check_x(int x, int lx) {
  const int h = (lx - 1) / 2;
  if (x < -h || x > h)
    throw std::out_of_range("lattice position " + std::to_string(x) +
                            " outside [-" + std::to_string(h) + ", " + std::to_string(h) + "]");
}

/// Flat index of (x, sigma, S0): 4*site + 2*S0 + sigma.
/// Per-site internal order is (L up, R up, L down, R down).
inline std::size_t index_1w(int x, int sigma, int s0, int lx) {
  check_x(x, lx);
  return 4u * static_cast<std::size_t>(site_of(x, lx)) + 2u * s0 + sigma;
}

struct Index1W {
  int x, sigma, s0;
};

inline Index1W unindex_1w(std::size_t i, int lx) {
  const int c = static_cast<int>(i % 4u);
  const int site = static_cast<int>(i / 4u);
  return {x_of_site(site, lx), c % 2, c / 2};
}

/// Flat index of (x1, sigma1, x2, sigma2, S0): 8*(site1*lx + site2) + 4*S0 + 2*sigma2 + sigma1.
/// Per-cell internal order is (LL up, RL up, LR up, RR up, LL down, RL down, LR down, RR down),
/// first letter sigma1 and second sigma2.
inline std::size_t index_2w(int x1, int sigma1, int x2, int sigma2, int s0, int lx) {
  check_x(x1, lx);
  check_x(x2, lx);
  return 8u * (static_cast<std::size_t>(site_of(x1, lx)) * lx + site_of(x2, lx)) +
         4u * s0 + 2u * sigma2 + sigma1;
}

struct Index2W {
  int x1, sigma1, x2, sigma2, s0;
};

inline Index2W unindex_2w(std::size_t i, int lx) {
  const int c = static_cast<int>(i % 8u);
  const std::size_t cell = i / 8u;
  const int site2 = static_cast<int>(cell % lx);
  const int site1 = static_cast<int>(cell / lx);
  return {x_of_site(site1, lx), c % 2, x_of_site(site2, lx), (c / 2) % 2, c / 4};
}

/// One walker plus the impurity spin: amplitudes over (x, sigma, S0).
struct StateVector1W {
  int lx = 0;
  std::vector<cplx> amp;

  StateVector1W() = default;
  explicit StateVector1W(int lx_) : lx(lx_), amp(4u * static_cast<std::size_t>(lx_)) {}

  cplx& at(int x, int sigma, int s0) { return amp[index_1w(x, sigma, s0, lx)]; }
  const cplx& at(int x, int sigma, int s0) const { return amp[index_1w(x, sigma, s0, lx)]; }

  double norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amp) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  void normalize() {
    const double n = norm();
    if (n == 0.0) throw regime_error("cannot normalize a zero state");
    for (cplx& a : amp) a /= n;
  }
};

/// Two walkers plus the impurity spin: amplitudes over (x1, sigma1, x2, sigma2, S0).
struct StateVector2W {
  int lx = 0;
  std::vector<cplx> amp;

  StateVector2W() = default;
  explicit StateVector2W(int lx_)
      : lx(lx_), amp(8u * static_cast<std::size_t>(lx_) * static_cast<std::size_t>(lx_)) {}

  cplx& at(int x1, int sigma1, int x2, int sigma2, int s0) {
    return amp[index_2w(x1, sigma1, x2, sigma2, s0, lx)];
  }
  const cplx& at(int x1, int sigma1, int x2, int sigma2, int s0) const {
    return amp[index_2w(x1, sigma1, x2, sigma2, s0, lx)];
  }

  double norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amp) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  void normalize() {
    const double n = norm();
    if (n == 0.0) throw regime_error("cannot normalize a zero state");
    for (cplx& a : amp) a /= n;
  }
};

inline double norm(const StateVector1W& s) { return s.norm(); }
inline double norm(const StateVector2W& s) { return s.norm(); }

/// Swap the two walkers: (x1,sigma1) <-> (x2,sigma2), impurity spin untouched.
inline StateVector2W exchange_2w(const StateVector2W& in) {
  StateVector2W out(in.lx);
  const int lx = in.lx;
  for (int s1 = 0; s1 < lx; ++s1)
    for (int s2 = 0; s2 < lx; ++s2)
      for (int c = 0; c < 8; ++c) {
        const int sigma1 = c % 2, sigma2 = (c / 2) % 2, s0 = c / 4;
        const int cs = 4 * s0 + 2 * sigma1 + sigma2;  // walker labels swapped
        out.amp[8u * (static_cast<std::size_t>(s2) * lx + s1) + cs] =
            in.amp[8u * (static_cast<std::size_t>(s1) * lx + s2) + c];
      }
  return out;
}

}  // namespace spinwalk
