#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "spinwalk/errors.hpp"
#include "spinwalk/hilbert.hpp"
#include "spinwalk/operators.hpp"

namespace spinwalk {

enum class InitKind { DeltaDelta, BoundDelta };

enum class OriginSide { Negative, Positive };

/// One split-operator step for two walkers sharing the impurity at the origin.
/// Factor order right to left: sqrt(C0), sqrt(C), shifts, sqrt(C), sqrt(C0).
class Evolver2W {
 public:
  explicit Evolver2W(const ModelParams& p) : p_(p), lx_(p.lx) {
    p.validate();
    const auto fam = classify_family(p.j_x, p.j_y, p.j_z);
    if (!fam)
      throw unsupported_parameter_error(
          "two-walker impurity square root needs the XX or isotropic coupling");
    ch_ = coin_sqrt(p.phi).entries;
    imp1h_ = s_imp_1w_sqrt(p.epsilon, p.j_x, p.j_y, p.j_z).entries;
    imp2h_ = s_imp_2w_sqrt(p.epsilon, p.j_x, *fam).entries;
    origin_ = static_cast<int>(site_of(0, lx_));
    scratch_.resize(static_cast<std::size_t>(8) * lx_ * lx_);
  }

  const ModelParams& params() const { return p_; }

  void step(StateVector2W& s) const {
    if (s.lx != lx_) throw config_error("state lattice does not match evolver");
    apply_c0_sqrt(s);
    apply_coin1(s);
    apply_coin2(s);
    apply_shift1(s);
    apply_shift2(s);
    apply_coin1(s);
    apply_coin2(s);
    apply_c0_sqrt(s);
  }

 private:
  // Square root of the impurity coin: 8x8 when both walkers sit at the origin,
  // the one-walker square root on (sigma_at_origin, S0) when exactly one does.
  void apply_c0_sqrt(StateVector2W& s) const {
    std::array<cplx, 8> v{};
    const int o = origin_;
    for (int s2 = 0; s2 < lx_; ++s2) {
      if (s2 == o) continue;
      const std::size_t base = 8 * (static_cast<std::size_t>(o) * lx_ + s2);
      for (int sig2 = 0; sig2 < 2; ++sig2) {
        for (int k = 0; k < 4; ++k)  // k = 2*s0 + sigma1
          v[static_cast<std::size_t>(k)] =
              s.amp[base + 4 * (k >> 1) + 2 * sig2 + (k & 1)];
        for (int r = 0; r < 4; ++r) {
          cplx acc = 0.0;
          for (int k = 0; k < 4; ++k) acc += imp1h_(r, k) * v[static_cast<std::size_t>(k)];
          s.amp[base + 4 * (r >> 1) + 2 * sig2 + (r & 1)] = acc;
        }
      }
    }
    for (int s1 = 0; s1 < lx_; ++s1) {
      if (s1 == o) continue;
      const std::size_t base = 8 * (static_cast<std::size_t>(s1) * lx_ + o);
      for (int sig1 = 0; sig1 < 2; ++sig1) {
        for (int k = 0; k < 4; ++k)  // k = 2*s0 + sigma2
          v[static_cast<std::size_t>(k)] =
              s.amp[base + 4 * (k >> 1) + 2 * (k & 1) + sig1];
        for (int r = 0; r < 4; ++r) {
          cplx acc = 0.0;
          for (int k = 0; k < 4; ++k) acc += imp1h_(r, k) * v[static_cast<std::size_t>(k)];
          s.amp[base + 4 * (r >> 1) + 2 * (r & 1) + sig1] = acc;
        }
      }
    }
    const std::size_t base = 8 * (static_cast<std::size_t>(o) * lx_ + o);
    for (int k = 0; k < 8; ++k) v[static_cast<std::size_t>(k)] = s.amp[base + k];
    for (int r = 0; r < 8; ++r) {
      cplx acc = 0.0;
      for (int k = 0; k < 8; ++k) acc += imp2h_(r, k) * v[static_cast<std::size_t>(k)];
      s.amp[base + static_cast<std::size_t>(r)] = acc;
    }
  }

  void apply_coin1(StateVector2W& s) const {
    const std::size_t cells = static_cast<std::size_t>(lx_) * lx_;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      cplx* a = s.amp.data() + 8 * cell;
      for (int half = 0; half < 4; ++half) {  // half = 2*s0 + sigma2
        cplx& x0 = a[2 * half];
        cplx& x1 = a[2 * half + 1];
        const cplx t = x0;
        x0 = ch_(0, 0) * t + ch_(0, 1) * x1;
        x1 = ch_(1, 0) * t + ch_(1, 1) * x1;
      }
    }
  }

  void apply_coin2(StateVector2W& s) const {
    const std::size_t cells = static_cast<std::size_t>(lx_) * lx_;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      cplx* a = s.amp.data() + 8 * cell;
      for (int s0 = 0; s0 < 2; ++s0)
        for (int sig1 = 0; sig1 < 2; ++sig1) {
          cplx& x0 = a[4 * s0 + sig1];
          cplx& x1 = a[4 * s0 + 2 + sig1];
          const cplx t = x0;
          x0 = ch_(0, 0) * t + ch_(0, 1) * x1;
          x1 = ch_(1, 0) * t + ch_(1, 1) * x1;
        }
    }
  }

  void apply_shift1(StateVector2W& s) const {
    static constexpr int kLComp[4] = {0, 2, 4, 6};
    static constexpr int kRComp[4] = {1, 3, 5, 7};
    std::vector<cplx>& out = scratch_;
    for (int s1 = 0; s1 < lx_; ++s1) {
      const int from_l = (s1 + 1) % lx_;
      const int from_r = (s1 + lx_ - 1) % lx_;
      for (int s2 = 0; s2 < lx_; ++s2) {
        const std::size_t d = 8 * (static_cast<std::size_t>(s1) * lx_ + s2);
        const std::size_t fl = 8 * (static_cast<std::size_t>(from_l) * lx_ + s2);
        const std::size_t fr = 8 * (static_cast<std::size_t>(from_r) * lx_ + s2);
        for (int c : kLComp) out[d + c] = s.amp[fl + c];
        for (int c : kRComp) out[d + c] = s.amp[fr + c];
      }
    }
    s.amp.swap(out);
  }

  void apply_shift2(StateVector2W& s) const {
    static constexpr int kLComp[4] = {0, 1, 4, 5};
    static constexpr int kRComp[4] = {2, 3, 6, 7};
    std::vector<cplx>& out = scratch_;
    for (int s1 = 0; s1 < lx_; ++s1) {
      const std::size_t row = 8 * (static_cast<std::size_t>(s1) * lx_);
      for (int s2 = 0; s2 < lx_; ++s2) {
        const int from_l = (s2 + 1) % lx_;
        const int from_r = (s2 + lx_ - 1) % lx_;
        const std::size_t d = row + 8 * static_cast<std::size_t>(s2);
        const std::size_t fl = row + 8 * static_cast<std::size_t>(from_l);
        const std::size_t fr = row + 8 * static_cast<std::size_t>(from_r);
        for (int c : kLComp) out[d + c] = s.amp[fl + c];
        for (int c : kRComp) out[d + c] = s.amp[fr + c];
      }
    }
    s.amp.swap(out);
  }

  ModelParams p_;
  int lx_;
  int origin_;
  Eigen::Matrix2cd ch_;
  Eigen::Matrix4cd imp1h_;
  Eigen::Matrix<cplx, 8, 8> imp2h_;
  mutable std::vector<cplx> scratch_;  // one evolver per thread
};

/// Both walkers as position deltas: one at the origin in the impurity singlet
/// channel, one at x0 moving left, symmetrized per the statistics.
inline StateVector2W initial_delta_delta(const ModelParams& p, ParticleStatistics stats,
                                         int x0) {
  p.validate();
  if (x0 <= 0 || x0 > p.x_max())
    throw std::out_of_range("mobile walker start must satisfy 0 < x0 <= lx/2");
  StateVector2W s(p.lx);
  const double h = 0.5;
  const double r = 1.0 / std::sqrt(2.0);
  switch (stats) {
    case ParticleStatistics::Fermion:
      s.at(0, kLeft, x0, kLeft, kDown) = h;
      s.at(0, kRight, x0, kLeft, kUp) = -h;
      s.at(x0, kLeft, 0, kLeft, kDown) = -h;
      s.at(x0, kLeft, 0, kRight, kUp) = h;
      break;
    case ParticleStatistics::Boson:
      s.at(0, kLeft, x0, kLeft, kDown) = h;
      s.at(0, kRight, x0, kLeft, kUp) = -h;
      s.at(x0, kLeft, 0, kLeft, kDown) = h;
      s.at(x0, kLeft, 0, kRight, kUp) = -h;
      break;
    case ParticleStatistics::Distinguishable:
      s.at(0, kLeft, x0, kLeft, kDown) = r;
      s.at(0, kRight, x0, kLeft, kUp) = -r;
      break;
  }
  return s;
}

/// Walker 1 in a given bound profile, walker 2 as a delta at x0 moving left.
inline StateVector2W initial_bound_delta(const ModelParams& p, ParticleStatistics stats,
                                         int x0, const StateVector1W& bound) {
  p.validate();
  if (x0 <= 0 || x0 > p.x_max())
    throw std::out_of_range("mobile walker start must satisfy 0 < x0 <= lx/2");
  if (bound.lx != p.lx)
    throw config_error("bound profile lattice does not match parameters");
  if (std::abs(bound.norm() - 1.0) > 1e-10)
    throw config_error("bound profile must be normalized");
  StateVector2W s(p.lx);
  const double r = 1.0 / std::sqrt(2.0);
  for (int x = p.x_min(); x <= p.x_max(); ++x)
    for (int sig = 0; sig < 2; ++sig)
      for (int s0 = 0; s0 < 2; ++s0) {
        const cplx amp = bound.at(x, sig, s0);
        if (amp == cplx(0.0)) continue;
        switch (stats) {
          case ParticleStatistics::Fermion:
            s.at(x, sig, x0, kLeft, s0) += r * amp;
            s.at(x0, kLeft, x, sig, s0) -= r * amp;
            break;
          case ParticleStatistics::Boson:
            s.at(x, sig, x0, kLeft, s0) += r * amp;
            s.at(x0, kLeft, x, sig, s0) += r * amp;
            break;
          case ParticleStatistics::Distinguishable:
            s.at(x, sig, x0, kLeft, s0) += amp;
            break;
        }
      }
  s.normalize();
  return s;
}

struct Observables2W {
  Eigen::MatrixXd p_joint;            // indexed by (site1, site2)
  Eigen::VectorXd p_marg1, p_marg2;   // indexed by site
  double sz;                          // impurity polarization in [-1, 1]
  cplx singlet_overlap;               // root weight of the walker-1 origin singlet channel
  std::array<cplx, 3> triplet_overlaps;
};

inline Observables2W observables(const StateVector2W& s) {
  const int lx = s.lx;
  Observables2W o;
  o.p_joint = Eigen::MatrixXd::Zero(lx, lx);
  o.p_marg1 = Eigen::VectorXd::Zero(lx);
  o.p_marg2 = Eigen::VectorXd::Zero(lx);
  double sz = 0.0, n2 = 0.0;
  for (int s1 = 0; s1 < lx; ++s1)
    for (int s2 = 0; s2 < lx; ++s2) {
      const std::size_t base = 8 * (static_cast<std::size_t>(s1) * lx + s2);
      double cell = 0.0, cell_dn = 0.0;
      for (int c = 0; c < 8; ++c) {
        const double w = std::norm(s.amp[base + static_cast<std::size_t>(c)]);
        cell += w;
        if (c >= 4) cell_dn += w;
      }
      o.p_joint(s1, s2) += cell;
      o.p_marg1(s1) += cell;
      o.p_marg2(s2) += cell;
      n2 += cell;
      sz += cell - 2.0 * cell_dn;
    }
  if (n2 <= 0.0) throw regime_error("zero-norm two-walker state");
  o.sz = sz / n2;

  // Weight of walker 1 sitting at the origin in the impurity singlet channel,
  // resolved over walker 2; reported as the positive square root.
  double singlet_w = 0.0;
  std::array<double, 3> trip_w{0.0, 0.0, 0.0};
  const double r = 1.0 / std::sqrt(2.0);
  for (int s2 = 0; s2 < lx; ++s2)
    for (int sig2 = 0; sig2 < 2; ++sig2) {
      const int x2 = x_of_site(s2, lx);
      const cplx lu = s.at(0, kLeft, x2, sig2, kUp);
      const cplx ru = s.at(0, kRight, x2, sig2, kUp);
      const cplx ld = s.at(0, kLeft, x2, sig2, kDown);
      const cplx rd = s.at(0, kRight, x2, sig2, kDown);
      singlet_w += std::norm(r * (ld - ru));
      trip_w[0] += std::norm(lu);
      trip_w[1] += std::norm(r * (ld + ru));
      trip_w[2] += std::norm(rd);
    }
  o.singlet_overlap = std::sqrt(singlet_w / n2);
  for (int t = 0; t < 3; ++t)
    o.triplet_overlaps[static_cast<std::size_t>(t)] =
        std::sqrt(trip_w[static_cast<std::size_t>(t)] / n2);
  return o;
}

/// Probability that walker 2 is on the far side of the origin.
inline double transmission(const StateVector2W& s, OriginSide side = OriginSide::Negative) {
  const int lx = s.lx;
  double w = 0.0, n2 = 0.0;
  for (int s1 = 0; s1 < lx; ++s1)
    for (int s2 = 0; s2 < lx; ++s2) {
      const std::size_t base = 8 * (static_cast<std::size_t>(s1) * lx + s2);
      double cell = 0.0;
      for (int c = 0; c < 8; ++c) cell += std::norm(s.amp[base + static_cast<std::size_t>(c)]);
      n2 += cell;
      const int x2 = x_of_site(s2, lx);
      if ((side == OriginSide::Negative && x2 < 0) ||
          (side == OriginSide::Positive && x2 > 0))
        w += cell;
    }
  if (n2 <= 0.0) throw regime_error("zero-norm two-walker state");
  return w / n2;
}

}  // namespace spinwalk
