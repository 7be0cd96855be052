#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <spinwalk/bound.hpp>
#include <spinwalk/evolve1w.hpp>
#include <spinwalk/evolve2w.hpp>

using namespace spinwalk;

namespace {
constexpr double kPhi = M_PI / 10.0;

ModelParams params_xx(int lx, double j) {
  ModelParams p;
  p.phi = kPhi;
  p.lx = lx;
  p.j_x = p.j_y = j;
  return p;
}

double max_abs_diff(const StateVector2W& a, const StateVector2W& b, double sign) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.amp.size(); ++i)
    m = std::max(m, std::abs(a.amp[i] - sign * b.amp[i]));
  return m;
}
}  // namespace

TEST_CASE("delta-delta initial states carry the documented amplitudes", "[evolve2w]") {
  const ModelParams p = params_xx(21, 3.0);
  const int x0 = 5;
  const double h = 0.5, r = 1.0 / std::sqrt(2.0);

  const StateVector2W f = initial_delta_delta(p, ParticleStatistics::Fermion, x0);
  REQUIRE(f.at(0, kLeft, x0, kLeft, kDown) == cplx(h));
  REQUIRE(f.at(0, kRight, x0, kLeft, kUp) == cplx(-h));
  REQUIRE(f.at(x0, kLeft, 0, kLeft, kDown) == cplx(-h));
  REQUIRE(f.at(x0, kLeft, 0, kRight, kUp) == cplx(h));
  REQUIRE(f.norm() == Catch::Approx(1.0));
  REQUIRE(max_abs_diff(exchange_2w(f), f, -1.0) < 1e-15);

  const StateVector2W b = initial_delta_delta(p, ParticleStatistics::Boson, x0);
  REQUIRE(b.at(x0, kLeft, 0, kLeft, kDown) == cplx(h));
  REQUIRE(max_abs_diff(exchange_2w(b), b, 1.0) < 1e-15);

  const StateVector2W d = initial_delta_delta(p, ParticleStatistics::Distinguishable, x0);
  REQUIRE(d.at(0, kLeft, x0, kLeft, kDown) == cplx(r));
  REQUIRE(d.at(0, kRight, x0, kLeft, kUp) == cplx(-r));
  REQUIRE(d.at(x0, kLeft, 0, kLeft, kDown) == cplx(0.0));
  REQUIRE(d.norm() == Catch::Approx(1.0));

  REQUIRE_THROWS_AS(initial_delta_delta(p, ParticleStatistics::Fermion, 0),
                    std::out_of_range);
  REQUIRE_THROWS_AS(initial_delta_delta(p, ParticleStatistics::Fermion, 11),
                    std::out_of_range);
}

TEST_CASE("bound-delta initial states symmetrize a tail profile", "[evolve2w]") {
  const ModelParams p = params_xx(21, 3.0);
  const int x0 = 5;
  const StateVector1W prof = assemble_bound_state(kPhi, 3.0, 1, p.lx).wavefunction;

  const StateVector2W f = initial_bound_delta(p, ParticleStatistics::Fermion, x0, prof);
  REQUIRE(f.norm() == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(max_abs_diff(exchange_2w(f), f, -1.0) < 1e-14);

  const StateVector2W b = initial_bound_delta(p, ParticleStatistics::Boson, x0, prof);
  REQUIRE(max_abs_diff(exchange_2w(b), b, 1.0) < 1e-14);

  const StateVector2W d =
      initial_bound_delta(p, ParticleStatistics::Distinguishable, x0, prof);
  // walker 1 carries the profile, walker 2 the left-moving delta
  REQUIRE(std::abs(d.at(-2, kLeft, x0, kLeft, kUp) - prof.at(-2, kLeft, kUp)) < 1e-12);
  REQUIRE(std::abs(d.at(x0, kLeft, -2, kLeft, kUp)) < 1e-15);

  StateVector1W wrong_norm = prof;
  wrong_norm.amp[0] += 0.1;
  REQUIRE_THROWS_AS(initial_bound_delta(p, ParticleStatistics::Fermion, x0, wrong_norm),
                    config_error);
  REQUIRE_THROWS_AS(
      initial_bound_delta(p, ParticleStatistics::Fermion, x0, StateVector1W(11)),
      config_error);
  REQUIRE_THROWS_AS(initial_bound_delta(p, ParticleStatistics::Fermion, -1, prof),
                    std::out_of_range);
}

TEST_CASE("evolver accepts only couplings with a closed-form square root",
          "[evolve2w]") {
  ModelParams p = params_xx(11, 1.0);
  REQUIRE_NOTHROW(Evolver2W(p));
  p.j_x = p.j_y = p.j_z = 5.0;
  REQUIRE_NOTHROW(Evolver2W(p));
  p.epsilon = 0.9;  // isotropic square root only exists at unit epsilon
  REQUIRE_THROWS_AS(Evolver2W(p), unsupported_parameter_error);
  p.epsilon = 1.0;
  p.j_x = 0.7;
  p.j_y = 0.3;
  p.j_z = 0.2;
  REQUIRE_THROWS_AS(Evolver2W(p), unsupported_parameter_error);
}

TEST_CASE("steps preserve norm and exchange symmetry", "[evolve2w]") {
  const ModelParams p = params_xx(21, 3.0);
  const Evolver2W ev(p);

  StateVector2W f = initial_delta_delta(p, ParticleStatistics::Fermion, 5);
  StateVector2W b = initial_delta_delta(p, ParticleStatistics::Boson, 5);
  for (int t = 0; t < 8; ++t) {
    ev.step(f);
    ev.step(b);
  }
  REQUIRE(std::abs(f.norm() - 1.0) < 1e-13);
  REQUIRE(std::abs(b.norm() - 1.0) < 1e-13);
  REQUIRE(max_abs_diff(exchange_2w(f), f, -1.0) < 1e-13);
  REQUIRE(max_abs_diff(exchange_2w(b), b, 1.0) < 1e-13);

  StateVector2W wrong(11);
  REQUIRE_THROWS_AS(ev.step(wrong), config_error);
}

TEST_CASE("uncoupled walkers evolve as an independent product", "[evolve2w]") {
  const ModelParams p = params_xx(21, 0.0);
  const int x0 = 5, steps = 10;

  StateVector2W s = initial_delta_delta(p, ParticleStatistics::Distinguishable, x0);
  const Evolver2W ev(p);
  for (int t = 0; t < steps; ++t) ev.step(s);
  const Observables2W obs = observables(s);

  const Unitary1W u1 = build_u1w(p, Frame::Symmetric);
  StateVector1W w1(p.lx);
  w1.at(0, kLeft, kDown) = 1.0 / std::sqrt(2.0);
  w1.at(0, kRight, kUp) = -1.0 / std::sqrt(2.0);
  StateVector1W w2(p.lx);
  w2.at(x0, kLeft, kUp) = 1.0;
  for (int t = 0; t < steps; ++t) {
    apply_u(u1, w1);
    apply_u(u1, w2);
  }

  double dev = 0.0;
  for (int i1 = 0; i1 < p.lx; ++i1)
    for (int i2 = 0; i2 < p.lx; ++i2) {
      const int x1 = x_of_site(i1, p.lx), x2 = x_of_site(i2, p.lx);
      double p1 = 0.0, p2 = 0.0;
      for (int sig = 0; sig < 2; ++sig)
        for (int s0 = 0; s0 < 2; ++s0) {
          p1 += std::norm(w1.at(x1, sig, s0));
          p2 += std::norm(w2.at(x2, sig, s0));
        }
      dev = std::max(dev, std::abs(obs.p_joint(i1, i2) - p1 * p2));
    }
  REQUIRE(dev < 1e-13);
}

TEST_CASE("observables resolve the joint distribution and origin channels",
          "[evolve2w]") {
  const ModelParams p = params_xx(21, 3.0);
  StateVector2W s = initial_delta_delta(p, ParticleStatistics::Fermion, 5);

  Observables2W obs = observables(s);
  REQUIRE(obs.p_joint.sum() == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(obs.p_marg1.sum() == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(obs.p_marg2.sum() == Catch::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < p.lx; ++i) {
    REQUIRE(obs.p_marg1(i) == Catch::Approx(obs.p_joint.row(i).sum()).margin(1e-14));
    REQUIRE(obs.p_marg2(i) == Catch::Approx(obs.p_joint.col(i).sum()).margin(1e-14));
  }
  // equal up and down impurity weight at launch
  REQUIRE(obs.sz == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(std::abs(obs.singlet_overlap) == Catch::Approx(1.0 / std::sqrt(2.0)));

  const Evolver2W ev(p);
  for (int t = 0; t < 6; ++t) ev.step(s);
  obs = observables(s);
  REQUIRE(obs.p_joint.sum() == Catch::Approx(1.0).epsilon(1e-12));
  double channel_weight = std::norm(obs.singlet_overlap);
  for (const cplx& tr : obs.triplet_overlaps) channel_weight += std::norm(tr);
  REQUIRE(channel_weight <= 1.0 + 1e-12);
}

TEST_CASE("transmission reads the far-side mass of the mobile walker", "[evolve2w]") {
  const ModelParams p = params_xx(21, 3.0);
  const int x0 = 5;
  const StateVector1W prof = assemble_bound_state(kPhi, 3.0, 1, p.lx).wavefunction;
  const StateVector2W f = initial_bound_delta(p, ParticleStatistics::Fermion, x0, prof);

  double w_neg = 0.0;
  for (int x = p.x_min(); x < 0; ++x)
    for (int sig = 0; sig < 2; ++sig)
      for (int s0 = 0; s0 < 2; ++s0) w_neg += std::norm(prof.at(x, sig, s0));

  const double tr = transmission(f, OriginSide::Negative);
  REQUIRE(tr <= w_neg + 1e-12);
  REQUIRE(tr == Catch::Approx(w_neg / 2.0).epsilon(0.01));

  // at launch nothing has crossed for the delta-delta state
  const StateVector2W d = initial_delta_delta(p, ParticleStatistics::Distinguishable, x0);
  REQUIRE(transmission(d, OriginSide::Negative) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(transmission(d, OriginSide::Positive) == Catch::Approx(1.0).epsilon(1e-12));
}
