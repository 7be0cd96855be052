#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "spinwalk/bound.hpp"
#include "spinwalk/config.hpp"
#include "spinwalk/csv.hpp"
#include "spinwalk/errors.hpp"
#include "spinwalk/evolve1w.hpp"
#include "spinwalk/evolve2w.hpp"
#include "spinwalk/manifest.hpp"
#include "spinwalk/negativity.hpp"
#include "spinwalk/operators.hpp"

namespace spinwalk {

namespace detail {

inline std::filesystem::path write_matrix_csv(const std::filesystem::path& outdir,
                                              const std::string& name,
                                              const Eigen::MatrixXcd& m) {
  const auto path = outdir / (name + ".csv");
  CsvWriter w(path, {"row", "col", "re", "im"});
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      w.row(static_cast<long long>(r), static_cast<long long>(c), m(r, c).real(),
            m(r, c).imag());
  return path;
}

inline void prepare_outdir(const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw config_error("cannot create output directory " + outdir.string());
}

/// Bound profile used to seed a two-walker run, in the symmetric frame.
inline StateVector1W bound_profile_for_config(const RunConfig& c) {
  const Family fam = c.require_family("init = bound_delta");
  if (fam == Family::XX) {
    const BoundStateSolution sol =
        assemble_bound_state(c.params.phi, c.params.j_x, c.bound_index, c.params.lx);
    return to_symmetric_frame(sol.wavefunction, c.params);
  }
  const std::vector<StateVector1W> profiles = bound_profiles_numeric(c.params);
  if (c.bound_index < 1 || static_cast<std::size_t>(c.bound_index) > profiles.size())
    throw regime_error("bound_index " + std::to_string(c.bound_index) + " exceeds the " +
                       std::to_string(profiles.size()) + " isolated upper-arc states");
  return profiles[static_cast<std::size_t>(c.bound_index - 1)];
}

inline StateVector2W initial_state_for_config(const RunConfig& c) {
  const ParticleStatistics stats = c.require_stats();
  switch (c.require_init()) {
    case InitKind::DeltaDelta:
      return initial_delta_delta(c.params, stats, c.x0);
    case InitKind::BoundDelta:
      return initial_bound_delta(c.params, stats, c.x0, bound_profile_for_config(c));
  }
  throw config_error("unreachable init kind");
}

}  // namespace detail

/// Dumps the coin and impurity matrices plus oracle deviations.
inline void cmd_matrices(const RunConfig& c, const std::filesystem::path& outdir) {
  detail::prepare_outdir(outdir);
  RunManifest man("matrices", c);
  const ModelParams& p = c.params;
  const Family fam = c.require_family("the two-walker square root");

  const auto coin_m = coin(p.phi).entries;
  const auto coin_h = coin_sqrt(p.phi).entries;
  const auto imp1 = s_imp_1w(p.epsilon, p.j_x, p.j_y, p.j_z).entries;
  const auto imp1_h = s_imp_1w_sqrt(p.epsilon, p.j_x, p.j_y, p.j_z).entries;
  const auto imp2 = s_imp_2w(p.epsilon, p.j_x, p.j_y, p.j_z).entries;
  const auto imp2_h = s_imp_2w_sqrt(p.epsilon, p.j_x, fam).entries;

  man.add_output(detail::write_matrix_csv(outdir, "coin", coin_m));
  man.add_output(detail::write_matrix_csv(outdir, "coin_sqrt", coin_h));
  man.add_output(detail::write_matrix_csv(outdir, "s_imp_1w", imp1));
  man.add_output(detail::write_matrix_csv(outdir, "s_imp_1w_sqrt", imp1_h));
  man.add_output(detail::write_matrix_csv(outdir, "s_imp_2w", imp2));
  man.add_output(detail::write_matrix_csv(outdir, "s_imp_2w_sqrt", imp2_h));
  if (p.m)
    man.add_output(detail::write_matrix_csv(outdir, "s_dirac", s_dirac(p.epsilon, *p.m).entries));

  {
    const auto path = outdir / "oracle_dev.csv";
    CsvWriter w(path, {"matrix", "max_abs_dev"});
    w.row("s_imp_1w_vs_cayley",
          (imp1 - cayley_oracle_1w(p.epsilon, p.j_x, p.j_y, p.j_z).entries)
              .cwiseAbs()
              .maxCoeff());
    w.row("s_imp_2w_vs_cayley",
          (imp2 - cayley_oracle_2w(p.epsilon, p.j_x, p.j_y, p.j_z).entries)
              .cwiseAbs()
              .maxCoeff());
    w.row("s_imp_1w_sqrt_squared", (imp1_h * imp1_h - imp1).cwiseAbs().maxCoeff());
    w.row("s_imp_2w_sqrt_squared",
          (Eigen::MatrixXcd(imp2_h * imp2_h) - imp2).cwiseAbs().maxCoeff());
    w.row("coin_sqrt_squared", (coin_h * coin_h - coin_m).cwiseAbs().maxCoeff());
    man.add_output(path);
  }
  man.write(outdir);
}

/// Full one-walker eigensystem with band classification and bound-state detail.
inline void cmd_spectrum(const RunConfig& c, const std::filesystem::path& outdir) {
  detail::prepare_outdir(outdir);
  RunManifest man("spectrum", c);
  const Unitary1W u = build_u1w(c.params, c.frame);
  const SpectrumResult sp = spectrum(u, c.params);

  {
    const auto path = outdir / "eigenvalues.csv";
    CsvWriter w(path, {"idx", "re", "im", "lambda", "class", "loc_length"});
    std::size_t bpos = 0;
    for (Eigen::Index k = 0; k < sp.eigenvalues.size(); ++k) {
      const bool bound = sp.classes[static_cast<std::size_t>(k)] == BandClass::Bound;
      double len = std::numeric_limits<double>::quiet_NaN();
      if (bound) len = sp.bound_loc_lengths[bpos++];
      w.row(static_cast<long long>(k), sp.eigenvalues(k).real(), sp.eigenvalues(k).imag(),
            sp.lambdas[static_cast<std::size_t>(k)],
            band_class_name(sp.classes[static_cast<std::size_t>(k)]), len);
    }
    man.add_output(path);
  }
  {
    const auto path = outdir / "bound_profiles.csv";
    CsvWriter w(path, {"idx", "x", "sigma", "s0", "re", "im"});
    for (const int k : sp.bound_indices) {
      const StateVector1W st = state_from_column(sp.eigenvectors.col(k), c.params.lx);
      for (int x = c.params.x_min(); x <= c.params.x_max(); ++x)
        for (int s0 = 0; s0 < 2; ++s0)
          for (int sig = 0; sig < 2; ++sig) {
            const cplx a = st.at(x, sig, s0);
            w.row(static_cast<long long>(k), x, sig, s0, a.real(), a.imag());
          }
    }
    man.add_output(path);
  }
  {
    const auto path = outdir / "bound_summary.csv";
    CsvWriter w(path, {"idx", "lambda", "loc_length", "j10_sq", "singlet_re", "singlet_im"});
    std::size_t bpos = 0;
    for (const int k : sp.bound_indices) {
      const StateVector1W st = state_from_column(sp.eigenvectors.col(k), c.params.lx);
      const cplx sa = singlet_amplitude(st);
      w.row(static_cast<long long>(k), sp.lambdas[static_cast<std::size_t>(k)],
            sp.bound_loc_lengths[bpos++], j10_squared(st), sa.real(), sa.imag());
    }
    man.add_output(path);
  }
  man.write(outdir);
}

/// Analytic bound states for the XX coupling: eigenvalues, profiles, residuals.
inline void cmd_bound(const RunConfig& c, const std::filesystem::path& outdir) {
  detail::prepare_outdir(outdir);
  RunManifest man("bound", c);
  if (c.require_family("the analytic bound solver") != Family::XX)
    throw unsupported_parameter_error("the analytic bound solver covers the XX family only");
  const double j = c.params.j_x;
  const double phi = c.params.phi;
  const Unitary1W u = build_u1w(c.params, Frame::Shifted);

  const auto table_path = outdir / "bound_table.csv";
  CsvWriter tw(table_path, {"j", "phi", "which", "branch", "re", "im", "lambda",
                            "zeta_plus", "zeta_minus", "loc_length", "eigen_residual"});
  const auto prof_path = outdir / "bound_profiles.csv";
  CsvWriter pw(prof_path, {"which", "x", "sigma", "s0", "re", "im"});
  for (int which = 1; which <= 4; ++which) {
    const BoundStateSolution sol = assemble_bound_state(phi, j, which, c.params.lx);
    StateVector1W stepped = sol.wavefunction;
    apply_u(u, stepped);
    double res2 = 0.0;
    for (std::size_t i = 0; i < stepped.amp.size(); ++i)
      res2 += std::norm(stepped.amp[i] - sol.eigenvalue * sol.wavefunction.amp[i]);
    tw.row(j, phi, which, bound_branch_name(sol.branch), sol.eigenvalue.real(),
           sol.eigenvalue.imag(), sol.lambda, sol.zeta_plus, sol.zeta_minus,
           sol.localization_length, std::sqrt(res2));
    for (int x = c.params.x_min(); x <= c.params.x_max(); ++x)
      for (int s0 = 0; s0 < 2; ++s0)
        for (int sig = 0; sig < 2; ++sig) {
          const cplx a = sol.wavefunction.at(x, sig, s0);
          pw.row(which, x, sig, s0, a.real(), a.imag());
        }
  }
  tw.close();
  pw.close();
  man.add_output(table_path);
  man.add_output(prof_path);
  man.write(outdir);
}

/// Two-walker time evolution with observable series and probability snapshots.
inline void cmd_evolve(const RunConfig& c, const std::filesystem::path& outdir) {
  detail::prepare_outdir(outdir);
  RunManifest man("evolve", c);
  StateVector2W state = detail::initial_state_for_config(c);
  const Evolver2W ev(c.params);

  const auto sz_path = outdir / "sz.csv";
  const auto tr_path = outdir / "transmission.csv";
  const auto snap_path = outdir / "snapshots.csv";
  const auto marg_path = outdir / "marginals.csv";
  CsvWriter sw(sz_path, {"t", "sz"});
  CsvWriter trw(tr_path, {"t", "transmission"});
  CsvWriter snw(snap_path, {"t", "x1", "x2", "p"});
  CsvWriter mgw(marg_path, {"t", "x", "p1", "p2"});

  const auto snapshot_due = [&](int t) {
    if (t == c.steps) return true;
    return c.snapshot_stride > 0 && t % c.snapshot_stride == 0;
  };
  const auto record = [&](int t) {
    const Observables2W o = observables(state);
    sw.row(t, o.sz);
    trw.row(t, transmission(state));
    if (snapshot_due(t)) {
      const int lx = state.lx;
      for (int s1 = 0; s1 < lx; ++s1)
        for (int s2 = 0; s2 < lx; ++s2) {
          const double p = o.p_joint(s1, s2);
          if (p > 0.0) snw.row(t, x_of_site(s1, lx), x_of_site(s2, lx), p);
        }
      for (int s = 0; s < lx; ++s)
        mgw.row(t, x_of_site(s, lx), o.p_marg1(s), o.p_marg2(s));
    }
  };

  record(0);
  for (int t = 1; t <= c.steps; ++t) {
    ev.step(state);
    record(t);
  }
  sw.close();
  trw.close();
  snw.close();
  mgw.close();
  man.add_output(sz_path);
  man.add_output(tr_path);
  man.add_output(snap_path);
  man.add_output(marg_path);
  man.write(outdir);
}

/// Negativity between the walkers over time, impurity traced out.
inline void cmd_negativity(const RunConfig& c, const std::filesystem::path& outdir) {
  detail::prepare_outdir(outdir);
  RunManifest man("negativity", c);
  StateVector2W state = detail::initial_state_for_config(c);
  const Evolver2W ev(c.params);

  const auto path = outdir / "negativity.csv";
  CsvWriter w(path, {"t", "negativity", "min_eig", "dim"});
  const auto record = [&](int t) {
    if (t != 0 && t != c.steps && t % c.neg_stride != 0) return;
    const NegativityResult r = negativity(state, c.params.support_eps, c.neg_max_dim);
    w.row(t, r.negativity, r.min_eigenvalue, r.spectrum_dim);
  };
  record(0);
  for (int t = 1; t <= c.steps; ++t) {
    ev.step(state);
    record(t);
  }
  w.close();
  man.add_output(path);
  man.write(outdir);
}

}  // namespace spinwalk
