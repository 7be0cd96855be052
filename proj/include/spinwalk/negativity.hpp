#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spinwalk/eig.hpp"
#include "spinwalk/errors.hpp"
#include "spinwalk/hilbert.hpp"

namespace spinwalk {

/// Walker-walker density matrix after tracing out the impurity, stored as the
/// two pure branches (one per impurity spin) restricted to the occupied support.
struct ReducedDensity {
  Eigen::MatrixXcd psi_up, psi_dn;  // d1 x d2 amplitude blocks
  std::vector<int> support1, support2;  // composite 2*site+sigma indices kept
};

inline ReducedDensity reduce_impurity(const StateVector2W& s, double support_eps = 0.0) {
  const int lx = s.lx;
  const int dfull = 2 * lx;
  std::vector<double> occ1(static_cast<std::size_t>(dfull), 0.0);
  std::vector<double> occ2(static_cast<std::size_t>(dfull), 0.0);
  for (int s1 = 0; s1 < lx; ++s1)
    for (int s2 = 0; s2 < lx; ++s2) {
      const std::size_t base = 8 * (static_cast<std::size_t>(s1) * lx + s2);
      for (int c = 0; c < 8; ++c) {
        const double w = std::norm(s.amp[base + static_cast<std::size_t>(c)]);
        if (w == 0.0) continue;
        occ1[static_cast<std::size_t>(2 * s1 + (c & 1))] += w;
        occ2[static_cast<std::size_t>(2 * s2 + ((c >> 1) & 1))] += w;
      }
    }

  ReducedDensity rd;
  std::vector<int> where1(static_cast<std::size_t>(dfull), -1);
  std::vector<int> where2(static_cast<std::size_t>(dfull), -1);
  for (int k = 0; k < dfull; ++k) {
    if (occ1[static_cast<std::size_t>(k)] > support_eps) {
      where1[static_cast<std::size_t>(k)] = static_cast<int>(rd.support1.size());
      rd.support1.push_back(k);
    }
    if (occ2[static_cast<std::size_t>(k)] > support_eps) {
      where2[static_cast<std::size_t>(k)] = static_cast<int>(rd.support2.size());
      rd.support2.push_back(k);
    }
  }

  const Eigen::Index d1 = static_cast<Eigen::Index>(rd.support1.size());
  const Eigen::Index d2 = static_cast<Eigen::Index>(rd.support2.size());
  rd.psi_up = Eigen::MatrixXcd::Zero(d1, d2);
  rd.psi_dn = Eigen::MatrixXcd::Zero(d1, d2);
  for (int s1 = 0; s1 < lx; ++s1)
    for (int s2 = 0; s2 < lx; ++s2) {
      const std::size_t base = 8 * (static_cast<std::size_t>(s1) * lx + s2);
      for (int c = 0; c < 8; ++c) {
        const cplx a = s.amp[base + static_cast<std::size_t>(c)];
        if (a == cplx(0.0)) continue;
        const int r = where1[static_cast<std::size_t>(2 * s1 + (c & 1))];
        const int q = where2[static_cast<std::size_t>(2 * s2 + ((c >> 1) & 1))];
        if (r < 0 || q < 0) continue;
        if (c < 4)
          rd.psi_up(r, q) += a;
        else
          rd.psi_dn(r, q) += a;
      }
    }
  return rd;
}

/// Eigenvalues (ascending) of the partial transpose over walker 1.
inline Eigen::VectorXd partial_transpose_spectrum(const ReducedDensity& rd,
                                                  int max_dim = 10000) {
  const Eigen::Index d1 = rd.psi_up.rows();
  const Eigen::Index d2 = rd.psi_up.cols();
  const Eigen::Index dim = d1 * d2;
  if (dim > max_dim)
    throw size_error("partial transpose dimension " + std::to_string(dim) +
                     " exceeds cap " + std::to_string(max_dim));
  if (dim == 0) return Eigen::VectorXd();

  // rho^T1[(i,j),(i',j')] = sum_s psi_s(i',j) conj(psi_s(i,j'))
  // Each column (i',j') is a pair of rank-1 outer products.
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index ip = 0; ip < d1; ++ip)
    for (Eigen::Index jp = 0; jp < d2; ++jp) {
      Eigen::Map<Eigen::MatrixXcd> col(m.col(ip * d2 + jp).data(), d2, d1);
      col.noalias() = rd.psi_up.row(ip).transpose() * rd.psi_up.col(jp).adjoint();
      col.noalias() += rd.psi_dn.row(ip).transpose() * rd.psi_dn.col(jp).adjoint();
    }
  return hermitian_eigenvalues(std::move(m));
}

/// Nonzero partial-transpose spectrum via per-branch Schmidt decompositions.
/// For psi = sum_k sigma_k u_k w_k^T per branch, the transpose acts as
/// sum_{kl} sigma_k sigma_l |conj(u_l) x w_k><conj(u_k) x w_l|, so the whole
/// operator lives in a span of (rank_up^2 + rank_dn^2) product vectors; the
/// eigenproblem is solved exactly inside that span.
inline Eigen::VectorXd factored_pt_spectrum(const ReducedDensity& rd) {
  struct Branch {
    Eigen::MatrixXcd u, w;  // thin factors, w = conj(v)
    Eigen::VectorXd sig;
  };
  std::vector<Branch> br;
  double sig_max = 0.0;
  for (const Eigen::MatrixXcd* psi : {&rd.psi_up, &rd.psi_dn}) {
    if (psi->size() == 0) continue;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(*psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
    sig_max = std::max(sig_max, svd.singularValues().size() ? svd.singularValues()(0) : 0.0);
    br.push_back({svd.matrixU(), svd.matrixV().conjugate(), svd.singularValues()});
  }
  const double tol = 1e-14 * std::max(1.0, sig_max);
  std::vector<Eigen::Index> rank(br.size(), 0);
  Eigen::Index r0 = 0;
  for (std::size_t s = 0; s < br.size(); ++s) {
    while (rank[s] < br[s].sig.size() && br[s].sig(rank[s]) > tol) ++rank[s];
    r0 += rank[s] * rank[s];
  }
  if (r0 == 0) return Eigen::VectorXd();
  // once the product-vector span stops being small the dense route is cheaper
  if (r0 >= rd.psi_up.rows() * rd.psi_up.cols())
    return partial_transpose_spectrum(rd, std::numeric_limits<int>::max());

  // Gram matrix of the product vectors A^s_{lk} = conj(u^s_l) x w^s_k,
  // indexed (s, l*rank_s + k); cross blocks are Kronecker products.
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(r0, r0);
  std::vector<Eigen::Index> offset(br.size(), 0);
  for (std::size_t s = 1; s < br.size(); ++s)
    offset[s] = offset[s - 1] + rank[s - 1] * rank[s - 1];
  for (std::size_t s = 0; s < br.size(); ++s)
    for (std::size_t t = 0; t < br.size(); ++t) {
      const Eigen::Index rs = rank[s], rt = rank[t];
      if (rs == 0 || rt == 0) continue;
      const Eigen::MatrixXcd cu =
          br[s].u.leftCols(rs).transpose() * br[t].u.leftCols(rt).conjugate();
      const Eigen::MatrixXcd cw = br[s].w.leftCols(rs).adjoint() * br[t].w.leftCols(rt);
      for (Eigen::Index l = 0; l < rs; ++l)
        for (Eigen::Index k = 0; k < rs; ++k)
          for (Eigen::Index lp = 0; lp < rt; ++lp)
            for (Eigen::Index kp = 0; kp < rt; ++kp)
              g(offset[s] + l * rs + k, offset[t] + lp * rt + kp) =
                  cu(l, lp) * cw(k, kp);
    }

  // Coefficient matrix: within each branch, |A_{lk}><A_{kl}| carries sigma_k sigma_l.
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(r0, r0);
  for (std::size_t s = 0; s < br.size(); ++s)
    for (Eigen::Index l = 0; l < rank[s]; ++l)
      for (Eigen::Index k = 0; k < rank[s]; ++k)
        n(offset[s] + l * rank[s] + k, offset[s] + k * rank[s] + l) =
            br[s].sig(k) * br[s].sig(l);

  // Orthonormalize the span through G = Q Lambda Q^dag and compress.
  Eigen::MatrixXcd q = g;
  Eigen::VectorXd lam(r0);
  {
    const lapack_int nn = static_cast<lapack_int>(r0);
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', nn, q.data(), nn, lam.data());
    if (info != 0)
      throw regime_error("gram eigensolver failed, info=" + std::to_string(info));
  }
  const double lam_tol = 1e-12 * std::max(1.0, lam.size() ? lam(lam.size() - 1) : 0.0);
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < r0; ++i)
    if (lam(i) > lam_tol) ++keep;
  if (keep == 0) return Eigen::VectorXd();
  Eigen::MatrixXcd c(r0, keep);
  for (Eigen::Index i = 0, j = 0; i < r0; ++i)
    if (lam(i) > lam_tol) c.col(j++) = q.col(i) * std::sqrt(lam(i));

  Eigen::MatrixXcd small = c.adjoint() * n * c;
  small = 0.5 * (small + small.adjoint().eval());
  return hermitian_eigenvalues(std::move(small));
}

struct NegativityResult {
  double negativity;
  double min_eigenvalue;
  int spectrum_dim;
};

/// Entanglement negativity between the two walkers (impurity traced out).
inline NegativityResult negativity(const StateVector2W& s, double support_eps = 0.0,
                                   int max_dim = 10000) {
  const ReducedDensity rd = reduce_impurity(s, support_eps);
  const Eigen::Index dim = rd.psi_up.rows() * rd.psi_up.cols();
  if (dim > max_dim)
    throw size_error("partial transpose dimension " + std::to_string(dim) +
                     " exceeds cap " + std::to_string(max_dim));
  const Eigen::VectorXd spec = factored_pt_spectrum(rd);
  NegativityResult out{0.0, 0.0, static_cast<int>(dim)};
  for (Eigen::Index k = 0; k < spec.size(); ++k) {
    if (spec(k) < 0.0 && std::abs(spec(k)) >= 1e-13) out.negativity += -spec(k);
  }
  if (spec.size() > 0) out.min_eigenvalue = spec.minCoeff();
  if (spec.size() < dim) out.min_eigenvalue = std::min(out.min_eigenvalue, 0.0);
  return out;
}

}  // namespace spinwalk
