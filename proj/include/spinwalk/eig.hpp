#pragma once

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>
#include <string>

#include "spinwalk/errors.hpp"

namespace spinwalk {

/// Ascending eigenvalues of a Hermitian matrix (lower triangle is read).
inline Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
  if (info != 0)
    throw regime_error("hermitian eigensolver failed, info=" + std::to_string(info));
  return w;
}

struct EigPairs {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // right eigenvectors in columns
};

/// Full eigendecomposition of a general complex matrix.
inline EigPairs general_eigenpairs(Eigen::MatrixXcd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  EigPairs out{Eigen::VectorXcd(n), Eigen::MatrixXcd(n, n)};
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, out.values.data(),
                    nullptr, 1, out.vectors.data(), n);
  if (info != 0)
    throw regime_error("general eigensolver failed, info=" + std::to_string(info));
  return out;
}

}  // namespace spinwalk
