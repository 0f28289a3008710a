#pragma once

#include "pptgeo/complex_matrix.hpp"

namespace pptgeo {

struct EigResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns, same order as values
    std::size_t sweeps = 0;
    double offdiag = 0.0;  // residual off-diagonal Frobenius mass at exit
};

// LAPACK-backed (zheevd) full eigendecomposition; falls back to the Jacobi
// solver below if the divide-and-conquer driver reports a failure. The
// tolerance parameters only affect the fallback path.
EigResult eig_hermitian(const ComplexMatrix& a, double tol_factor = 1e-13,
                        std::size_t max_sweeps = 64);

// Cyclic complex Jacobi diagonalization, kept as an independent cross-check
// of the LAPACK path. Converges when the off-diagonal Frobenius mass drops
// below tol_factor * ||a||_2 (Schatten-2).
EigResult eig_hermitian_jacobi(const ComplexMatrix& a, double tol_factor = 1e-13,
                               std::size_t max_sweeps = 64);

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& a);
double min_eigenvalue_of(const ComplexMatrix& a);
double max_eigenvalue_of(const ComplexMatrix& a);

struct SvdResult {
    std::vector<double> singular_values;  // descending
    ComplexMatrix u;                      // a = u * diag(s) * adjoint(v)
    ComplexMatrix v;
};

// Singular values of a square matrix through the Hermitian eigenproblem of
// the doubled form [[0, a], [a^dag, 0]], whose spectrum is {+-sigma_i}.
std::vector<double> singular_values(const ComplexMatrix& a);

// Full SVD of a square matrix (LAPACK zgesdd, with the doubled-form
// eigenproblem as fallback); zero-singular-value subspaces are completed to
// unitary u, v.
SvdResult svd(const ComplexMatrix& a);

// Hermitian PSD square root. Eigenvalues below rel_clip * lambda_max are
// treated as exact zeros so that rank-deficient inputs do not leak
// O(sqrt(eps)) noise into the root.
ComplexMatrix operator_sqrt(const ComplexMatrix& a, double rel_clip = 1e-12);

}  // namespace pptgeo
