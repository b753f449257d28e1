#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "fidgap/errors.hpp"

namespace fidgap {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Default tolerances, relative to the matrix scale. Double precision, n <= 32.
constexpr double kHermTol = 1e-10;
constexpr double kPosFloor = 1e-12;
constexpr double kExpmTruncTol = 1e-13;

// Largest entry modulus; zero for empty matrices.
double max_abs(const CMatrix& m);

// Predicates with explicit tolerances. Nothing is assumed silently.
bool is_hermitian(const CMatrix& m, double tol = kHermTol);
bool is_unitary(const CMatrix& m, double tol = kHermTol);
bool is_psd(const CMatrix& m, double tol = kHermTol);

// Hermitian eigendecomposition, eigenvalues ascending, eigenvectors unitary.
// Throws NotHermitian if the input deviates by more than tol * max_abs(m),
// NoConvergence if the underlying iteration fails.
struct HermEig {
    RVector values;
    CMatrix vectors;
};
HermEig herm_eig(const CMatrix& m, double tol = kHermTol);

// f(m) = U diag(f(lambda)) U^dag through the Hermitian eigendecomposition.
// When pos_floor > 0 every eigenvalue must exceed pos_floor * max eigenvalue,
// otherwise SingularInput (used for x^{-1/2} and log).
CMatrix mat_func(const CMatrix& m, const std::function<double(double)>& f,
                 double pos_floor = 0.0, double tol = kHermTol);

CMatrix mat_exp_herm(const CMatrix& m);
CMatrix mat_sqrt(const CMatrix& m);
CMatrix mat_inv_sqrt(const CMatrix& m, double pos_floor = kPosFloor);

// Kronecker product, row-major block convention: (a kron b)(ik,jl) = a(i,j) b(k,l).
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Partial traces over the factors of an (dQ*dB) x (dQ*dB) matrix.
CMatrix partial_trace_B(const CMatrix& m, int dQ, int dB);
CMatrix partial_trace_Q(const CMatrix& m, int dQ, int dB);

// Column-major vectorization and its inverse; vec(AXB) = (B^T kron A) vec(X).
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, int rows, int cols);

// Dense matrix exponential by truncated Taylor with scaling and squaring,
// truncation tolerance kExpmTruncTol. For general (non-Hermitian) input.
CMatrix expm_dense(const CMatrix& a);

// Single-qubit Pauli matrices.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

}  // namespace fidgap
