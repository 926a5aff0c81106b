#pragma once

#include <complex>
#include <initializer_list>
#include <utility>
#include <vector>

#include "diabolo/errors.hpp"

namespace diabolo {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

// Structure the caller asserts about a matrix or a matrix family.  The
// eigensolver picks its algorithm from this tag and verifies the result
// against the matrix as given, so a wrong tag surfaces as NonConvergence.
enum class SymmetryClass { RealSymmetric, Hermitian, General };

// Dense square complex matrix, row major.  Sized for desk-scale problems
// (the solvers below refuse dimensions above 16).
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

    static ComplexMatrix identity(int dim);
    static ComplexMatrix diagonal(const RealVector& d);

    int dim() const { return dim_; }

    Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexVector apply(const ComplexVector& v) const;

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;

    Complex trace() const;
    double frobenius_norm() const;

    // LU with partial pivoting; intended for invariant checks, not for
    // production solves.
    Complex determinant() const;

    // Largest absolute deviation from the given symmetry class
    // (always 0 for General).
    double symmetry_defect(SymmetryClass cls) const;
    bool conforms(SymmetryClass cls, double rel_tol = 1e-12) const;

private:
    int dim_ = 0;
    ComplexVector a_;
};

// Inner product with conjugation on the *second* argument:
//   inner(u, v) = sum_i u_i * conj(v_i).
// All coupling and perturbation scalars in this library follow this
// convention, so matrix elements read  inner(A*u_col, u_row).
Complex inner(const ComplexVector& u, const ComplexVector& v);

double norm2(const ComplexVector& v);

// Pairing <f, dp> of a complex coefficient vector with a real displacement.
Complex pair_with(const ComplexVector& f, const RealVector& dp);

struct EigenDecomposition {
    std::vector<Complex> values;          // Hermitian classes: sorted descending
    std::vector<ComplexVector> vectors;   // unit norm, columns aligned with values
    double residual;                      // max_i ||A v_i - lambda_i v_i||_2
};

// Exact (to working precision) dense eigensolver used as the oracle against
// which all asymptotic formulas are validated.  Hermitian / real-symmetric
// input goes through a complex Jacobi sweep; general complex input through
// Hessenberg reduction and shifted QR.  Dimensions 1 and 2 are closed-form.
// Throws NonConvergence if the final residual exceeds 1e-12 * ||A||_F and
// DimensionMismatch for dim > 16.
EigenDecomposition eig_exact(const ComplexMatrix& A, SymmetryClass cls);

// For a 3x3 matrix known to annihilate one direction (one exact zero
// eigenvalue), the other two eigenvalues follow from trace identities:
//   lambda_pm = tr(A)/2 +- sqrt(2 tr(A^2) - tr(A)^2)/2.
// Returned in (+, -) principal-root order.
std::pair<Complex, Complex> two_nonzero_eigs_trace(const ComplexMatrix& A);

// Splitting A = H + N into Hermitian and anti-Hermitian parts,
// H = (A + A^H)/2, N = (A - A^H)/2.  Returns {H, N}.
std::pair<ComplexMatrix, ComplexMatrix> hermitian_split(const ComplexMatrix& A);

// Reorders the candidate pair to minimize total distance to the reference
// pair; used whenever asymptotic and oracle eigenvalue pairs are compared
// without a shared labeling.
std::pair<Complex, Complex> min_distance_match(const std::pair<Complex, Complex>& ref,
                                               const std::pair<Complex, Complex>& cand);

} // namespace diabolo
