#pragma once

#include <functional>
#include <utility>

#include "diabolo/linalg.hpp"

namespace diabolo {

// Smooth multiparameter matrix family A(p).  The evaluator is mandatory;
// the derivative callback is optional and replaced by central finite
// differences (with a step-halving self-check) when absent.
struct MatrixFamily {
    int dim = 0;       // matrix dimension
    int n_params = 0;  // number of real parameters
    SymmetryClass cls = SymmetryClass::General;

    std::function<ComplexMatrix(const RealVector&)> eval_fn;
    std::function<ComplexMatrix(const RealVector&, int)> deriv_fn;

    double fd_step = 1e-6;  // relative step for finite differences

    // Evaluates A(p) and checks the declared symmetry class
    // (defect <= 1e-12 * ||A||_F), throwing ClassMismatch otherwise.
    ComplexMatrix evaluate(const RealVector& p) const;

    // dA/dp_k: analytic callback if provided, else a central difference
    // with step fd_step * max(1, |p_k|).
    ComplexMatrix derivative(const RealVector& p, int k) const;

    // Same, but a finite-difference result must agree with its half-step
    // refinement to 1e-6 * max(1, ||D||_F); throws DerivativeFailure if not.
    ComplexMatrix derivative_checked(const RealVector& p, int k) const;
};

// A point where two eigenvalues of the (real-symmetric or Hermitian) family
// coincide while keeping two independent eigenvectors.  u1, u2 must be
// orthonormal in the convention inner(u, v) = sum u_i conj(v_i).
struct DiabolicPoint {
    RealVector p0;
    double lambda0 = 0.0;
    ComplexVector u1, u2;
};

// First-order coupling of the degenerate doublet to the parameters:
//   f_ij[k] = inner(dA/dp_k * u_i, u_j)   at p0.
struct CouplingData {
    ComplexVector f11, f22, f12, f21;
};

// True when A(p0) u_i = lambda0 u_i within tol and u1, u2 are orthonormal
// within tol.
bool verify_diabolic(const MatrixFamily& fam, const DiabolicPoint& dp, double tol);

// Coupling vectors of the doublet (throws DerivativeFailure if the
// finite-difference self-check fails on any parameter).
CouplingData coupling_vectors(const MatrixFamily& fam, const DiabolicPoint& dp);

// First-order splitting of the double eigenvalue along a displacement delta:
//   lambda_pm = lambda0 + <f11+f22, delta>/2
//               +- sqrt(<f11-f22, delta>^2/4 + <f12, delta><f21, delta>).
// Returned as (+ root, - root) with the principal square root.
std::pair<Complex, Complex> split_eigenvalues(const CouplingData& cd, const DiabolicPoint& dp,
                                              const RealVector& delta);

// Matching eigenvector pair alpha u1 + beta u2, with (alpha, beta) taken
// from the better conditioned of the two equivalent ratio forms.  Unit norm,
// largest component rotated real-positive.  Throws DegenerateDirection if
// the direction leaves the doublet unresolved at first order.
std::pair<ComplexVector, ComplexVector> split_eigenvectors(const CouplingData& cd,
                                                           const DiabolicPoint& dp,
                                                           const RealVector& delta);

namespace detail {

// Eigenvalues of the reduced doublet problem
//   [[lambda0 + a11, a21], [a12, lambda0 + a22]]
// where a_ij collects <f_ij, delta> plus any perturbation scalar.  Shared by
// the unperturbed splitting and the perturbed closed form so that the latter
// reduces to the former exactly when the perturbation vanishes.
std::pair<Complex, Complex> level_pair(double lambda0, Complex a11, Complex a22, Complex a12,
                                       Complex a21);

// Doublet eigenvector for eigenvalue lam of the reduced problem above,
// expressed in the ambient space as alpha u1 + beta u2.
ComplexVector level_vector(const DiabolicPoint& dp, Complex lam, Complex a11, Complex a22,
                           Complex a12, Complex a21);

} // namespace detail

} // namespace diabolo
