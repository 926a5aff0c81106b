#pragma once

#include "diabolo/family.hpp"

namespace diabolo {

// Projection of a fixed complex perturbation dA onto the degenerate doublet:
//   eps_ij = inner(dA * u_i, u_j)   evaluated at p0,
// together with the symmetric/antisymmetric combinations that drive the
// unfolding:
//   mu  = (eps11 + eps22)/2    (common shift)
//   xi  = (eps11 - eps22)/2    (detuning)
//   eta = (eps12 + eps21)/2    (symmetric coupling)
//   zeta= (eps12 - eps21)/2    (antisymmetric coupling)
struct PerturbationScalars {
    Complex eps11, eps22, eps12, eps21;
    Complex mu, xi, eta, zeta;
    double epsilon_norm = 0.0;  // ||dA||_F, used for scale-aware tolerances
};

PerturbationScalars perturbation_scalars(const ComplexMatrix& dA, const DiabolicPoint& dp);

// Convenience overload: evaluates a perturbation family at the degeneracy.
PerturbationScalars perturbation_scalars(const MatrixFamily& dA_fam, const DiabolicPoint& dp);

// Closed-form doublet eigenvalues under parameter displacement delta plus
// fixed perturbation (principal branch of the square root).  Reduces exactly
// to split_eigenvalues when all scalars vanish (shared code path).
std::pair<Complex, Complex> perturbed_eigenvalues(const CouplingData& cd, const DiabolicPoint& dp,
                                                  const PerturbationScalars& ps,
                                                  const RealVector& delta);

// Matching eigenvector pair; same selection and normalization rules as
// split_eigenvectors.
std::pair<ComplexVector, ComplexVector> perturbed_eigenvectors(const CouplingData& cd,
                                                               const DiabolicPoint& dp,
                                                               const PerturbationScalars& ps,
                                                               const RealVector& delta);

// How far the perturbed family is from keeping a genuine double eigenvalue
// at displacement delta: the maximum modulus of the three obstruction
// scalars (both off-diagonal couplings and the detuning).  Exactly zero iff
// the degeneracy survives at this order.
double dp_persistence_residual(const CouplingData& cd, const PerturbationScalars& ps,
                               const RealVector& delta);

// Imaginary parts of the detuning/coupling scalars attributed to the
// Hermitian and anti-Hermitian parts of dA:
//   Im xi, Im eta  come from the anti-Hermitian part,
//   Im zeta        comes from the Hermitian part.
// These identities are exact for any orthonormal doublet basis.
struct PartContributions {
    double im_xi = 0.0;
    double im_eta = 0.0;
    double im_zeta = 0.0;
};

PartContributions part_contributions(const ComplexMatrix& dA, const DiabolicPoint& dp);

} // namespace diabolo
