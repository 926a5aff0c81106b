#include "diabolo/perturbation.hpp"

#include <cmath>

namespace diabolo {

PerturbationScalars perturbation_scalars(const ComplexMatrix& dA, const DiabolicPoint& dp) {
    if (dA.dim() != static_cast<int>(dp.u1.size()))
        throw DimensionMismatch("perturbation matrix does not match eigenvector length");
    PerturbationScalars ps;
    const ComplexVector du1 = dA.apply(dp.u1);
    const ComplexVector du2 = dA.apply(dp.u2);
    ps.eps11 = inner(du1, dp.u1);
    ps.eps22 = inner(du2, dp.u2);
    ps.eps12 = inner(du1, dp.u2);
    ps.eps21 = inner(du2, dp.u1);
    ps.mu = 0.5 * (ps.eps11 + ps.eps22);
    ps.xi = 0.5 * (ps.eps11 - ps.eps22);
    ps.eta = 0.5 * (ps.eps12 + ps.eps21);
    ps.zeta = 0.5 * (ps.eps12 - ps.eps21);
    ps.epsilon_norm = dA.frobenius_norm();
    return ps;
}

PerturbationScalars perturbation_scalars(const MatrixFamily& dA_fam, const DiabolicPoint& dp) {
    return perturbation_scalars(dA_fam.evaluate(dp.p0), dp);
}

std::pair<Complex, Complex> perturbed_eigenvalues(const CouplingData& cd, const DiabolicPoint& dp,
                                                  const PerturbationScalars& ps,
                                                  const RealVector& delta) {
    return detail::level_pair(dp.lambda0, pair_with(cd.f11, delta) + ps.eps11,
                              pair_with(cd.f22, delta) + ps.eps22,
                              pair_with(cd.f12, delta) + ps.eps12,
                              pair_with(cd.f21, delta) + ps.eps21);
}

std::pair<ComplexVector, ComplexVector> perturbed_eigenvectors(const CouplingData& cd,
                                                               const DiabolicPoint& dp,
                                                               const PerturbationScalars& ps,
                                                               const RealVector& delta) {
    const Complex a11 = pair_with(cd.f11, delta) + ps.eps11;
    const Complex a22 = pair_with(cd.f22, delta) + ps.eps22;
    const Complex a12 = pair_with(cd.f12, delta) + ps.eps12;
    const Complex a21 = pair_with(cd.f21, delta) + ps.eps21;
    const auto [lp, lm] = detail::level_pair(dp.lambda0, a11, a22, a12, a21);
    return {detail::level_vector(dp, lp, a11, a22, a12, a21),
            detail::level_vector(dp, lm, a11, a22, a12, a21)};
}

double dp_persistence_residual(const CouplingData& cd, const PerturbationScalars& ps,
                               const RealVector& delta) {
    const double c12 = std::abs(pair_with(cd.f12, delta) + ps.eps12);
    const double c21 = std::abs(pair_with(cd.f21, delta) + ps.eps21);
    const double det = std::abs(pair_with(cd.f11, delta) - pair_with(cd.f22, delta) + ps.eps11 -
                                ps.eps22);
    return std::max({c12, c21, det});
}

PartContributions part_contributions(const ComplexMatrix& dA, const DiabolicPoint& dp) {
    if (dA.dim() != static_cast<int>(dp.u1.size()))
        throw DimensionMismatch("perturbation matrix does not match eigenvector length");
    const auto [h, n] = hermitian_split(dA);
    const ComplexVector hu1 = h.apply(dp.u1);
    const ComplexVector hu2 = h.apply(dp.u2);
    const ComplexVector nu1 = n.apply(dp.u1);
    const ComplexVector nu2 = n.apply(dp.u2);
    const Complex two_i(0.0, 2.0);
    PartContributions pc;
    pc.im_xi = ((inner(nu1, dp.u1) - inner(nu2, dp.u2)) / two_i).real();
    pc.im_eta = ((inner(nu1, dp.u2) + inner(nu2, dp.u1)) / two_i).real();
    pc.im_zeta = ((inner(hu1, dp.u2) - inner(hu2, dp.u1)) / two_i).real();
    return pc;
}

} // namespace diabolo
