#include "diabolo/family.hpp"

#include <cmath>

namespace diabolo {

namespace {

ComplexMatrix central_difference(const MatrixFamily& fam, const RealVector& p, int k, double h) {
    RealVector fwd = p, bwd = p;
    fwd[k] += h;
    bwd[k] -= h;
    ComplexMatrix d = fam.evaluate(fwd);
    d -= fam.evaluate(bwd);
    d *= Complex(1.0 / (2.0 * h), 0.0);
    return d;
}

} // namespace

ComplexMatrix MatrixFamily::evaluate(const RealVector& p) const {
    if (static_cast<int>(p.size()) != n_params)
        throw DimensionMismatch("parameter vector has wrong length");
    ComplexMatrix a = eval_fn(p);
    if (a.dim() != dim)
        throw DimensionMismatch("family evaluator returned wrong matrix dimension");
    if (cls != SymmetryClass::General && !a.conforms(cls))
        throw ClassMismatch("family evaluation violates its declared symmetry class");
    return a;
}

ComplexMatrix MatrixFamily::derivative(const RealVector& p, int k) const {
    if (k < 0 || k >= n_params)
        throw DimensionMismatch("parameter index out of range");
    if (deriv_fn)
        return deriv_fn(p, k);
    const double h = fd_step * std::max(1.0, std::abs(p[k]));
    return central_difference(*this, p, k, h);
}

ComplexMatrix MatrixFamily::derivative_checked(const RealVector& p, int k) const {
    if (deriv_fn)
        return derivative(p, k);
    const double h = fd_step * std::max(1.0, std::abs(p[k]));
    ComplexMatrix coarse = central_difference(*this, p, k, h);
    ComplexMatrix fine = central_difference(*this, p, k, 0.5 * h);
    ComplexMatrix diff = coarse;
    diff -= fine;
    const double tol = 1e-6 * std::max(1.0, fine.frobenius_norm());
    if (diff.frobenius_norm() > tol)
        throw DerivativeFailure("finite-difference derivative failed its step-halving check");
    return fine;
}

bool verify_diabolic(const MatrixFamily& fam, const DiabolicPoint& dp, double tol) {
    if (static_cast<int>(dp.u1.size()) != fam.dim || static_cast<int>(dp.u2.size()) != fam.dim)
        throw DimensionMismatch("eigenvector length does not match family dimension");
    const ComplexMatrix a = fam.evaluate(dp.p0);

    auto eig_residual = [&](const ComplexVector& u) {
        ComplexVector r = a.apply(u);
        for (int i = 0; i < fam.dim; ++i)
            r[i] -= dp.lambda0 * u[i];
        return norm2(r);
    };

    if (eig_residual(dp.u1) > tol || eig_residual(dp.u2) > tol)
        return false;
    if (std::abs(inner(dp.u1, dp.u1) - Complex(1.0, 0.0)) > tol)
        return false;
    if (std::abs(inner(dp.u2, dp.u2) - Complex(1.0, 0.0)) > tol)
        return false;
    if (std::abs(inner(dp.u1, dp.u2)) > tol)
        return false;
    return true;
}

CouplingData coupling_vectors(const MatrixFamily& fam, const DiabolicPoint& dp) {
    CouplingData cd;
    cd.f11.resize(fam.n_params);
    cd.f22.resize(fam.n_params);
    cd.f12.resize(fam.n_params);
    cd.f21.resize(fam.n_params);
    for (int k = 0; k < fam.n_params; ++k) {
        const ComplexMatrix d = fam.derivative_checked(dp.p0, k);
        const ComplexVector du1 = d.apply(dp.u1);
        const ComplexVector du2 = d.apply(dp.u2);
        cd.f11[k] = inner(du1, dp.u1);
        cd.f22[k] = inner(du2, dp.u2);
        cd.f12[k] = inner(du1, dp.u2);
        cd.f21[k] = inner(du2, dp.u1);
    }
    return cd;
}

namespace detail {

std::pair<Complex, Complex> level_pair(double lambda0, Complex a11, Complex a22, Complex a12,
                                       Complex a21) {
    const Complex mean = 0.5 * (a11 + a22);
    const Complex half_gap = 0.5 * (a11 - a22);
    const Complex root = std::sqrt(half_gap * half_gap + a12 * a21);
    return {lambda0 + mean + root, lambda0 + mean - root};
}

ComplexVector level_vector(const DiabolicPoint& dp, Complex lam, Complex a11, Complex a22,
                           Complex a12, Complex a21) {
    // Two equivalent forms of alpha/beta for the reduced doublet problem
    // [[lambda0 + a11, a21], [a12, lambda0 + a22]]; their cross products
    // reproduce the characteristic equation, so they agree whenever either
    // is well defined.
    const Complex n1 = a21;
    const Complex d1 = lam - dp.lambda0 - a11;
    const Complex n2 = lam - dp.lambda0 - a22;
    const Complex d2 = a12;

    const double m1 = std::max(std::abs(n1), std::abs(d1));
    const double m2 = std::max(std::abs(n2), std::abs(d2));
    const double floor = 1e-14 * std::max(1.0, std::abs(dp.lambda0));
    if (std::max(m1, m2) < floor)
        throw DegenerateDirection("doublet not resolved at first order along this direction");

    Complex alpha, beta;
    if (m1 >= m2) {
        alpha = n1;
        beta = d1;
    } else {
        alpha = n2;
        beta = d2;
    }

    const size_t m = dp.u1.size();
    ComplexVector u(m);
    for (size_t i = 0; i < m; ++i)
        u[i] = alpha * dp.u1[i] + beta * dp.u2[i];

    const double n = norm2(u);
    if (n == 0.0)
        throw DegenerateDirection("doublet eigenvector degenerated to zero");
    size_t imax = 0;
    double best = -1.0;
    for (size_t i = 0; i < m; ++i) {
        if (std::abs(u[i]) > best) {
            best = std::abs(u[i]);
            imax = i;
        }
    }
    const Complex rot = std::conj(u[imax]) / std::abs(u[imax]);
    for (auto& x : u)
        x *= rot / n;
    return u;
}

} // namespace detail

std::pair<Complex, Complex> split_eigenvalues(const CouplingData& cd, const DiabolicPoint& dp,
                                              const RealVector& delta) {
    return detail::level_pair(dp.lambda0, pair_with(cd.f11, delta), pair_with(cd.f22, delta),
                              pair_with(cd.f12, delta), pair_with(cd.f21, delta));
}

std::pair<ComplexVector, ComplexVector> split_eigenvectors(const CouplingData& cd,
                                                           const DiabolicPoint& dp,
                                                           const RealVector& delta) {
    const Complex a11 = pair_with(cd.f11, delta);
    const Complex a22 = pair_with(cd.f22, delta);
    const Complex a12 = pair_with(cd.f12, delta);
    const Complex a21 = pair_with(cd.f21, delta);
    const auto [lp, lm] = detail::level_pair(dp.lambda0, a11, a22, a12, a21);
    return {detail::level_vector(dp, lp, a11, a22, a12, a21),
            detail::level_vector(dp, lm, a11, a22, a12, a21)};
}

} // namespace diabolo
