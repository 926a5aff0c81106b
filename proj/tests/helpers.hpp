#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "diabolo/family.hpp"
#include "diabolo/linalg.hpp"

namespace testutil {

using diabolo::Complex;
using diabolo::ComplexMatrix;
using diabolo::ComplexVector;
using diabolo::RealVector;

// Uniform doubles straight from the engine's bits so sequences are pinned by
// the mt19937 standard, independent of distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline double gauss(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0)
        u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Complex cgauss(std::mt19937_64& rng) {
    return {gauss(rng), gauss(rng)};
}

inline ComplexMatrix random_complex(int m, std::mt19937_64& rng, double scale = 1.0) {
    ComplexMatrix a(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            a(i, j) = scale * cgauss(rng);
    return a;
}

inline ComplexMatrix random_hermitian(int m, std::mt19937_64& rng, double scale = 1.0) {
    ComplexMatrix a = random_complex(m, rng, scale);
    ComplexMatrix h = a;
    h += a.adjoint();
    h *= Complex(0.5, 0.0);
    return h;
}

inline ComplexMatrix random_real(int m, std::mt19937_64& rng, double scale = 1.0) {
    ComplexMatrix a(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            a(i, j) = Complex(scale * gauss(rng), 0.0);
    return a;
}

inline ComplexMatrix random_real_symmetric(int m, std::mt19937_64& rng, double scale = 1.0) {
    ComplexMatrix a(m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            const double v = scale * gauss(rng);
            a(i, j) = a(j, i) = Complex(v, 0.0);
        }
    return a;
}

// Gram-Schmidt of a Gaussian matrix; columns are the basis vectors.
inline ComplexMatrix random_unitary(int m, std::mt19937_64& rng) {
    ComplexMatrix q(m);
    for (int col = 0; col < m; ++col) {
        ComplexVector v(m);
        for (int i = 0; i < m; ++i)
            v[i] = cgauss(rng);
        for (int prev = 0; prev < col; ++prev) {
            Complex proj(0.0, 0.0);
            for (int i = 0; i < m; ++i)
                proj += v[i] * std::conj(q(i, prev));
            for (int i = 0; i < m; ++i)
                v[i] -= proj * q(i, prev);
        }
        const double n = diabolo::norm2(v);
        for (int i = 0; i < m; ++i)
            q(i, col) = v[i] / n;
    }
    return q;
}

inline ComplexMatrix random_orthogonal(int m, std::mt19937_64& rng) {
    ComplexMatrix q(m);
    for (int col = 0; col < m; ++col) {
        RealVector v(m);
        for (int i = 0; i < m; ++i)
            v[i] = gauss(rng);
        for (int prev = 0; prev < col; ++prev) {
            double proj = 0.0;
            for (int i = 0; i < m; ++i)
                proj += v[i] * q(i, prev).real();
            for (int i = 0; i < m; ++i)
                v[i] -= proj * q(i, prev).real();
        }
        double n = 0.0;
        for (int i = 0; i < m; ++i)
            n += v[i] * v[i];
        n = std::sqrt(n);
        for (int i = 0; i < m; ++i)
            q(i, col) = Complex(v[i] / n, 0.0);
    }
    return q;
}

// Synthetic family with an exact diabolic point: the first two eigenvalues
// of the base matrix coincide, parameters enter linearly and quadratically
// with analytic derivatives.
struct FamilyWithDP {
    diabolo::MatrixFamily fam;
    diabolo::DiabolicPoint dp;
};

inline FamilyWithDP make_dp_family(int m, int n, bool hermitian, std::mt19937_64& rng,
                                   double curvature = 0.3) {
    const ComplexMatrix q = hermitian ? random_unitary(m, rng) : random_orthogonal(m, rng);

    RealVector levels(m);
    levels[0] = levels[1] = 0.3;
    for (int i = 2; i < m; ++i)
        levels[i] = 1.5 + 0.8 * i + 0.4 * gauss(rng);
    const ComplexMatrix a0 = q * ComplexMatrix::diagonal(levels) * q.adjoint();

    std::vector<ComplexMatrix> lin, quad;
    for (int k = 0; k < n; ++k) {
        lin.push_back(hermitian ? random_hermitian(m, rng) : random_real_symmetric(m, rng));
        quad.push_back(hermitian ? random_hermitian(m, rng, curvature)
                                 : random_real_symmetric(m, rng, curvature));
    }

    RealVector p0(n);
    for (int k = 0; k < n; ++k)
        p0[k] = uniform(rng, -0.5, 0.5);

    FamilyWithDP out;
    out.fam.dim = m;
    out.fam.n_params = n;
    out.fam.cls = hermitian ? diabolo::SymmetryClass::Hermitian
                            : diabolo::SymmetryClass::RealSymmetric;
    out.fam.eval_fn = [a0, lin, quad, p0, n](const RealVector& p) {
        ComplexMatrix a = a0;
        for (int k = 0; k < n; ++k) {
            const double d = p[k] - p0[k];
            ComplexMatrix term = lin[k];
            term *= Complex(d, 0.0);
            a += term;
            term = quad[k];
            term *= Complex(d * d, 0.0);
            a += term;
        }
        return a;
    };
    out.fam.deriv_fn = [lin, quad, p0](const RealVector& p, int k) {
        ComplexMatrix d = lin[k];
        ComplexMatrix c = quad[k];
        c *= Complex(2.0 * (p[k] - p0[k]), 0.0);
        d += c;
        return d;
    };

    out.dp.p0 = p0;
    out.dp.lambda0 = 0.3;
    out.dp.u1.resize(m);
    out.dp.u2.resize(m);
    for (int i = 0; i < m; ++i) {
        out.dp.u1[i] = q(i, 0);
        out.dp.u2[i] = q(i, 1);
    }
    return out;
}

// Least-squares slope of log(err) against log(r).
inline double fit_order(const RealVector& radii, const RealVector& errs) {
    const size_t n = radii.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(radii[i]);
        const double y = std::log(std::max(errs[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Componentwise distances after optimal pairing.
inline std::pair<double, double> pair_errors(const std::pair<Complex, Complex>& ref,
                                             const std::pair<Complex, Complex>& cand) {
    const auto m = diabolo::min_distance_match(ref, cand);
    return {std::abs(ref.first - m.first), std::abs(ref.second - m.second)};
}

inline double max_pair_error(const std::pair<Complex, Complex>& ref,
                             const std::pair<Complex, Complex>& cand) {
    const auto [a, b] = pair_errors(ref, cand);
    return std::max(a, b);
}

} // namespace testutil
