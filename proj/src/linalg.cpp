#include "diabolo/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace diabolo {

namespace {

constexpr int kMaxOracleDim = 16;
constexpr double kEps = DBL_EPSILON;

void require_square_match(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("matrix dimensions differ");
}

// Scale to unit norm and rotate the globally largest component to the
// positive real axis, so decompositions are reproducible run to run.
void normalize_phase(ComplexVector& v) {
    double n = norm2(v);
    if (n == 0.0)
        return;
    size_t imax = 0;
    double best = -1.0;
    for (size_t i = 0; i < v.size(); ++i) {
        double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    Complex rot = (best > 0.0) ? std::conj(v[imax]) / std::abs(v[imax]) : Complex(1.0, 0.0);
    for (auto& x : v)
        x *= rot / n;
}

double max_residual(const ComplexMatrix& A, const EigenDecomposition& d) {
    double worst = 0.0;
    for (size_t i = 0; i < d.values.size(); ++i) {
        ComplexVector r = A.apply(d.vectors[i]);
        for (int k = 0; k < A.dim(); ++k)
            r[k] -= d.values[i] * d.vectors[i][k];
        worst = std::max(worst, norm2(r));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Hermitian path: cyclic complex Jacobi.

EigenDecomposition jacobi_hermitian(const ComplexMatrix& A0) {
    const int m = A0.dim();
    ComplexMatrix A = A0;
    ComplexMatrix V = ComplexMatrix::identity(m);
    const double anorm = std::max(A.frobenius_norm(), DBL_MIN);

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                off += std::norm(A(i, j));
        if (std::sqrt(2.0 * off) <= 1e-15 * anorm)
            break;

        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const double ab = std::abs(A(p, q));
                if (ab <= kEps * anorm * 1e-3)
                    continue;
                const Complex phase = A(p, q) / ab;
                const double alpha = A(p, p).real();
                const double delta = A(q, q).real();
                const double tau = (delta - alpha) / (2.0 * ab);
                const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
                const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // A <- A J with J = [[c, s*phase], [-s*conj(phase), c]]
                for (int k = 0; k < m; ++k) {
                    const Complex akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * std::conj(phase) * akq;
                    A(k, q) = s * phase * akp + c * akq;
                }
                // A <- J^H A
                for (int k = 0; k < m; ++k) {
                    const Complex apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * phase * aqk;
                    A(q, k) = s * std::conj(phase) * apk + c * aqk;
                }
                // V <- V J
                for (int k = 0; k < m; ++k) {
                    const Complex vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * std::conj(phase) * vkq;
                    V(k, q) = s * phase * vkp + c * vkq;
                }
                A(p, p) = Complex(A(p, p).real(), 0.0);
                A(q, q) = Complex(A(q, q).real(), 0.0);
            }
        }
    }

    EigenDecomposition d;
    d.values.resize(m);
    d.vectors.assign(m, ComplexVector(m));
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return A(a, a).real() > A(b, b).real(); });
    for (int i = 0; i < m; ++i) {
        d.values[i] = Complex(A(order[i], order[i]).real(), 0.0);
        for (int k = 0; k < m; ++k)
            d.vectors[i][k] = V(k, order[i]);
        normalize_phase(d.vectors[i]);
    }
    d.residual = max_residual(A0, d);
    return d;
}

// ---------------------------------------------------------------------------
// General path: Householder Hessenberg reduction + shifted QR (Schur form),
// then triangular back-substitution for the eigenvectors.

struct Givens {
    double c;
    Complex s;
    int i;
};

Givens make_givens(Complex f, Complex g, int i) {
    const double af = std::abs(f), ag = std::abs(g);
    const double d = std::hypot(af, ag);
    if (d == 0.0)
        return {1.0, Complex(0.0, 0.0), i};
    if (af == 0.0)
        return {0.0, std::conj(g) / ag, i};
    return {af / d, (f / af) * std::conj(g) / d, i};
}

void hessenberg(ComplexMatrix& A, ComplexMatrix& Q) {
    const int m = A.dim();
    for (int k = 0; k + 2 < m; ++k) {
        double normx = 0.0;
        for (int i = k + 1; i < m; ++i)
            normx += std::norm(A(i, k));
        normx = std::sqrt(normx);
        if (normx <= DBL_MIN)
            continue;

        ComplexVector v(m, Complex(0.0, 0.0));
        for (int i = k + 1; i < m; ++i)
            v[i] = A(i, k);
        const Complex a1 = v[k + 1];
        const Complex ph = (std::abs(a1) > 0.0) ? a1 / std::abs(a1) : Complex(1.0, 0.0);
        v[k + 1] += ph * normx;
        double vv = 0.0;
        for (int i = k + 1; i < m; ++i)
            vv += std::norm(v[i]);
        if (vv <= DBL_MIN)
            continue;
        const double tau = 2.0 / vv;

        // A <- (I - tau v v^H) A
        for (int j = 0; j < m; ++j) {
            Complex dot(0.0, 0.0);
            for (int i = k + 1; i < m; ++i)
                dot += std::conj(v[i]) * A(i, j);
            dot *= tau;
            for (int i = k + 1; i < m; ++i)
                A(i, j) -= v[i] * dot;
        }
        // A <- A (I - tau v v^H)
        for (int i = 0; i < m; ++i) {
            Complex dot(0.0, 0.0);
            for (int j = k + 1; j < m; ++j)
                dot += A(i, j) * v[j];
            dot *= tau;
            for (int j = k + 1; j < m; ++j)
                A(i, j) -= dot * std::conj(v[j]);
        }
        // Q <- Q (I - tau v v^H)
        for (int i = 0; i < m; ++i) {
            Complex dot(0.0, 0.0);
            for (int j = k + 1; j < m; ++j)
                dot += Q(i, j) * v[j];
            dot *= tau;
            for (int j = k + 1; j < m; ++j)
                Q(i, j) -= dot * std::conj(v[j]);
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j + 1 < i; ++j)
            A(i, j) = Complex(0.0, 0.0);
}

Complex wilkinson_shift(const ComplexMatrix& H, int hi) {
    const Complex a = H(hi - 1, hi - 1), b = H(hi - 1, hi);
    const Complex c = H(hi, hi - 1), d = H(hi, hi);
    const Complex s = 0.5 * (a + d);
    const Complex q = std::sqrt(s * s - (a * d - b * c));
    const Complex r1 = s + q, r2 = s - q;
    return (std::abs(r1 - d) < std::abs(r2 - d)) ? r1 : r2;
}

// Schur triangularization in place; Z accumulates so that input = Z T Z^H.
void schur_qr(ComplexMatrix& H, ComplexMatrix& Z, double anorm) {
    const int m = H.dim();
    auto negligible = [&](int i) {
        double s = std::abs(H(i - 1, i - 1)) + std::abs(H(i, i));
        if (s == 0.0)
            s = anorm;
        return std::abs(H(i, i - 1)) <= kEps * s;
    };

    int hi = m - 1;
    int stall = 0;
    int total = 0;
    const int cap = 60 * std::max(m, 1);
    while (hi > 0) {
        if (negligible(hi)) {
            H(hi, hi - 1) = Complex(0.0, 0.0);
            --hi;
            stall = 0;
            continue;
        }
        int lo = hi;
        while (lo > 0 && !negligible(lo))
            --lo;
        if (lo > 0)
            H(lo, lo - 1) = Complex(0.0, 0.0);

        if (++total > cap)
            throw NonConvergence("QR iteration exceeded its iteration cap",
                                 std::abs(H(hi, hi - 1)));
        ++stall;
        Complex mu;
        if (stall % 16 == 0)
            mu = H(hi, hi) + Complex(0.75 * std::abs(H(hi, hi - 1)), 0.0);
        else
            mu = wilkinson_shift(H, hi);

        for (int i = lo; i <= hi; ++i)
            H(i, i) -= mu;

        std::vector<Givens> rots;
        rots.reserve(hi - lo);
        for (int i = lo; i < hi; ++i) {
            Givens g = make_givens(H(i, i), H(i + 1, i), i);
            rots.push_back(g);
            // rows i, i+1
            for (int j = 0; j < m; ++j) {
                const Complex x = H(i, j), y = H(i + 1, j);
                H(i, j) = g.c * x + g.s * y;
                H(i + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (const Givens& g : rots) {
            const int i = g.i;
            // columns i, i+1 of H and Z
            for (int k = 0; k < m; ++k) {
                const Complex x = H(k, i), y = H(k, i + 1);
                H(k, i) = g.c * x + std::conj(g.s) * y;
                H(k, i + 1) = -g.s * x + g.c * y;
            }
            for (int k = 0; k < m; ++k) {
                const Complex x = Z(k, i), y = Z(k, i + 1);
                Z(k, i) = g.c * x + std::conj(g.s) * y;
                Z(k, i + 1) = -g.s * x + g.c * y;
            }
        }
        for (int i = lo; i <= hi; ++i)
            H(i, i) += mu;
    }
    for (int i = 1; i < m; ++i)
        H(i, i - 1) = Complex(0.0, 0.0);
}

EigenDecomposition general_2x2(const ComplexMatrix& A) {
    const Complex a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
    const Complex s = 0.5 * (a + d);
    const Complex det = a * d - b * c;
    const Complex q = std::sqrt(s * s - det);
    Complex l1 = s + q, l2 = s - q;
    if (std::abs(l1) < std::abs(l2))
        std::swap(l1, l2);
    if (std::abs(l1) > DBL_MIN)
        l2 = det / l1;

    EigenDecomposition dec;
    dec.values = {l1, l2};
    dec.vectors.assign(2, ComplexVector(2));
    for (int i = 0; i < 2; ++i) {
        const Complex l = dec.values[i];
        const ComplexVector cand1 = {b, l - a};
        const ComplexVector cand2 = {l - d, c};
        const double n1 = norm2(cand1), n2 = norm2(cand2);
        if (std::max(n1, n2) <= 1e-14 * std::max(1.0, std::abs(l))) {
            dec.vectors[i][i] = Complex(1.0, 0.0); // (near-)scalar matrix
        } else {
            dec.vectors[i] = (n1 >= n2) ? cand1 : cand2;
        }
        normalize_phase(dec.vectors[i]);
    }
    dec.residual = max_residual(A, dec);
    return dec;
}

EigenDecomposition general_eig(const ComplexMatrix& A0) {
    const int m = A0.dim();
    if (m == 1) {
        EigenDecomposition d;
        d.values = {A0(0, 0)};
        d.vectors = {{Complex(1.0, 0.0)}};
        d.residual = 0.0;
        return d;
    }
    if (m == 2)
        return general_2x2(A0);

    ComplexMatrix T = A0;
    ComplexMatrix Z = ComplexMatrix::identity(m);
    const double anorm = std::max(A0.frobenius_norm(), DBL_MIN);
    hessenberg(T, Z);
    schur_qr(T, Z, anorm);

    EigenDecomposition d;
    d.values.resize(m);
    d.vectors.assign(m, ComplexVector(m));
    const double smallden = kEps * anorm;
    for (int i = 0; i < m; ++i) {
        d.values[i] = T(i, i);
        ComplexVector y(m, Complex(0.0, 0.0));
        y[i] = Complex(1.0, 0.0);
        for (int k = i - 1; k >= 0; --k) {
            Complex sum(0.0, 0.0);
            for (int j = k + 1; j <= i; ++j)
                sum += T(k, j) * y[j];
            Complex den = T(k, k) - d.values[i];
            if (std::abs(den) < smallden)
                den = Complex(smallden, 0.0);
            y[k] = -sum / den;
            if (std::abs(y[k]) > 1e100) {
                const double sc = 1.0 / std::abs(y[k]);
                for (Complex& t : y)
                    t *= sc;
            }
        }
        ComplexVector v(m, Complex(0.0, 0.0));
        for (int r = 0; r < m; ++r) {
            Complex acc(0.0, 0.0);
            for (int k = 0; k <= i; ++k)
                acc += Z(r, k) * y[k];
            v[r] = acc;
        }
        d.vectors[i] = std::move(v);
        normalize_phase(d.vectors[i]);
    }
    d.residual = max_residual(A0, d);
    return d;
}

} // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        m(i, i) = Complex(1.0, 0.0);
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const RealVector& d) {
    ComplexMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i)
        m(i, i) = Complex(d[i], 0.0);
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_square_match(*this, rhs);
    for (size_t i = 0; i < a_.size(); ++i)
        a_[i] += rhs.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_square_match(*this, rhs);
    for (size_t i = 0; i < a_.size(); ++i)
        a_[i] -= rhs.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& x : a_)
        x *= s;
    return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    require_square_match(*this, rhs);
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) {
            const Complex aik = (*this)(i, k);
            if (aik == Complex(0.0, 0.0))
                continue;
            for (int j = 0; j < dim_; ++j)
                out(i, j) += aik * rhs(k, j);
        }
    return out;
}

ComplexVector ComplexMatrix::apply(const ComplexVector& v) const {
    if (static_cast<int>(v.size()) != dim_)
        throw DimensionMismatch("matrix-vector dimension mismatch");
    ComplexVector out(dim_, Complex(0.0, 0.0));
    for (int i = 0; i < dim_; ++i) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < dim_; ++j)
            acc += (*this)(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            out(i, j) = std::conj((*this)(j, i));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            out(i, j) = (*this)(j, i);
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t(0.0, 0.0);
    for (int i = 0; i < dim_; ++i)
        t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : a_)
        s += std::norm(x);
    return std::sqrt(s);
}

Complex ComplexMatrix::determinant() const {
    ComplexMatrix lu = *this;
    const int m = dim_;
    Complex det(1.0, 0.0);
    for (int k = 0; k < m; ++k) {
        int piv = k;
        double best = std::abs(lu(k, k));
        for (int i = k + 1; i < m; ++i) {
            if (std::abs(lu(i, k)) > best) {
                best = std::abs(lu(i, k));
                piv = i;
            }
        }
        if (best == 0.0)
            return Complex(0.0, 0.0);
        if (piv != k) {
            for (int j = 0; j < m; ++j)
                std::swap(lu(k, j), lu(piv, j));
            det = -det;
        }
        det *= lu(k, k);
        for (int i = k + 1; i < m; ++i) {
            const Complex f = lu(i, k) / lu(k, k);
            for (int j = k; j < m; ++j)
                lu(i, j) -= f * lu(k, j);
        }
    }
    return det;
}

double ComplexMatrix::symmetry_defect(SymmetryClass cls) const {
    double worst = 0.0;
    switch (cls) {
    case SymmetryClass::General:
        return 0.0;
    case SymmetryClass::Hermitian:
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j)
                worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return worst;
    case SymmetryClass::RealSymmetric:
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j) {
                worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
                worst = std::max(worst, std::abs((*this)(i, j).imag()));
                worst = std::max(worst, std::abs((*this)(j, i).imag()));
            }
        return worst;
    }
    return worst;
}

bool ComplexMatrix::conforms(SymmetryClass cls, double rel_tol) const {
    return symmetry_defect(cls) <= rel_tol * frobenius_norm();
}

// ---------------------------------------------------------------------------
// Free functions

Complex inner(const ComplexVector& u, const ComplexVector& v) {
    if (u.size() != v.size())
        throw DimensionMismatch("inner product dimension mismatch");
    Complex acc(0.0, 0.0);
    for (size_t i = 0; i < u.size(); ++i)
        acc += u[i] * std::conj(v[i]);
    return acc;
}

double norm2(const ComplexVector& v) {
    double s = 0.0;
    for (const auto& x : v)
        s += std::norm(x);
    return std::sqrt(s);
}

Complex pair_with(const ComplexVector& f, const RealVector& dp) {
    if (f.size() != dp.size())
        throw DimensionMismatch("coefficient/displacement dimension mismatch");
    Complex acc(0.0, 0.0);
    for (size_t i = 0; i < f.size(); ++i)
        acc += f[i] * dp[i];
    return acc;
}

EigenDecomposition eig_exact(const ComplexMatrix& A, SymmetryClass cls) {
    const int m = A.dim();
    if (m > kMaxOracleDim)
        throw DimensionMismatch("eig_exact is a desk-scale oracle (dim <= 16)");
    if (m == 0)
        return {{}, {}, 0.0};

    EigenDecomposition d = (cls == SymmetryClass::General) ? general_eig(A) : jacobi_hermitian(A);
    const double tol = 1e-12 * std::max(A.frobenius_norm(), DBL_MIN);
    if (d.residual > tol)
        throw NonConvergence("eigensolver residual above tolerance", d.residual);
    return d;
}

std::pair<Complex, Complex> two_nonzero_eigs_trace(const ComplexMatrix& A) {
    const Complex t = A.trace();
    Complex t2(0.0, 0.0);
    for (int i = 0; i < A.dim(); ++i)
        for (int j = 0; j < A.dim(); ++j)
            t2 += A(i, j) * A(j, i);
    const Complex r = std::sqrt(2.0 * t2 - t * t);
    return {0.5 * (t + r), 0.5 * (t - r)};
}

std::pair<ComplexMatrix, ComplexMatrix> hermitian_split(const ComplexMatrix& A) {
    const ComplexMatrix adj = A.adjoint();
    ComplexMatrix H = A, N = A;
    H += adj;
    H *= Complex(0.5, 0.0);
    N -= adj;
    N *= Complex(0.5, 0.0);
    return {H, N};
}

std::pair<Complex, Complex> min_distance_match(const std::pair<Complex, Complex>& ref,
                                               const std::pair<Complex, Complex>& cand) {
    const double keep = std::abs(ref.first - cand.first) + std::abs(ref.second - cand.second);
    const double swap = std::abs(ref.first - cand.second) + std::abs(ref.second - cand.first);
    if (swap < keep)
        return {cand.second, cand.first};
    return cand;
}

} // namespace diabolo
