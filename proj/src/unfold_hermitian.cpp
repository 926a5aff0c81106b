#include "diabolo/unfold_hermitian.hpp"

#include <cfloat>
#include <cmath>

namespace diabolo {

namespace {

double dot(const RealVector& a, const RealVector& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

// Solves the symmetric positive semi-definite 3x3 system M w = r by Gaussian
// elimination with partial pivoting; returns false when a pivot collapses.
// `scale` is the largest diagonal entry, the natural size of a healthy pivot.
bool solve3(double m[3][3], double r[3], double scale) {
    int perm[3] = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        int piv = k;
        for (int i = k + 1; i < 3; ++i)
            if (std::abs(m[perm[i]][k]) > std::abs(m[perm[piv]][k]))
                piv = i;
        std::swap(perm[k], perm[piv]);
        const double pk = m[perm[k]][k];
        if (std::abs(pk) <= 1e-13 * std::max(scale, DBL_MIN))
            return false;
        for (int i = k + 1; i < 3; ++i) {
            const double f = m[perm[i]][k] / pk;
            for (int j = k; j < 3; ++j)
                m[perm[i]][j] -= f * m[perm[k]][j];
            r[perm[i]] -= f * r[perm[k]];
        }
    }
    double w[3];
    for (int k = 2; k >= 0; --k) {
        double acc = r[perm[k]];
        for (int j = k + 1; j < 3; ++j)
            acc -= m[perm[k]][j] * w[j];
        w[k] = acc / m[perm[k]][k];
    }
    r[0] = w[0];
    r[1] = w[1];
    r[2] = w[2];
    return true;
}

} // namespace

double UnfoldingFrame3::x_at(const RealVector& d) const {
    if (d.size() != g_x.size())
        throw DimensionMismatch("displacement has wrong length");
    return dot(g_x, d);
}

double UnfoldingFrame3::y_at(const RealVector& d) const {
    if (d.size() != g_y.size())
        throw DimensionMismatch("displacement has wrong length");
    return dot(g_y, d);
}

double UnfoldingFrame3::z_at(const RealVector& d) const {
    if (d.size() != g_z.size())
        throw DimensionMismatch("displacement has wrong length");
    return dot(g_z, d);
}

double UnfoldingFrame3::lambda0_prime_at(const RealVector& d) const {
    if (d.size() != g_sum.size())
        throw DimensionMismatch("displacement has wrong length");
    return lambda0 + dot(g_sum, d);
}

UnfoldingFrame3 frame3(const CouplingData& cd, const DiabolicPoint& dp, const RealVector& delta) {
    const size_t n = cd.f11.size();
    if (cd.f22.size() != n || cd.f12.size() != n || cd.f21.size() != n)
        throw DimensionMismatch("coupling vectors have inconsistent lengths");
    if (delta.size() != n)
        throw DimensionMismatch("displacement has wrong length");

    double scale = 1.0;
    for (size_t k = 0; k < n; ++k)
        scale = std::max({scale, std::abs(cd.f11[k]), std::abs(cd.f22[k]), std::abs(cd.f12[k]),
                          std::abs(cd.f21[k])});
    for (size_t k = 0; k < n; ++k) {
        const double defect = std::max({std::abs(cd.f11[k].imag()), std::abs(cd.f22[k].imag()),
                                        std::abs(cd.f12[k] - std::conj(cd.f21[k]))});
        if (defect > 1e-12 * scale)
            throw ClassMismatch("coupling data is not Hermitian");
    }

    UnfoldingFrame3 fr;
    fr.lambda0 = dp.lambda0;
    fr.delta = delta;
    fr.g_sum.resize(n);
    fr.g_x.resize(n);
    fr.g_y.resize(n);
    fr.g_z.resize(n);
    for (size_t k = 0; k < n; ++k) {
        fr.g_sum[k] = 0.5 * (cd.f11[k] + cd.f22[k]).real();
        fr.g_x[k] = 0.5 * (cd.f11[k] - cd.f22[k]).real();
        fr.g_y[k] = cd.f12[k].real();
        fr.g_z[k] = cd.f12[k].imag();
    }
    fr.x = fr.x_at(delta);
    fr.y = fr.y_at(delta);
    fr.z = fr.z_at(delta);
    fr.lambda0_prime = fr.lambda0_prime_at(delta);
    return fr;
}

Complex c_hermitian(const UnfoldingFrame3& fr, const PerturbationScalars& ps) {
    const Complex u = fr.x + ps.xi;
    const Complex v = fr.y + ps.eta;
    const Complex w = Complex(fr.z, 0.0) - Complex(0.0, 1.0) * ps.zeta;
    return u * u + v * v + w * w;
}

CParts c_parts3(const UnfoldingFrame3& fr, const PerturbationScalars& ps) {
    const double rxi = ps.xi.real(), ixi = ps.xi.imag();
    const double reta = ps.eta.real(), ieta = ps.eta.imag();
    const double rzeta = ps.zeta.real(), izeta = ps.zeta.imag();
    const double u = fr.x + rxi;
    const double v = fr.y + reta;
    const double w = fr.z + izeta;
    CParts c;
    c.re_c = u * u + v * v + w * w - (ixi * ixi + ieta * ieta + rzeta * rzeta);
    c.im_c = 2.0 * (ixi * u + ieta * v - rzeta * w);
    return c;
}

std::pair<Complex, Complex> lambda_pair3(const UnfoldingFrame3& fr,
                                         const PerturbationScalars& ps) {
    const Complex base = Complex(fr.lambda0_prime, 0.0) + ps.mu;
    const Complex r = std::sqrt(c_hermitian(fr, ps));
    return {base + r, base - r};
}

ExceptionalRing exceptional_ring(const PerturbationScalars& ps) {
    const double ixi = ps.xi.imag(), ieta = ps.eta.imag(), rzeta = ps.zeta.real();
    ExceptionalRing ring;
    ring.center = {-ps.xi.real(), -ps.eta.real(), -ps.zeta.imag()};
    ring.radius = std::sqrt(ixi * ixi + ieta * ieta + rzeta * rzeta);
    if (ring.radius <= 1e-14 * std::max(1.0, ps.epsilon_norm))
        throw DegenerateRing("exceptional ring has vanishing radius");
    ring.normal = {ixi / ring.radius, ieta / ring.radius, -rzeta / ring.radius};
    return ring;
}

std::vector<std::array<double, 3>> ring_points(const ExceptionalRing& ring, int count) {
    // In-plane orthonormal basis, seeded from the axis least aligned with
    // the normal for reproducibility.
    int seed = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(ring.normal[i]) < std::abs(ring.normal[seed]))
            seed = i;
    std::array<double, 3> e1{};
    e1[seed] = 1.0;
    const double proj = e1[0] * ring.normal[0] + e1[1] * ring.normal[1] + e1[2] * ring.normal[2];
    for (int i = 0; i < 3; ++i)
        e1[i] -= proj * ring.normal[i];
    const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (double& t : e1)
        t /= n1;
    const std::array<double, 3> e2 = {ring.normal[1] * e1[2] - ring.normal[2] * e1[1],
                                      ring.normal[2] * e1[0] - ring.normal[0] * e1[2],
                                      ring.normal[0] * e1[1] - ring.normal[1] * e1[0]};

    std::vector<std::array<double, 3>> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        const double a = 2.0 * M_PI * k / count;
        const double ca = std::cos(a), sa = std::sin(a);
        std::array<double, 3> p{};
        for (int i = 0; i < 3; ++i)
            p[i] = ring.center[i] + ring.radius * (ca * e1[i] + sa * e2[i]);
        pts.push_back(p);
    }
    return pts;
}

RingRegion ring_plane_partition(const UnfoldingFrame3& fr, const PerturbationScalars& ps) {
    const CParts c = c_parts3(fr, ps);
    const double sc = std::max({ps.epsilon_norm, std::abs(fr.x), std::abs(fr.y), std::abs(fr.z),
                                DBL_MIN});
    const double tol = 1e-10 * sc * sc;
    if (std::abs(c.im_c) > tol)
        throw OffPlane("sample does not lie on the ring plane");
    if (std::abs(c.re_c) <= tol)
        return RingRegion::OnRing;
    return (c.re_c < 0.0) ? RingRegion::Inside : RingRegion::Outside;
}

std::pair<double, double> gap_residuals(const UnfoldingFrame3& fr, const PerturbationScalars& ps) {
    const CParts c = c_parts3(fr, ps);
    const double h = std::hypot(c.re_c, c.im_c);
    const double gre = 2.0 * std::sqrt(std::max(0.0, 0.5 * (h + c.re_c)));
    const double gim = 2.0 * std::sqrt(std::max(0.0, 0.5 * (h - c.re_c)));
    const double r1 = gre * gre * gre * gre - 4.0 * gre * gre * c.re_c - 4.0 * c.im_c * c.im_c;
    const double r2 = gim * gim * gim * gim + 4.0 * gim * gim * c.re_c - 4.0 * c.im_c * c.im_c;
    return {r1, r2};
}

FrameInversion3 invert_frame3(const UnfoldingFrame3& fr, double x, double y, double z) {
    const size_t n = fr.g_x.size();
    const RealVector* rows[3] = {&fr.g_x, &fr.g_y, &fr.g_z};
    double m[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = dot(*rows[i], *rows[j]);
    const double dscale = std::max({m[0][0], m[1][1], m[2][2], DBL_MIN});

    // Hadamard bound m00*m11*m22 is the natural scale of det; below ~1e-13
    // of it the Gram matrix is numerically rank-deficient
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if (std::abs(det) <= 1e-13 * std::max(m[0][0] * m[1][1] * m[2][2], DBL_MIN))
        throw SingularFrame("frame linear forms do not resolve the unfolding space");

    double rhs[3] = {x, y, z};
    double mm[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            mm[i][j] = m[i][j];
    if (!solve3(mm, rhs, dscale))
        throw SingularFrame("frame linear forms do not resolve the unfolding space");

    FrameInversion3 inv;
    inv.delta.assign(n, 0.0);
    for (size_t k = 0; k < n; ++k)
        inv.delta[k] = rhs[0] * fr.g_x[k] + rhs[1] * fr.g_y[k] + rhs[2] * fr.g_z[k];

    // cond(M) estimated through ||M||_F ||M^-1||_F; the frame condition is
    // its square root (Gram eigenvalues are squared singular values).
    double fro = 0.0, ifro = 0.0;
    double adj[3][3];
    adj[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    adj[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
    adj[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    adj[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    adj[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    adj[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
    adj[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    adj[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
    adj[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            fro += m[i][j] * m[i][j];
            ifro += (adj[i][j] / det) * (adj[i][j] / det);
        }
    inv.condition = std::sqrt(std::sqrt(fro * ifro));

    if (n > 3) {
        for (size_t k = 0; k < n && inv.null_basis.size() < n - 3; ++k) {
            RealVector v(n, 0.0);
            v[k] = 1.0;
            double comp[3] = {fr.g_x[k], fr.g_y[k], fr.g_z[k]};
            double cm[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    cm[i][j] = m[i][j];
            if (!solve3(cm, comp, dscale))
                throw SingularFrame("frame linear forms do not resolve the unfolding space");
            for (size_t i = 0; i < n; ++i)
                v[i] -= comp[0] * fr.g_x[i] + comp[1] * fr.g_y[i] + comp[2] * fr.g_z[i];
            for (const RealVector& u : inv.null_basis) {
                const double proj = dot(v, u);
                for (size_t i = 0; i < n; ++i)
                    v[i] -= proj * u[i];
            }
            const double nv = std::sqrt(dot(v, v));
            if (nv > 1e-10) {
                for (double& t : v)
                    t /= nv;
                inv.null_basis.push_back(v);
            }
        }
    }
    return inv;
}

} // namespace diabolo
