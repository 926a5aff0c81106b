#include "diabolo/unfold_symmetric.hpp"

#include <cfloat>
#include <cmath>
#include <limits>

namespace diabolo {

namespace {

double dot(const RealVector& a, const RealVector& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

RealVector axpy(const RealVector& base, double scale, const RealVector& dir) {
    RealVector out = base;
    for (size_t i = 0; i < out.size(); ++i)
        out[i] += scale * dir[i];
    return out;
}

double rnorm(const RealVector& v) {
    return std::sqrt(dot(v, v));
}

} // namespace

double UnfoldingFrame2::x_at(const RealVector& d) const {
    if (d.size() != g_x.size())
        throw DimensionMismatch("displacement has wrong length");
    return dot(g_x, d);
}

double UnfoldingFrame2::y_at(const RealVector& d) const {
    if (d.size() != g_y.size())
        throw DimensionMismatch("displacement has wrong length");
    return dot(g_y, d);
}

double UnfoldingFrame2::lambda0_prime_at(const RealVector& d) const {
    if (d.size() != g_sum.size())
        throw DimensionMismatch("displacement has wrong length");
    return lambda0 + dot(g_sum, d);
}

UnfoldingFrame2 frame2(const CouplingData& cd, const DiabolicPoint& dp, const RealVector& delta) {
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
        const double defect =
            std::max({std::abs(cd.f11[k].imag()), std::abs(cd.f22[k].imag()),
                      std::abs(cd.f12[k].imag()), std::abs(cd.f21[k].imag()),
                      std::abs(cd.f12[k] - cd.f21[k])});
        if (defect > 1e-12 * scale)
            throw ClassMismatch("coupling data is not real-symmetric");
    }

    UnfoldingFrame2 fr;
    fr.lambda0 = dp.lambda0;
    fr.delta = delta;
    fr.g_sum.resize(n);
    fr.g_x.resize(n);
    fr.g_y.resize(n);
    for (size_t k = 0; k < n; ++k) {
        fr.g_sum[k] = 0.5 * (cd.f11[k] + cd.f22[k]).real();
        fr.g_x[k] = 0.5 * (cd.f11[k] - cd.f22[k]).real();
        fr.g_y[k] = cd.f12[k].real();
    }
    fr.x = fr.x_at(delta);
    fr.y = fr.y_at(delta);
    fr.lambda0_prime = fr.lambda0_prime_at(delta);
    return fr;
}

CParts c_parts(const UnfoldingFrame2& fr, const PerturbationScalars& ps) {
    const double rxi = ps.xi.real(), ixi = ps.xi.imag();
    const double reta = ps.eta.real(), ieta = ps.eta.imag();
    const double rzeta = ps.zeta.real(), izeta = ps.zeta.imag();
    const double u = fr.x + rxi;
    const double v = fr.y + reta;
    CParts c;
    c.re_c = (izeta * izeta - ixi * ixi - ieta * ieta - rzeta * rzeta) + u * u + v * v;
    c.im_c = 2.0 * (u * ixi + v * ieta - rzeta * izeta);
    return c;
}

Complex c_complex(const UnfoldingFrame2& fr, const PerturbationScalars& ps) {
    const Complex u = fr.x + ps.xi;
    const Complex v = fr.y + ps.eta;
    return u * u + v * v - ps.zeta * ps.zeta;
}

SheetSample sheets(const UnfoldingFrame2& fr, const PerturbationScalars& ps) {
    const CParts c = c_parts(fr, ps);
    const double h = std::hypot(c.re_c, c.im_c);
    const double big = std::sqrt(std::max(0.0, 0.5 * (h + c.re_c)));
    const double small = std::sqrt(std::max(0.0, 0.5 * (h - c.re_c)));
    const double sign = (c.im_c >= 0.0) ? 1.0 : -1.0;

    SheetSample s;
    s.delta = fr.delta;
    s.re_c = c.re_c;
    s.im_c = c.im_c;
    s.re_plus = fr.lambda0_prime + ps.mu.real() + big;
    s.re_minus = fr.lambda0_prime + ps.mu.real() - big;
    s.im_plus = ps.mu.imag() + sign * small;
    s.im_minus = ps.mu.imag() - sign * small;
    return s;
}

IntersectionApprox sheet_approx_near_intersection(const UnfoldingFrame2& fr,
                                                  const PerturbationScalars& ps) {
    const CParts c = c_parts(fr, ps);
    if (std::abs(c.re_c) < 1e-8)
        throw NearZeroRec("sheet approximation undefined near Re c = 0");
    IntersectionApprox out;
    if (c.re_c < 0.0) {
        const double off = 0.5 * c.im_c * std::sqrt(-1.0 / c.re_c);
        out.real_branch = true;
        out.plus_val = fr.lambda0_prime + ps.mu.real() + off;
        out.minus_val = fr.lambda0_prime + ps.mu.real() - off;
    } else {
        const double off = 0.5 * c.im_c * std::sqrt(1.0 / c.re_c);
        out.real_branch = false;
        out.plus_val = ps.mu.imag() + off;
        out.minus_val = ps.mu.imag() - off;
    }
    return out;
}

ClassificationReport classify(const PerturbationScalars& ps) {
    ClassificationReport r;
    r.im_xi = ps.xi.imag();
    r.im_eta = ps.eta.imag();
    r.im_zeta = ps.zeta.imag();
    r.discriminant = r.im_xi * r.im_xi + r.im_eta * r.im_eta - r.im_zeta * r.im_zeta;
    const double tol = 1e-14 * std::max(ps.epsilon_norm * ps.epsilon_norm, DBL_MIN);
    if (std::abs(r.discriminant) <= tol)
        r.regime = Regime::Degenerate;
    else
        r.regime = (r.discriminant > 0.0) ? Regime::AbsorptionDominated
                                          : Regime::ChiralityDominated;
    return r;
}

FrameInversion invert_frame2(const UnfoldingFrame2& fr, double x, double y) {
    const size_t n = fr.g_x.size();
    const double a = dot(fr.g_x, fr.g_x);
    const double b = dot(fr.g_x, fr.g_y);
    const double d = dot(fr.g_y, fr.g_y);
    const double det = a * d - b * b;
    // a*d is the natural scale of det; anything below ~1e-13 of it is
    // indistinguishable from a rank-deficient Gram matrix at double precision
    if (det <= 1e-13 * std::max(a * d, DBL_MIN))
        throw SingularFrame("frame linear forms do not resolve the unfolding plane");

    FrameInversion inv;
    const double w1 = (x * d - y * b) / det;
    const double w2 = (y * a - x * b) / det;
    inv.delta.assign(n, 0.0);
    for (size_t k = 0; k < n; ++k)
        inv.delta[k] = w1 * fr.g_x[k] + w2 * fr.g_y[k];

    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), b);
    inv.condition = std::sqrt((mean + rad) / std::max(mean - rad, DBL_MIN));

    if (n > 2) {
        for (size_t k = 0; k < n && inv.null_basis.size() < n - 2; ++k) {
            RealVector v(n, 0.0);
            v[k] = 1.0;
            // remove the row-space component
            const double px = fr.g_x[k];
            const double py = fr.g_y[k];
            const double c1 = (px * d - py * b) / det;
            const double c2 = (py * a - px * b) / det;
            for (size_t i = 0; i < n; ++i)
                v[i] -= c1 * fr.g_x[i] + c2 * fr.g_y[i];
            for (const RealVector& u : inv.null_basis) {
                const double proj = dot(v, u);
                for (size_t i = 0; i < n; ++i)
                    v[i] -= proj * u[i];
            }
            const double nv = rnorm(v);
            if (nv > 1e-10) {
                for (double& t : v)
                    t /= nv;
                inv.null_basis.push_back(v);
            }
        }
    }
    return inv;
}

ExceptionalPair exceptional_points(const CouplingData& cd, const DiabolicPoint& dp,
                                   const PerturbationScalars& ps) {
    const ClassificationReport rep = classify(ps);
    if (rep.regime == Regime::ChiralityDominated)
        throw NegativeD("no exceptional points: chirality-dominated perturbation");
    if (rep.regime == Regime::Degenerate)
        throw DegenerateD("exceptional points merged: degenerate discriminant");

    const double s = rep.im_xi * rep.im_xi + rep.im_eta * rep.im_eta;
    const double rzeta = ps.zeta.real(), izeta = ps.zeta.imag();
    const double root = std::sqrt((s + rzeta * rzeta) * rep.discriminant);
    const double cx = rep.im_xi * rzeta * izeta;
    const double cy = rep.im_eta * rzeta * izeta;

    ExceptionalPair ep;
    ep.x_a = (cx + rep.im_eta * root) / s - ps.xi.real();
    ep.x_b = (cx - rep.im_eta * root) / s - ps.xi.real();
    ep.y_a = (cy - rep.im_xi * root) / s - ps.eta.real();
    ep.y_b = (cy + rep.im_xi * root) / s - ps.eta.real();

    const UnfoldingFrame2 fr = frame2(cd, dp, RealVector(cd.f11.size(), 0.0));
    const FrameInversion ia = invert_frame2(fr, ep.x_a, ep.y_a);
    const FrameInversion ib = invert_frame2(fr, ep.x_b, ep.y_b);
    ep.p_a = dp.p0;
    ep.p_b = dp.p0;
    for (size_t k = 0; k < ep.p_a.size(); ++k) {
        ep.p_a[k] += ia.delta[k];
        ep.p_b[k] += ib.delta[k];
    }
    ep.null_basis = ia.null_basis;
    return ep;
}

BranchLocus branch_locus(const CouplingData& cd, const DiabolicPoint& dp,
                         const PerturbationScalars& ps, const Window2& win) {
    if (cd.f11.size() != 2)
        throw DimensionMismatch("branch locus is defined for two-parameter families");
    const UnfoldingFrame2 fr = frame2(cd, dp, RealVector(2, 0.0));
    const ClassificationReport rep = classify(ps);

    const double strength = std::hypot(rep.im_xi, rep.im_eta);
    if (strength <= 1e-14 * std::max(ps.epsilon_norm, DBL_MIN))
        throw DegenerateLine("branch locus undefined: vanishing imaginary couplings");

    // Im c / 2 = im_xi (x + Re xi) + im_eta (y + Re eta) - Re zeta Im zeta
    // is an affine form w . delta - rhs in the parameters.
    RealVector w(2);
    for (int k = 0; k < 2; ++k)
        w[k] = rep.im_xi * fr.g_x[k] + rep.im_eta * fr.g_y[k];
    const double rhs = ps.zeta.real() * ps.zeta.imag() - rep.im_xi * ps.xi.real() -
                       rep.im_eta * ps.eta.real();
    const double wn = rnorm(w);
    const double gscale = std::max({rnorm(fr.g_x), rnorm(fr.g_y), DBL_MIN});
    if (wn <= 1e-14 * strength * gscale)
        throw DegenerateLine("branch locus undefined: degenerate line normal");

    BranchLocus bl;
    bl.regime = rep.regime;
    bl.point = axpy(dp.p0, rhs / (wn * wn), w);
    bl.direction = {-w[1] / wn, w[0] / wn};

    auto line_param = [&](const RealVector& p) {
        RealVector d(2);
        for (int k = 0; k < 2; ++k)
            d[k] = p[k] - bl.point[k];
        return dot(d, bl.direction);
    };

    switch (rep.regime) {
    case Regime::AbsorptionDominated: {
        const ExceptionalPair ep = exceptional_points(cd, dp, ps);
        bl.kind = LocusKind::SegmentAndRays;
        bl.t_a = line_param(ep.p_a);
        bl.t_b = line_param(ep.p_b);
        if (bl.t_a > bl.t_b)
            std::swap(bl.t_a, bl.t_b);
        break;
    }
    case Regime::Degenerate: {
        bl.kind = LocusKind::SinglePoint;
        const double s = strength * strength;
        const double xm = rep.im_xi * ps.zeta.real() * ps.zeta.imag() / s - ps.xi.real();
        const double ym = rep.im_eta * ps.zeta.real() * ps.zeta.imag() / s - ps.eta.real();
        const FrameInversion im = invert_frame2(fr, xm, ym);
        bl.t_a = bl.t_b = line_param(axpy(dp.p0, 1.0, im.delta));
        break;
    }
    case Regime::ChiralityDominated:
        bl.kind = LocusKind::WholeLine;
        break;
    }

    // Clip the line against the axis-aligned window.
    double tlo = -std::numeric_limits<double>::infinity();
    double thi = std::numeric_limits<double>::infinity();
    bool ok = win.center.size() == 2;
    for (int i = 0; ok && i < 2; ++i) {
        const double lo = win.center[i] - win.half_width - bl.point[i];
        const double hi = win.center[i] + win.half_width - bl.point[i];
        if (std::abs(bl.direction[i]) < DBL_MIN) {
            if (lo > 0.0 || hi < 0.0)
                ok = false;
        } else {
            double t1 = lo / bl.direction[i];
            double t2 = hi / bl.direction[i];
            if (t1 > t2)
                std::swap(t1, t2);
            tlo = std::max(tlo, t1);
            thi = std::min(thi, t2);
        }
    }
    bl.intersects_window = ok && tlo <= thi;
    if (bl.intersects_window) {
        bl.t_enter = tlo;
        bl.t_exit = thi;
    }
    return bl;
}

RealPerturbationSurface::RealPerturbationSurface(const CouplingData& cd, const DiabolicPoint& dp,
                                                 const PerturbationScalars& ps)
    : base_(frame2(cd, dp, RealVector(cd.f11.size(), 0.0))), p0_(dp.p0) {
    const double lim = 1e-14 * std::max(1.0, ps.epsilon_norm);
    if (std::max({std::abs(ps.mu.imag()), std::abs(ps.xi.imag()), std::abs(ps.eta.imag()),
                  std::abs(ps.zeta.imag())}) > lim)
        throw RealnessViolated("real-perturbation geometry requires real scalars");
    mu_ = ps.mu.real();
    xi_ = ps.xi.real();
    eta_ = ps.eta.real();
    zeta_ = ps.zeta.real();
    c_tol_ = 1e-10 * std::max(ps.epsilon_norm * ps.epsilon_norm, DBL_MIN);
}

RealSheetSample RealPerturbationSurface::at(const RealVector& delta) const {
    const double x = base_.x_at(delta);
    const double y = base_.y_at(delta);
    const double u = x + xi_;
    const double v = y + eta_;
    const double c = u * u + v * v - zeta_ * zeta_;
    const double level = base_.lambda0_prime_at(delta) + mu_;

    RealSheetSample s;
    s.c = c;
    if (c > c_tol_) {
        s.region = ConicRegion::Outside;
        const double r = std::sqrt(c);
        s.re_plus = level + r;
        s.re_minus = level - r;
        s.im_plus = s.im_minus = 0.0;
    } else if (c < -c_tol_) {
        s.region = ConicRegion::Inside;
        s.re_plus = s.re_minus = level;
        const double r = std::sqrt(-c);
        s.im_plus = r;
        s.im_minus = -r;
    } else {
        s.region = ConicRegion::OnRing;
        s.re_plus = s.re_minus = level;
        s.im_plus = s.im_minus = 0.0;
    }
    return s;
}

RealVector RealPerturbationSurface::ring_param_point(double angle) const {
    const double r = ring_radius();
    const double x = ring_center_x() + r * std::cos(angle);
    const double y = ring_center_y() + r * std::sin(angle);
    const FrameInversion inv = invert_frame2(base_, x, y);
    RealVector p = p0_;
    for (size_t k = 0; k < p.size(); ++k)
        p[k] += inv.delta[k];
    return p;
}

} // namespace diabolo
