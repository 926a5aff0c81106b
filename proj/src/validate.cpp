#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>

#include "diabolo/commands.hpp"

namespace diabolo {

namespace {

std::string fmtg(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// One line per check; warnings do not fail the run.
struct CheckLog {
    std::ostream& out;
    int failures = 0;
    int warnings = 0;

    void pass(const std::string& name, const std::string& detail = "") {
        out << "[PASS] " << name;
        if (!detail.empty()) out << "  (" << detail << ")";
        out << "\n";
    }
    void fail(const std::string& name, const std::string& detail = "") {
        ++failures;
        out << "[FAIL] " << name;
        if (!detail.empty()) out << "  (" << detail << ")";
        out << "\n";
    }
    void warn(const std::string& name, const std::string& detail = "") {
        ++warnings;
        out << "[WARN] " << name;
        if (!detail.empty()) out << "  (" << detail << ")";
        out << "\n";
    }
    void skip(const std::string& name, const std::string& detail = "") {
        out << "[SKIP] " << name;
        if (!detail.empty()) out << "  (" << detail << ")";
        out << "\n";
    }
    void check(bool ok, const std::string& name, const std::string& detail = "") {
        ok ? pass(name, detail) : fail(name, detail);
    }
};

double unit_draw(std::mt19937_64& rng) {
    return ((rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
}

ComplexMatrix draw_complex3(std::mt19937_64& rng, double scale) {
    ComplexMatrix g(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g(i, j) = Complex(scale * unit_draw(rng), scale * unit_draw(rng));
    return g;
}

// Least-squares slope of log(err) against log(h): the observed convergence
// order of err ~ h^q.
double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
    const size_t n = h.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(std::max(err[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double pair_gap(const std::pair<Complex, Complex>& ref, const std::pair<Complex, Complex>& cand) {
    const auto m = min_distance_match(ref, cand);
    return std::max(std::abs(ref.first - m.first), std::abs(ref.second - m.second));
}

// Orthogonal gauge change of the doublet basis: rotation by theta, optional
// sign flip of the second vector.
DiabolicPoint regauge(const DiabolicPoint& dp, double theta, bool flip) {
    DiabolicPoint g = dp;
    const double c = std::cos(theta), s = std::sin(theta);
    const double f = flip ? -1.0 : 1.0;
    for (size_t i = 0; i < dp.u1.size(); ++i) {
        g.u1[i] = c * dp.u1[i] + s * dp.u2[i];
        g.u2[i] = f * (-s * dp.u1[i] + c * dp.u2[i]);
    }
    return g;
}

// The coupling vectors of the regauged doublet, exactly (f_ij is bilinear in
// the basis, so the transform is a fixed real combination and adds no
// finite-difference noise to the invariance check).
CouplingData regauge_coupling(const CouplingData& cd, double theta, bool flip) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double f = flip ? -1.0 : 1.0;
    const size_t n = cd.f11.size();
    CouplingData g;
    g.f11.resize(n);
    g.f22.resize(n);
    g.f12.resize(n);
    g.f21.resize(n);
    for (size_t k = 0; k < n; ++k) {
        g.f11[k] = c * c * cd.f11[k] + c * s * (cd.f12[k] + cd.f21[k]) + s * s * cd.f22[k];
        g.f22[k] = s * s * cd.f11[k] - c * s * (cd.f12[k] + cd.f21[k]) + c * c * cd.f22[k];
        g.f12[k] = f * (-c * s * cd.f11[k] + c * c * cd.f12[k] - s * s * cd.f21[k] +
                        c * s * cd.f22[k]);
        g.f21[k] = f * (-c * s * cd.f11[k] - s * s * cd.f12[k] + c * c * cd.f21[k] +
                        c * s * cd.f22[k]);
    }
    return g;
}

bool is_reference_model(const RunConfig& cfg) {
    if (cfg.scale != 1.0) return false;
    if (cfg.eta != std::array<double, 3>{0.5, 0.4, 0.1}) return false;
    const double d[3][3] = {{3, 2, 0}, {2, 3, 1}, {0, 1, 3}};
    const double g[3][3] = {{3, 1, 2}, {1, 3, 1}, {2, 1, 3}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (cfg.dichroic[i][j] != d[i][j] / 200.0) return false;
            if (cfg.gamma[i][j] != Complex(g[i][j] / 200.0, 0.0)) return false;
        }
    return true;
}

} // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    CheckLog log{out};
    const ToleranceSpec& tol = cfg.tolerances;

    out << "validation run (perturbation scale t = " << cfg.scale << ")\n";

    // -- construction-time invariants ---------------------------------------
    std::optional<DielectricModel> base, scaled;
    try {
        base.emplace(cfg.base_model());
        scaled.emplace(cfg.model());
        log.pass("model construction: perturbation tensors symmetric");
    } catch (const InvalidTensor& e) {
        log.fail("model construction", e.what());
        out << "cannot continue without a valid model\n";
        return 1;
    }

    std::array<OpticAxis, 4> axes;
    try {
        axes = optic_axes(*base);
        log.pass("transparent background is biaxial");
    } catch (const NotBiaxial& e) {
        log.fail("transparent background is biaxial", e.what());
        out << "cannot continue without optic axes\n";
        return 1;
    }

    // -- doublet structure at every axis ------------------------------------
    {
        bool ok = true;
        for (const OpticAxis& ax : axes) {
            const MatrixFamily fam =
                direction_family(*base, ProjectedPart::Transparent, ax.s0.hemisphere());
            ok = ok && verify_diabolic(fam, axis_diabolic_point(ax), 1e-10);
        }
        log.check(ok, "optic axes carry orthonormal doublets of the transparent problem");
    }

    // antipodal axes see the same projected matrix, so their discriminants
    // must agree exactly
    {
        const auto table = classify_crystal(*scaled);
        const bool ok = table[0].report.discriminant == table[3].report.discriminant &&
                        table[1].report.discriminant == table[2].report.discriminant;
        log.check(ok, "antipodal axes share discriminants bitwise");
    }

    const OpticAxis ax = optic_axis(*base, cfg.grid.axis);
    const DiabolicPoint dp = axis_diabolic_point(ax);
    const CouplingData cd = axis_coupling(*base, ax);
    const PerturbationScalars ps = axis_perturbation(*scaled, ax);
    const MatrixFamily fam_t =
        direction_family(*base, ProjectedPart::Transparent, ax.s0.hemisphere());

    // -- closed forms against the generic machinery -------------------------
    {
        const CouplingData generic = coupling_vectors(fam_t, dp);
        double worst = 0.0;
        for (int k = 0; k < 2; ++k) {
            worst = std::max(worst, std::abs(cd.f11[k] - generic.f11[k]));
            worst = std::max(worst, std::abs(cd.f22[k] - generic.f22[k]));
            worst = std::max(worst, std::abs(cd.f12[k] - generic.f12[k]));
            worst = std::max(worst, std::abs(cd.f21[k] - generic.f21[k]));
        }
        log.check(worst <= tol.closure, "closed-form coupling matches finite differences",
                  "max diff = " + fmtg(worst));
    }
    {
        const ComplexMatrix pert =
            projected_matrix(*scaled, ax.s0, ProjectedPart::Perturbation);
        const PerturbationScalars generic = perturbation_scalars(pert, dp);
        double worst = std::abs(ps.eps11 - generic.eps11);
        worst = std::max(worst, std::abs(ps.eps22 - generic.eps22));
        worst = std::max(worst, std::abs(ps.eps12 - generic.eps12));
        worst = std::max(worst, std::abs(ps.eps21 - generic.eps21));
        const double bound = tol.closure * std::max(1.0, generic.epsilon_norm);
        log.check(worst <= bound, "closed-form perturbation scalars match the projection",
                  "max diff = " + fmtg(worst));
    }

    // -- oracle equivalence of the reduced problem --------------------------
    {
        std::mt19937_64 rng(0x0face5u);
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const ComplexMatrix da = draw_complex3(rng, 1e-2);
            const PerturbationScalars rps = perturbation_scalars(da, dp);
            const auto asym =
                perturbed_eigenvalues(cd, dp, rps, RealVector(dp.p0.size(), 0.0));
            ComplexMatrix red(2);
            red(0, 0) = dp.lambda0 + rps.eps11;
            red(0, 1) = rps.eps21;
            red(1, 0) = rps.eps12;
            red(1, 1) = dp.lambda0 + rps.eps22;
            const auto eig = eig_exact(red, SymmetryClass::General);
            worst = std::max(worst, pair_gap(asym, {eig.values[0], eig.values[1]}));
        }
        log.check(worst <= tol.oracle_eq,
                  "reduced eigenvalues equal the exact 2x2 oracle over 200 draws",
                  "max diff = " + fmtg(worst));
    }

    // -- gauge invariance ----------------------------------------------------
    {
        const ClassificationReport rep = classify(ps);
        const RealVector probe = {3e-3, -2e-3};
        const Complex c_ref = c_complex(frame2(cd, dp, probe), ps);

        double drift = 0.0;
        std::mt19937_64 rng(0x9a09eu);
        const ComplexMatrix pert =
            projected_matrix(*scaled, ax.s0, ProjectedPart::Perturbation);
        for (int variant = 0; variant < 2; ++variant) {
            const double theta = (variant == 0) ? 0.0 : 3.1 * unit_draw(rng);
            const bool flip = variant == 0;
            const DiabolicPoint gdp = regauge(dp, theta, flip);
            const CouplingData gcd = regauge_coupling(cd, theta, flip);
            const PerturbationScalars gps = perturbation_scalars(pert, gdp);
            drift = std::max(drift,
                             std::abs(classify(gps).discriminant - rep.discriminant));
            const Complex c_g = c_complex(frame2(gcd, gdp, probe), gps);
            drift = std::max(drift, std::abs(std::abs(c_g.imag()) - std::abs(c_ref.imag())));
            drift = std::max(drift, std::abs(c_g.real() - c_ref.real()));
            if (rep.regime == Regime::AbsorptionDominated) {
                const ExceptionalPair ep = exceptional_points(cd, dp, ps);
                const ExceptionalPair gep = exceptional_points(gcd, gdp, gps);
                const std::pair<Complex, Complex> p_ref{{ep.p_a[0], ep.p_a[1]},
                                                        {ep.p_b[0], ep.p_b[1]}};
                const std::pair<Complex, Complex> p_g{{gep.p_a[0], gep.p_a[1]},
                                                      {gep.p_b[0], gep.p_b[1]}};
                drift = std::max(drift, pair_gap(p_ref, p_g));
            }
        }
        log.check(drift <= tol.gauge,
                  "D, exceptional points and |Im c| are doublet-gauge invariant",
                  "max drift = " + fmtg(drift));
    }

    // -- convergence orders ---------------------------------------------------
    const bool large_t = cfg.scale > 1.0;
    auto order_check = [&](bool ok, const std::string& name, double order, double want) {
        const std::string detail =
            "fitted order = " + fmtg(order) + ", required >= " + fmtg(want);
        if (ok)
            log.pass(name, detail);
        else if (large_t)
            log.warn(name + " [out of asymptotic regime at t > 1]", detail);
        else
            log.fail(name, detail);
    };

    {
        // unperturbed cone: first-order splitting against the exact projected
        // transparent problem along shrinking rays
        const std::vector<double> radii = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
        std::vector<double> errs;
        for (double r : radii) {
            double worst = 0.0;
            for (int k = 0; k < 8; ++k) {
                const double phi = 0.3 + 2.0 * M_PI * k / 8.0;
                const RealVector delta = {r * std::cos(phi), r * std::sin(phi)};
                const auto asym = split_eigenvalues(cd, dp, delta);
                const double s1 = dp.p0[0] + delta[0], s2 = dp.p0[1] + delta[1];
                const Direction dir(
                    s1, s2, ax.s0.hemisphere() * std::sqrt(1.0 - s1 * s1 - s2 * s2));
                const auto exact = two_nonzero_eigs_trace(
                    projected_matrix(*base, dir, ProjectedPart::Transparent));
                worst = std::max(worst, pair_gap(exact, asym));
            }
            errs.push_back(worst);
        }
        const double order = fit_order(radii, errs);
        order_check(order >= tol.cone_order, "unperturbed cone converges at second order",
                    order, tol.cone_order);
    }

    {
        // joint scaling: radius and perturbation strength shrink together
        std::vector<double> hs, errs;
        for (int k = 0; k < 4; ++k) {
            const double shrink = std::pow(0.5, k);
            const double r = 1e-2 * shrink;
            const DielectricModel mk = base->scaled(cfg.scale * shrink);
            const PerturbationScalars psk = axis_perturbation(mk, ax);
            double worst = 0.0;
            for (int d = 0; d < 8; ++d) {
                const double phi = 0.7 + 2.0 * M_PI * d / 8.0;
                const RealVector delta = {r * std::cos(phi), r * std::sin(phi)};
                const auto asym = perturbed_eigenvalues(cd, dp, psk, delta);
                const double s1 = dp.p0[0] + delta[0], s2 = dp.p0[1] + delta[1];
                const Direction dir(
                    s1, s2, ax.s0.hemisphere() * std::sqrt(1.0 - s1 * s1 - s2 * s2));
                const auto exact = two_nonzero_eigs_trace(
                    projected_matrix(mk, dir, ProjectedPart::Full));
                worst = std::max(worst, pair_gap(exact, asym));
            }
            hs.push_back(shrink);
            errs.push_back(worst);
        }
        const double order = fit_order(hs, errs);
        order_check(order >= tol.joint_order,
                    "joint (window, perturbation) scaling converges", order,
                    tol.joint_order);
    }

    // -- quoted constants of the shipped example -----------------------------
    if (is_reference_model(cfg)) {
        const double s3 = std::sqrt(3.0);
        const OpticAxis left = optic_axis(*base, AxisBranch::MP);
        const OpticAxis right = optic_axis(*base, AxisBranch::PP);

        const double d_left = classify(axis_perturbation(*scaled, left)).discriminant;
        const double d_right = classify(axis_perturbation(*scaled, right)).discriminant;
        const double d_left_ref = 7.0 * (4.0 * s3 - 5.0) / 160000.0;
        const double d_right_ref = -7.0 * (4.0 * s3 + 5.0) / 160000.0;
        log.check(std::abs(d_left - d_left_ref) <= 1e-13 * std::abs(d_left_ref) &&
                      std::abs(d_right - d_right_ref) <= 1e-13 * std::abs(d_right_ref),
                  "reference discriminants match the quoted closed forms",
                  "D(-+) = " + fmtg(d_left) + ", D(++) = " + fmtg(d_right));

        const SingularAxes sa = singular_axes(*scaled, left);
        const double root = std::sqrt(28.0 * s3 - 35.0) / 80.0;
        const double worst = std::max(
            std::max(std::abs(sa.pair.p_a[0] - (-0.5 - root)), std::abs(sa.pair.p_a[1])),
            std::max(std::abs(sa.pair.p_b[0] - (-0.5 + root)), std::abs(sa.pair.p_b[1])));
        log.check(worst <= 1e-12, "reference singular axes match the quoted positions",
                  "max diff = " + fmtg(worst));
    } else {
        log.skip("reference-model constants", "model differs from the shipped example");
    }

    // -- surface spot check ---------------------------------------------------
    {
        RunConfig probe = cfg;
        probe.grid.resolution = 21;
        const SurfaceResult sr = compute_surface(probe);
        bool finite = true;
        for (const SurfaceRow& row : sr.rows)
            for (double v : row) finite = finite && std::isfinite(v);
        log.check(finite && !sr.rows.empty(), "surface grid evaluates to finite values",
                  "21x21 window, max |asym - exact| = " + fmtg(sr.max_abs_err));
    }

    out << (log.failures ? "FAILED" : "OK") << ": " << log.failures << " failure(s), "
        << log.warnings << " warning(s)\n";
    return log.failures ? 1 : 0;
}

} // namespace diabolo
