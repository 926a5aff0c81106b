#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diabolo/crystal.hpp"
#include "diabolo/unfold_symmetric.hpp"
#include "helpers.hpp"

using namespace diabolo;

namespace {

DielectricModel reference_model() {
    const std::array<double, 3> eta = {0.5, 0.4, 0.1};
    DielectricModel::RealTensor d{};
    const double dv[3][3] = {{3, 2, 0}, {2, 3, 1}, {0, 1, 3}};
    DielectricModel::ComplexTensor g{};
    const double gv[3][3] = {{3, 1, 2}, {1, 3, 1}, {2, 1, 3}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            d[i][j] = dv[i][j] / 200.0;
            g[i][j] = Complex(gv[i][j] / 200.0, 0.0);
        }
    return DielectricModel(eta, d, g);
}

struct AxisSetup {
    OpticAxis ax;
    DiabolicPoint dp;
    CouplingData cd;
    PerturbationScalars ps;
};

AxisSetup setup(const DielectricModel& m, AxisBranch b) {
    AxisSetup s;
    s.ax = optic_axis(m, b);
    s.dp = axis_diabolic_point(s.ax);
    s.cd = axis_coupling(m, s.ax);
    s.ps = axis_perturbation(m, s.ax);
    return s;
}

} // namespace

TEST_CASE("frame linear forms at the left axis") {
    const AxisSetup s = setup(reference_model(), AxisBranch::MP);
    const UnfoldingFrame2 fr = frame2(s.cd, s.dp, {0.01, -0.02});

    CHECK(fr.g_x[0] == doctest::Approx(-0.2).epsilon(1e-14));
    CHECK(fr.g_x[1] == doctest::Approx(0.0).scale(1).epsilon(1e-14));
    CHECK(fr.g_y[0] == doctest::Approx(0.0).scale(1).epsilon(1e-14));
    CHECK(fr.g_y[1] == doctest::Approx(0.1 * std::sqrt(3.0)).epsilon(1e-14));
    CHECK(fr.g_sum[0] == doctest::Approx(0.2).epsilon(1e-14));

    CHECK(fr.x == doctest::Approx(-0.2 * 0.01).epsilon(1e-13));
    CHECK(fr.y == doctest::Approx(0.1 * std::sqrt(3.0) * -0.02).epsilon(1e-13));
    CHECK(fr.lambda0_prime == doctest::Approx(0.4 + 0.2 * 0.01).epsilon(1e-14));

    // linear-form identity against the raw coupling pairing
    std::mt19937_64 rng(41);
    for (int iter = 0; iter < 5; ++iter) {
        const RealVector d = {testutil::uniform(rng, -0.1, 0.1),
                              testutil::uniform(rng, -0.1, 0.1)};
        const Complex x_direct = 0.5 * (pair_with(s.cd.f11, d) - pair_with(s.cd.f22, d));
        CHECK(fr.x_at(d) == doctest::Approx(x_direct.real()).epsilon(1e-14));
        CHECK(fr.y_at(d) == doctest::Approx(pair_with(s.cd.f12, d).real()).epsilon(1e-14));
    }
}

TEST_CASE("frame construction rejects non-real-symmetric coupling") {
    const AxisSetup s = setup(reference_model(), AxisBranch::MP);
    CouplingData bad = s.cd;
    bad.f12[0] += Complex(0.0, 0.1);
    CHECK_THROWS_AS(frame2(bad, s.dp, {0.0, 0.0}), ClassMismatch);
}

TEST_CASE("expanded c agrees with the complex product form") {
    std::mt19937_64 rng(42);
    const AxisSetup s = setup(reference_model(), AxisBranch::MP);
    for (int iter = 0; iter < 50; ++iter) {
        PerturbationScalars ps{};
        ps.xi = 0.05 * testutil::cgauss(rng);
        ps.eta = 0.05 * testutil::cgauss(rng);
        ps.zeta = 0.05 * testutil::cgauss(rng);
        ps.mu = 0.05 * testutil::cgauss(rng);
        ps.epsilon_norm = 0.1;
        const UnfoldingFrame2 fr = frame2(s.cd, s.dp, {testutil::uniform(rng, -0.1, 0.1),
                                                       testutil::uniform(rng, -0.1, 0.1)});
        const CParts cp = c_parts(fr, ps);
        const Complex cc = c_complex(fr, ps);
        const double sc = std::max(1.0, std::abs(cc));
        CHECK(std::abs(cp.re_c - cc.real()) < 1e-14 * sc);
        CHECK(std::abs(cp.im_c - cc.imag()) < 1e-14 * sc);
    }
}

TEST_CASE("golden c expansion constants at both axes") {
    const DielectricModel model = reference_model();
    const double s3 = std::sqrt(3.0);

    SUBCASE("left axis") {
        const AxisSetup s = setup(model, AxisBranch::MP);
        const UnfoldingFrame2 f0 = frame2(s.cd, s.dp, {0.0, 0.0});
        const UnfoldingFrame2 f1 = frame2(s.cd, s.dp, {1.0, 0.0});
        const UnfoldingFrame2 f2 = frame2(s.cd, s.dp, {0.0, 1.0});
        const CParts c0 = c_parts(f0, s.ps);
        const CParts c1 = c_parts(f1, s.ps);
        const CParts c2 = c_parts(f2, s.ps);

        const double const_term = (35.0 - 28.0 * s3) / 160000.0;
        CHECK(c0.re_c == doctest::Approx(const_term).epsilon(1e-13));
        CHECK(c1.re_c - c0.re_c == doctest::Approx(1.0 / 25.0).epsilon(1e-13));
        CHECK(c2.re_c - c0.re_c == doctest::Approx(3.0 / 100.0).epsilon(1e-13));
        CHECK(std::abs(c0.im_c) < 1e-16);
        CHECK(std::abs(c1.im_c) < 1e-16);  // Im xi = 0 here
        CHECK(std::abs(c2.im_c) == doctest::Approx((6.0 + s3) / 2000.0).epsilon(1e-13));
    }
    SUBCASE("right axis") {
        const AxisSetup s = setup(model, AxisBranch::PP);
        const UnfoldingFrame2 f0 = frame2(s.cd, s.dp, {0.0, 0.0});
        const UnfoldingFrame2 f2 = frame2(s.cd, s.dp, {0.0, 1.0});
        const CParts c0 = c_parts(f0, s.ps);
        const CParts c2 = c_parts(f2, s.ps);
        CHECK(c0.re_c == doctest::Approx((35.0 + 28.0 * s3) / 160000.0).epsilon(1e-13));
        CHECK(std::abs(c2.im_c) == doctest::Approx((6.0 - s3) / 2000.0).epsilon(1e-13));
    }
}

TEST_CASE("sheet samples recombine to the principal closed form") {
    std::mt19937_64 rng(43);
    const AxisSetup s = setup(reference_model(), AxisBranch::MP);
    for (int iter = 0; iter < 50; ++iter) {
        PerturbationScalars ps{};
        ps.mu = 0.02 * testutil::cgauss(rng);
        ps.xi = 0.02 * testutil::cgauss(rng);
        ps.eta = 0.02 * testutil::cgauss(rng);
        ps.zeta = 0.02 * testutil::cgauss(rng);
        ps.epsilon_norm = 0.05;
        const UnfoldingFrame2 fr = frame2(s.cd, s.dp, {testutil::uniform(rng, -0.05, 0.05),
                                                       testutil::uniform(rng, -0.05, 0.05)});
        const SheetSample sh = sheets(fr, ps);
        const Complex c(sh.re_c, sh.im_c);

        // (lambda - lambda0' - mu)^2 = c for both sheets
        const Complex dev_p = Complex(sh.re_plus, sh.im_plus) - fr.lambda0_prime - ps.mu;
        const Complex dev_m = Complex(sh.re_minus, sh.im_minus) - fr.lambda0_prime - ps.mu;
        CHECK(std::abs(dev_p * dev_p - c) < 1e-10 * std::max(1.0, std::abs(c)));
        CHECK(std::abs(dev_m * dev_m - c) < 1e-10 * std::max(1.0, std::abs(c)));

        // and the plus sheet carries the principal root
        const Complex lam_p = Complex(fr.lambda0_prime, 0.0) + ps.mu + std::sqrt(c);
        CHECK(std::abs(dev_p - std::sqrt(c)) < 1e-13 * std::max(1.0, std::abs(lam_p)));
    }
}

TEST_CASE("sheet sign pairing flips with the sign of Im c") {
    const AxisSetup s = setup(reference_model(), AxisBranch::MP);
    PerturbationScalars ps{};
    ps.xi = Complex(0.0, 0.01);
    ps.epsilon_norm = 0.01;

    // x > 0 gives Im c > 0, x < 0 gives Im c < 0
    const FrameInversion up = invert_frame2(frame2(s.cd, s.dp, {0.0, 0.0}), 0.05, 0.0);
    const SheetSample pos = sheets(frame2(s.cd, s.dp, up.delta), ps);
    CHECK(pos.im_c > 0.0);
    CHECK(pos.im_plus > pos.im_minus);

    const FrameInversion dn = invert_frame2(frame2(s.cd, s.dp, {0.0, 0.0}), -0.05, 0.0);
    const SheetSample neg = sheets(frame2(s.cd, s.dp, dn.delta), ps);
    CHECK(neg.im_c < 0.0);
    CHECK(neg.im_plus < neg.im_minus);
    CHECK(neg.re_plus > neg.re_minus);
}

TEST_CASE("near-intersection approximation and its guard") {
    const AxisSetup s = setup(reference_model(), AxisBranch::MP);

    // inside the segment (Re c < 0): approximates the real sheets
    const UnfoldingFrame2 fr0 = frame2(s.cd, s.dp, {0.0, 1e-4});
    const SheetSample exact = sheets(fr0, s.ps);
    const IntersectionApprox ap = sheet_approx_near_intersection(fr0, s.ps);
    CHECK(ap.real_branch);
    CHECK(testutil::max_pair_error({Complex(exact.re_plus, 0), Complex(exact.re_minus, 0)},
                                   {Complex(ap.plus_val, 0), Complex(ap.minus_val, 0)}) < 1e-9);

    // far along the line (Re c > 0): approximates the imaginary sheets
    const UnfoldingFrame2 fr1 = frame2(s.cd, s.dp, {0.15, 1e-4});
    const SheetSample exact1 = sheets(fr1, s.ps);
    const IntersectionApprox ap1 = sheet_approx_near_intersection(fr1, s.ps);
    CHECK(!ap1.real_branch);
    CHECK(testutil::max_pair_error({Complex(exact1.im_plus, 0), Complex(exact1.im_minus, 0)},
                                   {Complex(ap1.plus_val, 0), Complex(ap1.minus_val, 0)}) < 1e-9);

    // guard: Re c ~ 0 close to the exceptional point
    PerturbationScalars tiny{};
    tiny.epsilon_norm = 1e-6;
    const UnfoldingFrame2 frz = frame2(s.cd, s.dp, {0.0, 0.0});
    CHECK_THROWS_AS(sheet_approx_near_intersection(frz, tiny), NearZeroRec);
}

TEST_CASE("regime classification") {
    const DielectricModel model = reference_model();
    const std::array<double, 3> eta = {0.5, 0.4, 0.1};

    SUBCASE("reference model: absorption wins on the left axis, chirality on the right") {
        CHECK(classify(setup(model, AxisBranch::MP).ps).regime == Regime::AbsorptionDominated);
        CHECK(classify(setup(model, AxisBranch::PP).ps).regime == Regime::ChiralityDominated);
    }
    SUBCASE("pure dichroism is absorption-dominated at both axes") {
        const DielectricModel dich(eta, model.dichroic(), DielectricModel::ComplexTensor{});
        CHECK(classify(setup(dich, AxisBranch::MP).ps).regime == Regime::AbsorptionDominated);
        CHECK(classify(setup(dich, AxisBranch::PP).ps).regime == Regime::AbsorptionDominated);
    }
    SUBCASE("pure chirality is chirality-dominated at both axes") {
        const DielectricModel chir(eta, DielectricModel::RealTensor{}, model.gamma());
        const ClassificationReport r = classify(setup(chir, AxisBranch::MP).ps);
        CHECK(r.regime == Regime::ChiralityDominated);
        CHECK(r.discriminant == doctest::Approx(-r.im_zeta * r.im_zeta).epsilon(1e-13));
    }
    SUBCASE("hermitian perturbations never dominate through absorption") {
        std::mt19937_64 rng(44);
        const auto [fam, dp] = testutil::make_dp_family(4, 2, false, rng);
        (void)fam;
        for (int iter = 0; iter < 20; ++iter) {
            const ClassificationReport r =
                classify(perturbation_scalars(testutil::random_hermitian(4, rng, 0.04), dp));
            CHECK(r.regime != Regime::AbsorptionDominated);
            CHECK(r.discriminant <= 1e-25);
        }
    }
    SUBCASE("real symmetric perturbations are degenerate") {
        std::mt19937_64 rng(45);
        const auto [fam, dp] = testutil::make_dp_family(4, 2, false, rng);
        (void)fam;
        const ClassificationReport r =
            classify(perturbation_scalars(testutil::random_real_symmetric(4, rng, 0.04), dp));
        CHECK(r.regime == Regime::Degenerate);
    }
}

TEST_CASE("exceptional points: golden positions and defining properties") {
    const DielectricModel model = reference_model();
    const AxisSetup s = setup(model, AxisBranch::MP);
    const ExceptionalPair ep = exceptional_points(s.cd, s.dp, s.ps);

    const double root = std::sqrt(28.0 * std::sqrt(3.0) - 35.0) / 80.0;
    CHECK(ep.p_a[0] == doctest::Approx(-0.5 - root).epsilon(1e-12));
    CHECK(std::abs(ep.p_a[1]) < 1e-15);
    CHECK(ep.p_b[0] == doctest::Approx(-0.5 + root).epsilon(1e-12));
    CHECK(std::abs(ep.p_b[1]) < 1e-15);

    for (const RealVector& p : {ep.p_a, ep.p_b}) {
        RealVector delta = {p[0] - s.dp.p0[0], p[1] - s.dp.p0[1]};
        const UnfoldingFrame2 fr = frame2(s.cd, s.dp, delta);
        CHECK(std::abs(c_complex(fr, s.ps)) < 1e-15);

        const auto lam = perturbed_eigenvalues(s.cd, s.dp, s.ps, delta);
        CHECK(std::abs(lam.first - lam.second) < 1e-8);

        const auto vec = perturbed_eigenvectors(s.cd, s.dp, s.ps, delta);
        const double cosang =
            std::min(1.0, std::abs(inner(vec.first, vec.second)) /
                              (norm2(vec.first) * norm2(vec.second)));
        CHECK(std::acos(cosang) < 1e-6);
    }

    SUBCASE("chirality-dominated axis refuses") {
        const AxisSetup r = setup(model, AxisBranch::PP);
        CHECK_THROWS_AS(exceptional_points(r.cd, r.dp, r.ps), NegativeD);
    }
    SUBCASE("degenerate discriminant refuses") {
        PerturbationScalars deg{};
        deg.xi = Complex(0.0, 0.003);
        deg.eta = Complex(0.0, 0.004);
        deg.zeta = Complex(0.0, 0.005);
        deg.epsilon_norm = 0.01;
        CHECK_THROWS_AS(exceptional_points(s.cd, s.dp, deg), DegenerateD);
    }
}

TEST_CASE("exceptional points without antisymmetric coupling sit at (+-Im eta, -+Im xi)") {
    const AxisSetup s = setup(reference_model(), AxisBranch::MP);
    PerturbationScalars ps{};
    ps.xi = Complex(0.002, 0.003);
    ps.eta = Complex(-0.001, 0.004);
    ps.zeta = Complex(0.0, 0.0);
    ps.epsilon_norm = 0.01;
    const ExceptionalPair ep = exceptional_points(s.cd, s.dp, ps);
    CHECK(ep.x_a == doctest::Approx(0.004 - 0.002).epsilon(1e-13));
    CHECK(ep.y_a == doctest::Approx(-0.003 + 0.001).epsilon(1e-13));
    CHECK(ep.x_b == doctest::Approx(-0.004 - 0.002).epsilon(1e-13));
    CHECK(ep.y_b == doctest::Approx(0.003 + 0.001).epsilon(1e-13));
}

TEST_CASE("frame inversion") {
    SUBCASE("two parameters: exact round trip") {
        const AxisSetup s = setup(reference_model(), AxisBranch::MP);
        const UnfoldingFrame2 fr = frame2(s.cd, s.dp, {0.0, 0.0});
        const FrameInversion inv = invert_frame2(fr, 0.013, -0.021);
        CHECK(fr.x_at(inv.delta) == doctest::Approx(0.013).epsilon(1e-13));
        CHECK(fr.y_at(inv.delta) == doctest::Approx(-0.021).epsilon(1e-13));
        CHECK(inv.null_basis.empty());
        CHECK(inv.condition >= 1.0);
    }
    SUBCASE("more parameters: min-norm solution plus null space") {
        std::mt19937_64 rng(46);
        const auto [fam, dp] = testutil::make_dp_family(4, 3, false, rng);
        const CouplingData cd = coupling_vectors(fam, dp);
        const UnfoldingFrame2 fr = frame2(cd, dp, {0.0, 0.0, 0.0});
        const FrameInversion inv = invert_frame2(fr, 0.01, 0.02);
        CHECK(fr.x_at(inv.delta) == doctest::Approx(0.01).epsilon(1e-12));
        CHECK(fr.y_at(inv.delta) == doctest::Approx(0.02).epsilon(1e-12));
        REQUIRE(inv.null_basis.size() == 1);
        double along = 0.0, nsq = 0.0;
        for (size_t i = 0; i < 3; ++i) {
            along += inv.delta[i] * inv.null_basis[0][i];
            nsq += inv.null_basis[0][i] * inv.null_basis[0][i];
        }
        CHECK(std::abs(along) < 1e-12);  // min-norm => orthogonal to the null space
        CHECK(nsq == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(fr.x_at(inv.null_basis[0])) < 1e-12);
        CHECK(std::abs(fr.y_at(inv.null_basis[0])) < 1e-12);
    }
    SUBCASE("parallel forms are singular") {
        UnfoldingFrame2 fr;
        fr.g_x = {1.0, 2.0};
        fr.g_y = {2.0, 4.0};
        fr.g_sum = {0.0, 0.0};
        CHECK_THROWS_AS(invert_frame2(fr, 1.0, 0.0), SingularFrame);
    }
}

TEST_CASE("branch locus of the reference model") {
    const DielectricModel model = reference_model();

    SUBCASE("left axis: segment between the exceptional points") {
        const AxisSetup s = setup(model, AxisBranch::MP);
        Window2 win;
        win.center = {s.dp.p0[0], s.dp.p0[1]};
        win.half_width = 0.1;
        const BranchLocus bl = branch_locus(s.cd, s.dp, s.ps, win);

        CHECK(bl.kind == LocusKind::SegmentAndRays);
        CHECK(bl.regime == Regime::AbsorptionDominated);
        // the locus is the s2 = 0 line through the axis
        CHECK(std::abs(bl.point[1]) < 1e-15);
        CHECK(std::abs(bl.direction[1]) < 1e-15);
        CHECK(std::abs(std::abs(bl.direction[0]) - 1.0) < 1e-15);

        const ExceptionalPair ep = exceptional_points(s.cd, s.dp, s.ps);
        const double ta = (ep.p_a[0] - bl.point[0]) * bl.direction[0];
        const double tb = (ep.p_b[0] - bl.point[0]) * bl.direction[0];
        CHECK(bl.t_a == doctest::Approx(std::min(ta, tb)).epsilon(1e-12));
        CHECK(bl.t_b == doctest::Approx(std::max(ta, tb)).epsilon(1e-12));

        // sheet gluing: c < 0 inside the segment, c > 0 outside, Im c = 0 on it
        auto c_at_t = [&](double t) {
            RealVector delta = {bl.point[0] + t * bl.direction[0] - s.dp.p0[0],
                                bl.point[1] + t * bl.direction[1] - s.dp.p0[1]};
            return c_parts(frame2(s.cd, s.dp, delta), s.ps);
        };
        const CParts mid = c_at_t(0.5 * (bl.t_a + bl.t_b));
        CHECK(std::abs(mid.im_c) < 1e-16);
        CHECK(mid.re_c < 0.0);
        const CParts out = c_at_t(bl.t_b + (bl.t_b - bl.t_a));
        CHECK(std::abs(out.im_c) < 1e-16);
        CHECK(out.re_c > 0.0);

        CHECK(bl.intersects_window);
        CHECK(bl.t_enter == doctest::Approx(-0.1).epsilon(1e-12));
        CHECK(bl.t_exit == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(bl.t_a > bl.t_enter);
        CHECK(bl.t_b < bl.t_exit);

        Window2 far;
        far.center = {0.8, 0.8};
        far.half_width = 0.05;
        CHECK(!branch_locus(s.cd, s.dp, s.ps, far).intersects_window);
    }

    SUBCASE("right axis: whole line, no exceptional points") {
        const AxisSetup s = setup(model, AxisBranch::PP);
        Window2 win;
        win.center = {s.dp.p0[0], s.dp.p0[1]};
        win.half_width = 0.1;
        const BranchLocus bl = branch_locus(s.cd, s.dp, s.ps, win);
        CHECK(bl.kind == LocusKind::WholeLine);
        for (double t : {-0.05, 0.0, 0.08}) {
            RealVector delta = {bl.point[0] + t * bl.direction[0] - s.dp.p0[0],
                                bl.point[1] + t * bl.direction[1] - s.dp.p0[1]};
            const CParts c = c_parts(frame2(s.cd, s.dp, delta), s.ps);
            CHECK(std::abs(c.im_c) < 1e-16);
            CHECK(c.re_c > 0.0);
        }
    }

    SUBCASE("degenerate discriminant: single merged point") {
        const AxisSetup s = setup(model, AxisBranch::MP);
        PerturbationScalars deg{};
        deg.xi = Complex(0.001, 0.003);
        deg.eta = Complex(-0.002, 0.004);
        deg.zeta = Complex(0.0005, 0.005);  // 3-4-5: discriminant exactly zero
        deg.epsilon_norm = 0.01;
        Window2 win;
        win.center = {s.dp.p0[0], s.dp.p0[1]};
        win.half_width = 0.1;
        const BranchLocus bl = branch_locus(s.cd, s.dp, deg, win);
        CHECK(bl.kind == LocusKind::SinglePoint);
        CHECK(bl.t_a == bl.t_b);
        // at the merged point c vanishes
        RealVector delta = {bl.point[0] + bl.t_a * bl.direction[0] - s.dp.p0[0],
                            bl.point[1] + bl.t_a * bl.direction[1] - s.dp.p0[1]};
        CHECK(std::abs(c_complex(frame2(s.cd, s.dp, delta), deg)) < 1e-12);
    }

    SUBCASE("vanishing imaginary couplings leave no line") {
        const AxisSetup s = setup(model, AxisBranch::MP);
        PerturbationScalars flat{};
        flat.zeta = Complex(0.0, 0.01);
        flat.epsilon_norm = 0.01;
        Window2 win;
        win.center = {0.0, 0.0};
        win.half_width = 1.0;
        CHECK_THROWS_AS(branch_locus(s.cd, s.dp, flat, win), DegenerateLine);
    }
}

TEST_CASE("real perturbation geometry") {
    std::mt19937_64 rng(47);
    const auto [fam, dp] = testutil::make_dp_family(4, 2, false, rng);
    const CouplingData cd = coupling_vectors(fam, dp);

    for (int iter = 0; iter < 20; ++iter) {
        const ComplexMatrix da = testutil::random_real(4, rng, 0.05);
        const PerturbationScalars ps = perturbation_scalars(da, dp);
        const RealPerturbationSurface surf(cd, dp, ps);

        // reduced 2x2 oracle: [[t + x + xi, y + eta - zeta], [y + eta + zeta, t - x - xi]]
        auto oracle = [&](const RealVector& delta) {
            const UnfoldingFrame2 fr = frame2(cd, dp, delta);
            ComplexMatrix m(2);
            const double t = fr.lambda0_prime + ps.mu.real();
            m(0, 0) = t + fr.x + ps.xi.real();
            m(0, 1) = fr.y + ps.eta.real() - ps.zeta.real();
            m(1, 0) = fr.y + ps.eta.real() + ps.zeta.real();
            m(1, 1) = t - fr.x - ps.xi.real();
            const auto d = eig_exact(m, SymmetryClass::General);
            return std::make_pair(d.values[0], d.values[1]);
        };

        for (int k = 0; k < 20; ++k) {
            const RealVector delta = {testutil::uniform(rng, -0.1, 0.1),
                                      testutil::uniform(rng, -0.1, 0.1)};
            const RealSheetSample smp = surf.at(delta);
            const auto ex = oracle(delta);
            const double err = testutil::max_pair_error(
                {Complex(smp.re_plus, smp.im_plus), Complex(smp.re_minus, smp.im_minus)}, ex);
            if (smp.region == ConicRegion::OnRing)
                continue;
            CHECK(err < 1e-12);
            if (smp.region == ConicRegion::Inside) {
                CHECK(smp.re_plus == smp.re_minus);
                CHECK(smp.im_plus == -smp.im_minus);
                CHECK(smp.im_plus != 0.0);
            } else {
                CHECK(smp.im_plus == 0.0);
                CHECK(smp.im_minus == 0.0);
                CHECK(smp.re_plus > smp.re_minus);
            }
        }

        // on the degeneracy ring both coincidences hold
        if (surf.ring_radius() > 1e-4) {
            for (int k = 0; k < 16; ++k) {
                const RealVector p = surf.ring_param_point(2.0 * M_PI * k / 16.0);
                RealVector delta(2);
                for (int i = 0; i < 2; ++i)
                    delta[i] = p[i] - dp.p0[i];
                const RealSheetSample smp = surf.at(delta);
                CHECK(smp.region == ConicRegion::OnRing);
                CHECK(std::abs(smp.c) < 1e-10);
                const auto ex = oracle(delta);
                CHECK(std::abs(ex.first - ex.second) < 1e-7);
            }
        }
    }

    SUBCASE("complex perturbations are rejected") {
        const PerturbationScalars ps =
            perturbation_scalars(testutil::random_complex(4, rng, 0.05), dp);
        CHECK_THROWS_AS(RealPerturbationSurface(cd, dp, ps), RealnessViolated);
    }
}
