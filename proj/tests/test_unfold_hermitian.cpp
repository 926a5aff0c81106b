#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diabolo/unfold_hermitian.hpp"
#include "helpers.hpp"

using namespace diabolo;

namespace {

RealVector to_delta(const std::array<double, 3>& r, const UnfoldingFrame3& fr) {
    return invert_frame3(fr, r[0], r[1], r[2]).delta;
}

} // namespace

TEST_CASE("frame linear forms reproduce the coupling pairings") {
    std::mt19937_64 rng(60);
    const auto [fam, dp] = testutil::make_dp_family(4, 3, true, rng);
    const CouplingData cd = coupling_vectors(fam, dp);

    for (int iter = 0; iter < 10; ++iter) {
        RealVector delta(3);
        for (double& d : delta)
            d = testutil::uniform(rng, -0.1, 0.1);
        const UnfoldingFrame3 fr = frame3(cd, dp, delta);

        const Complex det = 0.5 * (pair_with(cd.f11, delta) - pair_with(cd.f22, delta));
        const Complex off = pair_with(cd.f12, delta);
        CHECK(fr.x == doctest::Approx(det.real()).epsilon(1e-13));
        CHECK(fr.y == doctest::Approx(off.real()).epsilon(1e-13));
        CHECK(fr.z == doctest::Approx(off.imag()).epsilon(1e-13));
        const Complex sum = 0.5 * (pair_with(cd.f11, delta) + pair_with(cd.f22, delta));
        CHECK(fr.lambda0_prime == doctest::Approx(dp.lambda0 + sum.real()).epsilon(1e-13));
    }

    SUBCASE("non-Hermitian coupling is rejected") {
        CouplingData bad = cd;
        bad.f21[0] = bad.f21[0] + Complex(0.0, 0.5);
        CHECK_THROWS_AS(frame3(bad, dp, RealVector(3, 0.0)), ClassMismatch);
    }
}

TEST_CASE("expanded c agrees with the product form") {
    std::mt19937_64 rng(61);
    const auto [fam, dp] = testutil::make_dp_family(5, 3, true, rng);
    const CouplingData cd = coupling_vectors(fam, dp);

    for (int iter = 0; iter < 30; ++iter) {
        const PerturbationScalars ps =
            perturbation_scalars(testutil::random_complex(5, rng, 0.05), dp);
        RealVector delta(3);
        for (double& d : delta)
            d = testutil::uniform(rng, -0.1, 0.1);
        const UnfoldingFrame3 fr = frame3(cd, dp, delta);
        const Complex cc = c_hermitian(fr, ps);
        const CParts cp = c_parts3(fr, ps);
        const double sc = std::max(1.0, std::abs(cc));
        CHECK(std::abs(cp.re_c - cc.real()) < 1e-14 * sc);
        CHECK(std::abs(cp.im_c - cc.imag()) < 1e-14 * sc);
    }
}

TEST_CASE("frame eigenvalues match the generic doublet reduction") {
    std::mt19937_64 rng(62);
    const auto [fam, dp] = testutil::make_dp_family(4, 3, true, rng);
    const CouplingData cd = coupling_vectors(fam, dp);

    for (int iter = 0; iter < 30; ++iter) {
        const PerturbationScalars ps =
            perturbation_scalars(testutil::random_complex(4, rng, 0.03), dp);
        RealVector delta(3);
        for (double& d : delta)
            d = testutil::uniform(rng, -0.05, 0.05);
        const auto ref = perturbed_eigenvalues(cd, dp, ps, delta);
        const auto got = lambda_pair3(frame3(cd, dp, delta), ps);
        CHECK(testutil::max_pair_error(ref, got) < 1e-13);
    }
}

TEST_CASE("exceptional ring geometry") {
    std::mt19937_64 rng(63);
    const auto [fam, dp] = testutil::make_dp_family(4, 3, true, rng);
    (void)fam;

    for (int iter = 0; iter < 20; ++iter) {
        const PerturbationScalars ps =
            perturbation_scalars(testutil::random_complex(4, rng, 0.05), dp);
        const ExceptionalRing ring = exceptional_ring(ps);

        CHECK(ring.center[0] == doctest::Approx(-ps.xi.real()).epsilon(1e-14));
        CHECK(ring.center[1] == doctest::Approx(-ps.eta.real()).epsilon(1e-14));
        CHECK(ring.center[2] == doctest::Approx(-ps.zeta.imag()).epsilon(1e-14));

        const double ixi = ps.xi.imag(), ieta = ps.eta.imag(), rzeta = ps.zeta.real();
        CHECK(ring.radius ==
              doctest::Approx(std::sqrt(ixi * ixi + ieta * ieta + rzeta * rzeta)).epsilon(1e-13));

        double nn = 0.0, ndotr = 0.0;
        const double nr[3] = {ixi, ieta, -rzeta};
        for (int i = 0; i < 3; ++i) {
            nn += ring.normal[i] * ring.normal[i];
            ndotr += ring.normal[i] * nr[i];
        }
        CHECK(nn == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(ndotr == doctest::Approx(ring.radius).epsilon(1e-13));
    }

    SUBCASE("hermitian perturbations have no ring") {
        const PerturbationScalars ps =
            perturbation_scalars(testutil::random_hermitian(4, rng, 0.05), dp);
        CHECK_THROWS_AS(exceptional_ring(ps), DegenerateRing);
    }
}

TEST_CASE("the eigenvalue sheets coalesce on the ring") {
    std::mt19937_64 rng(64);
    for (int rep = 0; rep < 5; ++rep) {
        const auto [fam, dp] = testutil::make_dp_family(4, 3, true, rng);
        const CouplingData cd = coupling_vectors(fam, dp);
        const UnfoldingFrame3 fr0 = frame3(cd, dp, RealVector(3, 0.0));
        const PerturbationScalars ps =
            perturbation_scalars(testutil::random_complex(4, rng, 0.05), dp);

        const ExceptionalRing ring = exceptional_ring(ps);
        const auto pts = ring_points(ring, 16);
        REQUIRE(pts.size() == 16);
        for (const auto& r : pts) {
            // each point sits on the sphere and on the plane
            double rad2 = 0.0, plane = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double d = r[i] - ring.center[i];
                rad2 += d * d;
                plane += d * ring.normal[i];
            }
            CHECK(rad2 == doctest::Approx(ring.radius * ring.radius).epsilon(1e-12));
            CHECK(std::abs(plane) < 1e-14 * std::max(1.0, ring.radius));

            const RealVector delta = to_delta(r, fr0);
            const UnfoldingFrame3 fr = frame3(cd, dp, delta);
            CHECK(std::abs(c_hermitian(fr, ps)) <
                  1e-12 * std::max(ps.epsilon_norm * ps.epsilon_norm, 1e-30));
            const auto lam = lambda_pair3(fr, ps);
            CHECK(std::abs(lam.first - lam.second) < 5e-7);
        }
    }
}

TEST_CASE("ring plane partition against the eigenvalue pattern") {
    std::mt19937_64 rng(65);
    const auto [fam, dp] = testutil::make_dp_family(4, 3, true, rng);
    const CouplingData cd = coupling_vectors(fam, dp);
    const UnfoldingFrame3 fr0 = frame3(cd, dp, RealVector(3, 0.0));
    const PerturbationScalars ps = perturbation_scalars(testutil::random_complex(4, rng, 0.05), dp);
    const ExceptionalRing ring = exceptional_ring(ps);

    // orthonormal basis of the ring plane, from the sampled points
    const auto pts = ring_points(ring, 4);
    std::array<double, 3> e1{}, e2{};
    for (int i = 0; i < 3; ++i) {
        e1[i] = (pts[0][i] - ring.center[i]) / ring.radius;
        e2[i] = (pts[1][i] - ring.center[i]) / ring.radius;
    }

    auto sample = [&](double rho, double angle) {
        std::array<double, 3> r{};
        for (int i = 0; i < 3; ++i)
            r[i] = ring.center[i] +
                   rho * (std::cos(angle) * e1[i] + std::sin(angle) * e2[i]);
        return frame3(cd, dp, to_delta(r, fr0));
    };

    for (int k = 0; k < 8; ++k) {
        const double angle = 2.0 * M_PI * k / 8.0;

        const UnfoldingFrame3 in = sample(0.4 * ring.radius, angle);
        CHECK(ring_plane_partition(in, ps) == RingRegion::Inside);
        const auto lin = lambda_pair3(in, ps);
        CHECK(std::abs(lin.first.real() - lin.second.real()) < 1e-12);
        CHECK(std::abs(lin.first.imag() - lin.second.imag()) > 1e-8);

        const UnfoldingFrame3 on = sample(ring.radius, angle);
        CHECK(ring_plane_partition(on, ps) == RingRegion::OnRing);

        const UnfoldingFrame3 out = sample(1.8 * ring.radius, angle);
        CHECK(ring_plane_partition(out, ps) == RingRegion::Outside);
        const auto lout = lambda_pair3(out, ps);
        CHECK(std::abs(lout.first.imag() - lout.second.imag()) < 1e-12);
        CHECK(std::abs(lout.first.real() - lout.second.real()) > 1e-8);
    }

    SUBCASE("leaving the plane is detected") {
        std::array<double, 3> r{};
        for (int i = 0; i < 3; ++i)
            r[i] = ring.center[i] + ring.radius * (0.5 * e1[i] + 0.7 * ring.normal[i]);
        const UnfoldingFrame3 off = frame3(cd, dp, to_delta(r, fr0));
        CHECK_THROWS_AS(ring_plane_partition(off, ps), OffPlane);
    }
}

TEST_CASE("gap quartics vanish and match the actual eigenvalue gaps") {
    std::mt19937_64 rng(66);
    const auto [fam, dp] = testutil::make_dp_family(4, 3, true, rng);
    const CouplingData cd = coupling_vectors(fam, dp);

    for (int iter = 0; iter < 30; ++iter) {
        const PerturbationScalars ps =
            perturbation_scalars(testutil::random_complex(4, rng, 0.05), dp);
        RealVector delta(3);
        for (double& d : delta)
            d = testutil::uniform(rng, -0.1, 0.1);
        const UnfoldingFrame3 fr = frame3(cd, dp, delta);

        const auto [r1, r2] = gap_residuals(fr, ps);
        const double c2 = std::norm(c_hermitian(fr, ps));
        CHECK(std::abs(r1) < 1e-13 * std::max(c2, 1e-30));
        CHECK(std::abs(r2) < 1e-13 * std::max(c2, 1e-30));

        // the gaps implied by c are the actual eigenvalue gaps
        const auto lam = lambda_pair3(fr, ps);
        const double gre = std::abs(lam.first.real() - lam.second.real());
        const double gim = std::abs(lam.first.imag() - lam.second.imag());
        const double quartic_re = gre * gre * gre * gre -
                                  4.0 * gre * gre * c_hermitian(fr, ps).real() -
                                  4.0 * std::pow(c_hermitian(fr, ps).imag(), 2);
        CHECK(std::abs(quartic_re) < 1e-11 * std::max(c2, 1e-30));
        const double quartic_im = gim * gim * gim * gim +
                                  4.0 * gim * gim * c_hermitian(fr, ps).real() -
                                  4.0 * std::pow(c_hermitian(fr, ps).imag(), 2);
        CHECK(std::abs(quartic_im) < 1e-11 * std::max(c2, 1e-30));
    }
}

TEST_CASE("frame inversion in three and more parameters") {
    std::mt19937_64 rng(67);

    SUBCASE("three parameters: exact round trip") {
        const auto [fam, dp] = testutil::make_dp_family(4, 3, true, rng);
        const CouplingData cd = coupling_vectors(fam, dp);
        const UnfoldingFrame3 fr = frame3(cd, dp, RealVector(3, 0.0));
        const FrameInversion3 inv = invert_frame3(fr, 0.01, -0.02, 0.015);
        CHECK(fr.x_at(inv.delta) == doctest::Approx(0.01).epsilon(1e-11));
        CHECK(fr.y_at(inv.delta) == doctest::Approx(-0.02).epsilon(1e-11));
        CHECK(fr.z_at(inv.delta) == doctest::Approx(0.015).epsilon(1e-11));
        CHECK(inv.null_basis.empty());
        CHECK(inv.condition >= 1.0);
    }

    SUBCASE("four parameters: min-norm plus a null direction") {
        const auto [fam, dp] = testutil::make_dp_family(5, 4, true, rng);
        const CouplingData cd = coupling_vectors(fam, dp);
        const UnfoldingFrame3 fr = frame3(cd, dp, RealVector(4, 0.0));
        const FrameInversion3 inv = invert_frame3(fr, 0.01, 0.02, -0.01);
        CHECK(fr.x_at(inv.delta) == doctest::Approx(0.01).epsilon(1e-11));
        CHECK(fr.y_at(inv.delta) == doctest::Approx(0.02).epsilon(1e-11));
        CHECK(fr.z_at(inv.delta) == doctest::Approx(-0.01).epsilon(1e-11));
        REQUIRE(inv.null_basis.size() == 1);
        const RealVector& nb = inv.null_basis[0];
        CHECK(std::abs(fr.x_at(nb)) < 1e-10);
        CHECK(std::abs(fr.y_at(nb)) < 1e-10);
        CHECK(std::abs(fr.z_at(nb)) < 1e-10);
        double along = 0.0;
        for (size_t i = 0; i < nb.size(); ++i)
            along += nb[i] * inv.delta[i];
        CHECK(std::abs(along) < 1e-10);
    }

    SUBCASE("two parameters cannot resolve three coordinates") {
        const auto [fam, dp] = testutil::make_dp_family(4, 2, true, rng);
        const CouplingData cd = coupling_vectors(fam, dp);
        const UnfoldingFrame3 fr = frame3(cd, dp, RealVector(2, 0.0));
        CHECK_THROWS_AS(invert_frame3(fr, 0.01, 0.0, 0.0), SingularFrame);
    }

    SUBCASE("real-symmetric coupling leaves the z form empty") {
        const auto [fam, dp] = testutil::make_dp_family(4, 3, false, rng);
        const CouplingData cd = coupling_vectors(fam, dp);
        const UnfoldingFrame3 fr = frame3(cd, dp, RealVector(3, 0.0));
        for (double g : fr.g_z)
            CHECK(std::abs(g) < 1e-12);
        CHECK_THROWS_AS(invert_frame3(fr, 0.0, 0.0, 0.01), SingularFrame);
    }
}
