#pragma once

#include <array>
#include <vector>

#include "diabolo/perturbation.hpp"
#include "diabolo/unfold_symmetric.hpp"

namespace diabolo {

// Three-dimensional unfolding frame of a Hermitian diabolic point.  The
// doublet eigenvalues take the normal form
//   lambda_pm = lambda0' + mu +- sqrt(c),
//   c = (x + xi)^2 + (y + eta)^2 + (z - i zeta)^2,
// with three linear coordinates: the detuning x and the real/imaginary
// parts y, z of the off-diagonal coupling.
struct UnfoldingFrame3 {
    double lambda0 = 0.0;
    double lambda0_prime = 0.0;
    double x = 0.0, y = 0.0, z = 0.0;
    RealVector delta;

    // Linear forms: real parts of (f11+f22)/2, (f11-f22)/2, Re f12, Im f12.
    RealVector g_sum, g_x, g_y, g_z;

    double x_at(const RealVector& d) const;
    double y_at(const RealVector& d) const;
    double z_at(const RealVector& d) const;
    double lambda0_prime_at(const RealVector& d) const;
};

// Builds the frame; throws ClassMismatch unless the coupling is Hermitian
// (f11, f22 real and f12 = conj(f21)) to 1e-12 relative.
UnfoldingFrame3 frame3(const CouplingData& cd, const DiabolicPoint& dp, const RealVector& delta);

// c in product form and in expanded real/imaginary parts (both exposed so
// the expansion can be cross-checked against the product).
Complex c_hermitian(const UnfoldingFrame3& fr, const PerturbationScalars& ps);
CParts c_parts3(const UnfoldingFrame3& fr, const PerturbationScalars& ps);

// Doublet eigenvalues at the frame's displacement (principal branch).
std::pair<Complex, Complex> lambda_pair3(const UnfoldingFrame3& fr,
                                         const PerturbationScalars& ps);

// In the (x, y, z) unfolding space the eigenvalue coalescence set is a
// circle: the intersection of the sphere |r - center| = radius with the
// plane through the center normal to `normal`.  The normal's components
// equal (Im xi, Im eta, -Re zeta), so its length equals the radius.
struct ExceptionalRing {
    std::array<double, 3> center{};
    double radius = 0.0;
    std::array<double, 3> normal{};  // unit normal of the ring plane
};

// Throws DegenerateRing when the radius vanishes within
// 1e-14 * max(1, ||dA||).
ExceptionalRing exceptional_ring(const PerturbationScalars& ps);

// Evenly spaced points of the ring in unfolding coordinates.
std::vector<std::array<double, 3>> ring_points(const ExceptionalRing& ring, int count = 64);

// Classification of a frame's (x, y, z) against the ring, valid on the ring
// plane only: inside the ring the imaginary parts split (real parts glue);
// outside, the real parts split.  Throws OffPlane when Im c does not vanish
// at the sample.
enum class RingRegion { Inside, OnRing, Outside };

RingRegion ring_plane_partition(const UnfoldingFrame3& fr, const PerturbationScalars& ps);

// Quartic identities tying the real and imaginary eigenvalue gaps to c:
//   g_re^4 - 4 g_re^2 Re c - 4 Im^2 c = 0,
//   g_im^4 + 4 g_im^2 Re c - 4 Im^2 c = 0.
// Returns both left-hand sides evaluated with the gaps implied by c.
std::pair<double, double> gap_residuals(const UnfoldingFrame3& fr, const PerturbationScalars& ps);

// Min-norm inversion of the three linear forms; exact for three parameters.
// The condition field reports the square root of the Gram matrix condition
// number.  Throws SingularFrame when the forms do not resolve all three
// coordinates (always the case for fewer than three parameters).
struct FrameInversion3 {
    RealVector delta;
    std::vector<RealVector> null_basis;
    double condition = 0.0;
};

FrameInversion3 invert_frame3(const UnfoldingFrame3& fr, double x, double y, double z);

} // namespace diabolo
