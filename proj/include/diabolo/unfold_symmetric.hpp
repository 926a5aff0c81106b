#pragma once

#include <vector>

#include "diabolo/perturbation.hpp"

namespace diabolo {

// Two-dimensional unfolding frame of a real-symmetric diabolic point.  The
// doublet eigenvalues near the degeneracy take the normal form
//   lambda_pm = lambda0' + mu +- sqrt(c),
//   c = (x + xi)^2 + (y + eta)^2 - zeta^2,
// where x, y are linear coordinates of the parameter displacement and
// lambda0' carries the common linear drift.
struct UnfoldingFrame2 {
    double lambda0 = 0.0;
    double lambda0_prime = 0.0;  // lambda0 + <g_sum, delta>
    double x = 0.0, y = 0.0;     // unfolding coordinates of delta
    RealVector delta;            // displacement this frame was evaluated at

    // Linear forms (real parts of (f11+f22)/2, (f11-f22)/2, f12).
    RealVector g_sum, g_x, g_y;

    double x_at(const RealVector& d) const;
    double y_at(const RealVector& d) const;
    double lambda0_prime_at(const RealVector& d) const;
};

// Builds the frame from coupling data; throws ClassMismatch unless the
// coupling is real-symmetric (all f vectors real, f12 = f21) to 1e-12
// relative.
UnfoldingFrame2 frame2(const CouplingData& cd, const DiabolicPoint& dp, const RealVector& delta);

// Real and imaginary part of c, written out through the perturbation
// scalars (equivalent to the complex product form; both are exposed so the
// expansion can be cross-checked).
struct CParts {
    double re_c = 0.0;
    double im_c = 0.0;
};

CParts c_parts(const UnfoldingFrame2& fr, const PerturbationScalars& ps);
Complex c_complex(const UnfoldingFrame2& fr, const PerturbationScalars& ps);

// One sample of the two perturbed eigenvalue sheets over the frame's
// displacement.  Signs in front of the two square roots are paired
// (equal for Im c >= 0, opposite otherwise) so that plus/minus recombine to
// lambda0' + mu +- sqrt(c) with the principal branch.
struct SheetSample {
    RealVector delta;
    double re_plus = 0.0, re_minus = 0.0;
    double im_plus = 0.0, im_minus = 0.0;
    double re_c = 0.0, im_c = 0.0;
};

SheetSample sheets(const UnfoldingFrame2& fr, const PerturbationScalars& ps);

// Leading-order sheet values close to the self-intersection set, valid away
// from Re c = 0: for Re c < 0 the two *real* sheets, for Re c > 0 the two
// *imaginary* sheets.  Throws NearZeroRec when |Re c| < 1e-8.
struct IntersectionApprox {
    bool real_branch = false;  // true: values approximate Re lambda_pm
    double plus_val = 0.0, minus_val = 0.0;
};

IntersectionApprox sheet_approx_near_intersection(const UnfoldingFrame2& fr,
                                                  const PerturbationScalars& ps);

// Sign of the discriminant
//   D = Im^2 xi + Im^2 eta - Im^2 zeta
// decides whether the unfolded surface keeps a pair of exceptional points
// (absorption-dominated) or loses them (chirality-dominated).
enum class Regime { ChiralityDominated, Degenerate, AbsorptionDominated };

struct ClassificationReport {
    double discriminant = 0.0;
    double im_xi = 0.0, im_eta = 0.0, im_zeta = 0.0;
    Regime regime = Regime::Degenerate;
};

ClassificationReport classify(const PerturbationScalars& ps);

// The two exceptional points of the unfolded surface, in unfolding-plane
// coordinates and (inverted through the linear frame) in parameter space.
// For more than two parameters the positions are min-norm representatives
// and null_basis spans the remaining affine directions.
// Throws NegativeD / DegenerateD when the regime does not admit a pair, and
// SingularFrame when the frame does not resolve the plane.
struct ExceptionalPair {
    double x_a = 0.0, y_a = 0.0;
    double x_b = 0.0, y_b = 0.0;
    RealVector p_a, p_b;  // absolute parameters
    std::vector<RealVector> null_basis;
};

ExceptionalPair exceptional_points(const CouplingData& cd, const DiabolicPoint& dp,
                                   const PerturbationScalars& ps);

// Min-norm inversion of the frame's linear forms: finds delta with
// x_at(delta) = x, y_at(delta) = y.  Exact for two parameters.
struct FrameInversion {
    RealVector delta;
    std::vector<RealVector> null_basis;
    double condition = 0.0;  // spectral condition number of the Gram matrix
};

FrameInversion invert_frame2(const UnfoldingFrame2& fr, double x, double y);

// Degeneracy locus of the surface projection: the straight line Im c = 0 in
// a two-parameter family, carrying the exceptional points and the sheet
// gluing structure.
enum class LocusKind {
    SegmentAndRays,  // absorption-dominated: real sheets glue on [t_a, t_b],
                     // imaginary sheets glue on the rays outside
    WholeLine,       // chirality-dominated: imaginary sheets glue everywhere
    SinglePoint      // degenerate: the two exceptional points merged
};

struct Window2 {
    RealVector center;  // absolute parameters
    double half_width = 0.0;
};

struct BranchLocus {
    RealVector point;      // absolute parameters, min-norm point of the line
    RealVector direction;  // unit vector along the line
    LocusKind kind = LocusKind::WholeLine;
    Regime regime = Regime::Degenerate;
    double t_a = 0.0, t_b = 0.0;  // exceptional points as line parameters
    bool intersects_window = false;
    double t_enter = 0.0, t_exit = 0.0;
};

BranchLocus branch_locus(const CouplingData& cd, const DiabolicPoint& dp,
                         const PerturbationScalars& ps, const Window2& win);

// Geometry of the unfolded surface under a *real* perturbation: the
// degeneracy set is an ellipse-like ring |(x,y) + (xi, eta)| = |zeta| in the
// unfolding plane; inside the ring the real sheets coincide, outside the
// imaginary ones.  Construction throws RealnessViolated unless all four
// scalars are real to 1e-14 * max(1, ||dA||).
enum class ConicRegion { Inside, OnRing, Outside };

struct RealSheetSample {
    ConicRegion region = ConicRegion::Outside;
    double c = 0.0;
    double re_plus = 0.0, re_minus = 0.0;
    double im_plus = 0.0, im_minus = 0.0;
};

class RealPerturbationSurface {
public:
    RealPerturbationSurface(const CouplingData& cd, const DiabolicPoint& dp,
                            const PerturbationScalars& ps);

    RealSheetSample at(const RealVector& delta) const;

    double ring_center_x() const { return -xi_; }
    double ring_center_y() const { return -eta_; }
    double ring_radius() const { return std::abs(zeta_); }

    // Point of the degeneracy ring at the given angle, mapped back to
    // absolute parameters through the frame inversion.
    RealVector ring_param_point(double angle) const;

private:
    UnfoldingFrame2 base_;
    RealVector p0_;
    double mu_ = 0.0, xi_ = 0.0, eta_ = 0.0, zeta_ = 0.0;
    double c_tol_ = 0.0;
};

} // namespace diabolo
