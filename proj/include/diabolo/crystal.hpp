#pragma once

#include <array>

#include "diabolo/unfold_symmetric.hpp"

namespace diabolo {

// Inverse dielectric description of a weakly absorbing, weakly chiral
// crystal.  The transparent background is diagonal with principal values
// eta1 >= eta2 >= eta3 (biaxial when strict); absorption enters as
// i * dichroic (real symmetric) and optical activity through the complex
// symmetric gyration tensor gamma.
class DielectricModel {
public:
    using RealTensor = std::array<std::array<double, 3>, 3>;
    using ComplexTensor = std::array<std::array<Complex, 3>, 3>;

    // Throws InvalidTensor unless both perturbation tensors are symmetric
    // to 1e-14 relative to their largest entry.
    DielectricModel(const std::array<double, 3>& eta, const RealTensor& dichroic,
                    const ComplexTensor& gamma);

    const std::array<double, 3>& eta() const { return eta_; }
    const RealTensor& dichroic() const { return dichroic_; }
    const ComplexTensor& gamma() const { return gamma_; }

    // Same transparent background, perturbation tensors scaled by t.
    DielectricModel scaled(double t) const;

    bool is_biaxial() const;
    void require_biaxial() const;  // throws NotBiaxial

private:
    std::array<double, 3> eta_;
    RealTensor dichroic_;
    ComplexTensor gamma_;
};

// Unit propagation direction.  The constructor enforces unit norm to 1e-14;
// normalized() rescales first.
struct Direction {
    std::array<double, 3> s{};

    Direction() = default;
    Direction(double s1, double s2, double s3);
    static Direction normalized(double s1, double s2, double s3);

    int hemisphere() const { return (s[2] >= 0.0) ? +1 : -1; }
};

// Which part of the dielectric tensor enters the projected wave problem.
enum class ProjectedPart { Transparent, Perturbation, Full };

// The 3x3 projected tensor (I - s s^T) M (I - s s^T) whose two nonzero
// eigenvalues are the squared inverse refractive indices of the two waves
// along s.  Annihilates s by construction.
ComplexMatrix projected_matrix(const DielectricModel& m, const Direction& s, ProjectedPart part);

// The four optic axes (doublet directions of the transparent problem)
// labeled by the signs of (s1, s3); s2 = 0 on all of them.
enum class AxisBranch { PP, PM, MP, MM };

constexpr std::array<AxisBranch, 4> kAxisOrder = {AxisBranch::PP, AxisBranch::PM, AxisBranch::MP,
                                                  AxisBranch::MM};

const char* axis_name(AxisBranch b);          // "++", "+-", "-+", "--"
AxisBranch axis_from_name(const std::string& name);  // throws ConfigError

struct OpticAxis {
    AxisBranch branch = AxisBranch::PP;
    Direction s0;
    double lambda0 = 0.0;  // = eta2
    double s1c = 0.0, s3c = 0.0;
};

std::array<OpticAxis, 4> optic_axes(const DielectricModel& m);  // throws NotBiaxial
OpticAxis optic_axis(const DielectricModel& m, AxisBranch b);

// Doublet data at an optic axis in the (s1, s2) chart:
//   p0 = (s1c, 0), lambda0 = eta2, u1 = (0,1,0), u2 = (s3c, 0, -s1c).
DiabolicPoint axis_diabolic_point(const OpticAxis& ax);

// Closed-form coupling vectors of the doublet:
//   f11 = (0, 0),  f22 = (2 (eta3-eta1) s1c, 0),
//   f12 = f21 = (0, (eta3-eta1) s1c s3c).
CouplingData axis_coupling(const DielectricModel& m, const OpticAxis& ax);

// Closed-form perturbation scalars of the projected dichroic + chiral part
// at the axis; epsilon_norm matches the projected perturbation matrix.
PerturbationScalars axis_perturbation(const DielectricModel& m, const OpticAxis& ax);

// Matrix family over the (s1, s2) chart of the chosen hemisphere
// (s3 = hemisphere * sqrt(1 - s1^2 - s2^2); domain is the unit disk).
MatrixFamily direction_family(const DielectricModel& m, ProjectedPart part, int hemisphere);

// Directions near the optic axis where the perturbed problem keeps a
// coalescing pair (singular axes).  The validity flags record whether the
// chart positions stayed inside the unit disk.
struct SingularAxes {
    ExceptionalPair pair;  // chart positions (absolute (s1, s2))
    Direction axis_a, axis_b;
    bool a_valid = false, b_valid = false;
};

SingularAxes singular_axes(const DielectricModel& m, const OpticAxis& ax);

// Straight line in the (s1, s2) chart carrying the surface
// self-intersection near the axis.
struct SingularityLine {
    RealVector point;      // absolute chart coordinates
    RealVector direction;  // unit vector
};

SingularityLine singularity_line(const DielectricModel& m, const OpticAxis& ax);

// Regime classification of all four axes, in kAxisOrder order.
struct CrystalClassification {
    OpticAxis axis;
    ClassificationReport report;
};

std::array<CrystalClassification, 4> classify_crystal(const DielectricModel& m);

} // namespace diabolo
