#include "diabolo/crystal.hpp"

#include <cfloat>
#include <cmath>
#include <string>

namespace diabolo {

namespace {

// (I - s s^T) M (I - s s^T) without unit-norm validation; callers inside
// the library guarantee s is (numerically) unit.
ComplexMatrix project_tensor(const std::array<double, 3>& s, const ComplexMatrix& m) {
    ComplexMatrix p = ComplexMatrix::identity(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            p(i, j) -= Complex(s[i] * s[j], 0.0);
    return p * m * p;
}

ComplexMatrix tensor_part(const DielectricModel& m, ProjectedPart part) {
    ComplexMatrix t(3);
    if (part != ProjectedPart::Perturbation) {
        for (int i = 0; i < 3; ++i)
            t(i, i) += Complex(m.eta()[i], 0.0);
    }
    if (part != ProjectedPart::Transparent) {
        const Complex iu(0.0, 1.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                t(i, j) += iu * m.dichroic()[i][j];
    }
    return t;
}

// Chirality enters through g = gamma * s as the antisymmetric matrix
// i * [[0, -g3, g2], [g3, 0, -g1], [-g2, g1, 0]].
ComplexMatrix chiral_part(const DielectricModel& m, const std::array<double, 3>& s) {
    Complex g[3] = {};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g[i] += m.gamma()[i][j] * s[j];
    const Complex iu(0.0, 1.0);
    ComplexMatrix c(3);
    c(0, 1) = -iu * g[2];
    c(0, 2) = iu * g[1];
    c(1, 0) = iu * g[2];
    c(1, 2) = -iu * g[0];
    c(2, 0) = -iu * g[1];
    c(2, 1) = iu * g[0];
    return c;
}

ComplexMatrix projected_raw(const DielectricModel& m, const std::array<double, 3>& s,
                            ProjectedPart part) {
    ComplexMatrix t = tensor_part(m, part);
    if (part != ProjectedPart::Transparent)
        t += chiral_part(m, s);
    return project_tensor(s, t);
}

} // namespace

DielectricModel::DielectricModel(const std::array<double, 3>& eta, const RealTensor& dichroic,
                                 const ComplexTensor& gamma)
    : eta_(eta), dichroic_(dichroic), gamma_(gamma) {
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            scale = std::max({scale, std::abs(dichroic_[i][j]), std::abs(gamma_[i][j])});
    const double tol = 1e-14 * std::max(scale, DBL_MIN);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(dichroic_[i][j] - dichroic_[j][i]) > tol)
                throw InvalidTensor("dichroic tensor is not symmetric");
            if (std::abs(gamma_[i][j] - gamma_[j][i]) > tol)
                throw InvalidTensor("gyration tensor is not symmetric");
        }
}

DielectricModel DielectricModel::scaled(double t) const {
    RealTensor d = dichroic_;
    ComplexTensor g = gamma_;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            d[i][j] *= t;
            g[i][j] *= t;
        }
    return DielectricModel(eta_, d, g);
}

bool DielectricModel::is_biaxial() const {
    return eta_[0] > eta_[1] && eta_[1] > eta_[2];
}

void DielectricModel::require_biaxial() const {
    if (!is_biaxial())
        throw NotBiaxial("optic-axis formulas require eta1 > eta2 > eta3");
}

Direction::Direction(double s1, double s2, double s3) : s{s1, s2, s3} {
    const double n = std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
    if (std::abs(n - 1.0) > 1e-14)
        throw DimensionMismatch("direction is not unit length");
}

Direction Direction::normalized(double s1, double s2, double s3) {
    const double n = std::sqrt(s1 * s1 + s2 * s2 + s3 * s3);
    if (n <= DBL_MIN)
        throw DimensionMismatch("cannot normalize the zero direction");
    return Direction(s1 / n, s2 / n, s3 / n);
}

ComplexMatrix projected_matrix(const DielectricModel& m, const Direction& s, ProjectedPart part) {
    return projected_raw(m, s.s, part);
}

const char* axis_name(AxisBranch b) {
    switch (b) {
    case AxisBranch::PP: return "++";
    case AxisBranch::PM: return "+-";
    case AxisBranch::MP: return "-+";
    case AxisBranch::MM: return "--";
    }
    return "?";
}

AxisBranch axis_from_name(const std::string& name) {
    for (AxisBranch b : kAxisOrder)
        if (name == axis_name(b))
            return b;
    throw ConfigError("unknown axis selector '" + name + "' (expected ++, +-, -+ or --)");
}

OpticAxis optic_axis(const DielectricModel& m, AxisBranch b) {
    m.require_biaxial();
    const double e1 = m.eta()[0], e2 = m.eta()[1], e3 = m.eta()[2];
    const double s1 = std::sqrt((e1 - e2) / (e1 - e3));
    const double s3 = std::sqrt((e2 - e3) / (e1 - e3));
    const double sign1 = (b == AxisBranch::PP || b == AxisBranch::PM) ? 1.0 : -1.0;
    const double sign3 = (b == AxisBranch::PP || b == AxisBranch::MP) ? 1.0 : -1.0;

    OpticAxis ax;
    ax.branch = b;
    ax.s1c = sign1 * s1;
    ax.s3c = sign3 * s3;
    ax.s0 = Direction::normalized(ax.s1c, 0.0, ax.s3c);
    ax.lambda0 = e2;
    return ax;
}

std::array<OpticAxis, 4> optic_axes(const DielectricModel& m) {
    return {optic_axis(m, AxisBranch::PP), optic_axis(m, AxisBranch::PM),
            optic_axis(m, AxisBranch::MP), optic_axis(m, AxisBranch::MM)};
}

DiabolicPoint axis_diabolic_point(const OpticAxis& ax) {
    DiabolicPoint dp;
    dp.p0 = {ax.s1c, 0.0};
    dp.lambda0 = ax.lambda0;
    dp.u1 = {Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0)};
    dp.u2 = {Complex(ax.s3c, 0.0), Complex(0.0, 0.0), Complex(-ax.s1c, 0.0)};
    return dp;
}

CouplingData axis_coupling(const DielectricModel& m, const OpticAxis& ax) {
    const double span = m.eta()[2] - m.eta()[0];  // eta3 - eta1
    CouplingData cd;
    cd.f11 = {Complex(0.0, 0.0), Complex(0.0, 0.0)};
    cd.f22 = {Complex(2.0 * span * ax.s1c, 0.0), Complex(0.0, 0.0)};
    cd.f12 = {Complex(0.0, 0.0), Complex(span * ax.s1c * ax.s3c, 0.0)};
    cd.f21 = cd.f12;
    return cd;
}

PerturbationScalars axis_perturbation(const DielectricModel& m, const OpticAxis& ax) {
    const double s1 = ax.s1c, s3 = ax.s3c;
    const auto& d = m.dichroic();
    const auto& g = m.gamma();
    const Complex iu(0.0, 1.0);

    const double d_par = s3 * s3 * d[0][0] - 2.0 * s1 * s3 * d[0][2] + s1 * s1 * d[2][2];
    const double d_mix = s3 * d[0][1] - s1 * d[1][2];
    const Complex chirality = g[0][0] * s1 * s1 + 2.0 * g[0][2] * s1 * s3 + g[2][2] * s3 * s3;

    PerturbationScalars ps;
    ps.eps11 = iu * d[1][1];
    ps.eps22 = iu * d_par;
    ps.eps12 = iu * d_mix - iu * chirality;
    ps.eps21 = iu * d_mix + iu * chirality;
    ps.mu = 0.5 * (ps.eps11 + ps.eps22);
    ps.xi = 0.5 * (ps.eps11 - ps.eps22);
    ps.eta = 0.5 * (ps.eps12 + ps.eps21);
    ps.zeta = 0.5 * (ps.eps12 - ps.eps21);
    ps.epsilon_norm =
        projected_raw(m, ax.s0.s, ProjectedPart::Perturbation).frobenius_norm();
    return ps;
}

MatrixFamily direction_family(const DielectricModel& m, ProjectedPart part, int hemisphere) {
    MatrixFamily fam;
    fam.dim = 3;
    fam.n_params = 2;
    fam.cls = (part == ProjectedPart::Transparent) ? SymmetryClass::RealSymmetric
                                                   : SymmetryClass::General;
    const double hemi = (hemisphere >= 0) ? 1.0 : -1.0;
    fam.eval_fn = [m, part, hemi](const RealVector& p) {
        const double s3sq = 1.0 - p[0] * p[0] - p[1] * p[1];
        const std::array<double, 3> s = {p[0], p[1], hemi * std::sqrt(std::max(0.0, s3sq))};
        return projected_raw(m, s, part);
    };
    return fam;
}

SingularAxes singular_axes(const DielectricModel& m, const OpticAxis& ax) {
    const DiabolicPoint dp = axis_diabolic_point(ax);
    const CouplingData cd = axis_coupling(m, ax);
    const PerturbationScalars ps = axis_perturbation(m, ax);

    SingularAxes sa;
    sa.pair = exceptional_points(cd, dp, ps);

    auto lift = [&](double s1, double s2, bool& valid) {
        const double r2 = s1 * s1 + s2 * s2;
        valid = r2 <= 1.0;
        if (!valid) {
            const double r = std::sqrt(r2);
            return Direction::normalized(s1 / r, s2 / r, 0.0);
        }
        const double sign3 = (ax.s3c >= 0.0) ? 1.0 : -1.0;
        return Direction::normalized(s1, s2, sign3 * std::sqrt(std::max(0.0, 1.0 - r2)));
    };
    sa.axis_a = lift(sa.pair.p_a[0], sa.pair.p_a[1], sa.a_valid);
    sa.axis_b = lift(sa.pair.p_b[0], sa.pair.p_b[1], sa.b_valid);
    return sa;
}

SingularityLine singularity_line(const DielectricModel& m, const OpticAxis& ax) {
    const PerturbationScalars ps = axis_perturbation(m, ax);
    const double span = m.eta()[0] - m.eta()[2];  // eta1 - eta3

    // Vanishing of Im c reduces to the affine line
    //   a (s1 - s1c) + b s2 = rhs
    // in the chart coordinates.
    const double a = ps.xi.imag() * span * ax.s1c;
    const double b = -ps.eta.imag() * span * ax.s1c * ax.s3c;
    const double rhs = ps.zeta.real() * ps.zeta.imag();

    const double nab = std::hypot(a, b);
    const double scale = std::max(span * ps.epsilon_norm, DBL_MIN);
    if (nab <= 1e-14 * scale)
        throw DegenerateLine("singularity line undefined for this perturbation");

    SingularityLine line;
    line.point = {ax.s1c + a * rhs / (nab * nab), b * rhs / (nab * nab)};
    line.direction = {-b / nab, a / nab};
    return line;
}

std::array<CrystalClassification, 4> classify_crystal(const DielectricModel& m) {
    std::array<CrystalClassification, 4> out;
    for (size_t i = 0; i < kAxisOrder.size(); ++i) {
        out[i].axis = optic_axis(m, kAxisOrder[i]);
        out[i].report = classify(axis_perturbation(m, out[i].axis));
    }
    return out;
}

} // namespace diabolo
