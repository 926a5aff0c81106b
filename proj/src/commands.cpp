#include "diabolo/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace diabolo {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_complex(Complex z) {
    // fixed "re+imj" rendering used in all human-readable reports
    return fmt17(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt17(std::abs(z.imag())) + "j";
}

std::string fmt_vec3(const double* v) {
    return "(" + fmt17(v[0]) + ", " + fmt17(v[1]) + ", " + fmt17(v[2]) + ")";
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::AbsorptionDominated: return "absorption-dominated";
        case Regime::ChiralityDominated: return "chirality-dominated";
        default: return "degenerate";
    }
}

void write_file(const std::string& path, const std::string& content, const char* what) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(std::string(what) + ": cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f.good()) throw Error(std::string(what) + ": write to '" + path + "' failed");
}

nlohmann::json axis_json(const OpticAxis& ax) {
    return {{"branch", axis_name(ax.branch)},
            {"s0", {ax.s0.s[0], ax.s0.s[1], ax.s0.s[2]}},
            {"lambda0", ax.lambda0}};
}

nlohmann::json classification_json(const ClassificationReport& rep) {
    // magnitudes are reported alongside the signed values because the signs
    // of im_eta / im_zeta flip under the doublet gauge u2 -> -u2
    return {{"discriminant", rep.discriminant},
            {"im_xi", rep.im_xi},
            {"im_eta", rep.im_eta},
            {"im_zeta", rep.im_zeta},
            {"abs_im_xi", std::abs(rep.im_xi)},
            {"abs_im_eta", std::abs(rep.im_eta)},
            {"abs_im_zeta", std::abs(rep.im_zeta)},
            {"regime", regime_name(rep.regime)},
            {"gauge_note", "signs of im_eta/im_zeta (and of im c) flip under the "
                           "doublet gauge u2 -> -u2; magnitudes and D are invariant"}};
}

} // namespace

const char* const kSurfaceHeader =
    "s1,s2,re_lambda_plus,re_lambda_minus,im_lambda_plus,im_lambda_minus,re_c,im_c,"
    "exact_re_plus,exact_re_minus,exact_im_plus,exact_im_minus,abs_err_plus,abs_err_minus";

const char* const kHermitianHeader =
    "a,b,re_lambda_plus,re_lambda_minus,im_lambda_plus,im_lambda_minus,re_c,im_c,"
    "exact_re_plus,exact_re_minus,exact_im_plus,exact_im_minus,abs_err_plus,abs_err_minus";

void write_grid_csv(const char* header, const std::vector<SurfaceRow>& rows, std::ostream& os) {
    os << header << "\n";
    for (const SurfaceRow& r : rows) {
        for (int k = 0; k < kSurfaceColumns; ++k) {
            if (k) os << ",";
            os << fmt17(r[k]);
        }
        os << "\n";
    }
}

SurfaceResult compute_surface(const RunConfig& cfg) {
    const DielectricModel base = cfg.base_model();
    const DielectricModel scaled = cfg.model();
    const OpticAxis ax = optic_axis(base, cfg.grid.axis);
    const DiabolicPoint dp = axis_diabolic_point(ax);
    const CouplingData cd = axis_coupling(base, ax);
    const PerturbationScalars ps = axis_perturbation(scaled, ax);
    const int hemi = ax.s0.hemisphere();

    SurfaceResult res;
    res.axis = ax;
    res.classification = classify(ps);
    res.center_s1 = cfg.grid.center_set ? cfg.grid.center_s1 : ax.s1c;
    res.center_s2 = cfg.grid.center_set ? cfg.grid.center_s2 : 0.0;

    const int n = cfg.grid.resolution;
    const double hw = cfg.grid.half_width;
    res.rows.reserve(static_cast<size_t>(n) * n);

    for (int j = 0; j < n; ++j) {
        const double s2 = res.center_s2 + hw * (2.0 * j / (n - 1) - 1.0);
        for (int i = 0; i < n; ++i) {
            const double s1 = res.center_s1 + hw * (2.0 * i / (n - 1) - 1.0);
            const double rr = s1 * s1 + s2 * s2;
            if (rr >= 1.0) {  // direction chart ends at the unit disk
                ++res.skipped;
                continue;
            }
            const RealVector delta = {s1 - dp.p0[0], s2 - dp.p0[1]};
            const UnfoldingFrame2 fr = frame2(cd, dp, delta);
            const SheetSample sh = sheets(fr, ps);

            const Direction dir(s1, s2, hemi * std::sqrt(1.0 - rr));
            const auto exact =
                two_nonzero_eigs_trace(projected_matrix(scaled, dir, ProjectedPart::Full));
            const std::pair<Complex, Complex> asym{{sh.re_plus, sh.im_plus},
                                                   {sh.re_minus, sh.im_minus}};
            const auto matched = min_distance_match(asym, exact);
            const double err_plus = std::abs(asym.first - matched.first);
            const double err_minus = std::abs(asym.second - matched.second);

            res.rows.push_back({s1, s2, sh.re_plus, sh.re_minus, sh.im_plus, sh.im_minus,
                                sh.re_c, sh.im_c, matched.first.real(), matched.second.real(),
                                matched.first.imag(), matched.second.imag(), err_plus,
                                err_minus});
            res.max_abs_err = std::max({res.max_abs_err, err_plus, err_minus});
        }
    }
    return res;
}

int cmd_axes(const RunConfig& cfg, std::ostream& out) {
    const DielectricModel m = cfg.base_model();
    const auto axes = optic_axes(m);
    out << "biaxial transparent background: eta = (" << fmt17(cfg.eta[0]) << ", "
        << fmt17(cfg.eta[1]) << ", " << fmt17(cfg.eta[2]) << ")\n";
    out << "doublet eigenvalue lambda0 = " << fmt17(axes[0].lambda0)
        << " at each optic axis\n\n";
    for (const OpticAxis& ax : axes) {
        const DiabolicPoint dp = axis_diabolic_point(ax);
        out << "axis " << axis_name(ax.branch) << " : s0 = " << fmt_vec3(ax.s0.s.data())
            << "\n";
        out << "          u1 = (" << fmt_complex(dp.u1[0]) << ", " << fmt_complex(dp.u1[1])
            << ", " << fmt_complex(dp.u1[2]) << ")\n";
        out << "          u2 = (" << fmt_complex(dp.u2[0]) << ", " << fmt_complex(dp.u2[1])
            << ", " << fmt_complex(dp.u2[2]) << ")\n";
    }
    return 0;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    const DielectricModel scaled = cfg.model();
    const auto table = classify_crystal(scaled);
    out << "regime classification at the four optic axes (perturbation scale t = "
        << fmt17(cfg.scale) << ")\n\n";
    for (const CrystalClassification& row : table) {
        const ClassificationReport& rep = row.report;
        out << "axis " << axis_name(row.axis.branch) << " : D = " << fmt17(rep.discriminant)
            << "  -> " << regime_name(rep.regime) << "\n";
        out << "          im xi = " << fmt17(rep.im_xi) << "  im eta = " << fmt17(rep.im_eta)
            << "  im zeta = " << fmt17(rep.im_zeta) << "\n";
        if (rep.regime == Regime::AbsorptionDominated) {
            try {
                const SingularAxes sa = singular_axes(scaled, row.axis);
                out << "          singular axes (s1, s2): a = (" << fmt17(sa.pair.p_a[0])
                    << ", " << fmt17(sa.pair.p_a[1]) << ")"
                    << (sa.a_valid ? "" : "  [outside unit disk]") << "\n";
                out << "                                  b = (" << fmt17(sa.pair.p_b[0])
                    << ", " << fmt17(sa.pair.p_b[1]) << ")"
                    << (sa.b_valid ? "" : "  [outside unit disk]") << "\n";
            } catch (const DegenerateD&) {
                out << "          singular axes unresolved: discriminant degenerate at this "
                       "tolerance\n";
            }
        }
    }
    out << "\nnote: the signs of im eta and im zeta depend on the doublet gauge\n"
           "      (u2 -> -u2 flips them); their magnitudes and D are gauge-invariant.\n";
    return 0;
}

int cmd_surface(const RunConfig& cfg, std::ostream& out) {
    const SurfaceResult res = compute_surface(cfg);

    std::ostringstream csv;
    write_grid_csv(kSurfaceHeader, res.rows, csv);
    write_file(cfg.output.surface, csv.str(), "surface grid");

    nlohmann::json rep;
    rep["axes"] = nlohmann::json::array();
    for (const OpticAxis& ax : optic_axes(cfg.base_model())) rep["axes"].push_back(axis_json(ax));
    rep["axis"] = axis_name(res.axis.branch);
    rep["lambda0"] = res.axis.lambda0;
    rep["classification"] = classification_json(res.classification);
    if (res.classification.regime == Regime::AbsorptionDominated) {
        try {
            const SingularAxes sa = singular_axes(cfg.model(), res.axis);
            rep["exceptional_points"] = {
                {"present", true},
                {"chart_a", {sa.pair.p_a[0], sa.pair.p_a[1]}},
                {"chart_b", {sa.pair.p_b[0], sa.pair.p_b[1]}},
                {"a_valid", sa.a_valid},
                {"b_valid", sa.b_valid},
                {"axis_a", {sa.axis_a.s[0], sa.axis_a.s[1], sa.axis_a.s[2]}},
                {"axis_b", {sa.axis_b.s[0], sa.axis_b.s[1], sa.axis_b.s[2]}}};
        } catch (const DegenerateD&) {
            rep["exceptional_points"] = {{"present", false},
                                         {"reason", "discriminant degenerate"}};
        }
    } else {
        rep["exceptional_points"] = {{"present", false},
                                     {"reason", regime_name(res.classification.regime)}};
    }
    rep["grid"] = {{"axis", axis_name(cfg.grid.axis)},
                   {"resolution", cfg.grid.resolution},
                   {"half_width", cfg.grid.half_width},
                   {"center", {res.center_s1, res.center_s2}},
                   {"scale", cfg.scale},
                   {"rows", res.rows.size()},
                   {"skipped", res.skipped}};
    rep["max_abs_err"] = res.max_abs_err;
    write_file(cfg.output.report, rep.dump(2) + "\n", "surface report");

    out << "surface: " << res.rows.size() << " rows";
    if (res.skipped) out << " (" << res.skipped << " nodes outside the unit disk skipped)";
    out << " -> " << cfg.output.surface << "\n";
    out << "max |asymptotic - exact| over the grid = " << fmt17(res.max_abs_err) << "\n";
    out << "report -> " << cfg.output.report << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Synthetic Hermitian demonstration family for the unfold-hermitian command.
// Fixed seed so that identical configs give byte-identical grids.

namespace {

constexpr unsigned long long kHermitianSeed = 0x0d1ab0ull;

double unit_draw(std::mt19937_64& rng) {
    return ((rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;  // uniform in [-1, 1)
}

ComplexMatrix draw_hermitian(int dim, std::mt19937_64& rng, double scale) {
    ComplexMatrix h(dim);
    for (int i = 0; i < dim; ++i) {
        h(i, i) = scale * unit_draw(rng);
        for (int j = i + 1; j < dim; ++j) {
            const Complex z(scale * unit_draw(rng), scale * unit_draw(rng));
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

ComplexMatrix draw_general(int dim, std::mt19937_64& rng, double scale) {
    ComplexMatrix g(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = Complex(scale * unit_draw(rng), scale * unit_draw(rng));
    return g;
}

} // namespace

HermitianGridResult compute_hermitian_grid(const RunConfig& cfg) {
    const int dim = 4;
    std::mt19937_64 rng(kHermitianSeed);

    // A(p) = diag(0.3, 0.3, 1.5, 2.2) + p1 L1 + p2 L2 + p3 L3, doublet at p = 0
    const ComplexMatrix a0 = ComplexMatrix::diagonal({0.3, 0.3, 1.5, 2.2});
    std::array<ComplexMatrix, 3> lin;
    for (auto& l : lin) l = draw_hermitian(dim, rng, 1.0);
    // canonical doublet blocks keep the unfolding frame orthonormal (p1 is
    // the detuning, p2/p3 the real/imaginary coupling); couplings to the
    // spectator levels stay random
    lin[0](0, 0) = 1.0;
    lin[0](1, 1) = -1.0;
    lin[0](0, 1) = lin[0](1, 0) = 0.0;
    lin[1](0, 0) = lin[1](1, 1) = 0.0;
    lin[1](0, 1) = lin[1](1, 0) = 1.0;
    lin[2](0, 0) = lin[2](1, 1) = 0.0;
    lin[2](0, 1) = Complex(0.0, 1.0);
    lin[2](1, 0) = Complex(0.0, -1.0);
    const ComplexMatrix da = draw_general(dim, rng, 1e-3 * cfg.scale);

    MatrixFamily fam;
    fam.dim = dim;
    fam.n_params = 3;
    fam.cls = SymmetryClass::Hermitian;
    fam.eval_fn = [=](const RealVector& p) {
        ComplexMatrix a = a0;
        for (int k = 0; k < 3; ++k) a += Complex(p[k]) * lin[k];
        return a;
    };
    fam.deriv_fn = [=](const RealVector&, int k) { return lin[k]; };

    DiabolicPoint dp;
    dp.p0 = {0.0, 0.0, 0.0};
    dp.lambda0 = 0.3;
    dp.u1 = ComplexVector(dim);
    dp.u2 = ComplexVector(dim);
    dp.u1[0] = 1.0;
    dp.u2[1] = 1.0;

    const CouplingData cd = coupling_vectors(fam, dp);
    const PerturbationScalars ps = perturbation_scalars(da, dp);
    const UnfoldingFrame3 fr0 = frame3(cd, dp, {0.0, 0.0, 0.0});

    HermitianGridResult res;
    res.ring = exceptional_ring(ps);
    res.epsilon_norm = ps.epsilon_norm;

    // orthonormal plane basis from two ring points a quarter turn apart
    const auto pts = ring_points(res.ring, 4);
    std::array<double, 3> e1{}, e2{};
    for (int k = 0; k < 3; ++k) {
        e1[k] = (pts[0][k] - res.ring.center[k]) / res.ring.radius;
        e2[k] = (pts[1][k] - res.ring.center[k]) / res.ring.radius;
    }

    const double factor = cfg.grid.half_width_set ? cfg.grid.half_width : 2.0;
    res.window = factor * res.ring.radius;

    const int n = cfg.grid.resolution;
    res.rows.reserve(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        const double b = res.window * (2.0 * j / (n - 1) - 1.0);
        for (int i = 0; i < n; ++i) {
            const double a = res.window * (2.0 * i / (n - 1) - 1.0);
            std::array<double, 3> xyz{};
            for (int k = 0; k < 3; ++k)
                xyz[k] = res.ring.center[k] + a * e1[k] + b * e2[k];

            const FrameInversion3 inv = invert_frame3(fr0, xyz[0], xyz[1], xyz[2]);
            const UnfoldingFrame3 fr = frame3(cd, dp, inv.delta);
            const auto lam = lambda_pair3(fr, ps);
            const Complex c = c_hermitian(fr, ps);

            RealVector p = dp.p0;
            for (int k = 0; k < 3; ++k) p[k] += inv.delta[k];
            ComplexMatrix full = fam.evaluate(p);
            full += da;
            const auto eig = eig_exact(full, SymmetryClass::General);

            // best distinct-index match of the oracle spectrum to the pair
            double best = 1e300;
            Complex ex_p = 0.0, ex_m = 0.0;
            for (size_t ii = 0; ii < eig.values.size(); ++ii)
                for (size_t jj = 0; jj < eig.values.size(); ++jj) {
                    if (ii == jj) continue;
                    const double d = std::abs(lam.first - eig.values[ii]) +
                                     std::abs(lam.second - eig.values[jj]);
                    if (d < best) {
                        best = d;
                        ex_p = eig.values[ii];
                        ex_m = eig.values[jj];
                    }
                }

            const double err_plus = std::abs(lam.first - ex_p);
            const double err_minus = std::abs(lam.second - ex_m);
            res.rows.push_back({a, b, lam.first.real(), lam.second.real(), lam.first.imag(),
                                lam.second.imag(), c.real(), c.imag(), ex_p.real(), ex_m.real(),
                                ex_p.imag(), ex_m.imag(), err_plus, err_minus});
            res.max_abs_err = std::max({res.max_abs_err, err_plus, err_minus});
        }
    }
    return res;
}

int cmd_unfold_hermitian(const RunConfig& cfg, std::ostream& out) {
    const HermitianGridResult res = compute_hermitian_grid(cfg);

    std::ostringstream csv;
    write_grid_csv(kHermitianHeader, res.rows, csv);
    write_file(cfg.output.surface, csv.str(), "hermitian grid");

    nlohmann::json rep;
    rep["family"] = {{"dim", 4},
                     {"n_params", 3},
                     {"seed", kHermitianSeed},
                     {"perturbation_scale", 1e-3 * cfg.scale},
                     {"epsilon_norm", res.epsilon_norm}};
    rep["ring"] = {{"center", {res.ring.center[0], res.ring.center[1], res.ring.center[2]}},
                   {"radius", res.ring.radius},
                   {"normal", {res.ring.normal[0], res.ring.normal[1], res.ring.normal[2]}}};
    rep["grid"] = {{"resolution", cfg.grid.resolution},
                   {"window_half_width", res.window},
                   {"rows", res.rows.size()}};
    rep["max_abs_err"] = res.max_abs_err;
    write_file(cfg.output.report, rep.dump(2) + "\n", "hermitian report");

    out << "exceptional ring: radius = " << fmt17(res.ring.radius) << ", center = ("
        << fmt17(res.ring.center[0]) << ", " << fmt17(res.ring.center[1]) << ", "
        << fmt17(res.ring.center[2]) << ")\n";
    out << "plane grid: " << res.rows.size() << " rows, half-width = " << fmt17(res.window)
        << " -> " << cfg.output.surface << "\n";
    out << "max |asymptotic - exact| over the grid = " << fmt17(res.max_abs_err) << "\n";
    out << "report -> " << cfg.output.report << "\n";
    return 0;
}

} // namespace diabolo
