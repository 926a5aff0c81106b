#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "diabolo/config.hpp"
#include "diabolo/unfold_hermitian.hpp"

namespace diabolo {

// One grid row of the sampled eigenvalue surface.  Column order is pinned;
// see kSurfaceHeader.  The exact columns come from the trace-identity
// eigensolver on the full perturbed matrix, matched to the asymptotic pair
// by minimal total distance, and abs_err_* are the moduli of the matched
// differences.
constexpr int kSurfaceColumns = 14;
using SurfaceRow = std::array<double, kSurfaceColumns>;

extern const char* const kSurfaceHeader;    // s1,s2,...
extern const char* const kHermitianHeader;  // a,b,...

// Grid of the two eigenvalue sheets over the (s1, s2) chart around the
// selected optic axis, with the exact solution alongside.
struct SurfaceResult {
    OpticAxis axis;
    ClassificationReport classification;
    double center_s1 = 0.0, center_s2 = 0.0;
    std::vector<SurfaceRow> rows;  // row-major, s2 outer, s1 inner
    int skipped = 0;               // grid nodes outside the unit disk
    double max_abs_err = 0.0;
};

SurfaceResult compute_surface(const RunConfig& cfg);

// Grid of the doublet eigenvalues of a deterministic synthetic Hermitian
// family (4x4, three parameters) under a fixed complex perturbation, sampled
// over the plane of its exceptional ring.  Plane coordinates (a, b) are
// centered on the ring center; the window half-width is
// grid.half_width * radius when half_width was given, 2 * radius otherwise.
struct HermitianGridResult {
    ExceptionalRing ring;
    double epsilon_norm = 0.0;
    double window = 0.0;  // plane half-width in unfolding units
    std::vector<SurfaceRow> rows;
    double max_abs_err = 0.0;
};

HermitianGridResult compute_hermitian_grid(const RunConfig& cfg);

// Deterministic serialization used by both commands and tests: one header
// line, comma-separated columns, every number printed with 17 significant
// digits.
void write_grid_csv(const char* header, const std::vector<SurfaceRow>& rows, std::ostream& os);

// Subcommand bodies.  Human-readable output goes to `out`; grid and report
// files go to the paths in cfg.output.  All return a process exit code
// (0 ok, 1 validation failure, 2 config error).
int cmd_axes(const RunConfig& cfg, std::ostream& out);
int cmd_classify(const RunConfig& cfg, std::ostream& out);
int cmd_surface(const RunConfig& cfg, std::ostream& out);
int cmd_unfold_hermitian(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out);

} // namespace diabolo
