#pragma once

#include <iosfwd>
#include <string>

#include "diabolo/crystal.hpp"

namespace diabolo {

// Sampling window over the (s1, s2) direction chart.  The window is centered
// on the selected optic axis unless an explicit center is given.
struct GridSpec {
    AxisBranch axis = AxisBranch::MP;
    int resolution = 101;    // grid points per side, >= 2
    double half_width = 0.1;  // > 0, chart units
    bool half_width_set = false;
    bool center_set = false;
    double center_s1 = 0.0, center_s2 = 0.0;
};

struct OutputSpec {
    std::string surface = "surface.csv";
    std::string report = "report.json";
};

// Tolerance overrides for the validation command.  Defaults match the
// shipped acceptance thresholds.
struct ToleranceSpec {
    double oracle_eq = 1e-13;    // reduced-problem oracle equivalence
    double gauge = 1e-11;        // gauge-invariance drift
    double closure = 1e-8;       // closed-form vs generic (finite-difference) machinery
    double cone_order = 1.9;     // minimum fitted order, unperturbed cone
    double joint_order = 1.4;    // minimum fitted order, joint scaling
};

// Everything a command needs: the material model, the perturbation scale t
// (dichroic and chiral tensors enter multiplied by t), the grid window and
// output destinations.
struct RunConfig {
    std::array<double, 3> eta{};
    DielectricModel::RealTensor dichroic{};
    DielectricModel::ComplexTensor gamma{};
    double scale = 1.0;
    GridSpec grid;
    OutputSpec output;
    ToleranceSpec tolerances;

    // Model with perturbation tensors scaled by `scale`; construction
    // validates tensor symmetry (InvalidTensor on violation).
    DielectricModel model() const;
    // Unscaled model (t = 1).
    DielectricModel base_model() const;
};

// Parses the sectioned key = value format documented in
// configs/example_crystal.ini.  `name` is used in error messages.
// Throws ConfigError with name:line context on malformed input.
RunConfig parse_config(std::istream& in, const std::string& name);

// Reads and parses a file; a missing or unreadable file throws ConfigError
// naming the path.
RunConfig load_config(const std::string& path);

// Serializes cfg in the same format parse_config accepts; the round trip
// parse(dump(cfg)) reproduces every field exactly (17 significant digits).
std::string dump_config(const RunConfig& cfg);

} // namespace diabolo
