#include "diabolo/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace diabolo {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

struct ParseCursor {
    const std::string& name;
    int line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
    }
};

// Whitespace-separated reals; the whole value must be consumed.
std::vector<double> parse_reals(const std::string& value, const ParseCursor& at) {
    std::istringstream is(value);
    std::vector<double> out;
    double v;
    while (is >> v) {
        if (!std::isfinite(v)) at.fail("non-finite number '" + value + "'");
        out.push_back(v);
    }
    if (!is.eof()) at.fail("expected a list of reals, got '" + value + "'");
    return out;
}

double parse_one_real(const std::string& value, const ParseCursor& at) {
    auto v = parse_reals(value, at);
    if (v.size() != 1) at.fail("expected a single number, got '" + value + "'");
    return v[0];
}

// Complex entries rendered as bracketed pairs:  [re, im] [re, im] ...
std::vector<Complex> parse_complexes(const std::string& value, const ParseCursor& at) {
    std::vector<Complex> out;
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i]))) ++i;
    };
    auto number = [&]() -> double {
        char* end = nullptr;
        double v = std::strtod(value.c_str() + i, &end);
        if (end == value.c_str() + i) at.fail("expected a number in '" + value + "'");
        i = static_cast<size_t>(end - value.c_str());
        if (!std::isfinite(v)) at.fail("non-finite number '" + value + "'");
        return v;
    };
    auto expect = [&](char c) {
        skip_ws();
        if (i >= value.size() || value[i] != c)
            at.fail(std::string("expected '") + c + "' in '" + value + "'");
        ++i;
    };
    skip_ws();
    while (i < value.size()) {
        expect('[');
        double re = number();
        expect(',');
        double im = number();
        expect(']');
        out.emplace_back(re, im);
        skip_ws();
    }
    return out;
}

} // namespace

DielectricModel RunConfig::base_model() const { return DielectricModel(eta, dichroic, gamma); }

DielectricModel RunConfig::model() const { return base_model().scaled(scale); }

RunConfig parse_config(std::istream& in, const std::string& name) {
    RunConfig cfg;
    ParseCursor at{name};
    std::string section;
    bool have_eta = false;
    std::array<bool, 3> dichroic_rows{};
    std::array<bool, 3> gamma_rows{};

    std::string raw;
    while (std::getline(in, raw)) {
        ++at.line;
        // comments run to end of line
        size_t cut = raw.find_first_of("#;");
        std::string line = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') at.fail("unterminated section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "transparent" && section != "dichroic" && section != "gamma" &&
                section != "grid" && section != "output" && section != "tolerances")
                at.fail("unknown section [" + section + "]");
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos) at.fail("expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty()) at.fail("key '" + key + "' before any section header");

        auto row_index = [&]() -> int {
            if (key == "row1") return 0;
            if (key == "row2") return 1;
            if (key == "row3") return 2;
            at.fail("unknown key '" + key + "' in [" + section + "]");
        };

        if (section == "transparent") {
            if (key != "eta") at.fail("unknown key '" + key + "' in [transparent]");
            auto v = parse_reals(value, at);
            if (v.size() != 3) at.fail("eta needs exactly three values");
            cfg.eta = {v[0], v[1], v[2]};
            have_eta = true;
        } else if (section == "dichroic") {
            int r = row_index();
            auto v = parse_reals(value, at);
            if (v.size() != 3) at.fail(key + " needs exactly three values");
            for (int j = 0; j < 3; ++j) cfg.dichroic[r][j] = v[j];
            dichroic_rows[r] = true;
        } else if (section == "gamma") {
            int r = row_index();
            auto v = parse_complexes(value, at);
            if (v.size() != 3) at.fail(key + " needs exactly three [re, im] pairs");
            for (int j = 0; j < 3; ++j) cfg.gamma[r][j] = v[j];
            gamma_rows[r] = true;
        } else if (section == "grid") {
            if (key == "axis") {
                try {
                    cfg.grid.axis = axis_from_name(value);
                } catch (const ConfigError& e) {
                    at.fail(e.what());
                }
            } else if (key == "resolution") {
                double v = parse_one_real(value, at);
                if (v != std::floor(v) || v < 2 || v > 100000)
                    at.fail("resolution must be an integer >= 2");
                cfg.grid.resolution = static_cast<int>(v);
            } else if (key == "half_width") {
                cfg.grid.half_width = parse_one_real(value, at);
                if (cfg.grid.half_width <= 0) at.fail("half_width must be positive");
                cfg.grid.half_width_set = true;
            } else if (key == "center") {
                auto v = parse_reals(value, at);
                if (v.size() != 2) at.fail("center needs exactly two values");
                cfg.grid.center_s1 = v[0];
                cfg.grid.center_s2 = v[1];
                cfg.grid.center_set = true;
            } else if (key == "scale") {
                cfg.scale = parse_one_real(value, at);
            } else {
                at.fail("unknown key '" + key + "' in [grid]");
            }
        } else if (section == "output") {
            if (key == "surface")
                cfg.output.surface = value;
            else if (key == "report")
                cfg.output.report = value;
            else
                at.fail("unknown key '" + key + "' in [output]");
        } else {  // tolerances
            double v = parse_one_real(value, at);
            if (v <= 0) at.fail("tolerance '" + key + "' must be positive");
            if (key == "oracle_eq")
                cfg.tolerances.oracle_eq = v;
            else if (key == "gauge")
                cfg.tolerances.gauge = v;
            else if (key == "closure")
                cfg.tolerances.closure = v;
            else if (key == "cone_order")
                cfg.tolerances.cone_order = v;
            else if (key == "joint_order")
                cfg.tolerances.joint_order = v;
            else
                at.fail("unknown key '" + key + "' in [tolerances]");
        }
    }

    at.line = 0;  // end-of-file diagnostics
    if (!have_eta) at.fail("missing [transparent] eta");
    auto all_or_none = [&](const std::array<bool, 3>& rows, const char* what) {
        int n = rows[0] + rows[1] + rows[2];
        if (n != 0 && n != 3)
            at.fail(std::string("[") + what + "] needs all of row1..row3 (or none)");
    };
    all_or_none(dichroic_rows, "dichroic");
    all_or_none(gamma_rows, "gamma");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

std::string dump_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[transparent]\n"
       << "eta = " << fmt17(cfg.eta[0]) << " " << fmt17(cfg.eta[1]) << " " << fmt17(cfg.eta[2])
       << "\n\n[dichroic]\n";
    for (int r = 0; r < 3; ++r) {
        os << "row" << r + 1 << " =";
        for (int j = 0; j < 3; ++j) os << " " << fmt17(cfg.dichroic[r][j]);
        os << "\n";
    }
    os << "\n[gamma]\n";
    for (int r = 0; r < 3; ++r) {
        os << "row" << r + 1 << " =";
        for (int j = 0; j < 3; ++j)
            os << " [" << fmt17(cfg.gamma[r][j].real()) << ", " << fmt17(cfg.gamma[r][j].imag())
               << "]";
        os << "\n";
    }
    os << "\n[grid]\n"
       << "axis = " << axis_name(cfg.grid.axis) << "\n"
       << "resolution = " << cfg.grid.resolution << "\n"
       << "half_width = " << fmt17(cfg.grid.half_width) << "\n";
    if (cfg.grid.center_set)
        os << "center = " << fmt17(cfg.grid.center_s1) << " " << fmt17(cfg.grid.center_s2) << "\n";
    os << "scale = " << fmt17(cfg.scale) << "\n"
       << "\n[output]\n"
       << "surface = " << cfg.output.surface << "\n"
       << "report = " << cfg.output.report << "\n"
       << "\n[tolerances]\n"
       << "oracle_eq = " << fmt17(cfg.tolerances.oracle_eq) << "\n"
       << "gauge = " << fmt17(cfg.tolerances.gauge) << "\n"
       << "closure = " << fmt17(cfg.tolerances.closure) << "\n"
       << "cone_order = " << fmt17(cfg.tolerances.cone_order) << "\n"
       << "joint_order = " << fmt17(cfg.tolerances.joint_order) << "\n";
    return os.str();
}

} // namespace diabolo
