#include <iostream>

#include <CLI11.hpp>

#include "diabolo/commands.hpp"

using namespace diabolo;

int main(int argc, char** argv) {
    CLI::App app{"eigenvalue surface unfolding near the optic axes of absorbing chiral "
                 "crystals, validated against an exact eigensolver"};
    app.require_subcommand(1);

    std::string config_path, axis_sel, out_path;
    double scale = 1.0, half_width = 0.1;
    int grid_n = 0;
    bool dump = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--axis", axis_sel, "optic axis selector: ++, +-, -+ or --");
        sub->add_option("--scale", scale, "perturbation scale factor t");
        sub->add_option("--out", out_path, "grid output path (overrides [output] surface)");
        sub->add_option("--grid", grid_n, "grid resolution per side (>= 2)");
        sub->add_option("--half-width", half_width,
                        "window half-width (chart units; ring-radius multiples for "
                        "unfold-hermitian)");
        sub->add_flag("--dump-config", dump,
                      "print the effective configuration and exit without running");
        return sub;
    };

    CLI::App* c_axes =
        add_common(app.add_subcommand("axes", "list the four optic axes and their doublets"));
    CLI::App* c_classify =
        add_common(app.add_subcommand("classify", "regime classification at every optic axis"));
    CLI::App* c_surface = add_common(app.add_subcommand(
        "surface", "sample the asymptotic and exact eigenvalue sheets on a chart window"));
    CLI::App* c_herm = add_common(app.add_subcommand(
        "unfold-hermitian",
        "grid a synthetic Hermitian family over the plane of its exceptional ring"));
    CLI::App* c_validate = add_common(
        app.add_subcommand("validate", "run the invariant suite against the exact oracle"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();

    try {
        RunConfig cfg = load_config(config_path);
        if (sub->count("--axis")) cfg.grid.axis = axis_from_name(axis_sel);
        if (sub->count("--scale")) cfg.scale = scale;
        if (sub->count("--out")) cfg.output.surface = out_path;
        if (sub->count("--grid")) {
            if (grid_n < 2) throw ConfigError("--grid must be an integer >= 2");
            cfg.grid.resolution = grid_n;
        }
        if (sub->count("--half-width")) {
            if (half_width <= 0) throw ConfigError("--half-width must be positive");
            cfg.grid.half_width = half_width;
            cfg.grid.half_width_set = true;
        }

        if (dump) {
            std::cout << dump_config(cfg);
            return 0;
        }

        if (sub == c_axes) return cmd_axes(cfg, std::cout);
        if (sub == c_classify) return cmd_classify(cfg, std::cout);
        if (sub == c_surface) return cmd_surface(cfg, std::cout);
        if (sub == c_herm) return cmd_unfold_hermitian(cfg, std::cout);
        if (sub == c_validate) return cmd_validate(cfg, std::cout);
        return 2;  // unreachable with require_subcommand(1)
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidTensor& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NotBiaxial& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
