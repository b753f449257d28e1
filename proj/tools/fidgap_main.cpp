#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fidgap/commands.hpp"

namespace {

bool verbose_logging() {
    const char* env = std::getenv("FIDGAP_LOG");
    return env != nullptr && *env != '\0';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fidgap: fidelity decay and spectral gap toolkit"};
    app.require_subcommand(1);

    fidgap::GlobalOpts opts;
    app.add_option("--seed", opts.seed, "seed for the randomized invariant checks");
    app.add_option("--tol-scale", opts.tol_scale, "scale factor applied to check tolerances");
    app.add_option("--jobs", opts.jobs, "concurrent sweep evaluations");

    std::string config_path, out_path, svg_path, param, demo_name;
    std::vector<double> values;

    CLI::App* validate = app.add_subcommand("validate", "run the structural invariant checks");
    validate->add_option("config", config_path, "model config JSON")->required();

    CLI::App* gap = app.add_subcommand("gap", "spectral gap and block-structure report");
    gap->add_option("config", config_path, "model config JSON")->required();
    gap->add_option("--out", out_path, "write the JSON report to this file");

    CLI::App* fidelity = app.add_subcommand("fidelity", "fidelity curve with decay bounds");
    fidelity->add_option("config", config_path, "model config JSON")->required();
    fidelity->add_option("--out", out_path, "output base path (writes <out>.csv and <out>.json)");
    fidelity->add_option("--svg", svg_path, "write an SVG line chart to this file");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep one scalar config parameter");
    sweep->add_option("config", config_path, "model config JSON")->required();
    sweep->add_option("--param", param, "dotted path of the scalar to sweep")->required();
    sweep->add_option("--values", values, "values to substitute")->expected(-1);
    sweep->add_option("--out", out_path, "write one result envelope per value to this file");

    CLI::App* demo = app.add_subcommand("demo", "emit a built-in demo config");
    demo->add_option("name", demo_name, "depolarizing | davies-2q | unitary-chain")->required();
    demo->add_option("--out", out_path, "write the config to this file");

    CLI11_PARSE(app, argc, argv);

    if (verbose_logging()) {
        std::cerr << "fidgap " << fidgap::kToolkitVersion << " seed=" << opts.seed
                  << " tol-scale=" << opts.tol_scale << "\n";
    }

    try {
        if (validate->parsed()) return fidgap::cmd_validate(config_path, opts, std::cout);
        if (gap->parsed()) return fidgap::cmd_gap(config_path, out_path, opts, std::cout);
        if (fidelity->parsed()) {
            return fidgap::cmd_fidelity(config_path, out_path, svg_path, opts, std::cout);
        }
        if (sweep->parsed()) {
            return fidgap::cmd_sweep(config_path, param, values, out_path, opts, std::cout);
        }
        if (demo->parsed()) return fidgap::cmd_demo(demo_name, out_path, std::cout);
    } catch (const fidgap::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const fidgap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
