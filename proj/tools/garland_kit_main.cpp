#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "garland/cli.hpp"

namespace {

void add_common(CLI::App* sub, garland::cli::RunConfig& cfg, std::string& fmt,
                std::string& window) {
    sub->add_option("--input", cfg.input_path, "input JSON file");
    sub->add_option("--out", cfg.output_dir, "output directory (default: .)");
    sub->add_option("--seed", cfg.seed, "seed for randomized test-point sampling");
    sub->add_option("--format", fmt, "artifact format: json, csv, svg")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    sub->add_option("--window", window, "atlas window mu1_min,mu1_max,mu2_min,mu2_max");
    sub->add_option("--tol-newton", [&cfg](const std::vector<std::string>& vals) {
        cfg.tol_newton = std::stod(vals.front());
        return true;
    }, "Newton residual tolerance override (floor 1e-14)");
    sub->add_option("--tol-ode", [&cfg](const std::vector<std::string>& vals) {
        cfg.tol_ode = std::stod(vals.front());
        return true;
    }, "ODE tolerance override (floor 1e-14)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"garland-kit: resonant normal forms, garlands and bifurcation atlases "
                 "of centrally symmetric planar maps"};
    app.require_subcommand(1);

    garland::cli::RunConfig cfg;
    std::string fmt = "json";
    std::string window;
    int resolution = 0, q = 0, p = 0;
    std::string model;

    for (const char* name : {"normalize", "portrait", "garland", "atlas", "orbit"}) {
        CLI::App* sub = app.add_subcommand(name);
        add_common(sub, cfg, fmt, window);
        if (std::string(name) == "atlas" || std::string(name) == "orbit" ||
            std::string(name) == "normalize") {
            sub->add_option("--q", q, "resonance denominator (odd, >= 3)");
            sub->add_option("--p", p, "resonance numerator");
        }
        if (std::string(name) == "atlas") {
            sub->add_option("--resolution", resolution, "grid resolution (max 512)");
            sub->add_option("--model", model, "flow model for the atlas");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.format = fmt == "csv"   ? garland::cli::Format::Csv
                 : fmt == "svg" ? garland::cli::Format::Svg
                                : garland::cli::Format::Json;
    if (!window.empty()) {
        std::vector<double> vals;
        std::string token;
        std::stringstream ss(window);
        while (std::getline(ss, token, ',')) {
            try {
                vals.push_back(std::stod(token));
            } catch (const std::exception&) {
                std::cerr << "garland-kit: --window expects four comma-separated numbers\n";
                return 1;
            }
        }
        if (vals.size() != 4) {
            std::cerr << "garland-kit: --window expects four comma-separated numbers\n";
            return 1;
        }
        for (int i = 0; i < 4; ++i) cfg.window[i] = vals[i];
    }
    if (resolution > 0) cfg.resolution = resolution;
    if (q > 0) cfg.q = q;
    if (p > 0) cfg.p = p;
    if (!model.empty()) cfg.model = model;

    return garland::cli::run(cfg);
}
