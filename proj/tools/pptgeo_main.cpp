#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "pptgeo/harness.hpp"

namespace {

// every value flows through apply_config_kv so CLI flags, config files and
// library callers share one strict parser
void add_kv_option(CLI::App* sub, const std::string& flag, const std::string& key,
                   std::map<std::string, std::string>& kv, const std::string& desc) {
    sub->add_option_function<std::string>(
        flag, [&kv, key](const std::string& v) { kv[key] = v; }, desc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pptgeo: flower states, trace-distance bounds, and PPT/SEP geometry probes"};
    app.require_subcommand(1);

    std::map<std::string, std::string> kv;
    std::string config_path;

    auto* construct =
        app.add_subcommand("construct", "build a flower state, optionally a tensor power");
    add_kv_option(construct, "--ds", "ds", kv, "shield dimension (>= 2)");
    add_kv_option(construct, "--power", "power", kv, "tensor power l");
    construct->add_flag_callback(
        "--all", [&kv]() { kv["all"] = "true"; }, "also write gamma and gamma_prime files");

    auto* bounds = app.add_subcommand("bounds", "analytic boosting bounds: plan or grid table");
    add_kv_option(bounds, "--epsilon", "epsilon", kv, "target closing parameter (plan mode)");
    add_kv_option(bounds, "--grid", "grid", kv, "lmin,lmax,dsmin,dsmax (table mode)");

    auto* boost =
        app.add_subcommand("boost", "dense tensor-power gap, measured against the closed form");
    add_kv_option(boost, "--l", "l", kv, "number of copies");
    add_kv_option(boost, "--ds", "ds", kv, "shield dimension");

    auto* widths = app.add_subcommand("widths", "support-function width statistics at local dim d");
    add_kv_option(widths, "--d", "d", kv, "local dimension (2 or 3)");
    add_kv_option(widths, "--samples", "samples", kv, "number of sampled directions");

    auto* wigner = app.add_subcommand("wigner", "operator-norm statistics of sampled directions");
    add_kv_option(wigner, "--n", "n", kv, "ambient dimension");
    add_kv_option(wigner, "--samples", "samples", kv, "number of sampled directions");

    auto* squeeze = app.add_subcommand("squeeze", "privacy-squeeze a key-shield state file");
    add_kv_option(squeeze, "--in", "in", kv, "input state JSON");

    auto* gap = app.add_subcommand("gap", "key-shield distance bound over PPT states");
    add_kv_option(gap, "--ds", "ds", kv, "shield dimension");
    add_kv_option(gap, "--random", "random", kv, "number of random PPT states to include");

    auto* fidelity =
        app.add_subcommand("fidelity-ppt", "max overlap of a pure state with the PPT set");
    add_kv_option(fidelity, "--schmidt", "schmidt", kv, "Schmidt coefficients a1,a2,...");

    auto* plot = app.add_subcommand("plot", "render a result table as a static SVG");
    std::string plot_table, plot_kind, plot_image;
    plot->add_option("--table", plot_table, "result table (CSV)")->required();
    plot->add_option("--kind", plot_kind, "widths | wigner | bounds")->required();
    plot->add_option("--image", plot_image, "output SVG path")->required();

    for (CLI::App* sub : {construct, bounds, boost, widths, wigner, squeeze, gap, fidelity}) {
        add_kv_option(sub, "--seed", "seed", kv, "master RNG seed");
        add_kv_option(sub, "--out", "out", kv, "output path");
        add_kv_option(sub, "--format", "format", kv, "csv | json");
        add_kv_option(sub, "--tol-eig", "tol_eig", kv, "eigenvalue tolerance");
        add_kv_option(sub, "--tol-feas", "tol_feas", kv, "feasibility tolerance");
        add_kv_option(sub, "--tol-value", "tol_value", kv, "solver value tolerance");
        sub->add_option("--config", config_path, "flat key=value config file");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (sub == plot) {
            pptgeo::plot_export(plot_table, plot_kind, plot_image);
            std::printf("wrote %s\n", plot_image.c_str());
            return 0;
        }
        pptgeo::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = pptgeo::parse_config_file(config_path);
        cfg.experiment = sub->get_name();
        for (const auto& [k, v] : kv) pptgeo::apply_config_kv(cfg, k, v);
        pptgeo::finalize_config(cfg);
        const pptgeo::RunManifest man = pptgeo::run(cfg);
        if (cfg.experiment == "bounds" && cfg.grid.empty())
            std::fputs(pptgeo::read_text_file(cfg.out).c_str(), stdout);
        for (const auto& [path, sum] : man.output_checksums)
            std::printf("%s  %s\n", sum.c_str(), path.c_str());
        std::printf("manifest: %s.manifest.json (%.3f s)\n", cfg.out.c_str(),
                    man.duration_seconds);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
