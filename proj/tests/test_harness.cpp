#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "pptgeo/harness.hpp"
#include "pptgeo/private_states.hpp"

using namespace pptgeo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("pptgeo_harness_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

ExperimentConfig base_config(const std::string& experiment, const std::string& out) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    cfg.out = out;
    return cfg;
}

nlohmann::json manifest_of(const std::string& out_path) {
    return nlohmann::json::parse(read_text_file(out_path + ".manifest.json"));
}

}  // namespace

TEST_CASE("apply_config_kv: accepted keys and strict rejection") {
    ExperimentConfig cfg;
    apply_config_kv(cfg, "experiment", "widths");
    apply_config_kv(cfg, "d", "3");
    apply_config_kv(cfg, "ds", "4");
    apply_config_kv(cfg, "l", "2");
    apply_config_kv(cfg, "samples", "12");
    apply_config_kv(cfg, "seed", "987654321");
    apply_config_kv(cfg, "epsilon", "0.25");
    apply_config_kv(cfg, "tol_feas", "1e-6");
    apply_config_kv(cfg, "format", "json");
    apply_config_kv(cfg, "all", "true");
    CHECK(cfg.experiment == "widths");
    CHECK(cfg.d == 3);
    CHECK(cfg.d_s == 4);
    CHECK(cfg.l == 2);
    CHECK(cfg.samples == 12);
    CHECK(cfg.seed == 987654321);
    CHECK(cfg.epsilon == doctest::Approx(0.25));
    CHECK(cfg.tol_feas == doctest::Approx(1e-6));
    CHECK(cfg.format == "json");
    CHECK(cfg.all);

    CHECK_THROWS_AS(apply_config_kv(cfg, "mystery", "1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_kv(cfg, "d", "three"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_kv(cfg, "d", "2.5"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_kv(cfg, "d", "-2"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_kv(cfg, "epsilon", "abc"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_kv(cfg, "all", "maybe"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_kv(cfg, "seed", ""), std::invalid_argument);
}

TEST_CASE("apply_config_kv: tol_value marks the user override") {
    ExperimentConfig cfg;
    CHECK_FALSE(cfg.tol_value_user);
    apply_config_kv(cfg, "tol_value", "5e-4");
    CHECK(cfg.tol_value_user);
    CHECK(cfg.tol_value == doctest::Approx(5e-4));
}

TEST_CASE("merge_config_text: comments, blanks, CRLF, strictness") {
    ExperimentConfig cfg;
    merge_config_text(cfg,
                      "# a comment line\n"
                      "\n"
                      "experiment = construct\r\n"
                      "ds=3   \n"
                      "seed = 42\n");
    CHECK(cfg.experiment == "construct");
    CHECK(cfg.d_s == 3);
    CHECK(cfg.seed == 42);

    CHECK_THROWS_AS(merge_config_text(cfg, "unknown_key=1\n"), std::invalid_argument);
    CHECK_THROWS_AS(merge_config_text(cfg, "no equals sign\n"), std::invalid_argument);
}

TEST_CASE("finalize_config: gates and default outputs") {
    ExperimentConfig cfg;
    cfg.experiment = "unheard-of";
    CHECK_THROWS_AS(finalize_config(cfg), std::invalid_argument);

    cfg.experiment = "construct";
    cfg.format = "xml";
    CHECK_THROWS_AS(finalize_config(cfg), std::invalid_argument);
    cfg.format = "csv";
    cfg.samples = 0;
    CHECK_THROWS_AS(finalize_config(cfg), std::invalid_argument);
    cfg.samples = 1;
    cfg.tol_eig = 0.0;
    CHECK_THROWS_AS(finalize_config(cfg), std::invalid_argument);
    cfg.tol_eig = 1e-10;

    finalize_config(cfg);
    CHECK(cfg.out == "state.json");

    ExperimentConfig w = base_config("widths", "");
    finalize_config(w);
    CHECK(w.out == "widths.csv");

    ExperimentConfig b = base_config("bounds", "");
    finalize_config(b);
    CHECK(b.out == "bounds.json");
    ExperimentConfig bg = base_config("bounds", "");
    bg.grid = "1,2,2,3";
    finalize_config(bg);
    CHECK(bg.out == "bounds.csv");
}

TEST_CASE("solver_config_for: dimension-dependent value tolerance") {
    ExperimentConfig cfg;
    CHECK(solver_config_for(cfg, 16).value_tol == doctest::Approx(1e-4));
    CHECK(solver_config_for(cfg, 81).value_tol == doctest::Approx(1e-3));
    apply_config_kv(cfg, "tol_value", "2e-5");
    CHECK(solver_config_for(cfg, 81).value_tol == doctest::Approx(2e-5));
    cfg.tol_feas = 3e-8;
    CHECK(solver_config_for(cfg, 16).tol_feas == doctest::Approx(3e-8));
}

TEST_CASE("run construct: state file, manifest checksums, determinism") {
    TempDir dir("construct");
    ExperimentConfig cfg = base_config("construct", dir.file("state.json"));
    cfg.d_s = 2;
    const RunManifest m = run(cfg);
    CHECK(m.experiment == "construct");

    const std::string bytes = read_text_file(dir.file("state.json"));
    const FactoredState rho = state_from_json_text(bytes);
    CHECK(rho.dim() == 16);
    CHECK(is_ppt(rho, 1e-9).ppt);

    // manifest checksums describe the bytes actually on disk
    REQUIRE(m.output_checksums.count(dir.file("state.json")) == 1);
    CHECK(m.output_checksums.at(dir.file("state.json")) == checksum_hex(bytes));
    const nlohmann::json mj = manifest_of(dir.file("state.json"));
    CHECK(mj["experiment"] == "construct");
    CHECK(mj["config"]["ds"] == "2");
    CHECK(mj["config"]["tol_eig"] == "1e-10");
    CHECK(std::int64_t(mj["convergence_counts"]["distance_check_pass"]) == 1);

    // identical config gives identical bytes
    ExperimentConfig cfg2 = base_config("construct", dir.file("again.json"));
    cfg2.d_s = 2;
    run(cfg2);
    CHECK(read_text_file(dir.file("again.json")) == bytes);
}

TEST_CASE("run construct --all also writes the private bits") {
    TempDir dir("construct_all");
    ExperimentConfig cfg = base_config("construct", dir.file("state.json"));
    cfg.d_s = 2;
    cfg.all = true;
    run(cfg);
    const FactoredState gamma = read_state_json(dir.file("state.json") + ".gamma.json");
    const FactoredState gp = read_state_json(dir.file("state.json") + ".gamma_prime.json");
    CHECK(validate_private_form(gamma, 2).ok);
    CHECK(gamma.dim() == 16);
    CHECK(gp.dim() == 16);
}

TEST_CASE("run bounds: plan JSON and grid table") {
    TempDir dir("bounds");
    ExperimentConfig plan = base_config("bounds", dir.file("plan.json"));
    plan.epsilon = 1.0;
    run(plan);
    const nlohmann::json pj = nlohmann::json::parse(read_text_file(dir.file("plan.json")));
    CHECK(pj["d"] == "9604");
    CHECK(pj["l"] == 2);
    CHECK(pj["d_s"] == 49);
    CHECK(double(pj["c_effective"]) == doctest::Approx(3.3073549).epsilon(1e-6));

    ExperimentConfig grid = base_config("bounds", dir.file("grid.csv"));
    grid.grid = "1,3,2,4";
    run(grid);
    const std::string csv = read_text_file(dir.file("grid.csv"));
    CHECK(csv.substr(0, csv.find('\n')) == "l,d_s,p,first,second,exact,dominant");
    // 3 values of l times 3 shield dims plus the header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("run boost: measured tensor gap matches the closed form") {
    TempDir dir("boost");
    ExperimentConfig cfg = base_config("boost", dir.file("boost.csv"));
    cfg.l = 1;
    cfg.d_s = 2;
    run(cfg);
    const std::string csv = read_text_file(dir.file("boost.csv"));
    CHECK(csv.find("formula_gap") != std::string::npos);
    CHECK(csv.find("0.82842712474619") != std::string::npos);
}

TEST_CASE("run squeeze consumes a state file") {
    TempDir dir("squeeze");
    ExperimentConfig mk = base_config("construct", dir.file("state.json"));
    mk.d_s = 2;
    run(mk);

    ExperimentConfig sq = base_config("squeeze", dir.file("squeezed.json"));
    sq.in = dir.file("state.json");
    run(sq);
    const nlohmann::json sj = nlohmann::json::parse(read_text_file(dir.file("squeezed.json")));
    CHECK(sj["ppt"] == true);
    CHECK(double(sj["primal_residual"]) >= -1e-8);
    CHECK(double(sj["transposed_residual"]) >= -1e-8);
    const double p = 1.0 / (std::sqrt(2.0) + 1.0);
    CHECK(double(sj["norms"][0][3]) == doctest::Approx(0.5 * (1 - p)).epsilon(1e-9));

    // missing --in fails before computing but still writes a manifest
    ExperimentConfig bad = base_config("squeeze", dir.file("nope.json"));
    CHECK_THROWS_AS(run(bad), std::invalid_argument);
    CHECK(fs::exists(dir.file("nope.json") + ".manifest.json"));
}

TEST_CASE("run gap: every row satisfied") {
    TempDir dir("gap");
    ExperimentConfig cfg = base_config("gap", dir.file("gap.csv"));
    cfg.d_s = 2;
    cfg.random = 1;
    run(cfg);
    const std::string csv = read_text_file(dir.file("gap.csv"));
    CHECK(csv.find("false") == std::string::npos);
    CHECK(csv.find("flower") != std::string::npos);
    CHECK(csv.find("projected_gamma") != std::string::npos);
}

TEST_CASE("run fidelity-ppt: closed form against the solver") {
    TempDir dir("fid");
    ExperimentConfig cfg = base_config("fidelity-ppt", dir.file("report.json"));
    cfg.schmidt = "0.8,0.6";
    run(cfg);
    const nlohmann::json rj = nlohmann::json::parse(read_text_file(dir.file("report.json")));
    CHECK(double(rj["closed_form"]) == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(double(rj["value"]) == doctest::Approx(0.64).epsilon(1e-3));
    CHECK(double(rj["fidelity"]) == doctest::Approx(0.8).epsilon(1e-3));
}

TEST_CASE("run wigner and widths: summaries, determinism, plots") {
    TempDir dir("widths");
    ExperimentConfig wg = base_config("wigner", dir.file("wigner.csv"));
    wg.n = 8;
    wg.samples = 25;
    run(wg);
    const nlohmann::json ws =
        nlohmann::json::parse(read_text_file(dir.file("wigner.csv") + ".summary.json"));
    CHECK(double(ws["asymptote"]) == doctest::Approx(2.0 / std::sqrt(8.0)).epsilon(1e-12));

    ExperimentConfig wd = base_config("widths", dir.file("widths.csv"));
    wd.d = 2;
    wd.samples = 2;
    wd.seed = 11;
    const RunManifest m1 = run(wd);
    const std::string bytes1 = read_text_file(dir.file("widths.csv"));

    ExperimentConfig wd2 = base_config("widths", dir.file("widths2.csv"));
    wd2.d = 2;
    wd2.samples = 2;
    wd2.seed = 11;
    run(wd2);
    CHECK(read_text_file(dir.file("widths2.csv")) == bytes1);

    const nlohmann::json mj = manifest_of(dir.file("widths.csv"));
    CHECK(mj["config"]["solver_value_tol"] == "0.0001");
    CHECK(std::int64_t(mj["convergence_counts"]["h_ppt_converged"]) >= 0);

    plot_export(dir.file("widths.csv"), "widths", dir.file("widths.svg"));
    const std::string svg = read_text_file(dir.file("widths.svg"));
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("h_ppt") != std::string::npos);

    plot_export(dir.file("wigner.csv"), "wigner", dir.file("wigner.svg"));
    CHECK(read_text_file(dir.file("wigner.svg")).rfind("<svg", 0) == 0);
}

TEST_CASE("plot_export: bounds chart and error paths") {
    TempDir dir("plots");
    ExperimentConfig grid = base_config("bounds", dir.file("grid.csv"));
    grid.grid = "1,4,3,3";
    run(grid);
    plot_export(dir.file("grid.csv"), "bounds", dir.file("grid.svg"));
    CHECK(read_text_file(dir.file("grid.svg")).rfind("<svg", 0) == 0);

    Table empty;
    empty.columns = {"h_ppt", "h_sep", "opnorm"};
    emit_table(empty, dir.file("empty.csv"), "csv");
    CHECK_THROWS_AS(plot_export(dir.file("empty.csv"), "widths", dir.file("empty.svg")),
                    std::invalid_argument);
    CHECK_FALSE(fs::exists(dir.file("empty.svg")));

    CHECK_THROWS_AS(plot_export(dir.file("grid.csv"), "pie", dir.file("pie.svg")),
                    std::invalid_argument);
}
