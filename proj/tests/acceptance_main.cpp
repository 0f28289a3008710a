// Acceptance gate: one numbered check per release criterion, each printing a
// single PASS/FAIL line with its wall time and measured values. Run all with
// no arguments, a single one with --criterion N; criterion 10 additionally
// needs --pptgeo <path-to-cli>.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "pptgeo/analytic_bounds.hpp"
#include "pptgeo/geometry.hpp"
#include "pptgeo/io.hpp"
#include "pptgeo/operators.hpp"
#include "pptgeo/private_states.hpp"
#include "pptgeo/spectral.hpp"
#include "pptgeo/squeezing.hpp"
#include "test_util.hpp"

using namespace pptgeo;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) { return format_real(v); }

SolverConfig batch_solver() {
    SolverConfig sc;
    sc.max_iterations = 2000;
    sc.restarts = 2;
    sc.plateau_window = 150;
    sc.inner_projection_iterations = 80;
    sc.projection_max_iterations = 3000;
    sc.seesaw_restarts = 16;
    sc.seesaw_sweeps = 30;
    return sc;
}

// ---- criterion 1: flower construction invariants ----------------------

Outcome criterion_construction() {
    double worst_trace = 0.0, worst_eig = 0.0, worst_pt = 0.0, worst_dist = 0.0;
    for (const std::size_t ds : {2u, 3u, 4u}) {
        const FlowerState f = construct_flower(ds);
        const ComplexMatrix& m = f.rho.matrix();
        worst_trace = std::max(worst_trace, std::abs(trace(m).real() - 1.0));
        worst_eig = std::max(worst_eig, -eig_hermitian(m).values.front());
        const ComplexMatrix pt =
            partial_transpose(m, f.rho.factor_dims(), f.rho.transpose_set());
        worst_pt = std::max(worst_pt, max_abs_diff(pt, m));
        const double want = 2.0 / (std::sqrt(static_cast<double>(ds)) + 1.0);
        worst_dist = std::max(worst_dist, std::abs(trace_distance(f.rho, f.gamma) - want));
    }
    const bool ok =
        worst_trace <= 1e-10 && worst_eig <= 1e-10 && worst_pt <= 1e-10 && worst_dist <= 1e-8;
    return {ok, "trace defect " + fmt(worst_trace) + ", min-eig defect " + fmt(worst_eig) +
                    ", PT defect " + fmt(worst_pt) + ", distance defect " + fmt(worst_dist)};
}

// ---- criterion 2: fidelity identity and Fuchs-van de Graaf -------------

Outcome criterion_fidelity() {
    double worst_fid = 0.0;
    bool contained = true;
    for (const std::size_t ds : {2u, 3u, 4u}) {
        const FlowerState f = construct_flower(ds);
        const double fid = fidelity(f.rho, f.gamma);
        worst_fid = std::max(worst_fid, std::abs(fid - std::sqrt(1.0 - f.p)));
        const auto [lo, hi] = fvg_interval(fid);
        const double dist = trace_distance(f.rho, f.gamma);
        contained = contained && lo <= dist && dist <= hi;
    }
    return {worst_fid <= 1e-8 && contained,
            "fidelity defect " + fmt(worst_fid) +
                (contained ? ", interval contains the distance" : ", interval violated")};
}

// ---- criterion 3: dense tensor boost at l = 2 --------------------------

Outcome criterion_boost() {
    const FlowerState f = construct_flower(2);
    const FactoredState r2 = tensor_power(f.rho, 2);
    const FactoredState g2 = tensor_power(f.gamma, 2);
    const double measured = trace_distance(r2, g2);
    const double formula = exact_tensor_gap(f.p, 2);
    const bool ppt = is_ppt(r2, 1e-9).ppt;
    const bool ok = std::abs(measured - formula) <= 1e-7 && ppt;
    return {ok, "measured " + fmt(measured) + " vs 2(1-(1-p)^2) = " + fmt(formula) +
                    (ppt ? ", tensor square is PPT" : ", tensor square NOT PPT")};
}

// ---- criterion 4: scaling plan over dyadic epsilon ---------------------

Outcome criterion_scaling() {
    double worst_c = 0.0;
    bool first_ok = true;
    for (int k = 0; k <= 20; ++k) {
        const double eps = std::ldexp(1.0, -k);
        const BoostPlan plan = plan_for_epsilon(eps);
        worst_c = std::max(worst_c, plan.c_effective);
        first_ok = first_ok && boost_bounds(plan.l, plan.d_s).first >= 2.0 - eps - 1e-12;
    }
    return {worst_c < 6.0 && first_ok,
            "max c_effective " + fmt(worst_c) +
                (first_ok ? ", first bound >= 2 - eps throughout" : ", first bound broken")};
}

// ---- criterion 5: PPT overlap vs closed form ----------------------------

Outcome criterion_overlap() {
    const SolverConfig sc2 = batch_solver();
    SolverConfig sc3 = batch_solver();
    sc3.max_iterations = 400;
    sc3.inner_projection_iterations = 60;
    sc3.projection_max_iterations = 800;
    sc3.value_tol = 1e-3;

    double worst = 0.0;
    SampleRng coeffs(2026, 0);
    {
        const double r2 = 1.0 / std::sqrt(2.0);
        SampleRng rng(2026, 1);
        const SolverReport rep = max_overlap_ppt({r2, r2}, 2, sc2, rng);
        worst = std::max(worst, std::abs(rep.value - 0.5));
    }
    for (int k = 0; k < 50; ++k) {
        const std::vector<double> a = testutil::random_schmidt(2, coeffs);
        const double amax = std::max(a[0], a[1]);
        SampleRng rng(2026, 100 + k);
        const SolverReport rep = max_overlap_ppt(a, 2, sc2, rng);
        worst = std::max(worst, std::abs(rep.value - amax * amax));
    }
    for (int k = 0; k < 20; ++k) {
        const std::vector<double> a = testutil::random_schmidt(3, coeffs);
        double amax = 0.0;
        for (double x : a) amax = std::max(amax, x);
        SampleRng rng(2026, 200 + k);
        const SolverReport rep = max_overlap_ppt(a, 3, sc3, rng);
        worst = std::max(worst, std::abs(rep.value - amax * amax));
    }
    return {worst <= 1e-4, "max |overlap - (max a)^2| = " + fmt(worst) + " over 71 instances"};
}

// ---- criterion 6: squeezing inequalities --------------------------------

Outcome criterion_squeezing() {
    double worst = 0.0;
    for (const std::size_t ds : {2u, 3u, 4u}) {
        const SqueezeResiduals r = squeeze_inequalities(construct_flower(ds).rho);
        worst = std::min(worst, std::min(r.primal_residual, r.transposed_residual));
    }
    for (int k = 0; k < 100; ++k) {
        SampleRng rng(77, k);
        const SqueezeResiduals r = squeeze_inequalities(random_ppt_state(2, rng));
        worst = std::min(worst, std::min(r.primal_residual, r.transposed_residual));
    }

    // NPT control: two Bell pairs across the key/shield split
    std::vector<cplx> psi(16);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t ap = 0; ap < 2; ++ap) psi[a * 8 + a * 4 + ap * 2 + ap] = 0.5;
    const FactoredState bell(testutil::projector(psi), {2, 2, 2, 2}, {1, 3});
    const bool control_npt = !is_ppt(bell, 1e-9).ppt;
    const double control = squeeze_residuals(bell).transposed_residual;

    const bool ok = worst >= -1e-8 && control_npt && control < -1e-6;
    return {ok, "min residual " + fmt(worst) + " over 103 PPT states; NPT control residual " +
                    fmt(control)};
}

// ---- criterion 7: trace-distance bracket for the private bit ------------

Outcome criterion_bracket() {
    SolverConfig sc;
    bool ok = true;
    std::string detail;
    for (const std::size_t ds : {2u, 3u, 4u}) {
        const double ub = closest_ppt_trace_ub(construct_flower(ds).gamma, sc);
        const double lo = 1.0 / (2.0 * (static_cast<double>(ds) + 1.0)) - 1e-6;
        const double hi = 2.0 / (std::sqrt(static_cast<double>(ds)) + 1.0) + 1e-6;
        ok = ok && ub >= lo && ub <= hi;
        if (!detail.empty()) detail += ", ";
        detail += "d_s=" + std::to_string(ds) + ": " + fmt(ub) + " vs [" + fmt(lo) + ", " +
                  fmt(hi) + "]";
    }
    return {ok, detail};
}

// ---- criterion 8: norm lemma and realignment property suite -------------

Outcome criterion_norms() {
    std::size_t violations = 0;
    for (const std::size_t d : {2u, 3u, 4u}) {
        const std::vector<std::size_t> dims{d, d};
        SampleRng rng(88, d);
        for (int k = 0; k < 10000; ++k) {
            const ComplexMatrix a = testutil::random_matrix(d * d, rng);
            const double t1 = schatten_norm(a, 1.0);
            const double tp = schatten_norm(partial_transpose(a, dims, {1}), 1.0);
            const double tr = schatten_norm(realign(a), 1.0);
            const double dd = static_cast<double>(d);
            const double tol = 1e-9 * (1.0 + t1);
            if (t1 > dd * tp + tol || tp > dd * t1 + tol) ++violations;
            if (t1 > dd * tr + tol || tr > dd * t1 + tol) ++violations;
            if (std::abs(frobenius_norm(a) - frobenius_norm(realign(a))) > tol) ++violations;
        }
    }
    return {violations == 0, std::to_string(violations) + " violations in 30000 draws"};
}

// ---- criterion 9: width statistics at d = 2 ------------------------------

Outcome criterion_widths() {
    const WidthResult wr = width_experiment(2, 500, 2026, batch_solver());
    bool nesting = true;
    for (const auto& row : wr.rows)
        nesting = nesting && row.h_sep_estimate <= row.h_ppt.value + 1e-6 &&
                  row.h_ppt.value <= row.h_states + 1e-6;
    const WidthSummary& s = wr.summary;
    const bool means = s.ppt_lower_ok && s.ppt_upper_ok && s.sep_upper_ok;
    const OpnormResult on = opnorm_experiment(16, 2000, 7);
    const bool opnorm_ok = on.stats.mean >= 0.38 && on.stats.mean <= 0.62;
    return {nesting && means && opnorm_ok,
            std::string(nesting ? "nesting holds" : "nesting BROKEN") + "; mean h_ppt " +
                fmt(s.h_ppt.mean) + " in [" + fmt(s.ppt_lower_bound) + ", " +
                fmt(s.ppt_upper_bound) + "]: " + (means ? "yes" : "no") + "; mean h_sep " +
                fmt(s.h_sep.mean) + "; opnorm mean " + fmt(on.stats.mean)};
}

// ---- criterion 10: byte-identical reruns through the CLI ----------------

int run_cli(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

Outcome criterion_determinism(const std::string& pptgeo) {
    if (pptgeo.empty()) return {false, "no --pptgeo path given"};

    const fs::path base = fs::temp_directory_path() / "pptgeo_accept10";
    fs::remove_all(base);
    const fs::path dir_a = base / "a", dir_b = base / "b";
    fs::create_directories(dir_a);
    fs::create_directories(dir_b);

    const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
        {"construct --ds 2 --seed 7 --out {}/state.json", {"state.json"}},
        {"bounds --epsilon 0.5 --out {}/bounds.json", {"bounds.json"}},
        {"boost --l 1 --ds 2 --out {}/boost.csv", {"boost.csv"}},
        {"widths --d 2 --samples 2 --seed 11 --out {}/widths.csv",
         {"widths.csv", "widths.csv.summary.json"}},
        {"wigner --n 16 --samples 100 --seed 3 --out {}/wigner.csv",
         {"wigner.csv", "wigner.csv.summary.json"}},
        {"squeeze --in {}/state.json --out {}/squeezed.json", {"squeezed.json"}},
        {"gap --ds 2 --random 1 --seed 5 --out {}/gap.csv", {"gap.csv"}},
        {"fidelity-ppt --schmidt 0.8,0.6 --seed 9 --out {}/fid.json", {"fid.json"}}};

    const auto instantiate = [&](const std::string& tmpl, const fs::path& dir) {
        std::string cmd = pptgeo + " " + tmpl;
        const std::string d = dir.string();
        std::size_t pos;
        while ((pos = cmd.find("{}")) != std::string::npos) cmd.replace(pos, 2, d);
        return cmd;
    };

    std::size_t compared = 0;
    for (const auto& [tmpl, files] : runs) {
        for (const fs::path& dir : {dir_a, dir_b})
            if (run_cli(instantiate(tmpl, dir)) != 0) {
                fs::remove_all(base);
                return {false, "CLI run failed: " + tmpl};
            }
        for (const std::string& f : files) {
            if (read_text_file((dir_a / f).string()) != read_text_file((dir_b / f).string())) {
                fs::remove_all(base);
                return {false, "outputs differ: " + f};
            }
            ++compared;
        }
    }
    fs::remove_all(base);
    return {true, std::to_string(compared) + " output files byte-identical across reruns"};
}

}  // namespace

int main(int argc, char** argv) {
    int criterion = 0;
    std::string pptgeo;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc)
            criterion = std::atoi(argv[++i]);
        else if (arg == "--pptgeo" && i + 1 < argc)
            pptgeo = argv[++i];
        else {
            std::fprintf(stderr, "usage: %s [--criterion N] [--pptgeo path]\n", argv[0]);
            return 2;
        }
    }

    int failures = 0;
    for (int n = 1; n <= 10; ++n) {
        if (criterion != 0 && criterion != n) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            switch (n) {
                case 1: out = criterion_construction(); break;
                case 2: out = criterion_fidelity(); break;
                case 3: out = criterion_boost(); break;
                case 4: out = criterion_scaling(); break;
                case 5: out = criterion_overlap(); break;
                case 6: out = criterion_squeezing(); break;
                case 7: out = criterion_bracket(); break;
                case 8: out = criterion_norms(); break;
                case 9: out = criterion_widths(); break;
                case 10: out = criterion_determinism(pptgeo); break;
            }
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d: %s (%.1f s) %s\n", n, out.pass ? "PASS" : "FAIL", secs,
                    out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
