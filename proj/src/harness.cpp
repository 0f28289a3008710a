#include "pptgeo/harness.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "pptgeo/analytic_bounds.hpp"
#include "pptgeo/private_states.hpp"
#include "pptgeo/squeezing.hpp"

namespace pptgeo {

namespace {

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("config key " + key + ": not a nonnegative integer: " + value);
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (errno != 0 || end != value.c_str() + value.size())
        throw std::invalid_argument("config key " + key + ": integer out of range: " + value);
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v))
        throw std::invalid_argument("config key " + key + ": not a finite real: " + value);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config key " + key + ": not a boolean: " + value);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& p : split_list(value)) out.push_back(parse_real(key, p));
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& key, const std::string& value) {
    std::vector<std::uint64_t> out;
    for (const auto& p : split_list(value)) out.push_back(parse_u64(key, p));
    return out;
}

const std::vector<std::string>& known_experiments() {
    static const std::vector<std::string> v{"construct", "bounds",  "boost", "widths",
                                            "wigner",    "squeeze", "gap",   "fidelity-ppt"};
    return v;
}

std::string default_out(const ExperimentConfig& cfg) {
    if (cfg.experiment == "construct") return "state.json";
    if (cfg.experiment == "squeeze") return "squeezed.json";
    if (cfg.experiment == "fidelity-ppt") return "fidelity_ppt.json";
    if (cfg.experiment == "bounds" && cfg.grid.empty()) return "bounds.json";
    return cfg.experiment + "." + cfg.format;
}

JsonValue stats_json(const StatSummary& s) {
    JsonValue j = JsonValue::object();
    j.set("mean", s.mean).set("median", s.median).set("stddev", s.stddev);
    return j;
}

void echo_solver(const SolverConfig& sc, RunManifest& m) {
    m.config_echo["solver_value_tol"] = format_real(sc.value_tol);
    m.config_echo["solver_tol_feas"] = format_real(sc.tol_feas);
    m.config_echo["solver_eta0"] = format_real(sc.eta0);
    m.config_echo["solver_restarts"] = std::to_string(sc.restarts);
    m.config_echo["solver_max_iterations"] = std::to_string(sc.max_iterations);
    m.config_echo["solver_plateau_window"] = std::to_string(sc.plateau_window);
    m.config_echo["solver_plateau_eps"] = format_real(sc.plateau_eps);
    m.config_echo["projection_tol"] = format_real(sc.projection_tol);
    m.config_echo["projection_max_iterations"] = std::to_string(sc.projection_max_iterations);
    m.config_echo["inner_projection_iterations"] = std::to_string(sc.inner_projection_iterations);
    m.config_echo["seesaw_restarts"] = std::to_string(sc.seesaw_restarts);
    m.config_echo["seesaw_sweeps"] = std::to_string(sc.seesaw_sweeps);
}

void run_construct(const ExperimentConfig& cfg, RunManifest& m) {
    m.config_echo["ds"] = std::to_string(cfg.d_s);
    m.config_echo["power"] = std::to_string(cfg.power);
    m.config_echo["all"] = cfg.all ? "true" : "false";
    const FlowerState f = construct_flower(cfg.d_s);
    const FactoredState state = cfg.power > 1 ? tensor_power(f.rho, cfg.power) : f.rho;
    {
        const std::string bytes = state_to_json(state);
        write_text_file(cfg.out, bytes);
        m.output_checksums[cfg.out] = checksum_hex(bytes);
    }
    if (cfg.all) {
        for (const auto& [suffix, st] :
             {std::pair<const char*, const FactoredState&>{".gamma.json", f.gamma},
              {".gamma_prime.json", f.gamma_prime}}) {
            const std::string path = cfg.out + suffix;
            const std::string bytes = state_to_json(st);
            write_text_file(path, bytes);
            m.output_checksums[path] = checksum_hex(bytes);
        }
    }

    std::int64_t failures = 0;
    const PptReport pr = is_ppt(state, cfg.power > 1 ? 1e-9 : cfg.tol_eig);
    if (!pr.ppt) ++failures;
    m.convergence_counts["ppt_pass"] = pr.ppt ? 1 : 0;
    if (cfg.power == 1) {
        const double dist = trace_distance(f.rho, f.gamma);
        const double want = 2.0 / (std::sqrt(static_cast<double>(cfg.d_s)) + 1.0);
        const bool ok = std::abs(dist - want) <= 1e-8;
        m.convergence_counts["distance_check_pass"] = ok ? 1 : 0;
        if (!ok) ++failures;
    }
    if (failures) throw NumericError("construct: " + std::to_string(failures) + " invariant checks failed");
}

void run_bounds(const ExperimentConfig& cfg, RunManifest& m) {
    if (!cfg.grid.empty()) {
        m.config_echo["grid"] = cfg.grid;
        const auto g = parse_u64_list("grid", cfg.grid);
        if (g.size() != 4 || g[0] < 1 || g[0] > g[1] || g[2] < 2 || g[2] > g[3])
            throw std::invalid_argument("bounds: grid must be lmin,lmax,dsmin,dsmax with lmin>=1, dsmin>=2");
        if ((g[1] - g[0] + 1) * (g[3] - g[2] + 1) > 1000000)
            throw std::invalid_argument("bounds: grid has more than 1e6 cells");
        Table t;
        t.columns = {"l", "d_s", "p", "first", "second", "exact", "dominant"};
        for (std::uint64_t l = g[0]; l <= g[1]; ++l)
            for (std::uint64_t ds = g[2]; ds <= g[3]; ++ds) {
                const BoostBounds bb = boost_bounds(l, ds);
                const double p = 1.0 / (std::sqrt(static_cast<double>(ds)) + 1.0);
                const char* dom = bb.first > bb.second ? "first"
                                  : bb.second > bb.first ? "second"
                                                         : "tie";
                t.rows.push_back({Cell(static_cast<std::int64_t>(l)),
                                  Cell(static_cast<std::int64_t>(ds)), Cell(p), Cell(bb.first),
                                  Cell(bb.second), Cell(bb.exact), Cell(std::string(dom))});
            }
        m.output_checksums[cfg.out] = emit_table(t, cfg.out, cfg.format);
        return;
    }
    m.config_echo["epsilon"] = format_real(cfg.epsilon);
    const BoostPlan plan = plan_for_epsilon(cfg.epsilon);
    JsonValue j = JsonValue::object();
    j.set("epsilon", plan.epsilon)
        .set("l", plan.l)
        .set("d_s", static_cast<std::int64_t>(plan.d_s))
        .set("d", plan.d_decimal)
        .set("log2_d", plan.log2_d)
        .set("c_effective", plan.c_effective);
    const std::string bytes = j.dump() + "\n";
    write_text_file(cfg.out, bytes);
    m.output_checksums[cfg.out] = checksum_hex(bytes);
    m.convergence_counts["c_effective_below_6"] = plan.c_effective < 6.0 ? 1 : 0;
    if (plan.c_effective >= 6.0) throw NumericError("bounds: c_effective >= 6");
}

void run_boost(const ExperimentConfig& cfg, RunManifest& m) {
    m.config_echo["l"] = std::to_string(cfg.l);
    m.config_echo["ds"] = std::to_string(cfg.d_s);
    require(cfg.l >= 1, "boost: l >= 1 required");
    const BoostBounds bb = boost_bounds(cfg.l, cfg.d_s);
    const double p = 1.0 / (std::sqrt(static_cast<double>(cfg.d_s)) + 1.0);
    const double formula = exact_tensor_gap(p, cfg.l);

    const FlowerState f = construct_flower(cfg.d_s);
    const FactoredState rl = tensor_power(f.rho, cfg.l);
    const FactoredState gl = tensor_power(f.gamma, cfg.l);
    const double measured = trace_distance(rl, gl);
    const PptReport pr = is_ppt(rl, 1e-9);

    Table t;
    t.columns = {"l", "d_s", "p", "first", "second", "exact", "formula_gap", "measured_gap"};
    t.rows.push_back({Cell(static_cast<std::int64_t>(cfg.l)),
                      Cell(static_cast<std::int64_t>(cfg.d_s)), Cell(p), Cell(bb.first),
                      Cell(bb.second), Cell(bb.exact), Cell(formula), Cell(measured)});
    m.output_checksums[cfg.out] = emit_table(t, cfg.out, cfg.format);

    const bool gap_ok = std::abs(measured - formula) <= 1e-7;
    m.convergence_counts["gap_check_pass"] = gap_ok ? 1 : 0;
    m.convergence_counts["ppt_pass"] = pr.ppt ? 1 : 0;
    if (!gap_ok)
        throw NumericError("boost: measured tensor gap " + format_real(measured) +
                           " deviates from the closed form " + format_real(formula));
    if (!pr.ppt) throw NumericError("boost: tensor power lost the PPT property");
}

void run_widths(const ExperimentConfig& cfg, RunManifest& m) {
    m.config_echo["d"] = std::to_string(cfg.d);
    m.config_echo["samples"] = std::to_string(cfg.samples);
    const std::size_t opdim = cfg.d * cfg.d * cfg.d * cfg.d;
    const SolverConfig sc = solver_config_for(cfg, opdim);
    echo_solver(sc, m);
    const WidthResult wr = width_experiment(cfg.d, cfg.samples, cfg.seed, sc);

    Table t;
    t.columns = {"sample_id", "seed",  "h_ppt", "h_ppt_residual", "h_ppt_converged",
                 "h_sep",     "h_states", "opnorm"};
    for (const auto& row : wr.rows)
        t.rows.push_back({Cell(static_cast<std::int64_t>(row.sample_id)),
                          Cell(static_cast<std::int64_t>(row.seed)), Cell(row.h_ppt.value),
                          Cell(row.h_ppt.feasibility_residual), Cell(row.h_ppt.converged),
                          Cell(row.h_sep_estimate), Cell(row.h_states), Cell(row.opnorm)});
    m.output_checksums[cfg.out] = emit_table(t, cfg.out, cfg.format);

    const WidthSummary& s = wr.summary;
    JsonValue j = JsonValue::object();
    j.set("d", s.d)
        .set("samples", s.samples)
        .set("excluded", s.excluded)
        .set("h_ppt", stats_json(s.h_ppt))
        .set("h_sep", stats_json(s.h_sep))
        .set("opnorm", stats_json(s.opnorm))
        .set("sep_lower_bound", s.sep_lower_bound)
        .set("sep_upper_bound", s.sep_upper_bound)
        .set("ppt_lower_bound", s.ppt_lower_bound)
        .set("ppt_upper_bound", s.ppt_upper_bound)
        .set("sep_upper_ok", s.sep_upper_ok)
        .set("sep_lower_ok", s.sep_lower_ok)
        .set("ppt_lower_ok", s.ppt_lower_ok)
        .set("ppt_upper_ok", s.ppt_upper_ok);
    const std::string spath = cfg.out + ".summary.json";
    const std::string bytes = j.dump() + "\n";
    write_text_file(spath, bytes);
    m.output_checksums[spath] = checksum_hex(bytes);

    m.convergence_counts["h_ppt_converged"] =
        static_cast<std::int64_t>(wr.rows.size() - s.excluded);
    m.convergence_counts["h_ppt_excluded"] = static_cast<std::int64_t>(s.excluded);
    if (!s.ppt_lower_ok || !s.ppt_upper_ok)
        throw NumericError("widths: mean h_ppt " + format_real(s.h_ppt.mean) +
                           " left the [1/(4d), 2/d] interval");
    if (!s.sep_upper_ok)
        throw NumericError("widths: mean h_sep " + format_real(s.h_sep.mean) +
                           " exceeds 4 d^{-3/2}");
}

void run_wigner(const ExperimentConfig& cfg, RunManifest& m) {
    m.config_echo["n"] = std::to_string(cfg.n);
    m.config_echo["samples"] = std::to_string(cfg.samples);
    const OpnormResult res = opnorm_experiment(cfg.n, cfg.samples, cfg.seed);
    Table t;
    t.columns = {"sample_id", "seed", "opnorm"};
    for (std::size_t i = 0; i < res.values.size(); ++i)
        t.rows.push_back({Cell(static_cast<std::int64_t>(i)),
                          Cell(static_cast<std::int64_t>(cfg.seed)), Cell(res.values[i])});
    m.output_checksums[cfg.out] = emit_table(t, cfg.out, cfg.format);

    JsonValue j = JsonValue::object();
    j.set("n", res.n)
        .set("samples", res.samples)
        .set("stats", stats_json(res.stats))
        .set("asymptote", res.asymptote);
    const std::string spath = cfg.out + ".summary.json";
    const std::string bytes = j.dump() + "\n";
    write_text_file(spath, bytes);
    m.output_checksums[spath] = checksum_hex(bytes);
}

void run_squeeze(const ExperimentConfig& cfg, RunManifest& m) {
    if (cfg.in.empty()) throw std::invalid_argument("squeeze: --in state.json required");
    m.config_echo["in"] = cfg.in;
    const FactoredState s = read_state_json(cfg.in);
    const SqueezedState sq = privacy_squeeze(s);
    const SqueezeResiduals r = squeeze_residuals(s);
    const bool ppt = is_ppt(s, 1e-9).ppt;

    JsonValue norms = JsonValue::array();
    for (const auto& row : sq.norms) {
        JsonValue jr = JsonValue::array();
        for (double v : row) jr.push(v);
        norms.push(std::move(jr));
    }
    JsonValue j = JsonValue::object();
    j.set("norms", std::move(norms))
        .set("state", state_to_json_value(sq.state))
        .set("ppt", ppt)
        .set("primal_residual", r.primal_residual)
        .set("transposed_residual", r.transposed_residual);
    const std::string bytes = j.dump() + "\n";
    write_text_file(cfg.out, bytes);
    m.output_checksums[cfg.out] = checksum_hex(bytes);

    if (ppt) {
        const bool ok = r.primal_residual >= -1e-8 && r.transposed_residual >= -1e-8;
        m.convergence_counts["inequalities_pass"] = ok ? 1 : 0;
        if (!ok) throw NumericError("squeeze: a PPT input violated a squeezing inequality");
    }
}

void run_gap(const ExperimentConfig& cfg, RunManifest& m) {
    m.config_echo["ds"] = std::to_string(cfg.d_s);
    m.config_echo["random"] = std::to_string(cfg.random);
    const FlowerState f = construct_flower(cfg.d_s);
    const auto& dims = f.rho.factor_dims();
    const auto& cut = f.rho.transpose_set();
    const std::size_t n = f.rho.dim();

    Table t;
    t.columns = {"case", "distance", "lower_bound", "satisfied"};
    std::int64_t failures = 0;
    auto add = [&](const std::string& name, const GapReport& g) {
        t.rows.push_back({Cell(name), Cell(g.distance), Cell(g.lower_bound), Cell(g.satisfied)});
        if (!g.satisfied) ++failures;
    };

    add("flower", gap_verify(f.rho, f.gamma));

    const ProjectionResult pg = project_ppt(f.gamma.matrix(), dims, cut);
    if (!pg.converged) throw NumericError("gap: projection of gamma did not converge");
    add("projected_gamma", gap_verify(pg.state, f.gamma));

    // the plain 50/50 blend with maximally mixed is NOT PPT, so its PPT
    // projection stands in as the nearby PPT point
    ComplexMatrix blend = f.gamma.matrix();
    blend *= cplx(0.5, 0.0);
    for (std::size_t i = 0; i < n; ++i) blend(i, i) += 0.5 / static_cast<double>(n);
    const ProjectionResult pb = project_ppt(blend, dims, cut);
    if (!pb.converged) throw NumericError("gap: projection of the blend did not converge");
    add("projected_blend", gap_verify(pb.state, f.gamma));

    for (std::size_t k = 0; k < cfg.random; ++k) {
        SampleRng rng(cfg.seed, k);
        add("random_" + std::to_string(k), gap_verify(random_ppt_state(cfg.d_s, rng), f.gamma));
    }

    m.output_checksums[cfg.out] = emit_table(t, cfg.out, cfg.format);
    m.convergence_counts["satisfied"] = static_cast<std::int64_t>(t.rows.size()) - failures;
    m.convergence_counts["violated"] = failures;
    if (failures) throw NumericError("gap: " + std::to_string(failures) + " rows below the bound");
}

void run_fidelity_ppt(const ExperimentConfig& cfg, RunManifest& m) {
    if (cfg.schmidt.empty())
        throw std::invalid_argument("fidelity-ppt: --schmidt a1,a2,... required");
    m.config_echo["schmidt"] = cfg.schmidt;
    const std::vector<double> a = parse_real_list("schmidt", cfg.schmidt);
    const std::size_t d = a.size() >= 2 ? a.size() : 2;
    const SolverConfig sc = solver_config_for(cfg, d * d * d * d);
    echo_solver(sc, m);
    SampleRng rng(cfg.seed, 0);
    const SolverReport rep = max_overlap_ppt(a, d, sc, rng);
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, v);
    const double closed = amax * amax;
    const double deviation = std::abs(rep.value - closed);

    JsonValue ja = JsonValue::array();
    for (double v : a) ja.push(v);
    JsonValue j = JsonValue::object();
    j.set("schmidt", std::move(ja))
        .set("value", rep.value)
        .set("fidelity", std::sqrt(std::max(rep.value, 0.0)))
        .set("closed_form", closed)
        .set("deviation", deviation)
        .set("converged", rep.converged)
        .set("iterations", rep.iterations)
        .set("feasibility_residual", rep.feasibility_residual);
    const std::string bytes = j.dump() + "\n";
    write_text_file(cfg.out, bytes);
    m.output_checksums[cfg.out] = checksum_hex(bytes);

    m.convergence_counts["closed_form_match"] = deviation <= sc.value_tol ? 1 : 0;
    if (deviation > sc.value_tol)
        throw NumericError("fidelity-ppt: solver value deviates from (max a_i)^2 by " +
                           format_real(deviation));
}

}  // namespace

void apply_config_kv(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "experiment")
        cfg.experiment = value;
    else if (key == "d")
        cfg.d = parse_u64(key, value);
    else if (key == "ds")
        cfg.d_s = parse_u64(key, value);
    else if (key == "l")
        cfg.l = parse_u64(key, value);
    else if (key == "power")
        cfg.power = parse_u64(key, value);
    else if (key == "n")
        cfg.n = parse_u64(key, value);
    else if (key == "samples")
        cfg.samples = parse_u64(key, value);
    else if (key == "random")
        cfg.random = parse_u64(key, value);
    else if (key == "epsilon")
        cfg.epsilon = parse_real(key, value);
    else if (key == "seed")
        cfg.seed = parse_u64(key, value);
    else if (key == "tol_eig")
        cfg.tol_eig = parse_real(key, value);
    else if (key == "tol_feas")
        cfg.tol_feas = parse_real(key, value);
    else if (key == "tol_value") {
        cfg.tol_value = parse_real(key, value);
        cfg.tol_value_user = true;
    } else if (key == "out")
        cfg.out = value;
    else if (key == "format")
        cfg.format = value;
    else if (key == "schmidt")
        cfg.schmidt = value;
    else if (key == "grid")
        cfg.grid = value;
    else if (key == "in")
        cfg.in = value;
    else if (key == "all")
        cfg.all = parse_bool(key, value);
    else
        throw std::invalid_argument("unknown config key: " + key);
}

void merge_config_text(ExperimentConfig& cfg, const std::string& text) {
    std::size_t pos = 0, lineno = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line =
            nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        ++lineno;
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const std::size_t e = line.find_last_not_of(" \t");
        line = line.substr(b, e - b + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value, got: " + line);
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        const auto trim = [](std::string& s) {
            const std::size_t x = s.find_first_not_of(" \t");
            if (x == std::string::npos) {
                s.clear();
                return;
            }
            const std::size_t y = s.find_last_not_of(" \t");
            s = s.substr(x, y - x + 1);
        };
        trim(key);
        trim(value);
        apply_config_kv(cfg, key, value);
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    ExperimentConfig cfg;
    merge_config_text(cfg, read_text_file(path));
    return cfg;
}

void finalize_config(ExperimentConfig& cfg) {
    bool known = false;
    for (const auto& e : known_experiments()) known = known || e == cfg.experiment;
    if (!known) throw std::invalid_argument("unknown experiment: " + cfg.experiment);
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("format must be csv or json, got " + cfg.format);
    require(cfg.tol_eig > 0.0 && cfg.tol_feas > 0.0 && cfg.tol_value > 0.0,
            "all tolerances must be positive");
    require(cfg.samples >= 1, "samples >= 1 required");
    if (cfg.out.empty()) cfg.out = default_out(cfg);
}

SolverConfig solver_config_for(const ExperimentConfig& cfg, std::size_t opdim) {
    SolverConfig sc;
    sc.tol_feas = cfg.tol_feas;
    sc.value_tol = cfg.tol_value_user ? cfg.tol_value : (opdim <= 16 ? 1e-4 : 1e-3);
    return sc;
}

RunManifest run(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    finalize_config(c);
    RunManifest m;
    m.experiment = c.experiment;
    m.version = kVersion;
    m.config_echo["experiment"] = c.experiment;
    m.config_echo["seed"] = std::to_string(c.seed);
    m.config_echo["format"] = c.format;
    m.config_echo["out"] = c.out;
    m.config_echo["tol_eig"] = format_real(c.tol_eig);
    m.config_echo["tol_feas"] = format_real(c.tol_feas);

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (c.experiment == "construct")
            run_construct(c, m);
        else if (c.experiment == "bounds")
            run_bounds(c, m);
        else if (c.experiment == "boost")
            run_boost(c, m);
        else if (c.experiment == "widths")
            run_widths(c, m);
        else if (c.experiment == "wigner")
            run_wigner(c, m);
        else if (c.experiment == "squeeze")
            run_squeeze(c, m);
        else if (c.experiment == "gap")
            run_gap(c, m);
        else
            run_fidelity_ppt(c, m);
    } catch (...) {
        m.duration_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(m, c.out + ".manifest.json");
        throw;
    }
    m.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(m, c.out + ".manifest.json");
    return m;
}

namespace {

struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// reader for this project's own numeric tables; cells are never quoted
ParsedCsv parse_csv(const std::string& text) {
    ParsedCsv out;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line =
            nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            out.header = split_list(line);
            first = false;
        } else {
            out.rows.push_back(split_list(line));
        }
    }
    return out;
}

std::size_t column_index(const ParsedCsv& csv, const std::string& name) {
    for (std::size_t i = 0; i < csv.header.size(); ++i)
        if (csv.header[i] == name) return i;
    throw std::invalid_argument("plot_export: table lacks column " + name);
}

std::vector<double> column_values(const ParsedCsv& csv, const std::string& name) {
    const std::size_t idx = column_index(csv, name);
    std::vector<double> v;
    for (const auto& row : csv.rows) {
        if (idx >= row.size())
            throw std::invalid_argument("plot_export: short row in table");
        v.push_back(parse_real(name, row[idx]));
    }
    return v;
}

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// one histogram panel with optional vertical marker lines
void histogram_panel(std::string& svg, double x0, double y0, double w, double h,
                     const std::vector<double>& values, const std::string& title,
                     const std::vector<double>& markers) {
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double mkr : markers) {
        lo = std::min(lo, mkr);
        hi = std::max(hi, mkr);
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    const int bins = 24;
    std::vector<int> count(bins, 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::max(0, std::min(bins - 1, b));
        ++count[b];
    }
    int cmax = 1;
    for (int c : count) cmax = std::max(cmax, c);

    const double plot_h = h - 36.0;
    svg += "<text x=\"" + fmt_px(x0 + w / 2) + "\" y=\"" + fmt_px(y0 + 14) +
           "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" + title +
           "</text>\n";
    for (int b = 0; b < bins; ++b) {
        if (!count[b]) continue;
        const double bw = w / bins;
        const double bh = plot_h * count[b] / cmax;
        svg += "<rect x=\"" + fmt_px(x0 + b * bw) + "\" y=\"" + fmt_px(y0 + 20 + plot_h - bh) +
               "\" width=\"" + fmt_px(bw * 0.92) + "\" height=\"" + fmt_px(bh) +
               "\" fill=\"#4878a8\"/>\n";
    }
    svg += "<line x1=\"" + fmt_px(x0) + "\" y1=\"" + fmt_px(y0 + 20 + plot_h) + "\" x2=\"" +
           fmt_px(x0 + w) + "\" y2=\"" + fmt_px(y0 + 20 + plot_h) +
           "\" stroke=\"#303030\" stroke-width=\"1\"/>\n";
    for (double mkr : markers) {
        const double mx = x0 + (mkr - lo) / (hi - lo) * w;
        svg += "<line x1=\"" + fmt_px(mx) + "\" y1=\"" + fmt_px(y0 + 20) + "\" x2=\"" +
               fmt_px(mx) + "\" y2=\"" + fmt_px(y0 + 20 + plot_h) +
               "\" stroke=\"#c03030\" stroke-width=\"1.5\" stroke-dasharray=\"5,3\"/>\n";
    }
    svg += "<text x=\"" + fmt_px(x0) + "\" y=\"" + fmt_px(y0 + h - 2) +
           "\" font-size=\"11\" font-family=\"sans-serif\">" + format_real(lo) + "</text>\n";
    svg += "<text x=\"" + fmt_px(x0 + w) + "\" y=\"" + fmt_px(y0 + h - 2) +
           "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" +
           format_real(hi) + "</text>\n";
}

nlohmann::json sibling_summary(const std::string& table_path) {
    const std::string path = table_path + ".summary.json";
    if (!std::filesystem::exists(path)) return nlohmann::json();
    return nlohmann::json::parse(read_text_file(path));
}

void plot_widths(const ParsedCsv& csv, const std::string& table_path, std::string& svg) {
    const std::vector<double> hppt = column_values(csv, "h_ppt");
    const std::vector<double> hsep = column_values(csv, "h_sep");
    const std::vector<double> opn = column_values(csv, "opnorm");
    std::vector<double> ppt_marks, sep_marks;
    const nlohmann::json s = sibling_summary(table_path);
    if (s.is_object()) {
        ppt_marks = {s.at("ppt_lower_bound").get<double>(),
                     s.at("ppt_upper_bound").get<double>()};
        sep_marks = {s.at("sep_lower_bound").get<double>(),
                     s.at("sep_upper_bound").get<double>()};
    }
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"280\" "
           "viewBox=\"0 0 960 280\">\n<rect width=\"960\" height=\"280\" fill=\"white\"/>\n";
    histogram_panel(svg, 20, 10, 280, 250, hppt, "h_ppt", ppt_marks);
    histogram_panel(svg, 340, 10, 280, 250, hsep, "h_sep", sep_marks);
    histogram_panel(svg, 660, 10, 280, 250, opn, "opnorm", {});
    svg += "</svg>\n";
}

void plot_wigner(const ParsedCsv& csv, const std::string& table_path, std::string& svg) {
    const std::vector<double> opn = column_values(csv, "opnorm");
    std::vector<double> marks;
    const nlohmann::json s = sibling_summary(table_path);
    if (s.is_object()) marks = {s.at("asymptote").get<double>()};
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"300\" "
           "viewBox=\"0 0 480 300\">\n<rect width=\"480\" height=\"300\" fill=\"white\"/>\n";
    histogram_panel(svg, 30, 10, 420, 270, opn, "opnorm", marks);
    svg += "</svg>\n";
}

void plot_bounds(const ParsedCsv& csv, std::string& svg) {
    const std::vector<double> ls = column_values(csv, "l");
    const std::vector<std::string> series{"first", "second", "exact"};
    const std::vector<std::string> colors{"#c03030", "#3060c0", "#208040"};
    double xlo = ls[0], xhi = ls[0], ylo = 0.0, yhi = 0.0;
    std::vector<std::vector<double>> ys;
    for (const auto& name : series) ys.push_back(column_values(csv, name));
    for (double v : ls) {
        xlo = std::min(xlo, v);
        xhi = std::max(xhi, v);
    }
    for (const auto& col : ys)
        for (double v : col) {
            ylo = std::min(ylo, v);
            yhi = std::max(yhi, v);
        }
    if (xhi - xlo < 1e-12) xhi = xlo + 1.0;
    if (yhi - ylo < 1e-12) yhi = ylo + 1.0;
    const double x0 = 50, y0 = 20, w = 500, h = 240;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"300\" "
           "viewBox=\"0 0 600 300\">\n<rect width=\"600\" height=\"300\" fill=\"white\"/>\n";
    auto px = [&](double x) { return x0 + (x - xlo) / (xhi - xlo) * w; };
    auto py = [&](double y) { return y0 + h - (y - ylo) / (yhi - ylo) * h; };
    svg += "<line x1=\"" + fmt_px(x0) + "\" y1=\"" + fmt_px(y0 + h) + "\" x2=\"" +
           fmt_px(x0 + w) + "\" y2=\"" + fmt_px(y0 + h) + "\" stroke=\"#303030\"/>\n";
    svg += "<line x1=\"" + fmt_px(x0) + "\" y1=\"" + fmt_px(y0) + "\" x2=\"" + fmt_px(x0) +
           "\" y2=\"" + fmt_px(y0 + h) + "\" stroke=\"#303030\"/>\n";
    for (std::size_t sidx = 0; sidx < series.size(); ++sidx) {
        std::string pts;
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (i) pts += ' ';
            pts += fmt_px(px(ls[i])) + "," + fmt_px(py(ys[sidx][i]));
        }
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + colors[sidx] +
               "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + fmt_px(x0 + w + 8) + "\" y=\"" +
               fmt_px(y0 + 16 + 18 * static_cast<double>(sidx)) + "\" font-size=\"12\" "
               "font-family=\"sans-serif\" fill=\"" +
               colors[sidx] + "\">" + series[sidx] + "</text>\n";
    }
    svg += "<text x=\"" + fmt_px(x0 + w / 2) + "\" y=\"" + fmt_px(y0 + h + 28) +
           "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">l</text>\n";
    svg += "</svg>\n";
}

}  // namespace

void plot_export(const std::string& table_path, const std::string& kind,
                 const std::string& image_path) {
    const ParsedCsv csv = parse_csv(read_text_file(table_path));
    if (csv.header.empty()) throw std::invalid_argument("plot_export: table has no header");
    if (csv.rows.empty())
        throw std::invalid_argument("plot_export: table has no data rows, nothing to plot");
    std::string svg;
    if (kind == "widths")
        plot_widths(csv, table_path, svg);
    else if (kind == "wigner")
        plot_wigner(csv, table_path, svg);
    else if (kind == "bounds")
        plot_bounds(csv, svg);
    else
        throw std::invalid_argument("plot_export: unknown kind " + kind);
    write_text_file(image_path, svg);
}

}  // namespace pptgeo
