#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pptgeo/operators.hpp"
#include "pptgeo/rng.hpp"

namespace pptgeo {

// Traceless Hermitian direction with unit Schatten-2 norm.
struct Direction {
    std::size_t n = 0;
    HermitianOperator u;
};

// Trace-projects and normalizes a Hermitian matrix onto the direction sphere.
Direction direction_from(const ComplexMatrix& herm);

// GUE-style draw (real Gaussian diagonal, complex Gaussian off-diagonal),
// trace-projected and normalized: uniform on the HS sphere of the traceless
// subspace by rotation invariance.
Direction sample_direction(std::size_t n, SampleRng& rng);

struct ProjectionResult {
    FactoredState state;
    std::size_t iterations = 0;
    bool converged = false;
    double last_step = 0.0;  // Schatten-2 move of the final cycle
};

// Nearest point of PPT (cap) states in Schatten-2 norm, by Dykstra cycles
// PSD cone -> PT-PSD cone -> trace hyperplane. Never throws on slow
// convergence; the flag reports it.
ProjectionResult project_ppt(const ComplexMatrix& m, const std::vector<std::size_t>& factors,
                             const std::vector<std::size_t>& cut, double tol = 1e-9,
                             std::size_t max_iter = 20000);

struct SolverConfig {
    std::size_t max_iterations = 20000;  // ascent steps per restart
    std::size_t restarts = 5;
    double eta0 = 1.0;  // step eta0/sqrt(k)
    std::size_t plateau_window = 300;
    double plateau_eps = 1e-7;
    double value_tol = 1e-4;  // restart dispersion allowed for "converged"
    double tol_feas = 1e-7;
    double projection_tol = 1e-9;
    std::size_t projection_max_iterations = 5000;
    // Dykstra cap for the in-loop ascent projections. The intersection can
    // meet at a degenerate angle where Dykstra's tail is O(1/k), so ascent
    // steps use capped, inexact projections; only the final certificate is
    // polished at the full budget and then repaired to exact feasibility.
    std::size_t inner_projection_iterations = 300;
    std::size_t seesaw_restarts = 64;
    std::size_t seesaw_sweeps = 60;
};

struct SolverReport {
    double value = 0.0;
    double feasibility_residual = 0.0;  // max(-lambda_min, -lambda_min of PT, |Tr-1|)
    std::size_t iterations = 0;
    bool converged = false;
    std::optional<FactoredState> certificate;
};

// Support function of the PPT body in direction u: projected subgradient
// ascent x <- project(x + eta_k u), best feasible iterate kept. Restart 0
// starts from warm_start when given (pass a feasible product state to make
// h_sep <= h_ppt structural); the rest start from random product states.
SolverReport h_ppt(const Direction& u, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& cut, const SolverConfig& cfg, SampleRng& rng,
                   const ComplexMatrix* warm_start = nullptr);

struct SeesawResult {
    double value = 0.0;
    std::vector<cplx> a, b;  // best product vectors
    double restart_dispersion = 0.0;

    ComplexMatrix product_state() const;  // |a x b><a x b|
};

// Alternating top-eigenvector sweeps for max <a x b|u|a x b>. Every iterate
// is a feasible product state, so the value is a certified lower bound on
// h_SEP; the objective is nondecreasing within each restart (asserted).
SeesawResult h_sep_seesaw_full(const Direction& u, std::size_t d_a, std::size_t d_b,
                               std::size_t restarts, std::size_t sweeps, SampleRng& rng);
double h_sep_seesaw(const Direction& u, std::size_t d_a, std::size_t d_b, std::size_t restarts,
                    std::size_t sweeps, SampleRng& rng);

struct WidthSample {
    std::size_t sample_id = 0;
    std::uint64_t seed = 0;
    SolverReport h_ppt;
    double h_sep_estimate = 0.0;
    double h_states = 0.0;  // lambda_max(u)
    double opnorm = 0.0;    // ||u||_inf
};

struct StatSummary {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
};
StatSummary summarize(std::vector<double> values);

struct WidthSummary {
    std::size_t d = 0;
    std::size_t samples = 0;
    std::size_t excluded = 0;  // non-converged h_ppt samples, left out of stats
    StatSummary h_ppt, h_sep, opnorm;
    double sep_lower_bound = 0.0, sep_upper_bound = 0.0;  // d^{-3/2}/6, 4 d^{-3/2}
    double ppt_lower_bound = 0.0, ppt_upper_bound = 0.0;  // 1/(4d), 2/d
    bool sep_upper_ok = false;  // hard check; the lower arm is informational
    bool sep_lower_ok = false;  // because seesaw only lower-bounds h_SEP
    bool ppt_lower_ok = false;
    bool ppt_upper_ok = false;
};

struct WidthResult {
    WidthSummary summary;
    std::vector<WidthSample> rows;
};

// Full width experiment at local dimension d (directions on n = d^2). Per
// sample: direction, seesaw h_SEP, warm-started h_PPT, lambda_max, opnorm.
// Throws NumericError when more than 5% of the h_ppt solves fail to
// converge.
WidthResult width_experiment(std::size_t d, std::size_t samples, std::uint64_t seed,
                             const SolverConfig& cfg);

struct OpnormResult {
    std::size_t n = 0;
    std::size_t samples = 0;
    StatSummary stats;
    double asymptote = 0.0;  // 2/sqrt(n)
    std::vector<double> values;
};

// Opnorm-only mode: ||u||_inf statistics of sampled directions at any n.
OpnormResult opnorm_experiment(std::size_t n, std::size_t samples, std::uint64_t seed);

// (h_ppt(u) - h_sep(u)) / ||u||_inf: estimated lower bound on the deepest
// PPT point behind the SEP face in direction u. Over-estimates, since the
// seesaw term under-estimates; consumers label it accordingly.
double witness_gap(const Direction& u, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& cut, const SolverConfig& cfg, SampleRng& rng);

// ||project_ppt(target) - target||_1, an upper bound on the trace-norm
// distance from target to the PPT states.
double closest_ppt_trace_ub(const FactoredState& target, const SolverConfig& cfg);

// max Tr(|psi><psi| sigma) over PPT sigma for |psi> with the given Schmidt
// coefficients on d x d, via h_ppt on the traceless part; the report value is
// rescaled back to the overlap.
SolverReport max_overlap_ppt(const std::vector<double>& schmidt, std::size_t d,
                             const SolverConfig& cfg, SampleRng& rng);

}  // namespace pptgeo
