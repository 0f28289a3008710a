#include "pptgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pptgeo/analytic_bounds.hpp"

namespace pptgeo {

namespace {

ComplexMatrix hermitize(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
    return out;
}

// projection onto the PSD cone: clip negative eigenvalues
ComplexMatrix clip_psd(const ComplexMatrix& a) {
    const EigResult e = eig_hermitian(a);
    const std::size_t n = a.rows();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = e.values[k];
        if (w <= 0.0) continue;
        for (std::size_t r = 0; r < n; ++r) {
            const cplx vr = w * e.vectors(r, k);
            for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(e.vectors(c, k));
        }
    }
    return out;
}

struct DykstraOut {
    ComplexMatrix x;
    std::size_t iterations = 0;
    bool converged = false;
    double last_step = 0.0;
};

// Dykstra corrections on the two cones; the trace hyperplane is affine and
// needs none. Verified variationally: the limit satisfies <z - x, m - x> <= 0
// for feasible z, i.e. it is the true Schatten-2 projection.
DykstraOut dykstra(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                   const std::vector<std::size_t>& cut, double tol, std::size_t max_iter) {
    const std::size_t n = m.rows();
    ComplexMatrix x = hermitize(m);
    ComplexMatrix p(n, n), q(n, n);
    DykstraOut out;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const ComplexMatrix x_prev = x;
        const ComplexMatrix y = clip_psd(x + p);
        p = x + p - y;
        const ComplexMatrix z =
            partial_transpose(clip_psd(partial_transpose(y + q, dims, cut)), dims, cut);
        q = y + q - z;
        x = z;
        const double shift = (trace(x).real() - 1.0) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) x(i, i) -= shift;
        out.iterations = it;
        out.last_step = frobenius_norm(x - x_prev);
        if (out.last_step < tol) {
            out.converged = true;
            break;
        }
    }
    out.x = std::move(x);
    return out;
}

ComplexMatrix random_product_state(const std::vector<std::size_t>& factors, SampleRng& rng) {
    std::vector<cplx> psi{cplx(1.0, 0.0)};
    for (std::size_t f : factors) {
        std::vector<cplx> v(f);
        double nrm = 0.0;
        for (auto& z : v) {
            z = cplx(rng.gaussian(), rng.gaussian());
            nrm += std::norm(z);
        }
        const double inv = 1.0 / std::sqrt(nrm);
        std::vector<cplx> next(psi.size() * f);
        for (std::size_t i = 0; i < psi.size(); ++i)
            for (std::size_t j = 0; j < f; ++j) next[i * f + j] = psi[i] * v[j] * inv;
        psi = std::move(next);
    }
    ComplexMatrix m(psi.size(), psi.size());
    for (std::size_t r = 0; r < psi.size(); ++r)
        for (std::size_t c = 0; c < psi.size(); ++c) m(r, c) = psi[r] * std::conj(psi[c]);
    return m;
}

double feasibility_of(const ComplexMatrix& x, const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& cut) {
    const double l1 = min_eigenvalue_of(x);
    const double l2 = min_eigenvalue_of(partial_transpose(x, dims, cut));
    const double tr = std::abs(trace(x).real() - 1.0);
    return std::max({-l1, -l2, tr, 0.0});
}

std::size_t checked_product(const std::vector<std::size_t>& factors, std::size_t n,
                            const char* who) {
    std::size_t prod = 1;
    for (std::size_t f : factors) prod *= f;
    require(prod == n, std::string(who) + ": factor dimensions do not multiply to the matrix size");
    return prod;
}

}  // namespace

Direction direction_from(const ComplexMatrix& herm) {
    require(herm.square(), "direction_from: square matrix required");
    const std::size_t n = herm.rows();
    ComplexMatrix u = hermitize(herm);
    const double shift = trace(u).real() / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) u(i, i) -= shift;
    const double nrm = frobenius_norm(u);
    require(nrm > 1e-14, "direction_from: matrix is a multiple of the identity");
    u *= cplx(1.0 / nrm, 0.0);
    Direction d;
    d.n = n;
    d.u = HermitianOperator(std::move(u));
    return d;
}

Direction sample_direction(std::size_t n, SampleRng& rng) {
    require(n >= 2, "sample_direction: n >= 2 required");
    ComplexMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        g(i, i) = rng.gaussian();
        for (std::size_t j = i + 1; j < n; ++j) {
            const double re = rng.gaussian(), im = rng.gaussian();
            g(i, j) = cplx(re * M_SQRT1_2, im * M_SQRT1_2);
            g(j, i) = std::conj(g(i, j));
        }
    }
    return direction_from(g);
}

ProjectionResult project_ppt(const ComplexMatrix& m, const std::vector<std::size_t>& factors,
                             const std::vector<std::size_t>& cut, double tol,
                             std::size_t max_iter) {
    require(m.square(), "project_ppt: square matrix required");
    checked_product(factors, m.rows(), "project_ppt");
    DykstraOut d = dykstra(m, factors, cut, tol, max_iter);
    ProjectionResult out;
    out.iterations = d.iterations;
    out.converged = d.converged;
    out.last_step = d.last_step;
    out.state = FactoredState(hermitize(d.x), factors, cut);
    return out;
}

SolverReport h_ppt(const Direction& dir, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& cut, const SolverConfig& cfg, SampleRng& rng,
                   const ComplexMatrix* warm_start) {
    const ComplexMatrix& u = dir.u.matrix();
    checked_product(factors, u.rows(), "h_ppt");
    require(cfg.restarts >= 1, "h_ppt: at least one restart required");

    double best_value = -std::numeric_limits<double>::infinity();
    double worst_restart = std::numeric_limits<double>::infinity();
    ComplexMatrix best_x;
    std::size_t total_iterations = 0;

    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        ComplexMatrix x = (r == 0 && warm_start) ? *warm_start
                                                 : random_product_state(factors, rng);
        double best_r = hs_inner_real(x, u);
        ComplexMatrix best_rx = x;
        std::size_t stalled = 0;
        for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
            ++total_iterations;
            const double eta = cfg.eta0 / std::sqrt(static_cast<double>(k));
            DykstraOut step =
                dykstra(x + cplx(eta, 0.0) * u, factors, cut, cfg.projection_tol,
                        std::min(cfg.inner_projection_iterations, cfg.projection_max_iterations));
            x = std::move(step.x);
            const double v = hs_inner_real(x, u);
            if (v > best_r + cfg.plateau_eps)
                stalled = 0;
            else
                ++stalled;
            if (v > best_r) {
                best_r = v;
                best_rx = x;
            }
            if (stalled >= cfg.plateau_window) break;
        }
        worst_restart = std::min(worst_restart, best_r);
        if (best_r > best_value) {
            best_value = best_r;
            best_x = std::move(best_rx);
        }
    }

    // full-budget polish of the winning iterate, then an exact repair: blend
    // toward I/n (PT-invariant) with theta = n*delta/(1+n*delta), which lifts
    // lambda_min of both the state and its PT to >= 0. The reported value is
    // whatever the repaired point actually attains, so it stays a certified
    // inner bound even though the ascent projections were inexact.
    DykstraOut polish =
        dykstra(best_x, factors, cut, cfg.projection_tol, cfg.projection_max_iterations);
    ComplexMatrix cert = hermitize(std::move(polish.x));
    const std::size_t n = cert.rows();
    const double defect = std::max(
        0.0, std::max(-min_eigenvalue_of(cert),
                      -min_eigenvalue_of(partial_transpose(cert, factors, cut))));
    if (defect > 0.0) {
        const double theta = defect * n / (1.0 + defect * n);
        cert *= cplx(1.0 - theta, 0.0);
        for (std::size_t i = 0; i < n; ++i) cert(i, i) += theta / static_cast<double>(n);
    }
    // the warm start is exactly feasible; keep it if the repair dipped below it
    if (warm_start && hs_inner_real(*warm_start, u) > hs_inner_real(cert, u))
        cert = hermitize(*warm_start);

    SolverReport rep;
    rep.value = hs_inner_real(cert, u);
    rep.feasibility_residual = feasibility_of(cert, factors, cut);
    rep.iterations = total_iterations;
    rep.converged =
        (best_value - worst_restart) <= cfg.value_tol && rep.feasibility_residual <= cfg.tol_feas;
    rep.certificate = FactoredState(std::move(cert), factors, cut);
    return rep;
}

ComplexMatrix SeesawResult::product_state() const {
    const std::size_t da = a.size(), db = b.size();
    std::vector<cplx> psi(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) psi[i * db + k] = a[i] * b[k];
    ComplexMatrix m(psi.size(), psi.size());
    for (std::size_t r = 0; r < psi.size(); ++r)
        for (std::size_t c = 0; c < psi.size(); ++c) m(r, c) = psi[r] * std::conj(psi[c]);
    return m;
}

SeesawResult h_sep_seesaw_full(const Direction& dir, std::size_t d_a, std::size_t d_b,
                               std::size_t restarts, std::size_t sweeps, SampleRng& rng) {
    const ComplexMatrix& u = dir.u.matrix();
    require(d_a >= 1 && d_b >= 1 && d_a * d_b == u.rows(),
            "h_sep_seesaw: split does not match the direction dimension");
    require(restarts >= 1 && sweeps >= 1, "h_sep_seesaw: restarts and sweeps must be >= 1");

    auto random_unit = [&rng](std::size_t d) {
        std::vector<cplx> v(d);
        double nrm = 0.0;
        for (auto& z : v) {
            z = cplx(rng.gaussian(), rng.gaussian());
            nrm += std::norm(z);
        }
        const double inv = 1.0 / std::sqrt(nrm);
        for (auto& z : v) z *= inv;
        return v;
    };
    auto top_eigvec = [](const ComplexMatrix& m, std::vector<cplx>& out) {
        const EigResult e = eig_hermitian(m);
        const std::size_t k = m.rows() - 1;
        out.resize(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) out[r] = e.vectors(r, k);
        return e.values.back();
    };

    SeesawResult best;
    best.value = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        std::vector<cplx> a, b = random_unit(d_b);
        double prev = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < sweeps; ++s) {
            ComplexMatrix ma(d_a, d_a);
            for (std::size_t i = 0; i < d_a; ++i)
                for (std::size_t j = 0; j < d_a; ++j) {
                    cplx acc = 0.0;
                    for (std::size_t k = 0; k < d_b; ++k)
                        for (std::size_t l = 0; l < d_b; ++l)
                            acc += std::conj(b[k]) * u(i * d_b + k, j * d_b + l) * b[l];
                    ma(i, j) = acc;
                }
            const double va = top_eigvec(hermitize(ma), a);
            if (va < prev - 1e-11) throw NumericError("h_sep_seesaw: objective decreased");
            ComplexMatrix mb(d_b, d_b);
            for (std::size_t k = 0; k < d_b; ++k)
                for (std::size_t l = 0; l < d_b; ++l) {
                    cplx acc = 0.0;
                    for (std::size_t i = 0; i < d_a; ++i)
                        for (std::size_t j = 0; j < d_a; ++j)
                            acc += std::conj(a[i]) * u(i * d_b + k, j * d_b + l) * a[j];
                    mb(k, l) = acc;
                }
            const double vb = top_eigvec(hermitize(mb), b);
            if (vb < va - 1e-11) throw NumericError("h_sep_seesaw: objective decreased");
            if (vb - prev < 1e-12) {
                prev = vb;
                break;
            }
            prev = vb;
        }
        worst = std::min(worst, prev);
        if (prev > best.value) {
            best.value = prev;
            best.a = a;
            best.b = b;
        }
    }
    best.restart_dispersion = best.value - worst;
    return best;
}

double h_sep_seesaw(const Direction& u, std::size_t d_a, std::size_t d_b, std::size_t restarts,
                    std::size_t sweeps, SampleRng& rng) {
    return h_sep_seesaw_full(u, d_a, d_b, restarts, sweeps, rng).value;
}

StatSummary summarize(std::vector<double> values) {
    require(!values.empty(), "summarize: empty sample set");
    StatSummary s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t half = values.size() / 2;
    s.median = values.size() % 2 ? values[half] : 0.5 * (values[half - 1] + values[half]);
    return s;
}

WidthResult width_experiment(std::size_t d, std::size_t samples, std::uint64_t seed,
                             const SolverConfig& cfg) {
    require(d == 2 || d == 3, "width_experiment: full solves support d in {2,3}");
    require(samples >= 2, "width_experiment: at least two samples required");
    const std::size_t n = d * d;
    const std::vector<std::size_t> factors{d, d}, cut{1};

    WidthResult out;
    out.rows.reserve(samples);
    std::vector<double> vppt, vsep, vop;
    for (std::size_t id = 0; id < samples; ++id) {
        SampleRng rng(seed, id);
        const Direction dir = sample_direction(n, rng);
        const SeesawResult ss =
            h_sep_seesaw_full(dir, d, d, cfg.seesaw_restarts, cfg.seesaw_sweeps, rng);
        const ComplexMatrix warm = ss.product_state();
        WidthSample row;
        row.sample_id = id;
        row.seed = seed;
        row.h_ppt = h_ppt(dir, factors, cut, cfg, rng, &warm);
        row.h_sep_estimate = ss.value;
        row.h_states = max_eigenvalue_of(dir.u.matrix());
        row.opnorm = schatten_norm(dir.u.matrix(), std::numeric_limits<double>::infinity());
        vop.push_back(row.opnorm);
        if (row.h_ppt.converged) {
            vppt.push_back(row.h_ppt.value);
            vsep.push_back(row.h_sep_estimate);
        } else {
            ++out.summary.excluded;
        }
        out.rows.push_back(std::move(row));
    }
    if (20 * out.summary.excluded > samples)
        throw NumericError("width_experiment: more than 5% of h_ppt solves failed to converge");

    WidthSummary& s = out.summary;
    s.d = d;
    s.samples = samples;
    s.h_ppt = summarize(vppt);
    s.h_sep = summarize(vsep);
    s.opnorm = summarize(vop);
    const double dd = static_cast<double>(d);
    s.sep_lower_bound = std::pow(dd, -1.5) / 6.0;
    s.sep_upper_bound = 4.0 * std::pow(dd, -1.5);
    s.ppt_lower_bound = 0.25 / dd;
    s.ppt_upper_bound = 2.0 / dd;
    s.sep_upper_ok = s.h_sep.mean <= s.sep_upper_bound;
    s.sep_lower_ok = s.h_sep.mean >= s.sep_lower_bound;
    s.ppt_lower_ok = s.h_ppt.mean >= s.ppt_lower_bound;
    s.ppt_upper_ok = s.h_ppt.mean <= s.ppt_upper_bound;
    return out;
}

OpnormResult opnorm_experiment(std::size_t n, std::size_t samples, std::uint64_t seed) {
    require(samples >= 2, "opnorm_experiment: at least two samples required");
    OpnormResult out;
    out.n = n;
    out.samples = samples;
    out.asymptote = 2.0 / std::sqrt(static_cast<double>(n));
    out.values.reserve(samples);
    for (std::size_t id = 0; id < samples; ++id) {
        SampleRng rng(seed, id);
        const Direction dir = sample_direction(n, rng);
        out.values.push_back(
            schatten_norm(dir.u.matrix(), std::numeric_limits<double>::infinity()));
    }
    out.stats = summarize(out.values);
    return out;
}

double witness_gap(const Direction& dir, const std::vector<std::size_t>& factors,
                   const std::vector<std::size_t>& cut, const SolverConfig& cfg, SampleRng& rng) {
    const ComplexMatrix& u = dir.u.matrix();
    checked_product(factors, u.rows(), "witness_gap");

    // group the cut factors into the B side of a bipartition for the seesaw
    std::vector<std::size_t> perm, inv(factors.size());
    std::size_t da = 1, db = 1;
    std::vector<bool> in_cut(factors.size(), false);
    for (std::size_t c : cut) in_cut.at(c) = true;
    for (std::size_t i = 0; i < factors.size(); ++i)
        if (!in_cut[i]) {
            perm.push_back(i);
            da *= factors[i];
        }
    for (std::size_t i = 0; i < factors.size(); ++i)
        if (in_cut[i]) {
            perm.push_back(i);
            db *= factors[i];
        }
    for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = k;
    std::vector<std::size_t> pdims(factors.size());
    for (std::size_t k = 0; k < perm.size(); ++k) pdims[k] = factors[perm[k]];

    const Direction grouped = direction_from(permute_factors(u, factors, perm));
    const SeesawResult ss =
        h_sep_seesaw_full(grouped, da, db, cfg.seesaw_restarts, cfg.seesaw_sweeps, rng);
    const ComplexMatrix warm = permute_factors(ss.product_state(), pdims, inv);
    const SolverReport rep = h_ppt(dir, factors, cut, cfg, rng, &warm);
    const double opn = schatten_norm(u, std::numeric_limits<double>::infinity());
    return (rep.value - ss.value) / opn;
}

double closest_ppt_trace_ub(const FactoredState& target, const SolverConfig& cfg) {
    const ProjectionResult pr =
        project_ppt(target.matrix(), target.factor_dims(), target.transpose_set(),
                    cfg.projection_tol, cfg.projection_max_iterations);
    if (!pr.converged)
        throw NumericError("closest_ppt_trace_ub: projection did not converge");
    return schatten_norm(pr.state.matrix() - target.matrix(), 1.0);
}

SolverReport max_overlap_ppt(const std::vector<double>& schmidt, std::size_t d,
                             const SolverConfig& cfg, SampleRng& rng) {
    require(d >= 2 && d <= 4, "max_overlap_ppt: d in {2,3,4} required");
    require(!schmidt.empty() && schmidt.size() <= d,
            "max_overlap_ppt: Schmidt vector length must be in [1, d]");
    pure_ppt_fidelity(schmidt);  // validates normalization and signs

    const std::size_t n = d * d;
    std::vector<cplx> psi(n);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < schmidt.size(); ++i) {
        psi[i * d + i] = schmidt[i];
        if (schmidt[i] > schmidt[imax]) imax = i;
    }
    ComplexMatrix t(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) t(r, c) = psi[r] * std::conj(psi[c]);
    for (std::size_t i = 0; i < n; ++i) t(i, i) -= 1.0 / static_cast<double>(n);
    const double tnorm = frobenius_norm(t);

    // warm start |imax imax><imax imax|: a product state achieving the known
    // optimum (max_i a_i)^2, so the solver can only confirm or exceed it
    ComplexMatrix warm(n, n);
    warm(imax * d + imax, imax * d + imax) = 1.0;

    const Direction dir = direction_from(t);
    SolverReport rep = h_ppt(dir, {d, d}, {1}, cfg, rng, &warm);
    rep.value = tnorm * rep.value + 1.0 / static_cast<double>(n);
    return rep;
}

}  // namespace pptgeo
