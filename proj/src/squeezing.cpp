#include "pptgeo/squeezing.hpp"

#include <cmath>

#include "pptgeo/analytic_bounds.hpp"
#include "pptgeo/private_states.hpp"
#include "pptgeo/spectral.hpp"

namespace pptgeo {

namespace {

std::size_t shield_dim_of(const FactoredState& rho, const char* who) {
    const auto& dims = rho.factor_dims();
    if (dims.size() != 4 || dims[0] != 2 || dims[1] != 2 || dims[2] != dims[3])
        throw std::invalid_argument(std::string(who) +
                                    ": factor structure (2,2,d_s,d_s) required");
    return dims[2];
}

// partial transpose on the B' half of a shield-pair operator
ComplexMatrix shield_pt(const ComplexMatrix& a, std::size_t d_s) {
    return partial_transpose(a, {d_s, d_s}, {1});
}

}  // namespace

KeyBlocks key_blocks(const FactoredState& rho) {
    const std::size_t d_s = shield_dim_of(rho, "key_blocks");
    const std::size_t ns = d_s * d_s;
    const ComplexMatrix& m = rho.matrix();
    KeyBlocks kb;
    kb.d_s = d_s;
    for (std::size_t rk = 0; rk < 4; ++rk)
        for (std::size_t ck = 0; ck < 4; ++ck) {
            ComplexMatrix b(ns, ns);
            for (std::size_t r = 0; r < ns; ++r)
                for (std::size_t c = 0; c < ns; ++c) b(r, c) = m(rk * ns + r, ck * ns + c);
            kb.blocks[rk][ck] = std::move(b);
        }
    return kb;
}

ComplexMatrix reassemble(const KeyBlocks& kb) {
    const std::size_t ns = kb.d_s * kb.d_s;
    ComplexMatrix m(4 * ns, 4 * ns);
    for (std::size_t rk = 0; rk < 4; ++rk)
        for (std::size_t ck = 0; ck < 4; ++ck)
            for (std::size_t r = 0; r < ns; ++r)
                for (std::size_t c = 0; c < ns; ++c)
                    m(rk * ns + r, ck * ns + c) = kb.blocks[rk][ck](r, c);
    return m;
}

SqueezedState privacy_squeeze(const FactoredState& rho) {
    const KeyBlocks kb = key_blocks(rho);

    SqueezedState out;
    out.norms[0][0] = schatten_norm(kb.block(0, 0, 0, 0), 1.0);
    out.norms[1][1] = schatten_norm(kb.block(0, 1, 0, 1), 1.0);
    out.norms[2][2] = schatten_norm(kb.block(1, 0, 1, 0), 1.0);
    out.norms[3][3] = schatten_norm(kb.block(1, 1, 1, 1), 1.0);
    out.norms[0][3] = schatten_norm(kb.block(0, 0, 1, 1), 1.0);
    out.norms[3][0] = schatten_norm(kb.block(1, 1, 0, 0), 1.0);
    out.norms[1][2] = schatten_norm(kb.block(0, 1, 1, 0), 1.0);
    out.norms[2][1] = schatten_norm(kb.block(1, 0, 0, 1), 1.0);

    // controlled twist W = sum |ij><ij| x W_ij with W_00 A_0011 W_11^dag and
    // W_01 A_0110 W_10^dag diagonalized to their singular values
    const SvdResult s0011 = svd(kb.block(0, 0, 1, 1));
    const SvdResult s0110 = svd(kb.block(0, 1, 1, 0));
    const std::array<ComplexMatrix, 4> w{adjoint(s0011.u), adjoint(s0110.u), adjoint(s0110.v),
                                         adjoint(s0011.v)};

    ComplexMatrix q(4, 4);
    for (std::size_t rk = 0; rk < 4; ++rk)
        for (std::size_t ck = 0; ck < 4; ++ck)
            q(rk, ck) = trace(w[rk] * kb.blocks[rk][ck] * adjoint(w[ck]));
    out.state = FactoredState(std::move(q), {2, 2}, {1});
    return out;
}

SqueezeResiduals squeeze_residuals(const FactoredState& rho) {
    const std::size_t d_s = shield_dim_of(rho, "squeeze_residuals");
    const KeyBlocks kb = key_blocks(rho);
    SqueezeResiduals res;
    res.primal_residual = std::sqrt(schatten_norm(kb.block(0, 0, 0, 0), 1.0) *
                                    schatten_norm(kb.block(1, 1, 1, 1), 1.0)) -
                          schatten_norm(kb.block(0, 0, 1, 1), 1.0);
    res.transposed_residual =
        std::sqrt(schatten_norm(shield_pt(kb.block(0, 1, 0, 1), d_s), 1.0) *
                  schatten_norm(shield_pt(kb.block(1, 0, 1, 0), d_s), 1.0)) -
        schatten_norm(shield_pt(kb.block(0, 0, 1, 1), d_s), 1.0);
    return res;
}

SqueezeResiduals squeeze_inequalities(const FactoredState& rho) {
    shield_dim_of(rho, "squeeze_inequalities");
    const PptReport pr = is_ppt(rho, 1e-9);
    if (!pr.ppt)
        throw std::domain_error(
            "squeeze_inequalities: input is not PPT within 1e-9 (witness eigenvalue " +
            std::to_string(pr.witness_eigenvalue) + ")");
    return squeeze_residuals(rho);
}

GapReport gap_verify(const FactoredState& rho, const FactoredState& gamma) {
    const std::size_t d_s = shield_dim_of(rho, "gap_verify");
    if (gamma.factor_dims() != rho.factor_dims())
        throw std::invalid_argument("gap_verify: factor structures differ");
    const PptReport pr = is_ppt(rho, 1e-7);
    if (!pr.ppt)
        throw std::invalid_argument("gap_verify: rho is not PPT within 1e-7");
    const PrivateFormReport pf = validate_private_form(gamma, 2);
    if (!pf.ok)
        throw std::invalid_argument("gap_verify: gamma is not in private form: " + pf.detail);
    GapReport rep;
    rep.distance = trace_distance(rho, gamma);
    rep.lower_bound = ks_gap_lb(d_s);
    rep.satisfied = rep.distance >= rep.lower_bound - 1e-9;
    return rep;
}

ProofChainReport proof_chain_check(const FactoredState& rho, const FactoredState& gamma) {
    const std::size_t d_s = shield_dim_of(rho, "proof_chain_check");
    if (gamma.factor_dims() != rho.factor_dims())
        throw std::invalid_argument("proof_chain_check: factor structures differ");
    const PptReport pr = is_ppt(rho, 1e-7);
    if (!pr.ppt)
        throw std::invalid_argument("proof_chain_check: rho is not PPT within 1e-7");
    ProofChainReport rep;
    rep.epsilon = trace_distance(rho, gamma);
    if (rep.epsilon >= 1.0)
        throw std::invalid_argument("proof_chain_check: ||rho-gamma||_1 must be < 1");
    const KeyBlocks kb = key_blocks(rho);
    rep.a0011_norm = schatten_norm(kb.block(0, 0, 1, 1), 1.0);
    rep.a0011_pt_norm = schatten_norm(shield_pt(kb.block(0, 0, 1, 1), d_s), 1.0);
    rep.ok = rep.a0011_norm >= 0.5 - rep.epsilon - 1e-9 &&
             rep.a0011_pt_norm <= rep.epsilon + 1e-9;
    return rep;
}

FactoredState random_ppt_state(std::size_t d_s, SampleRng& rng) {
    require(d_s >= 2, "random_ppt_state: d_s >= 2 required");
    const std::size_t n = 4 * d_s * d_s;
    if (n > max_total_dim()) throw CapacityError("random_ppt_state: dimension exceeds cap");
    ComplexMatrix g(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) g(r, c) = cplx(rng.gaussian(), rng.gaussian());
    ComplexMatrix w = g * adjoint(g);
    w *= cplx(1.0 / trace(w).real(), 0.0);

    const std::vector<std::size_t> dims{2, 2, d_s, d_s}, cut{1, 3};
    FactoredState cand(w, dims, cut);
    if (is_ppt(cand).ppt) return cand;
    for (int k = 1; k <= 10; ++k) {
        const double t = 0.1 * k;
        ComplexMatrix mixed = w;
        mixed *= cplx(1.0 - t, 0.0);
        for (std::size_t i = 0; i < n; ++i) mixed(i, i) += t / static_cast<double>(n);
        FactoredState st(std::move(mixed), dims, cut);
        if (is_ppt(st).ppt) return st;
    }
    throw NumericError("random_ppt_state: mixing ladder failed");  // t=1 is always PPT
}

}  // namespace pptgeo
