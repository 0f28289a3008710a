#pragma once

#include <array>

#include "pptgeo/operators.hpp"
#include "pptgeo/rng.hpp"

namespace pptgeo {

// Key-block decomposition of a state on 2 x 2 x d_s x d_s: the shield-space
// operators A_{ijkl} = (<ij| x I) rho (|kl> x I), key-pair indexed.
struct KeyBlocks {
    std::size_t d_s = 0;
    std::array<std::array<ComplexMatrix, 4>, 4> blocks;

    const ComplexMatrix& block(std::size_t i, std::size_t j, std::size_t k,
                               std::size_t l) const {
        return blocks[i * 2 + j][k * 2 + l];
    }
};

KeyBlocks key_blocks(const FactoredState& rho);
ComplexMatrix reassemble(const KeyBlocks& kb);

// Privacy-squeezed output: the 4x4 pattern of block trace norms (diagonal
// plus the (00,11) and (01,10) pairs) next to the actual 2-qubit state
// produced by twisting with the SVD unitaries of A_{0011} and A_{0110} and
// tracing out the shield.
struct SqueezedState {
    std::array<std::array<double, 4>, 4> norms{};
    FactoredState state;  // 2-qubit, factors (2,2), cut {1}
};

SqueezedState privacy_squeeze(const FactoredState& rho);

struct SqueezeResiduals {
    double primal_residual = 0.0;      // sqrt(|A0000| |A1111|) - |A0011|   (trace norms)
    double transposed_residual = 0.0;  // sqrt(|A0101^G| |A1010^G|) - |A0011^G|
};

// Residuals alone, no PPT gate: lets tests show the transposed inequality
// fail on an NPT state.
SqueezeResiduals squeeze_residuals(const FactoredState& rho);

// The two block-norm inequalities; requires rho PPT within 1e-9 since both are
// consequences of positivity of the partial transpose.
SqueezeResiduals squeeze_inequalities(const FactoredState& rho);

struct GapReport {
    double distance = 0.0;
    double lower_bound = 0.0;
    bool satisfied = false;
};

// ||rho - gamma||_1 against the 1/(2(d_s+1)) floor for PPT rho and private
// gamma of matching structure.
GapReport gap_verify(const FactoredState& rho, const FactoredState& gamma);

struct ProofChainReport {
    double epsilon = 0.0;        // ||rho - gamma||_1, must be < 1
    double a0011_norm = 0.0;     // expected >= 1/2 - epsilon
    double a0011_pt_norm = 0.0;  // expected <= epsilon
    bool ok = false;
};

ProofChainReport proof_chain_check(const FactoredState& rho, const FactoredState& gamma);

// Wishart-style random density matrix on 2 x 2 x d_s x d_s; if the draw is
// not PPT it is mixed toward maximally mixed with the smallest
// t in {0.1,...,1.0} that makes it PPT.
FactoredState random_ppt_state(std::size_t d_s, SampleRng& rng);

}  // namespace pptgeo
