#pragma once

#include "pptgeo/operators.hpp"

namespace pptgeo {

// Private bit in X-form: shield dimension plus the trace-norm-one operator
// on C^{d_s} (x) C^{d_s} that fills the corner blocks.
struct PrivateBitSpec {
    std::size_t d_s = 0;
    ComplexMatrix x;
};

// General private state of key dimension d_k: twist unitaries act on the
// shield pair, key bases default to computational.
struct PrivateStateSpec {
    std::size_t d_k = 2;
    std::size_t d_s = 2;
    ComplexMatrix key_basis_a;  // columns |e_i>
    ComplexMatrix key_basis_b;  // columns |f_i>
    std::vector<ComplexMatrix> twist_unitaries;  // d_k unitaries on C^{d_s^2}
    ComplexMatrix shield_state;                  // density matrix on C^{d_s^2}
};

struct FlowerState {
    std::size_t d_s = 0;
    double p = 0.0;  // 1/(sqrt(d_s)+1)
    FactoredState rho, gamma, gamma_prime;
};

// QFT matrix u_{jk} = exp(2 pi i jk/d_s)/sqrt(d_s); symmetric, unimodular
// entries of modulus 1/sqrt(d_s).
ComplexMatrix fourier_unitary(std::size_t d_s);

// X = d_s^{-3/2} sum u_ij |ij><ji|, Y = d_s^{-1} sum u_ij |ii><jj|;
// both have unit trace norm and Y = sqrt(d_s) X^Gamma.
ComplexMatrix build_X(std::size_t d_s);
ComplexMatrix build_Y(std::size_t d_s);

// X-form private bit on A,B,A',B' = 2,2,d_s,d_s:
// gamma = 1/2 [[sqrt(XX+), ., ., X], [...0...], [...0...], [X+, ., ., sqrt(X+X)]].
FactoredState gamma_of_X(const PrivateBitSpec& spec);

// The PPT flower state rho = (1-p) gamma + p gamma'. gamma' is the second
// private bit of the explicit matrix form: sigma_x on key qubit A applied to
// gamma(Y^dag), which reproduces the published block pattern (the A_{0110}
// block equals p/2 * Y) and makes rho invariant under the {B,B'} transpose.
FlowerState construct_flower(std::size_t d_s);

FactoredState general_private_state(const PrivateStateSpec& spec);

struct PrivateFormReport {
    bool ok = false;
    double max_deviation = 0.0;
    std::string detail;
};

// Checks the Definition-1 shape in computational key bases: nonzero key
// blocks only at ((i,i),(j,j)), block row 0 factors as sigma U_j^dag with a
// common PSD sigma, and every block reconstructs from those factors within
// tol. States private with respect to rotated key bases must be rotated
// first (apply_local_unitary).
PrivateFormReport validate_private_form(const FactoredState& s, std::size_t d_k,
                                        double tol = 1e-9);

FactoredState tensor_power(const FactoredState& s, std::size_t l);

// closed form ||rho^(x)l - gamma^(x)l||_1 = 2(1-(1-p)^l) for the flower pair
// (all cross terms have mutually orthogonal supports)
double exact_tensor_gap(double p, std::size_t l);

}  // namespace pptgeo
