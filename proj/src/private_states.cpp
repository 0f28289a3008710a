#include "pptgeo/private_states.hpp"

#include <cmath>

namespace pptgeo {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

ComplexMatrix sigma_x() {
    ComplexMatrix s(2, 2);
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;
    return s;
}

// assemble the X-form block matrix on key basis order 00,01,10,11
ComplexMatrix xform_matrix(const ComplexMatrix& x) {
    const std::size_t n = x.rows();
    const ComplexMatrix xxd = operator_sqrt(x * adjoint(x));
    const ComplexMatrix xdx = operator_sqrt(adjoint(x) * x);
    ComplexMatrix g(4 * n, 4 * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            g(r, c) = 0.5 * xxd(r, c);
            g(r, 3 * n + c) = 0.5 * x(r, c);
            g(3 * n + r, c) = 0.5 * std::conj(x(c, r));
            g(3 * n + r, 3 * n + c) = 0.5 * xdx(r, c);
        }
    return g;
}

}  // namespace

ComplexMatrix fourier_unitary(std::size_t d_s) {
    require(d_s >= 2, "fourier_unitary: d_s >= 2 required");
    const double scale = 1.0 / std::sqrt(static_cast<double>(d_s));
    ComplexMatrix u(d_s, d_s);
    for (std::size_t j = 0; j < d_s; ++j)
        for (std::size_t k = 0; k < d_s; ++k)
            u(j, k) = std::polar(scale, two_pi * static_cast<double>((j * k) % d_s) /
                                            static_cast<double>(d_s));
    return u;
}

ComplexMatrix build_X(std::size_t d_s) {
    const ComplexMatrix u = fourier_unitary(d_s);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d_s));  // u carries one 1/sqrt(d_s)
    ComplexMatrix x(d_s * d_s, d_s * d_s);
    for (std::size_t i = 0; i < d_s; ++i)
        for (std::size_t j = 0; j < d_s; ++j)
            x(i * d_s + j, j * d_s + i) = u(i, j) * scale / static_cast<double>(d_s);
    return x;
}

ComplexMatrix build_Y(std::size_t d_s) {
    const ComplexMatrix u = fourier_unitary(d_s);
    // restricted to span{|ii>}, Y is u/d_s: d_s singular values of 1/d_s
    ComplexMatrix y(d_s * d_s, d_s * d_s);
    for (std::size_t i = 0; i < d_s; ++i)
        for (std::size_t j = 0; j < d_s; ++j)
            y(i * d_s + i, j * d_s + j) = u(i, j) / static_cast<double>(d_s);
    return y;
}

FactoredState gamma_of_X(const PrivateBitSpec& spec) {
    require(spec.x.square() && spec.x.rows() == spec.d_s * spec.d_s,
            "gamma_of_X: X must live on C^{d_s^2}");
    const double tn = schatten_norm(spec.x, 1.0);
    if (std::abs(tn - 1.0) > 1e-10)
        throw std::invalid_argument("gamma_of_X: trace norm of X is " + std::to_string(tn) +
                                    ", expected 1");
    return FactoredState(xform_matrix(spec.x), {2, 2, spec.d_s, spec.d_s}, {1, 3});
}

FlowerState construct_flower(std::size_t d_s) {
    require(d_s >= 2, "construct_flower: d_s >= 2 required");
    if (4 * d_s * d_s > max_total_dim())
        throw CapacityError("construct_flower: dimension " + std::to_string(4 * d_s * d_s) +
                            " exceeds capacity cap");
    FlowerState f;
    f.d_s = d_s;
    f.p = 1.0 / (std::sqrt(static_cast<double>(d_s)) + 1.0);

    const std::vector<std::size_t> dims{2, 2, d_s, d_s};
    f.gamma = gamma_of_X({d_s, build_X(d_s)});
    const ComplexMatrix raw = xform_matrix(adjoint(build_Y(d_s)));
    f.gamma_prime = FactoredState(apply_local_unitary(raw, dims, 0, sigma_x()), dims, {1, 3});

    ComplexMatrix rho = f.gamma.matrix();
    rho *= cplx(1.0 - f.p, 0.0);
    ComplexMatrix gp = f.gamma_prime.matrix();
    gp *= cplx(f.p, 0.0);
    rho += gp;
    f.rho = FactoredState(std::move(rho), dims, {1, 3});
    return f;
}

FactoredState general_private_state(const PrivateStateSpec& spec) {
    const std::size_t dk = spec.d_k, ns = spec.d_s * spec.d_s;
    require(dk >= 2, "general_private_state: d_k >= 2 required");
    require(spec.twist_unitaries.size() == dk,
            "general_private_state: need d_k twist unitaries");
    require(spec.shield_state.square() && spec.shield_state.rows() == ns,
            "general_private_state: shield state dim mismatch");
    auto check_unitary = [&](const ComplexMatrix& u, const char* who) {
        require(u.square(), std::string(who) + ": square matrix expected");
        const ComplexMatrix g = adjoint(u) * u;
        if (max_abs_diff(g, ComplexMatrix::identity(u.rows())) > 1e-10)
            throw std::invalid_argument(std::string(who) + ": not unitary within 1e-10");
    };
    const ComplexMatrix ea = spec.key_basis_a.rows() ? spec.key_basis_a
                                                     : ComplexMatrix::identity(dk);
    const ComplexMatrix fb = spec.key_basis_b.rows() ? spec.key_basis_b
                                                     : ComplexMatrix::identity(dk);
    require(ea.rows() == dk && fb.rows() == dk, "general_private_state: key basis dim mismatch");
    check_unitary(ea, "general_private_state key basis A");
    check_unitary(fb, "general_private_state key basis B");
    for (const auto& u : spec.twist_unitaries) {
        require(u.rows() == ns, "general_private_state: twist unitary dim mismatch");
        check_unitary(u, "general_private_state twist");
    }

    const std::size_t total = dk * dk * ns;
    if (total > max_total_dim())
        throw CapacityError("general_private_state: dimension exceeds capacity cap");

    ComplexMatrix out(total, total);
    const double w = 1.0 / static_cast<double>(dk);
    for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j) {
            const ComplexMatrix sij =
                spec.twist_unitaries[i] * spec.shield_state * adjoint(spec.twist_unitaries[j]);
            for (std::size_t a = 0; a < dk; ++a)
                for (std::size_t b = 0; b < dk; ++b)
                    for (std::size_t c = 0; c < dk; ++c)
                        for (std::size_t d = 0; d < dk; ++d) {
                            const cplx key = w * ea(a, i) * fb(b, i) * std::conj(ea(c, j)) *
                                             std::conj(fb(d, j));
                            if (key == cplx(0.0, 0.0)) continue;
                            const std::size_t rbase = (a * dk + b) * ns;
                            const std::size_t cbase = (c * dk + d) * ns;
                            for (std::size_t r = 0; r < ns; ++r)
                                for (std::size_t cc = 0; cc < ns; ++cc)
                                    out(rbase + r, cbase + cc) += key * sij(r, cc);
                        }
        }
    return FactoredState(std::move(out), {dk, dk, spec.d_s, spec.d_s}, {1, 3});
}

PrivateFormReport validate_private_form(const FactoredState& s, std::size_t d_k, double tol) {
    PrivateFormReport rep;
    const auto& dims = s.factor_dims();
    if (dims.size() < 2 || dims[0] != d_k || dims[1] != d_k) {
        rep.detail = "factor structure does not start with key pair (d_k, d_k)";
        return rep;
    }
    const std::size_t ns = s.dim() / (d_k * d_k);
    const auto& m = s.matrix();
    auto block = [&](std::size_t kr, std::size_t kc) {
        ComplexMatrix b(ns, ns);
        for (std::size_t r = 0; r < ns; ++r)
            for (std::size_t c = 0; c < ns; ++c) b(r, c) = m(kr * ns + r, kc * ns + c);
        return b;
    };

    // off-pattern key blocks must vanish
    double offmax = 0.0;
    for (std::size_t a = 0; a < d_k; ++a)
        for (std::size_t b = 0; b < d_k; ++b)
            for (std::size_t c = 0; c < d_k; ++c)
                for (std::size_t d = 0; d < d_k; ++d)
                    if (a != b || c != d) offmax = std::max(offmax, max_abs(block(a * d_k + b, c * d_k + d)));
    rep.max_deviation = offmax;
    if (offmax > tol) {
        rep.detail = "nonzero key block outside the ((i,i),(j,j)) pattern";
        return rep;
    }

    // row 0 factors as sigma U_j^dag via polar decomposition
    std::vector<ComplexMatrix> mj(d_k);
    for (std::size_t j = 0; j < d_k; ++j) {
        mj[j] = block(0, j * d_k + j);
        mj[j] *= cplx(static_cast<double>(d_k), 0.0);
    }
    const ComplexMatrix sigma = mj[0];
    std::vector<ComplexMatrix> uj(d_k);
    double dev = offmax;
    for (std::size_t j = 0; j < d_k; ++j) {
        const SvdResult sv = svd(mj[j]);
        ComplexMatrix p(ns, ns);  // U S U^dag, the left polar factor
        for (std::size_t k = 0; k < ns; ++k)
            for (std::size_t r = 0; r < ns; ++r)
                for (std::size_t c = 0; c < ns; ++c)
                    p(r, c) += sv.singular_values[k] * sv.u(r, k) * std::conj(sv.u(c, k));
        dev = std::max(dev, max_abs_diff(p, sigma));
        uj[j] = adjoint(sv.u * adjoint(sv.v));  // M_0j = sigma U_j^dag
    }
    // reconstruct every on-pattern block
    for (std::size_t i = 0; i < d_k; ++i)
        for (std::size_t j = 0; j < d_k; ++j) {
            const ComplexMatrix want = uj[i] * sigma * adjoint(uj[j]);
            ComplexMatrix got = block(i * d_k + i, j * d_k + j);
            got *= cplx(static_cast<double>(d_k), 0.0);
            dev = std::max(dev, max_abs_diff(want, got));
        }
    rep.max_deviation = dev;
    rep.ok = dev <= tol;
    if (!rep.ok) rep.detail = "block reconstruction deviates beyond tolerance";
    return rep;
}

FactoredState tensor_power(const FactoredState& s, std::size_t l) {
    require(l >= 1, "tensor_power: l >= 1 required");
    double total = 1.0;
    for (std::size_t i = 0; i < l; ++i) {
        total *= static_cast<double>(s.dim());
        if (total > static_cast<double>(max_total_dim()))
            throw CapacityError("tensor_power: dim^" + std::to_string(l) +
                                " exceeds capacity cap");
    }
    ComplexMatrix m = s.matrix();
    std::vector<std::size_t> dims = s.factor_dims();
    std::vector<std::size_t> tset = s.transpose_set();
    const std::size_t k = s.factor_dims().size();
    for (std::size_t copy = 1; copy < l; ++copy) {
        m = tensor_product(m, s.matrix());
        for (std::size_t f : s.factor_dims()) dims.push_back(f);
        for (std::size_t t : s.transpose_set()) tset.push_back(copy * k + t);
    }
    return FactoredState(std::move(m), std::move(dims), std::move(tset));
}

double exact_tensor_gap(double p, std::size_t l) {
    require(p >= 0.0 && p <= 1.0, "exact_tensor_gap: p in [0,1] required");
    require(l >= 1, "exact_tensor_gap: l >= 1 required");
    return 2.0 * (1.0 - std::pow(1.0 - p, static_cast<double>(l)));
}

}  // namespace pptgeo
