#include "pptgeo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pptgeo {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) p *= d;
    return p;
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
    return s;
}

void check_subset(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& subset,
                  const char* who) {
    for (std::size_t f : subset)
        if (f >= dims.size())
            throw std::invalid_argument(std::string(who) + ": factor index " + std::to_string(f) +
                                        " out of range");
}

// digit table: digits[i*k + f] = f-th factor index of basis state i
std::vector<std::size_t> digit_table(const std::vector<std::size_t>& dims) {
    const std::size_t n = product(dims), k = dims.size();
    const auto str = strides_of(dims);
    std::vector<std::size_t> t(n * k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < k; ++f) t[i * k + f] = (i / str[f]) % dims[f];
    return t;
}

}  // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m, double tol) : m_(std::move(m)) {
    require(m_.square(), "HermitianOperator: square matrix expected");
    require(all_finite(m_), "HermitianOperator: non-finite entries");
    if (max_hermiticity_defect(m_) > tol)
        throw std::invalid_argument("HermitianOperator: hermiticity defect exceeds tolerance");
}

FactoredState::FactoredState(ComplexMatrix m, std::vector<std::size_t> factor_dims,
                             std::vector<std::size_t> transpose_set)
    : m_(std::move(m)), dims_(std::move(factor_dims)), tset_(std::move(transpose_set)) {
    require(m_.square(), "FactoredState: square matrix expected");
    require(all_finite(m_), "FactoredState: non-finite entries");
    require(product(dims_) == m_.rows(), "FactoredState: factor dims do not multiply to dim");
    check_subset(dims_, tset_, "FactoredState");
    if (max_hermiticity_defect(m_) > 1e-12)
        throw std::invalid_argument("FactoredState: hermiticity defect exceeds 1e-12");
    if (std::abs(trace(m_) - cplx(1.0, 0.0)) > 1e-10)
        throw std::invalid_argument("FactoredState: trace differs from 1 beyond 1e-10");
}

double FactoredState::validate(double tol_eig) const {
    const double lmin = min_eigenvalue_of(m_);
    if (lmin < -tol_eig)
        throw std::domain_error("FactoredState: min eigenvalue " + std::to_string(lmin) +
                                " below -" + std::to_string(tol_eig));
    return lmin;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& subset) {
    require(m.square() && product(dims) == m.rows(), "partial_transpose: shape mismatch");
    check_subset(dims, subset, "partial_transpose");
    if (subset.empty()) return m;

    const std::size_t n = m.rows(), k = dims.size();
    const auto str = strides_of(dims);
    std::vector<bool> in_set(k, false);
    for (std::size_t f : subset) in_set[f] = true;
    // split each index into its kept part and its transposed part
    std::vector<std::size_t> keep(n, 0), swap(n, 0);
    const auto dig = digit_table(dims);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < k; ++f)
            (in_set[f] ? swap[i] : keep[i]) += dig[i * k + f] * str[f];

    ComplexMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            out(keep[r] + swap[c], keep[c] + swap[r]) = m(r, c);
    return out;
}

FactoredState partial_transpose(const FactoredState& s, const std::vector<std::size_t>& subset) {
    return FactoredState(partial_transpose(s.matrix(), s.factor_dims(), subset), s.factor_dims(),
                         s.transpose_set());
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& traced) {
    require(m.square() && product(dims) == m.rows(), "partial_trace: shape mismatch");
    check_subset(dims, traced, "partial_trace");

    const std::size_t k = dims.size();
    std::vector<bool> out_set(k, true);
    for (std::size_t f : traced) out_set[f] = false;
    std::vector<std::size_t> kept_dims, traced_dims, kept_f, traced_f;
    for (std::size_t f = 0; f < k; ++f)
        (out_set[f] ? kept_dims : traced_dims).push_back(dims[f]),
            (out_set[f] ? kept_f : traced_f).push_back(f);

    const auto str = strides_of(dims);
    const std::size_t nk = product(kept_dims), nt = product(traced_dims);
    // encodings are additive: full index = kept offset + traced offset
    auto offsets = [&](const std::vector<std::size_t>& dsub, const std::vector<std::size_t>& fsub) {
        std::vector<std::size_t> off(product(dsub), 0);
        const auto dig = digit_table(dsub);
        for (std::size_t i = 0; i < off.size(); ++i)
            for (std::size_t j = 0; j < dsub.size(); ++j)
                off[i] += dig[i * dsub.size() + j] * str[fsub[j]];
        return off;
    };
    const auto offk = offsets(kept_dims, kept_f);
    const auto offt = offsets(traced_dims, traced_f);

    ComplexMatrix out(nk, nk);
    for (std::size_t a = 0; a < nk; ++a)
        for (std::size_t b = 0; b < nk; ++b) {
            cplx s = 0.0;
            for (std::size_t t = 0; t < nt; ++t) s += m(offk[a] + offt[t], offk[b] + offt[t]);
            out(a, b) = s;
        }
    return out;
}

ComplexMatrix partial_trace(const FactoredState& s, const std::vector<std::size_t>& traced) {
    return partial_trace(s.matrix(), s.factor_dims(), traced);
}

ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm) {
    require(m.square() && product(dims) == m.rows(), "permute_factors: shape mismatch");
    require(perm.size() == dims.size(), "permute_factors: permutation length mismatch");
    std::vector<bool> seen(dims.size(), false);
    for (std::size_t p : perm) {
        require(p < dims.size() && !seen[p], "permute_factors: not a permutation");
        seen[p] = true;
    }
    const std::size_t n = m.rows(), k = dims.size();
    std::vector<std::size_t> out_dims(k);
    for (std::size_t j = 0; j < k; ++j) out_dims[j] = dims[perm[j]];
    const auto out_str = strides_of(out_dims);
    const auto dig = digit_table(dims);
    std::vector<std::size_t> map(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) map[i] += dig[i * k + perm[j]] * out_str[j];
    ComplexMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(map[r], map[c]) = m(r, c);
    return out;
}

ComplexMatrix apply_local_unitary(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                  std::size_t factor, const ComplexMatrix& u) {
    require(factor < dims.size(), "apply_local_unitary: factor out of range");
    require(u.square() && u.rows() == dims[factor], "apply_local_unitary: unitary dim mismatch");
    std::size_t pre = 1, post = 1;
    for (std::size_t f = 0; f < factor; ++f) pre *= dims[f];
    for (std::size_t f = factor + 1; f < dims.size(); ++f) post *= dims[f];
    const ComplexMatrix full =
        tensor_product(tensor_product(ComplexMatrix::identity(pre), u),
                       ComplexMatrix::identity(post));
    return full * m * adjoint(full);
}

ComplexMatrix realign(const ComplexMatrix& a) {
    require(a.square(), "realign: square input expected");
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(double(a.rows()))));
    require(d * d == a.rows(), "realign: dimension is not a perfect square");
    ComplexMatrix r(d * d, d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t l = 0; l < d; ++l)
                    r(i * d + j, k * d + l) = a(i * d + k, j * d + l);
    return r;
}

double schatten_norm(const ComplexMatrix& a, double p) {
    if (std::isnan(p) || p < 1.0) throw std::invalid_argument("schatten_norm: p must be >= 1");
    const std::vector<double> s = singular_values(a);
    if (std::isinf(p)) return s.empty() ? 0.0 : s.front();
    if (p == 1.0) return std::accumulate(s.begin(), s.end(), 0.0);
    double acc = 0.0;
    for (double x : s) acc += std::pow(x, p);
    return std::pow(acc, 1.0 / p);
}

double trace_distance(const FactoredState& rho, const FactoredState& sigma) {
    require(rho.dim() == sigma.dim(), "trace_distance: dimension mismatch");
    return schatten_norm(rho.matrix() - sigma.matrix(), 1.0);
}

double fidelity(const FactoredState& rho, const FactoredState& sigma) {
    require(rho.dim() == sigma.dim(), "fidelity: dimension mismatch");
    const EigResult es = eig_hermitian(sigma.matrix());
    if (es.values.front() < -1e-10)
        throw std::domain_error("fidelity: sigma min eigenvalue " +
                                std::to_string(es.values.front()) + " below -1e-10");
    const std::size_t n = sigma.dim();
    const double cut = 1e-12 * std::max(es.values.back(), 0.0);
    ComplexMatrix root(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (es.values[k] <= cut) continue;
        const double r = std::sqrt(es.values[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = es.vectors(i, k) * r;
            for (std::size_t j = 0; j < n; ++j) root(i, j) += vik * std::conj(es.vectors(j, k));
        }
    }
    const ComplexMatrix inner = root * rho.matrix() * root;
    const std::vector<double> lam = eigenvalues_hermitian(inner);
    if (lam.front() < -1e-10)
        throw std::domain_error("fidelity: inner operator min eigenvalue " +
                                std::to_string(lam.front()) + " below -1e-10");
    const double icut = 1e-12 * std::max(lam.back(), 0.0);
    double f = 0.0;
    for (double l : lam)
        if (l > icut) f += std::sqrt(l);
    return f;
}

double min_eigenvalue(const HermitianOperator& a) { return min_eigenvalue_of(a.matrix()); }

PptReport is_ppt(const FactoredState& s, double tol) {
    const ComplexMatrix pt = partial_transpose(s.matrix(), s.factor_dims(), s.transpose_set());
    PptReport r;
    r.witness_eigenvalue = min_eigenvalue_of(pt);
    r.ppt = r.witness_eigenvalue >= -tol;
    return r;
}

}  // namespace pptgeo
