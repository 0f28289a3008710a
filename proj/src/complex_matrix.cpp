#include "pptgeo/complex_matrix.hpp"

#include <cmath>
#include <cstdlib>

namespace pptgeo {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::size_t max_total_dim() {
    static const std::size_t cap = [] {
        const char* env = std::getenv("PPTGEO_MAX_DIM");
        if (env != nullptr) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end != env && v >= 2) return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(8192);
    }();
    return cap;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix shape mismatch in +=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix shape mismatch in -=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.rows(), "matrix shape mismatch in *");
    ComplexMatrix c(a.rows(), b.cols());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            const cplx ail = a(i, l);
            if (ail == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) c(i, j) += ail * b(l, j);
        }
    }
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = std::conj(a(r, c));
    return t;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix t(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
    return t;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
    ComplexMatrix t(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) t(r, c) = std::conj(a(r, c));
    return t;
}

cplx trace(const ComplexMatrix& a) {
    require(a.square(), "trace of non-square matrix");
    cplx t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& v : a.data()) s += std::norm(v);
    return std::sqrt(s);
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const auto& v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shape mismatch in diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double max_hermiticity_defect(const ComplexMatrix& a) {
    require(a.square(), "hermiticity defect of non-square matrix");
    double m = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = r; c < a.cols(); ++c)
            m = std::max(m, std::abs(a(r, c) - std::conj(a(c, r))));
    return m;
}

bool all_finite(const ComplexMatrix& a) {
    for (const auto& v : a.data())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double hs_inner_real(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix shape mismatch in pairing");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        const cplx &x = a.data()[i], &y = b.data()[i];
        s += x.real() * y.real() + x.imag() * y.imag();
    }
    return s;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t r = a.rows() * b.rows(), c = a.cols() * b.cols();
    if (r > max_total_dim() || c > max_total_dim())
        throw CapacityError("tensor_product exceeds capacity cap " +
                            std::to_string(max_total_dim()) + " (got " + std::to_string(r) +
                            "x" + std::to_string(c) + ")");
    ComplexMatrix t(r, c);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    t(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return t;
}

}  // namespace pptgeo
