#pragma once

// Shared random-input generators for the test suites. Everything is driven
// by SampleRng with fixed seeds so failures reproduce exactly.

#include <cmath>
#include <cstddef>
#include <vector>

#include "pptgeo/complex_matrix.hpp"
#include "pptgeo/rng.hpp"
#include "pptgeo/spectral.hpp"

namespace testutil {

using pptgeo::ComplexMatrix;
using pptgeo::cplx;

inline ComplexMatrix random_matrix(std::size_t n, pptgeo::SampleRng& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = cplx(rng.gaussian(), rng.gaussian());
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, pptgeo::SampleRng& rng) {
    ComplexMatrix m = random_matrix(n, rng);
    ComplexMatrix h = m + pptgeo::adjoint(m);
    h *= cplx(0.5, 0.0);
    return h;
}

// Wishart-style density matrix G G^dag / Tr, full rank almost surely.
inline ComplexMatrix random_density(std::size_t n, pptgeo::SampleRng& rng) {
    ComplexMatrix g = random_matrix(n, rng);
    ComplexMatrix w = g * pptgeo::adjoint(g);
    const double t = pptgeo::trace(w).real();
    w *= cplx(1.0 / t, 0.0);
    return w;
}

// Unitary from the eigenbasis of a random Hermitian draw (Haar-like; exact
// distribution is irrelevant for the invariance properties tested).
inline ComplexMatrix random_unitary(std::size_t n, pptgeo::SampleRng& rng) {
    const pptgeo::EigResult e = pptgeo::eig_hermitian(random_hermitian(n, rng));
    return e.vectors;
}

inline std::vector<cplx> random_unit_vector(std::size_t n, pptgeo::SampleRng& rng) {
    std::vector<cplx> v(n);
    double norm2 = 0.0;
    for (auto& z : v) {
        z = cplx(rng.gaussian(), rng.gaussian());
        norm2 += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : v) z *= inv;
    return v;
}

inline ComplexMatrix projector(const std::vector<cplx>& v) {
    ComplexMatrix p(v.size(), v.size());
    for (std::size_t r = 0; r < v.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c) p(r, c) = v[r] * std::conj(v[c]);
    return p;
}

// Normalized Schmidt vector with all entries positive.
inline std::vector<double> random_schmidt(std::size_t d, pptgeo::SampleRng& rng) {
    std::vector<double> a(d);
    double s = 0.0;
    for (auto& x : a) {
        x = 0.05 + rng.uniform();
        s += x * x;
    }
    const double inv = 1.0 / std::sqrt(s);
    for (auto& x : a) x *= inv;
    return a;
}

}  // namespace testutil
