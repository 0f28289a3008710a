#include "pptgeo/analytic_bounds.hpp"

#include <gmp.h>

#include <cmath>
#include <stdexcept>

#include "pptgeo/complex_matrix.hpp"
#include "pptgeo/private_states.hpp"

namespace pptgeo {

double private_sep_lb(std::size_t d_k) {
    if (d_k < 2) throw std::invalid_argument("private_sep_lb: d_k >= 2 required");
    return 2.0 - 2.0 / static_cast<double>(d_k);
}

double flower_sep_lb(std::size_t d_s) {
    if (d_s < 2) throw std::invalid_argument("flower_sep_lb: d_s >= 2 required");
    return 1.0 - 2.0 / (std::sqrt(static_cast<double>(d_s)) + 1.0);
}

BoostBounds boost_bounds(std::size_t l, std::uint64_t d_s) {
    require(l >= 1, "boost_bounds: l >= 1 required");
    require(d_s >= 2, "boost_bounds: d_s >= 2 required");
    const double ld = static_cast<double>(l);
    const double rs = std::sqrt(static_cast<double>(d_s));
    const double p = 1.0 / (rs + 1.0);
    const double base = 2.0 - 2.0 / std::exp2(ld);
    BoostBounds b;
    b.first = base - 2.0 * ld * p;
    b.second = base - 2.0 * std::sqrt(1.0 - std::pow(rs / (rs + 1.0), ld));
    b.exact = base - exact_tensor_gap(p, l);
    b.first_vacuous = b.first < 0.0;
    b.second_vacuous = b.second < 0.0;
    b.exact_vacuous = b.exact < 0.0;
    return b;
}

double ks_gap_lb(std::size_t d_s) {
    if (d_s < 1) throw std::invalid_argument("ks_gap_lb: d_s >= 1 required");
    return 1.0 / (2.0 * (static_cast<double>(d_s) + 1.0));
}

std::pair<double, double> fvg_interval(double fidelity) {
    if (!(fidelity >= 0.0 && fidelity <= 1.0))
        throw std::invalid_argument("fvg_interval: fidelity in [0,1] required");
    return {2.0 * (1.0 - fidelity), 2.0 * std::sqrt(1.0 - fidelity * fidelity)};
}

double pure_ppt_fidelity(const std::vector<double>& schmidt) {
    require(!schmidt.empty(), "pure_ppt_fidelity: empty Schmidt vector");
    double ssq = 0.0, amax = 0.0;
    for (double a : schmidt) {
        if (!(a >= 0.0))
            throw std::invalid_argument("pure_ppt_fidelity: Schmidt coefficients must be >= 0");
        ssq += a * a;
        amax = std::max(amax, a);
    }
    if (std::abs(ssq - 1.0) > 1e-9)
        throw std::invalid_argument("pure_ppt_fidelity: Schmidt vector not normalized");
    return amax;
}

BoostPlan plan_for_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 2.0))
        throw std::invalid_argument("plan_for_epsilon: epsilon in (0,2) required");

    // l is the smallest integer with 2^l >= 4/epsilon; the initial ceil can
    // sit one off at representation boundaries, so correct with exact exp2.
    const double target = 4.0 / epsilon;
    long l = std::lround(std::ceil(std::log2(target)));
    if (l < 1) l = 1;
    while (l > 1 && std::exp2(static_cast<double>(l - 1)) >= target) --l;
    while (std::exp2(static_cast<double>(l)) < target) ++l;

    // d_s = ceil((4l/eps - 1)^2). Snap products that are integers up to
    // rounding noise before the ceiling so decimal epsilons like 0.1 land on
    // the intended integer.
    const double t = 4.0 * static_cast<double>(l) / epsilon - 1.0;
    double tsq = t * t;
    const double snapped = std::round(tsq);
    if (std::abs(tsq - snapped) <= 1e-9 * std::max(1.0, std::abs(tsq))) tsq = snapped;
    const double ds_f = std::ceil(tsq);
    if (!(ds_f < 9007199254740992.0))  // 2^53: beyond this the ceiling itself is unreliable
        throw std::domain_error("plan_for_epsilon: d_s exceeds exact integer range of double");
    const std::uint64_t d_s = static_cast<std::uint64_t>(ds_f);

    BoostPlan plan;
    plan.epsilon = epsilon;
    plan.l = static_cast<std::size_t>(l);
    plan.d_s = d_s;

    mpz_t d, pw;
    mpz_inits(d, pw, nullptr);
    mpz_ui_pow_ui(d, 2, static_cast<unsigned long>(l));
    mpz_ui_pow_ui(pw, static_cast<unsigned long>(d_s), static_cast<unsigned long>(l));
    mpz_mul(d, d, pw);
    char* str = mpz_get_str(nullptr, 10, d);
    plan.d_decimal = str;
    void (*freefn)(void*, std::size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(str, plan.d_decimal.size() + 1);
    signed long ex = 0;
    const double mant = mpz_get_d_2exp(&ex, d);  // d = mant * 2^ex, mant in [0.5, 1)
    plan.log2_d = static_cast<double>(ex) + std::log2(mant);
    mpz_clears(d, pw, nullptr);

    const double lg = std::log2(target);
    plan.c_effective = plan.log2_d / (lg * lg);

    const double first = boost_bounds(plan.l, d_s).first;
    if (first < 2.0 - epsilon - 1e-12)
        throw NumericError("plan_for_epsilon: constructed plan misses its own bound");
    return plan;
}

}  // namespace pptgeo
