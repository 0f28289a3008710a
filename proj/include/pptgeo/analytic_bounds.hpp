#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pptgeo {

// Integer plan for driving the separability gap to 2 - epsilon with l copies
// of a flower state on shield dimension d_s. The total local dimension
// d = 2^l * d_s^l overflows 64-bit integers quickly, so it is kept as a
// decimal string produced by arbitrary-precision arithmetic.
struct BoostPlan {
    double epsilon = 0.0;
    std::size_t l = 0;
    std::uint64_t d_s = 0;
    std::string d_decimal;
    double log2_d = 0.0;
    double c_effective = 0.0;
};

struct BoostBounds {
    double first = 0.0;
    double second = 0.0;
    double exact = 0.0;
    bool first_vacuous = false;
    bool second_vacuous = false;
    bool exact_vacuous = false;
};

double private_sep_lb(std::size_t d_k);
double flower_sep_lb(std::size_t d_s);
BoostBounds boost_bounds(std::size_t l, std::uint64_t d_s);
BoostPlan plan_for_epsilon(double epsilon);
double ks_gap_lb(std::size_t d_s);
std::pair<double, double> fvg_interval(double fidelity);
double pure_ppt_fidelity(const std::vector<double>& schmidt);

}  // namespace pptgeo
