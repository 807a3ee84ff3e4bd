#ifndef CSMAHS_CORE_GEOSERIES_HPP
#define CSMAHS_CORE_GEOSERIES_HPP

#include <cmath>

// Geometric partial sums and tails.  The closed-form model expressions are
// algebraic rewrites of finite geometric sums; the ratio forms lose up to
// eps/(1-x) near x = 1 (and the solver walks p_of arbitrarily close to 0),
// so the finite sums are always evaluated term by term -- they have at most
// 2R+2 terms here.  Infinite tails keep the ratio form: their denominators
// cancel exactly against the p_of powers they are multiplied with.

namespace csmahs {

inline constexpr double kGeoGuard = 1e-12;

// sum_{n=i}^{j} x^(n-1); empty range gives 0.
inline double geo_sum(double x, int i, int j) {
    if (j < i) return 0.0;
    double acc = 0.0, t = std::pow(x, i - 1);
    for (int n = i; n <= j; ++n, t *= x) acc += t;
    return acc;
}

// sum_{n=i}^{j} n * x^(n-1); empty range gives 0.
inline double geo_sum_weighted(double x, int i, int j) {
    if (j < i) return 0.0;
    double acc = 0.0, t = std::pow(x, i - 1);
    for (int n = i; n <= j; ++n, t *= x) acc += n * t;
    return acc;
}

// sum_{n=i}^{inf} x^(n-1) with the complement 1-x passed exactly; computing
// 1.0 - x here would throw away every digit of a small complement.
inline double geo_tail(double x, double one_minus_x, int i) {
    return std::pow(x, i - 1) / one_minus_x;
}

// sum_{n=i}^{inf} n * x^(n-1).
inline double geo_tail_weighted(double x, double one_minus_x, int i) {
    return std::pow(x, i - 1) * (i - (i - 1) * x) /
           (one_minus_x * one_minus_x);
}

} // namespace csmahs

#endif
