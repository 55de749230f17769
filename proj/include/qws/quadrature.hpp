// quadrature.hpp — adaptive Simpson integration for smooth densities.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace qws {

namespace detail {

template <typename T, typename F>
T adaptive_simpson_rec(const F& f, double a, double b, T fa, T fm, T fb, T whole, double tol,
                       int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    if (depth <= 0) {
        throw std::runtime_error("adaptive_simpson: max recursion depth reached");
    }
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace detail

template <typename T = double, typename F>
T adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int max_depth = 48) {
    const T fa = f(a);
    const T fm = f(0.5 * (a + b));
    const T fb = f(b);
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec<T>(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace qws
