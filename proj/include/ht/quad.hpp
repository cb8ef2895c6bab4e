#ifndef HT_QUAD_HPP
#define HT_QUAD_HPP

#include <cmath>
#include <cstddef>
#include <functional>

#include "ht/common.hpp"

namespace ht::quad {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (positive half; nodes symmetric).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double integral;
    double error;
};

template <class F>
Panel gk15(const F& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double f1 = f(c - x);
        double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

template <class F>
double adapt(const F& f, double a, double b, double tol, int depth) {
    Panel p = gk15(f, a, b);
    if (p.error <= tol || depth >= 52) return p.integral;
    double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, depth + 1) + adapt(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval; tol is an absolute target.
template <class F>
double integrate(const F& f, double a, double b, double tol = 1e-10) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw domain_error("integrate requires finite bounds");
    if (!(a < b)) {
        if (a == b) return 0.0;
        return -integrate(f, b, a, tol);
    }
    return detail::adapt(f, a, b, tol, 0);
}

// Semi-infinite integral via x = a + t/(1-t) substitution on t in (0,1).
template <class F>
double integrate_to_inf(const F& f, double a, double tol = 1e-10) {
    if (!std::isfinite(a)) throw domain_error("integrate_to_inf requires a finite lower bound");
    auto g = [&](double t) {
        double om = 1.0 - t;
        double x = a + t / om;
        return f(x) / (om * om);
    };
    return detail::adapt(g, 0.0, 1.0, tol, 0);
}

}  // namespace ht::quad

#endif  // HT_QUAD_HPP
