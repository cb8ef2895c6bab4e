#ifndef HT_SPECIAL_HPP
#define HT_SPECIAL_HPP

// Special functions backing the closed forms: incomplete gamma (including
// negative first argument), generalized exponential integral, regularized
// incomplete beta and its inverse, inverse complementary error function,
// harmonic numbers, and Student-t tail helpers built on the beta kernel.

#include <cmath>
#include <cstdint>
#include <limits>

#include "ht/common.hpp"

namespace ht::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

// value + conservative absolute error bound, for callers that budget tolerances
struct SpecialFnResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
inline constexpr int kMaxIter = 2000000;

// Regularized lower incomplete gamma P(a,z) by series; a > 0, best for z < a+1.
inline double gamma_p_series(double a, double z) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= z / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps)
            return sum * std::exp(-z + a * std::log(z) - std::lgamma(a));
    }
    throw numeric_error("gamma_p series failed to converge");
}

// Continued-fraction kernel h with Gamma(a,z) = exp(-z + a log z) * h.
// Converges for z >= ~1 at any real a, and for z >= a+1 when a > 0.
inline double gamma_cf_kernel(double a, double z) {
    double b = z + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) return h;
    }
    throw numeric_error("incomplete gamma continued fraction failed to converge");
}

// E_n(z) for integer n >= 0 (series for z <= 1, continued fraction above).
inline double expint_int(int n, double z) {
    if (n == 0) return std::exp(-z) / z;
    int nm1 = n - 1;
    if (z > 1.0) {
        double b = z + n;
        double c = 1.0 / kFpMin;
        double d = 1.0 / b;
        double h = d;
        for (int i = 1; i <= kMaxIter; ++i) {
            double an = -static_cast<double>(i) * (nm1 + i);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            double del = c * d;
            h *= del;
            if (std::abs(del - 1.0) <= kEps) return h * std::exp(-z);
        }
        throw numeric_error("expint continued fraction failed to converge");
    }
    double ans = (nm1 != 0) ? 1.0 / nm1 : -std::log(z) - kEulerGamma;
    double fact = 1.0;
    for (int i = 1; i <= kMaxIter; ++i) {
        fact *= -z / i;
        double del;
        if (i != nm1) {
            del = -fact / (i - nm1);
        } else {
            double psi = -kEulerGamma;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (-std::log(z) + psi);
        }
        ans += del;
        if (std::abs(del) < std::abs(ans) * kEps) return ans;
    }
    throw numeric_error("expint series failed to converge");
}

inline bool near_integer(double a) { return std::abs(a - std::rint(a)) < 1e-12; }

}  // namespace detail

// Regularized incomplete gamma P(a,z), Q(a,z) for a > 0, z >= 0.
inline double gamma_p(double a, double z) {
    if (!(a > 0.0) || z < 0.0) throw domain_error("gamma_p requires a > 0, z >= 0");
    if (z == 0.0) return 0.0;
    if (z < a + 1.0) return detail::gamma_p_series(a, z);
    double q = std::exp(-z + a * std::log(z) - std::lgamma(a)) * detail::gamma_cf_kernel(a, z);
    return 1.0 - q;
}

inline double gamma_q(double a, double z) {
    if (!(a > 0.0) || z < 0.0) throw domain_error("gamma_q requires a > 0, z >= 0");
    if (z == 0.0) return 1.0;
    if (z < a + 1.0) return 1.0 - detail::gamma_p_series(a, z);
    return std::exp(-z + a * std::log(z) - std::lgamma(a)) * detail::gamma_cf_kernel(a, z);
}

// Upper incomplete gamma Gamma(a,z) = int_z^inf t^{a-1} e^{-t} dt, z > 0,
// with the analytic continuation to a <= 0. Negative non-integer a at small z
// is reached by the downward recurrence Gamma(b,z) = (Gamma(b+1,z) - z^b e^{-z})/b
// from a start in [0.5, 1.5); negative integer a maps onto E_{m+1}.
inline double upper_incomplete_gamma(double a, double z) {
    if (!(z > 0.0)) throw domain_error("upper_incomplete_gamma requires z > 0");
    if (a > 0.0) {
        if (z < a + 1.0)
            return std::exp(std::lgamma(a)) * (1.0 - detail::gamma_p_series(a, z));
        return std::exp(-z + a * std::log(z)) * detail::gamma_cf_kernel(a, z);
    }
    if (detail::near_integer(a)) {
        int m = static_cast<int>(-std::rint(a));
        return std::exp(-m * std::log(z)) * detail::expint_int(m + 1, z);
    }
    if (z > 1.0) return std::exp(-z + a * std::log(z)) * detail::gamma_cf_kernel(a, z);
    int m = static_cast<int>(std::ceil(0.5 - a));
    double a0 = a + m;
    double g = std::exp(std::lgamma(a0)) * (1.0 - detail::gamma_p_series(a0, z));
    for (int k = 1; k <= m; ++k) {
        double b = a0 - k;
        g = (g - std::exp(b * std::log(z) - z)) / b;
    }
    return g;
}

inline SpecialFnResult upper_incomplete_gamma_r(double a, double z) {
    double v = upper_incomplete_gamma(a, z);
    // conservative: CF/series kernels terminate at relative eps; recurrence
    // steps can each lose ~one digit near z = 1.
    double steps = (a < 0.0 && z <= 1.0) ? std::ceil(-a) + 1.0 : 1.0;
    return {v, std::abs(v) * 32.0 * steps * detail::kEps + 1e-300};
}

// Generalized exponential integral E_nu(z) = int_1^inf e^{-zt} t^{-nu} dt,
// nu >= 0 real, z > 0. Integer orders use the dedicated series/CF; real orders
// go through E_nu(z) = z^{nu-1} Gamma(1-nu, z).
inline double exponential_integral(double nu, double z) {
    if (!(z > 0.0)) throw domain_error("exponential_integral requires z > 0");
    if (nu < 0.0) throw domain_error("exponential_integral requires nu >= 0");
    if (detail::near_integer(nu)) return detail::expint_int(static_cast<int>(std::rint(nu)), z);
    return std::exp((nu - 1.0) * std::log(z)) * upper_incomplete_gamma(1.0 - nu, z);
}

namespace detail {

inline double betacf(double a, double b, double x) {
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) return h;
    }
    throw numeric_error("incomplete beta continued fraction failed to converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a,b).
inline double reg_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw domain_error("reg_incomplete_beta requires a,b > 0");
    if (x < 0.0 || x > 1.0) throw domain_error("reg_incomplete_beta requires x in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * detail::betacf(a, b, x) / a;
    return 1.0 - bt * detail::betacf(b, a, 1.0 - x) / b;
}

// Inverse of I_x(a,b) in x: returns x with |I_x(a,b) - p| <= 1e-12.
inline double inv_reg_incomplete_beta(double p, double a, double b) {
    if (!(p > 0.0) || !(p < 1.0)) throw domain_error("inv_reg_incomplete_beta requires p in (0,1)");
    if (!(a > 0.0) || !(b > 0.0)) throw domain_error("inv_reg_incomplete_beta requires a,b > 0");
    double x;
    if (a >= 1.0 && b >= 1.0) {
        double pp = (p < 0.5) ? p : 1.0 - p;
        double t = std::sqrt(-2.0 * std::log(pp));
        double xg = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if (p < 0.5) xg = -xg;
        double al = (xg * xg - 3.0) / 6.0;
        double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        double w = xg * std::sqrt(al + h) / h -
                   (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        x = a / (a + b * std::exp(2.0 * w));
    } else {
        double lna = std::log(a / (a + b));
        double lnb = std::log(b / (a + b));
        double t = std::exp(a * lna) / a;
        double u = std::exp(b * lnb) / b;
        double w = t + u;
        if (p < t / w)
            x = std::pow(a * w * p, 1.0 / a);
        else
            x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
    }
    double afac = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    for (int j = 0; j < 30; ++j) {
        if (x <= 0.0 || x >= 1.0) {
            x = std::min(std::max(x, 1e-300), 1.0 - detail::kEps);
        }
        double err = reg_incomplete_beta(a, b, x) - p;
        if (std::abs(err) < 1e-14 && j > 0) break;
        double t = std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) + afac);
        double u = err / t;
        // Halley step with NR's curvature damping
        double step = u / (1.0 - 0.5 * std::min(1.0, u * ((a - 1.0) / x - (b - 1.0) / (1.0 - x))));
        x -= step;
        if (x <= 0.0) x = 0.5 * (x + step);
        if (x >= 1.0) x = 0.5 * (x + step + 1.0);
        if (std::abs(step) < 1e-16 * x && j > 1) break;
    }
    return x;
}

// Inverse complementary error function: erfc(erfc_inv(y)) = y, y in (0,2).
inline double erfc_inv(double y) {
    if (!(y > 0.0) || !(y < 2.0)) throw domain_error("erfc_inv requires y in (0,2)");
    if (y == 1.0) return 0.0;
    if (y > 1.0) return -erfc_inv(2.0 - y);
    double t = std::sqrt(-2.0 * std::log(0.5 * y));
    double x = -0.70711 * ((2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t);
    for (int j = 0; j < 4; ++j) {
        double err = std::erfc(x) - y;
        x += err / (1.1283791670955126 * std::exp(-x * x));  // 2/sqrt(pi)
    }
    return x;
}

// Harmonic numbers H_t and H_t^(2), compensated summation, small terms first.
inline double harmonic(std::int64_t t) {
    if (t < 1) throw domain_error("harmonic requires t >= 1");
    KahanSum s;
    for (std::int64_t i = t; i >= 1; --i) s.add(1.0 / static_cast<double>(i));
    return s.value();
}

inline double harmonic2(std::int64_t t) {
    if (t < 1) throw domain_error("harmonic2 requires t >= 1");
    KahanSum s;
    for (std::int64_t i = t; i >= 1; --i) {
        double x = static_cast<double>(i);
        s.add(1.0 / (x * x));
    }
    return s.value();
}

inline double norm_pdf(double x) { return 0.3989422804014327 * std::exp(-0.5 * x * x); }
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865476); }

// Student-t density, one-tailed survival, and its inverse, via the beta kernel.
inline double student_t_pdf(double x, double nu) {
    return std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) /
           std::sqrt(nu * M_PI) * std::pow(1.0 + x * x / nu, -0.5 * (nu + 1.0));
}

inline double student_t_sf(double x, double nu) {
    if (x >= 0.0) {
        double lam = nu / (x * x + nu);
        return 0.5 * reg_incomplete_beta(0.5 * nu, 0.5, lam);
    }
    double lam2 = x * x / (x * x + nu);
    return 0.5 * (1.0 + reg_incomplete_beta(0.5, 0.5 * nu, lam2));
}

inline double student_t_isf(double p, double nu) {
    if (!(p > 0.0) || !(p < 1.0)) throw domain_error("student_t_isf requires p in (0,1)");
    if (p == 0.5) return 0.0;
    if (p < 0.5) {
        double lam = inv_reg_incomplete_beta(2.0 * p, 0.5 * nu, 0.5);
        return std::sqrt(nu * (1.0 / lam - 1.0));
    }
    double lam2 = inv_reg_incomplete_beta(2.0 * p - 1.0, 0.5, 0.5 * nu);
    return -std::sqrt(nu * lam2 / (1.0 - lam2));
}

}  // namespace ht::special

#endif  // HT_SPECIAL_HPP
