#pragma once

// Adaptive composite Gauss-Legendre quadrature.  Used as the fallback
// evaluation branch of the pulse functionals near poles of their closed
// forms.  Integrands are smooth trigonometric polynomials, so a 15-point
// rule with interval bisection converges rapidly.

#include <cmath>
#include <complex>
#include <functional>

#include "msgate/errors.hpp"

namespace msgate {

namespace quad_detail {

// 15-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; symmetric).
inline constexpr double kNodes[8] = {
    0.0000000000000000, 0.2011940939974345, 0.3941513470775634, 0.5709721726085388,
    0.7244177313601701, 0.8482065834104272, 0.9372733924007060, 0.9879925180204854};
inline constexpr double kWeights[8] = {
    0.2025782419255613, 0.1984314853271116, 0.1861610000155622, 0.1662692058169939,
    0.1395706779261543, 0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

template <typename F>
std::complex<double> gl15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::complex<double> s = kWeights[0] * f(c);
    for (int i = 1; i < 8; ++i)
        s += kWeights[i] * (f(c + h * kNodes[i]) + f(c - h * kNodes[i]));
    return s * h;
}

template <typename F>
std::complex<double> adapt(const F& f, double a, double b, std::complex<double> whole,
                           double tol, int depth) {
    const double m = 0.5 * (a + b);
    const std::complex<double> left = gl15(f, a, m);
    const std::complex<double> right = gl15(f, m, b);
    const std::complex<double> delta = left + right - whole;
    if (std::abs(delta) <= tol || depth >= 48) return left + right + delta;
    return adapt(f, a, m, left, 0.5 * tol, depth + 1) +
           adapt(f, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace quad_detail

// \int_a^b f, absolute tolerance abs_tol.  The interval is pre-split into
// panels so that each starts below roughly one oscillation period of the
// fastest component (max_freq in rad/s, 0 = unknown).
template <typename F>
std::complex<double> integrate_adaptive(const F& f, double a, double b, double abs_tol,
                                        double max_freq = 0.0) {
    int panels = 8;
    if (max_freq > 0.0) {
        const double periods = std::abs(b - a) * max_freq / (2.0 * M_PI);
        panels = std::max(panels, int(periods) + 1);
    }
    const double h = (b - a) / panels;
    std::complex<double> total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double pa = a + i * h, pb = pa + h;
        total += quad_detail::adapt(f, pa, pb, quad_detail::gl15(f, pa, pb),
                                    abs_tol / panels, 0);
    }
    return total;
}

}  // namespace msgate
