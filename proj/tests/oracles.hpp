#pragma once

// Test-side oracles, deliberately coded independently of the library:
// adaptive Simpson quadrature (the library uses Gauss-Legendre), nested 2-D
// time-ordered integrals, and brute-force matrix exponentials.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "msgate/pulse.hpp"

namespace oracles {

using cplx = std::complex<double>;

namespace detail {

template <typename F>
cplx simpson(const F& f, double a, double b, cplx fa, cplx fm, cplx fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
cplx adapt(const F& f, double a, double b, cplx fa, cplx fm, cplx fb, cplx whole, double tol,
           int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const cplx flm = f(lm), frm = f(rm);
    const cplx left = simpson(f, a, m, fa, flm, fm);
    const cplx right = simpson(f, m, b, fm, frm, fb);
    const cplx delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || depth > 40)
        return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

// \int_a^b f dt, adaptive Simpson with per-period pre-splitting.
template <typename F>
cplx integrate(const F& f, double a, double b, double tol, double max_freq = 0.0) {
    int panels = 4;
    if (max_freq > 0.0)
        panels = std::max(panels, int(std::abs(b - a) * max_freq / (2.0 * M_PI)) + 1);
    const double h = (b - a) / panels;
    cplx total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double pa = a + i * h, pb = pa + h, pm = 0.5 * (pa + pb);
        const cplx fa = f(pa), fm = f(pm), fb = f(pb);
        total += detail::adapt(f, pa, pb, fa, fm, fb, detail::simpson(f, pa, pb, fa, fm, fb),
                               tol / panels, 0);
    }
    return total;
}

// \int_0^tau dt1 \int_0^t1 dt2 f(t1, t2)
template <typename F2>
cplx integrate2(const F2& f, double tau, double tol, double max_freq = 0.0) {
    return integrate(
        [&](double t1) {
            return integrate([&](double t2) { return f(t1, t2); }, 0.0, t1,
                             tol / std::max(tau, 1e-30), max_freq);
        },
        0.0, tau, tol, max_freq);
}

inline std::mt19937& rng() {
    static std::mt19937 gen(987654321u);
    return gen;
}

// A small random pulse (not closure-satisfying) for oracle comparisons.
inline msgate::Pulse random_pulse(double tau = 40e-6) {
    std::uniform_int_distribution<int> nmin_d(1, 5), size_d(3, 8);
    std::uniform_real_distribution<double> coeff_d(-1.0, 1.0);
    msgate::Pulse p;
    p.tau = tau;
    p.n_min = nmin_d(rng());
    p.n_max = p.n_min + size_d(rng()) - 1;
    for (int i = 0; i < p.basis_size(); ++i) p.coeffs.push_back(2.0e4 * coeff_d(rng()));
    return p;
}

// exp(i eta (a^dag + a)) on an oversized truncation, then cropped: the
// brute-force reference for the cos/sin displacement elements of one mode.
inline void displacement_expm(double eta, int dim, Eigen::MatrixXd& C, Eigen::MatrixXd& S,
                              int pad = 30) {
    const int big = dim + pad;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(big, big);
    for (int n = 0; n + 1 < big; ++n) {
        v(n, n + 1) = eta * std::sqrt(double(n + 1));
        v(n + 1, n) = v(n, n + 1);
    }
    Eigen::MatrixXcd e = (cplx(0.0, 1.0) * v.cast<cplx>()).exp();
    C = e.real().topLeftCorner(dim, dim);
    S = e.imag().topLeftCorner(dim, dim);
}

}  // namespace oracles
