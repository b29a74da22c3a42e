#pragma once

// Analytic pulse functionals: G, Q, f, S_p, J_p, Z, Phi, chi, chi-tilde.
//
// All closed forms are evaluated through the ExpPoly engine (exact
// trigonometric-polynomial algebra), which is regular everywhere except
// where an antiderivative frequency collides with zero; those points are
// detected and handed to the adaptive-quadrature branch.  Every value can
// also be forced onto the quadrature branch for cross-checking.

#include <cmath>
#include <complex>
#include <vector>

#include "msgate/chain.hpp"
#include "msgate/errors.hpp"
#include "msgate/exppoly.hpp"
#include "msgate/pulse.hpp"
#include "msgate/quadrature.hpp"

namespace msgate {

enum class EvalMethod { closed_form, quadrature };

struct FunctionalValue {
    cplx value{0.0, 0.0};
    EvalMethod method = EvalMethod::closed_form;
    double est_error = 0.0;

    double real() const { return value.real(); }
};

namespace func_detail {

// absolute tolerance scale for quadrature branches: ~1e-12 * ||g||^2 tau^2
inline double quad_tol(const Pulse& p, int g_powers) {
    const double s = std::max(p.coeff_norm() * p.tau, 1.0);
    double t = 1e-12;
    for (int i = 0; i < g_powers; ++i) t *= s;
    return std::max(t, 1e-300);
}

inline double max_tone_freq(const Pulse& p) { return p.omega(p.n_max); }

// default pole guard: fraction of the tone spacing 2 pi / tau
inline double default_eps_pole(const Pulse& p) { return 1e-3 * 2.0 * M_PI / p.tau; }

inline bool near_any_tone(const Pulse& p, double w, double eps) {
    for (int i = 0; i < p.basis_size(); ++i) {
        const double wn = p.omega_at(i);
        if (std::abs(w - wn) < eps || std::abs(w + wn) < eps) return true;
    }
    return false;
}

}  // namespace func_detail

// G(t) = int_0^t g = 2 sum_n (B_n / w_n) sin^2(w_n t / 2)
inline double eval_G(const Pulse& pulse, double t) {
    pulse.validate();
    if (t < -1e-15 || t > pulse.tau * (1.0 + 1e-12))
        throw ValidationError("eval_G: t outside [0, tau]");
    double v = 0.0;
    for (int i = 0; i < pulse.basis_size(); ++i) {
        const double w = pulse.omega_at(i);
        const double s = std::sin(0.5 * w * t);
        v += 2.0 * pulse.coeffs[i] / w * s * s;
    }
    return v;
}

// Q(w) = int_0^tau g e^{iwt} dt
inline FunctionalValue eval_Q(const Pulse& pulse, double w, bool force_quadrature = false) {
    pulse.validate();
    FunctionalValue out;
    if (force_quadrature) {
        const double tol = func_detail::quad_tol(pulse, 1);
        out.method = EvalMethod::quadrature;
        out.est_error = tol;
        out.value = integrate_adaptive(
            [&](double t) { return pulse.g(t) * std::exp(cplx(0.0, w * t)); }, 0.0, pulse.tau,
            tol, std::max(func_detail::max_tone_freq(pulse), std::abs(w)));
        return out;
    }
    // exact product integral; stable for all w including tone collisions
    ExpPoly prod = pulse.as_exppoly() * ExpPoly::exp_tone(1.0, w);
    out.value = prod.integrate(pulse.tau);
    out.est_error = 1e-14 * pulse.coeff_norm() * pulse.tau;
    return out;
}

// f(w) = int_0^tau g G e^{iwt} dt
inline FunctionalValue eval_f(const Pulse& pulse, double w, bool force_quadrature = false) {
    pulse.validate();
    FunctionalValue out;
    if (force_quadrature) {
        const double tol = func_detail::quad_tol(pulse, 2);
        out.method = EvalMethod::quadrature;
        out.est_error = tol;
        out.value = integrate_adaptive(
            [&](double t) {
                return pulse.g(t) * eval_G(pulse, t) * std::exp(cplx(0.0, w * t));
            },
            0.0, pulse.tau, tol, std::max(func_detail::max_tone_freq(pulse), std::abs(w)));
        return out;
    }
    const ExpPoly g = pulse.as_exppoly();
    const ExpPoly G = g.antiderivative();
    ExpPoly prod = g * G * ExpPoly::exp_tone(1.0, w);
    out.value = prod.integrate(pulse.tau);
    const double s = pulse.coeff_norm();
    out.est_error = 1e-13 * s * s * pulse.tau * pulse.tau;
    return out;
}

// S_p(w) = int_0^tau dt1 int_0^{t1} dt2 g(t1) g(t2) sin[w_p (t1 - t2)] e^{i w t1}
inline FunctionalValue eval_Sp(const Pulse& pulse, double omega_p, double w,
                               bool force_quadrature = false) {
    pulse.validate();
    FunctionalValue out;
    const ExpPoly g = pulse.as_exppoly();
    const ExpPoly sin_p = ExpPoly::sin_tone(omega_p);
    const ExpPoly cos_p = ExpPoly::cos_tone(omega_p);
    // sin[w_p(t1-t2)] = sin_p(t1) cos_p(t2) - cos_p(t1) sin_p(t2)
    const ExpPoly ic = (g * cos_p).antiderivative();  // int_0^{t1} g cos_p
    const ExpPoly is = (g * sin_p).antiderivative();
    const double eps = func_detail::default_eps_pole(pulse);
    const bool collision = func_detail::near_any_tone(pulse, omega_p, eps);
    if (force_quadrature || collision) {
        // outer 1-D quadrature; the inner integral is still evaluated exactly
        // via stable per-term definite integration of the inner product.
        const double tol = func_detail::quad_tol(pulse, 2);
        out.method = EvalMethod::quadrature;
        out.est_error = tol;
        const ExpPoly inner_c = g * cos_p;
        const ExpPoly inner_s = g * sin_p;
        out.value = integrate_adaptive(
            [&](double t1) {
                const double icv = inner_c.integrate(t1).real();
                const double isv = inner_s.integrate(t1).real();
                const double kern =
                    std::sin(omega_p * t1) * icv - std::cos(omega_p * t1) * isv;
                return pulse.g(t1) * kern * std::exp(cplx(0.0, w * t1));
            },
            0.0, pulse.tau, tol,
            std::max(func_detail::max_tone_freq(pulse) + omega_p, std::abs(w)));
        return out;
    }
    ExpPoly outer = g * (sin_p * ic + cos_p * (is * cplx(-1.0, 0.0)));
    outer = outer * ExpPoly::exp_tone(1.0, w);
    out.value = outer.integrate(pulse.tau);
    const double s = pulse.coeff_norm();
    out.est_error = 1e-13 * s * s * pulse.tau * pulse.tau;
    return out;
}

// J_p = int_0^tau g G^2 e^{i w_p t} dt
inline FunctionalValue eval_Jp(const Pulse& pulse, double omega_p,
                               bool force_quadrature = false) {
    pulse.validate();
    FunctionalValue out;
    if (force_quadrature) {
        const double tol = func_detail::quad_tol(pulse, 3);
        out.method = EvalMethod::quadrature;
        out.est_error = tol;
        out.value = integrate_adaptive(
            [&](double t) {
                const double G = eval_G(pulse, t);
                return pulse.g(t) * G * G * std::exp(cplx(0.0, omega_p * t));
            },
            0.0, pulse.tau, tol, func_detail::max_tone_freq(pulse) + omega_p);
        return out;
    }
    const ExpPoly g = pulse.as_exppoly();
    const ExpPoly G = g.antiderivative();
    ExpPoly prod = g * G * G * ExpPoly::exp_tone(1.0, omega_p);
    out.value = prod.integrate(pulse.tau);
    const double s = pulse.coeff_norm();
    out.est_error = 1e-12 * s * s * s * std::pow(pulse.tau, 3);
    return out;
}

// Z(w1, w2) = int_0^tau dt1 int_0^{t1} dt2 g(t1) g(t2) e^{i w1 t1} e^{i w2 t2}
inline FunctionalValue eval_Z(const Pulse& pulse, double w1, double w2,
                              bool force_quadrature = false) {
    pulse.validate();
    FunctionalValue out;
    const double eps = func_detail::default_eps_pole(pulse);
    const bool inner_pole = func_detail::near_any_tone(pulse, w2, eps);
    if (force_quadrature || inner_pole) {
        const double tol = func_detail::quad_tol(pulse, 2);
        out.method = EvalMethod::quadrature;
        out.est_error = tol;
        const ExpPoly inner = pulse.as_exppoly() * ExpPoly::exp_tone(1.0, w2);
        out.value = integrate_adaptive(
            [&](double t1) {
                return pulse.g(t1) * std::exp(cplx(0.0, w1 * t1)) * inner.integrate(t1);
            },
            0.0, pulse.tau, tol,
            func_detail::max_tone_freq(pulse) + std::abs(w1) + std::abs(w2));
        return out;
    }
    const ExpPoly g = pulse.as_exppoly();
    const ExpPoly inner = (g * ExpPoly::exp_tone(1.0, w2)).antiderivative();
    ExpPoly outer = g * ExpPoly::exp_tone(1.0, w1) * inner;
    out.value = outer.integrate(pulse.tau);
    const double s = pulse.coeff_norm();
    out.est_error = 1e-13 * s * s * pulse.tau * pulse.tau;
    return out;
}

// chi = 2 sum_p eta_p^{j1} eta_p^{j2} S_p(0)
inline double eval_chi(const ChainSpec& chain, const GatePair& pair, const Pulse& pulse,
                       bool force_quadrature = false) {
    pair.validate(chain);
    double chi = 0.0;
    for (int p = 0; p < chain.n_modes(); ++p) {
        const double eta2 =
            chain.lamb_dicke(p, pair.ion(0)) * chain.lamb_dicke(p, pair.ion(1));
        if (eta2 == 0.0) continue;
        chi += 2.0 * eta2 *
               eval_Sp(pulse, chain.mode_freqs[p], 0.0, force_quadrature).value.real();
    }
    return chi;
}

// chi-tilde: same double integral, weights sum_{j in pair} (eta_p^j)^2
inline double eval_chi_tilde(const ChainSpec& chain, const GatePair& pair, const Pulse& pulse,
                             bool force_quadrature = false) {
    pair.validate(chain);
    double v = 0.0;
    for (int p = 0; p < chain.n_modes(); ++p) {
        const double w = chain.lamb_dicke(p, pair.ion(0)) * chain.lamb_dicke(p, pair.ion(0)) +
                         chain.lamb_dicke(p, pair.ion(1)) * chain.lamb_dicke(p, pair.ion(1));
        if (w == 0.0) continue;
        v += w * eval_Sp(pulse, chain.mode_freqs[p], 0.0, force_quadrature).value.real();
    }
    return v;
}

struct PhiValue {
    double closed_form = 0.0;     // (chi tau / 4 pi) sum_n B_n / n
    double double_integral = 0.0;  // eta-weighted nested integral
};

// Phi[eta, g]; both evaluation paths.  The closed form assumes the pulse
// satisfies closure (it uses the chi quadratic form identity).
inline PhiValue eval_phi(const ChainSpec& chain, const GatePair& pair, const Pulse& pulse) {
    pair.validate(chain);
    pulse.validate();
    PhiValue out;

    double bsum = 0.0;
    for (int i = 0; i < pulse.basis_size(); ++i) bsum += pulse.coeffs[i] / (pulse.n_min + i);
    const double chi = eval_chi(chain, pair, pulse);
    out.closed_form = chi * pulse.tau / (4.0 * M_PI) * bsum;

    // nested integral via exact algebra:
    //   Phi_p = int dt1 g sin_p(t1) IC(t1) - int dt1 g cos_p(t1) IS(t1)
    //   IC = int_0^{t1} g G cos_p,  IS = int_0^{t1} g G sin_p
    const ExpPoly g = pulse.as_exppoly();
    const ExpPoly G = g.antiderivative();
    const ExpPoly gG = g * G;
    for (int p = 0; p < chain.n_modes(); ++p) {
        const double eta2 =
            chain.lamb_dicke(p, pair.ion(0)) * chain.lamb_dicke(p, pair.ion(1));
        if (eta2 == 0.0) continue;
        const double wp = chain.mode_freqs[p];
        const ExpPoly ic = (gG * ExpPoly::cos_tone(wp)).antiderivative();
        const ExpPoly is = (gG * ExpPoly::sin_tone(wp)).antiderivative();
        ExpPoly outer =
            g * (ExpPoly::sin_tone(wp) * ic + ExpPoly::cos_tone(wp) * (is * cplx(-1.0, 0.0)));
        out.double_integral += eta2 * outer.integrate(pulse.tau).real();
    }
    return out;
}

// sum_n B_n / n, the Phi-constraint linear form (dimensionless up to rad/s)
inline double phi_linear_form(const Pulse& pulse) {
    double s = 0.0;
    for (int i = 0; i < pulse.basis_size(); ++i) s += pulse.coeffs[i] / (pulse.n_min + i);
    return s;
}

}  // namespace msgate
