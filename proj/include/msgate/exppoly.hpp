#pragma once

// Exact integration engine for trigonometric polynomials.
//
// Every integrand appearing in the pulse functionals is a finite sum of
// terms  c * t^k * exp(i*mu*t).  This class closes that family under
// multiplication, running integration from 0, and definite integration
// over [0, tau], so single, double and triple time-ordered integrals of
// products of pulse tones can be evaluated in closed form.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <unordered_map>
#include <vector>

namespace msgate {

using cplx = std::complex<double>;

struct ExpTerm {
    cplx c;     // coefficient
    int k;      // power of t
    double mu;  // angular frequency of exp(i*mu*t)
};

namespace detail {

// Stable \int_0^tau t^k exp(i*mu*t) dt.
// For small |mu*tau| the by-parts recurrence cancels catastrophically, so a
// Taylor series in (i*mu*tau) is used there instead.
inline cplx term_integral(int k, double mu, double tau) {
    const double x = mu * tau;
    if (std::abs(x) < 0.5) {
        // tau^{k+1} * sum_j (i x)^j / (j! (k+j+1))
        cplx sum = 0.0;
        cplx pow_term = 1.0;  // (i x)^j / j!
        for (int j = 0; j < 40; ++j) {
            const cplx contrib = pow_term / double(k + j + 1);
            sum += contrib;
            if (std::abs(contrib) < 1e-22 * std::abs(sum)) break;
            pow_term *= cplx(0.0, x) / double(j + 1);
        }
        return sum * std::pow(tau, k + 1);
    }
    // By parts: \int t^k e^{imt} = e^{imt} sum_{j=0}^{k} (-1)^j k!/(k-j)! t^{k-j}/(im)^{j+1}
    // evaluated at tau minus at 0.
    const cplx im(0.0, mu);
    const cplx e = std::exp(cplx(0.0, x));
    cplx at_tau = 0.0;
    double fact = 1.0;  // k!/(k-j)!
    double sign = 1.0;
    cplx denom = im;
    for (int j = 0; j <= k; ++j) {
        at_tau += sign * fact * std::pow(tau, k - j) / denom;
        fact *= double(k - j);
        sign = -sign;
        denom *= im;
    }
    // value at 0: only the j=k term survives (t^0)
    double fact_k = 1.0;
    for (int j = 2; j <= k; ++j) fact_k *= j;
    cplx at_zero = ((k % 2 == 0) ? 1.0 : -1.0) * fact_k / std::pow(im, k + 1);
    return e * at_tau - at_zero;
}

}  // namespace detail

class ExpPoly {
public:
    ExpPoly() = default;
    explicit ExpPoly(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {}

    static ExpPoly constant(cplx c) { return ExpPoly({{c, 0, 0.0}}); }
    static ExpPoly exp_tone(cplx c, double mu) { return ExpPoly({{c, 0, mu}}); }
    // sin(w t) = (e^{iwt} - e^{-iwt}) / 2i
    static ExpPoly sin_tone(double w, double amp = 1.0) {
        const cplx h(0.0, -0.5 * amp);
        return ExpPoly({{h, 0, w}, {-h, 0, -w}});
    }
    static ExpPoly cos_tone(double w, double amp = 1.0) {
        return ExpPoly({{0.5 * amp, 0, w}, {0.5 * amp, 0, -w}});
    }

    const std::vector<ExpTerm>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    ExpPoly& operator+=(const ExpPoly& o) {
        terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
        return *this;
    }
    ExpPoly operator+(const ExpPoly& o) const {
        ExpPoly r(*this);
        r += o;
        return r;
    }
    ExpPoly operator*(const ExpPoly& o) const {
        std::vector<ExpTerm> out;
        out.reserve(terms_.size() * o.terms_.size());
        for (const auto& a : terms_)
            for (const auto& b : o.terms_)
                out.push_back({a.c * b.c, a.k + b.k, a.mu + b.mu});
        ExpPoly r(std::move(out));
        r.compress();
        return r;
    }
    ExpPoly operator*(cplx s) const {
        ExpPoly r(*this);
        for (auto& t : r.terms_) t.c *= s;
        return r;
    }

    cplx evaluate(double t) const {
        cplx v = 0.0;
        for (const auto& tm : terms_)
            v += tm.c * std::pow(t, tm.k) * std::exp(cplx(0.0, tm.mu * t));
        return v;
    }

    // F(t) = \int_0^t f(t') dt', returned as another ExpPoly.
    // Frequencies with |mu| below mu_floor are integrated as polynomials to
    // avoid 1/mu blow-up; mu_floor = 0 keeps only exact zeros polynomial.
    ExpPoly antiderivative(double mu_floor = 0.0) const {
        std::vector<ExpTerm> out;
        for (const auto& tm : terms_) {
            if (std::abs(tm.mu) <= mu_floor) {
                out.push_back({tm.c / double(tm.k + 1), tm.k + 1, tm.mu});
                continue;
            }
            const cplx im(0.0, tm.mu);
            double fact = 1.0;
            double sign = 1.0;
            cplx denom = im;
            for (int j = 0; j <= tm.k; ++j) {
                out.push_back({tm.c * sign * fact / denom, tm.k - j, tm.mu});
                fact *= double(tm.k - j);
                sign = -sign;
                denom *= im;
            }
            double fact_k = 1.0;
            for (int j = 2; j <= tm.k; ++j) fact_k *= j;
            const cplx at_zero = ((tm.k % 2 == 0) ? 1.0 : -1.0) * fact_k / std::pow(im, tm.k + 1);
            out.push_back({-tm.c * at_zero, 0, 0.0});
        }
        ExpPoly r(std::move(out));
        r.compress();
        return r;
    }

    cplx integrate(double tau) const {
        cplx v = 0.0;
        for (const auto& tm : terms_) v += tm.c * detail::term_integral(tm.k, tm.mu, tau);
        return v;
    }

    // Merge terms with bit-identical (k, mu); drops exact zeros.
    void compress() {
        if (terms_.size() < 2) return;
        std::sort(terms_.begin(), terms_.end(), [](const ExpTerm& a, const ExpTerm& b) {
            if (a.k != b.k) return a.k < b.k;
            return a.mu < b.mu;
        });
        std::vector<ExpTerm> out;
        out.reserve(terms_.size());
        for (const auto& tm : terms_) {
            if (!out.empty() && out.back().k == tm.k && out.back().mu == tm.mu)
                out.back().c += tm.c;
            else
                out.push_back(tm);
        }
        out.erase(std::remove_if(out.begin(), out.end(),
                                 [](const ExpTerm& t) { return t.c == cplx(0.0, 0.0); }),
                  out.end());
        terms_ = std::move(out);
    }

private:
    std::vector<ExpTerm> terms_;
};

}  // namespace msgate
