#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "msgate/chain.hpp"
#include "msgate/functionals.hpp"
#include "msgate/magnus.hpp"
#include "msgate/synthesis.hpp"
#include "oracles.hpp"

using namespace msgate;

static ChainSpec bundled() { return load_chain_file(std::string(MSGATE_DATA_DIR) + "/chain7.json"); }

TEST_CASE("delta chi analytic: bundled chain pair (2,5) and scaling trivia") {
    const ChainSpec c = bundled();
    const GatePair pair{2, 5};
    const double d = delta_chi_analytic(c, pair, M_PI / 4.0);
    CHECK(d == doctest::Approx(-9.62e-3).epsilon(2e-3));
    // doubling every eta quadruples the magnitude
    ChainSpec c2 = c;
    c2.lamb_dicke *= 2.0;
    CHECK(delta_chi_analytic(c2, pair, M_PI / 4.0) == doctest::Approx(4.0 * d));
    // zero eta
    ChainSpec c0 = c;
    c0.lamb_dicke.setZero();
    CHECK_THROWS(c0.validate());  // no common mode anymore, but the functional itself:
    CHECK(delta_chi_analytic(c0, pair, M_PI / 4.0) == 0.0);
}

TEST_CASE("zero pulse gives an all-zero budget") {
    const ChainSpec c = bundled();
    const GatePair pair{2, 5};
    Pulse zero;
    zero.tau = 100e-6;
    zero.n_min = 290;
    zero.n_max = 310;
    zero.coeffs.assign(zero.basis_size(), 0.0);
    const ErrorBudget b = audit(c, pair, zero);
    CHECK(b.gamma2 == 0.0);
    CHECK(b.gamma3_plus == 0.0);
    CHECK(b.gamma3_minus == 0.0);
    CHECK(b.gamma4 == 0.0);
    CHECK(b.gamma01 == 0.0);
    CHECK(b.gamma03_plus == 0.0);
    CHECK(b.gamma03_minus == 0.0);
    CHECK(b.gamma12_a == 0.0);
    CHECK(b.gamma12_c == 0.0);
    CHECK(b.gamma13_d == 0.0);
    CHECK(b.gamma001 == 0.0);
    CHECK(b.phi_value == 0.0);
    CHECK(b.phi_infidelity == 0.0);
    // delta chi is a pure eta functional: chi = 0 here, so it vanishes too
    CHECK(b.delta_chi_analytic == 0.0);
}

TEST_CASE("budget maxima agree with direct functional evaluation on a small chain") {
    const ChainSpec c = synthesize_chain(3, 0.2, 3.0 * kTwoPiMHz, 0.05);
    const GatePair pair{1, 3};
    SynthesisRequest req;
    req.tau = 40e-6;
    const Pulse p = synthesize(c, pair, req).pulse;
    const ErrorBudget b = audit(c, pair, p);

    auto eta = [&](int m, int i) { return c.lamb_dicke(m, pair.ion(i)); };
    const int N = c.n_modes();

    double g2 = 0.0, g01 = 0.0, g12c = 0.0, g13d = 0.0, g001 = 0.0, g12a = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int pm = 0; pm < N; ++pm) {
            g01 = std::max(g01,
                           std::abs(eta(pm, i)) * std::abs(eval_f(p, c.mode_freqs[pm]).value));
            g001 = std::max(
                g001, std::abs(eta(pm, i)) * std::abs(eval_Jp(p, c.mode_freqs[pm]).value));
            for (int q = 0; q < N; ++q)
                for (int s = -1; s <= 1; s += 2)
                    g2 = std::max(g2, std::abs(eta(pm, i) * eta(q, i)) *
                                          std::abs(eval_Q(p, c.mode_freqs[pm] +
                                                                 s * c.mode_freqs[q])
                                                       .value));
        }
    for (int pm = 0; pm < N; ++pm)
        for (int q = 0; q < N; ++q) {
            const cplx s = eval_Sp(p, c.mode_freqs[pm], c.mode_freqs[q]).value;
            for (int i = 0; i < 2; ++i)
                g12c = std::max(g12c, std::abs(eta(pm, i) * eta(pm, 1 - i) * eta(q, 1 - i)) *
                                          std::abs(s));
            for (int r = 0; r < N; ++r)
                for (int sg = -1; sg <= 1; sg += 2) {
                    const cplx sv =
                        eval_Sp(p, c.mode_freqs[pm], c.mode_freqs[q] + sg * c.mode_freqs[r])
                            .value;
                    for (int i = 0; i < 2; ++i)
                        g13d = std::max(g13d, eta(pm, i) * eta(pm, i) *
                                                  std::abs(eta(q, i) * eta(r, i)) *
                                                  std::abs(sv));
                }
        }
    for (int i = 0; i < 2; ++i)
        for (int pm = 0; pm < N; ++pm)
            for (int q = 0; q < N; ++q)
                for (int r = 0; r < N; ++r)
                    for (int sp = -1; sp <= 1; sp += 2)
                        for (int sq = -1; sq <= 1; sq += 2)
                            for (int sr = -1; sr <= 1; sr += 2)
                                g12a = std::max(
                                    g12a,
                                    std::abs(eta(pm, i) * eta(q, i) * eta(r, i)) *
                                        std::abs(eval_Z(p, sp * c.mode_freqs[pm],
                                                        sq * c.mode_freqs[q] +
                                                            sr * c.mode_freqs[r])
                                                     .value));

    CHECK(b.gamma2 == doctest::Approx(g2).epsilon(1e-9));
    CHECK(b.gamma01 == doctest::Approx(g01).epsilon(1e-9));
    CHECK(b.gamma12_c == doctest::Approx(g12c).epsilon(1e-9));
    CHECK(b.gamma13_d == doctest::Approx(g13d).epsilon(1e-9));
    CHECK(b.gamma001 == doctest::Approx(g001).epsilon(1e-9));
    CHECK(b.gamma12_a == doctest::Approx(g12a).epsilon(1e-9));
}

TEST_CASE("phi infidelity: closed-form relations and cubic scaling") {
    CHECK(phi_infidelity_from_phi(0.0, M_PI / 4) == 0.0);
    const double lam = 1.17e-2;
    CHECK(phi_infidelity_from_phi(lam / 4.0, M_PI / 4) ==
          doctest::Approx(std::pow(4.0 * lam / M_PI, 2)).epsilon(1e-12));
    CHECK(phi_infidelity_from_phi(lam / 4.0, M_PI / 4) == doctest::Approx(2.2e-4).epsilon(2e-2));

    const ChainSpec c = bundled();
    const GatePair pair{2, 5};
    SynthesisRequest req;
    req.tau = 100e-6;
    const Pulse p = synthesize(c, pair, req).pulse;
    const double chi = eval_chi(c, pair, p);
    const double f1 = phi_infidelity(c, pair, p, chi);
    // scaling g by c scales Phi cubically and the infidelity by c^6 at fixed chi
    const double cs = 1.3;
    const double f2 = phi_infidelity(c, pair, scale(p, cs), chi);
    CHECK(f2 == doctest::Approx(std::pow(cs, 6) * f1).epsilon(1e-9));
}

TEST_CASE("sweep: pair count, histogram, and the Phi-constrained zero") {
    const ChainSpec c = synthesize_chain(4, 0.2, 3.0 * kTwoPiMHz, 0.05);
    const auto entries = sweep_phi(c, 50e-6);
    CHECK(entries.size() == 6);  // C(4,2)
    int ok = 0;
    for (const auto& e : entries) ok += e.ok;
    CHECK(ok == 6);
    const auto bins = phi_histogram(entries, 1.0);
    int total = 0;
    for (const auto& b : bins) total += b.count;
    CHECK(total == 6);

    const auto zero_entries = sweep_phi(c, 50e-6, true);
    for (const auto& e : zero_entries) {
        CHECK(e.ok);
        CHECK(e.phi == 0.0);
        CHECK(e.phi_infidelity == 0.0);
    }
}
