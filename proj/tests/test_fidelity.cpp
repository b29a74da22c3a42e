#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "msgate/chain.hpp"
#include "msgate/fidelity.hpp"
#include "msgate/focksim.hpp"
#include "msgate/magnus.hpp"
#include "msgate/synthesis.hpp"
#include "oracles.hpp"

using namespace msgate;

static Mat4 random_matrix() {
    std::normal_distribution<double> nd;
    Mat4 k;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) k(r, c) = cplx(nd(oracles::rng()), nd(oracles::rng()));
    return k;
}

// random trace-preserving channel from a normalized Kraus set
static GateChannel random_tp_channel(int n_kraus) {
    std::vector<Mat4> kraus;
    Mat4 acc = Mat4::Zero();
    for (int i = 0; i < n_kraus; ++i) {
        kraus.push_back(random_matrix());
        acc += kraus.back().adjoint() * kraus.back();
    }
    Eigen::SelfAdjointEigenSolver<Mat4> es(acc);
    const Mat4 inv_sqrt = es.operatorInverseSqrt();
    GateChannel ch;
    ch.m.setZero();
    for (auto& k : kraus) {
        k = k * inv_sqrt;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d)
                        ch.m(4 * c + d, 4 * a + b) += k(c, a) * std::conj(k(d, b));
    }
    return ch;
}

TEST_CASE("ideal channel: unit fidelities, clean invariants, over-rotation") {
    const double chi = M_PI / 4.0;
    const GateChannel ch = GateChannel::from_unitary(ideal_xx(chi));
    CHECK(ch.trace_preservation_defect() < 1e-15);
    CHECK(ch.hermiticity_defect() < 1e-15);
    CHECK_NOTHROW(ch.validate());
    CHECK(process_fidelity(ch, chi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(average_gate_fidelity(ch, chi) == doctest::Approx(1.0).epsilon(1e-12));

    // a pure rotation-angle error gives F_P = cos^2(delta)
    for (double delta : {1e-3, 1e-2, 0.1}) {
        const GateChannel off = GateChannel::from_unitary(ideal_xx(chi + delta));
        CHECK(process_fidelity(off, chi) ==
              doctest::Approx(std::pow(std::cos(delta), 2)).epsilon(1e-10));
    }
}

TEST_CASE("average gate fidelity obeys the affine relation on random channels") {
    for (int rep = 0; rep < 50; ++rep) {
        const GateChannel ch = random_tp_channel(1 + rep % 4);
        CHECK(ch.trace_preservation_defect() < 1e-12);
        CHECK(ch.hermiticity_defect() < 1e-12);
        const double fp = process_fidelity(ch, M_PI / 4.0);
        const double fg = average_gate_fidelity(ch, M_PI / 4.0);
        CHECK(fg == doctest::Approx((4.0 * fp + 1.0) / 5.0).epsilon(1e-8));
    }
}

TEST_CASE("state fidelity: over-rotation gives sin^2 of the angle error") {
    PhononScheme sch;
    sch.max_occ = {1, 1};
    for (double delta : {5e-4, 3e-3, 2e-2}) {
        JointState st = JointState::computational_basis(sch, 0, 0);
        const double chi = M_PI / 4.0 + delta;
        st.at(0, 0, 0) = std::cos(chi);
        st.at(1, 1, 0) = cplx(0.0, 1.0) * std::sin(chi);
        const Eigen::Vector4cd psi0(1.0, 0.0, 0.0, 0.0);
        const double f = state_fidelity(st, M_PI / 4.0, psi0);
        CHECK(1.0 - f == doctest::Approx(std::pow(std::sin(delta), 2)).epsilon(1e-9));
    }
}

TEST_CASE("sigma_x sigma_z error exponent against brute-force exponentiation") {
    // exponent i(chi XX + lambda (sx sz + sz sx)); for |00> the predicted
    // infidelity is 2 (lambda sin(chi)/chi)^2 to leading order
    Eigen::Matrix2cd sx, sz, id;
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    id << 1, 0, 0, 1;
    auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
        Mat4 out;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        return out;
    };
    const Mat4 xx = kron(sx, sx);
    const Mat4 a = kron(sx, sz) + kron(sz, sx);
    const double chi = M_PI / 4.0;
    const Eigen::Vector4cd psi0(1.0, 0.0, 0.0, 0.0);
    double prev = 0.0;
    for (double lambda : {1e-4, 1e-3}) {
        const Mat4 u = (cplx(0.0, 1.0) * (chi * xx + lambda * a)).exp();
        const Eigen::Vector4cd out = u * psi0;
        const Eigen::Vector4cd ideal = ideal_xx(chi) * psi0;
        const double infid = 1.0 - std::norm(ideal.dot(out));
        const double predicted = 2.0 * std::pow(lambda * std::sin(chi) / chi, 2);
        CHECK(infid == doctest::Approx(predicted).epsilon(1e-2));
        if (prev > 0.0) CHECK(infid / prev == doctest::Approx(100.0).epsilon(1e-2));
        prev = infid;
    }
    // and the library closed form with lambda = 4 Phi
    const double phi = 2.5e-4;
    CHECK(2.0 * std::pow(4.0 * phi * std::sin(chi) / chi, 2) ==
          doctest::Approx(msgate::phi_infidelity_from_phi(phi, chi)).epsilon(1e-12));
}

TEST_CASE("chi extraction on constructed states") {
    PhononScheme sch;
    sch.max_occ = {2};
    for (double chi : {0.3, M_PI / 4.0, -0.5}) {
        JointState st = JointState::computational_basis(sch, 0, 0);
        st.at(0, 0, 0) = std::cos(chi);
        st.at(1, 1, 0) = cplx(0.0, 1.0) * std::sin(chi);
        const ChiExtraction ex = extract_chi(st);
        CHECK(ex.chi == doctest::Approx(chi).epsilon(1e-12));
        CHECK(std::abs(ex.leakage) < 1e-12);
    }
    // a state fully outside the manifold is an error
    JointState bad = JointState::computational_basis(sch, 0, 1);
    CHECK_THROWS_AS(extract_chi(bad), NumericalError);
    // leakage is reported
    JointState leaky = JointState::computational_basis(sch, 0, 0);
    leaky.at(0, 0, 0) = std::sqrt(0.9);
    leaky.at(0, 1, 0) = std::sqrt(0.1);
    CHECK(extract_chi(leaky).leakage == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("top level population bookkeeping") {
    PhononScheme sch;
    sch.max_occ = {2, 1};
    JointState st = JointState::computational_basis(sch, 0, 0);
    st.amp.assign(st.amp.size(), cplx(0.0, 0.0));
    // occupy (mode1 = 2, mode2 = 0) on c = 0 and (mode1 = 0, mode2 = 1) on c = 3
    st.at(0, 0, 2 * 2 + 0) = std::sqrt(0.25);
    st.at(1, 1, 0 * 2 + 1) = std::sqrt(0.75);
    CHECK(top_level_population(st, 0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(top_level_population(st, 1) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("simulated channel: invariants, fidelities, calibration, convergence") {
    const ChainSpec chain = synthesize_chain(2, 0.2, 3.0 * kTwoPiMHz, 0.05);
    const GatePair pair{1, 2};
    SynthesisRequest req;
    req.tau = 100e-6;
    const SynthesisResult res = synthesize(chain, pair, req);
    const double chi_target = res.chi;  // signed
    const double dt = Propagator::default_dt(chain);

    PhononScheme sch;
    sch.max_occ = {8, 8};

    // the linear model realizes the ideal gate: process fidelity ~ 1
    {
        const GateChannel ch =
            gate_channel(HamiltonianSpec::standard(chain, pair, res.pulse), sch, dt);
        const double fp = process_fidelity(ch, chi_target);
        CHECK(1.0 - fp < 1e-5);
        CHECK(average_gate_fidelity(ch, chi_target) ==
              doctest::Approx((4.0 * fp + 1.0) / 5.0).epsilon(1e-9));
    }

    // the full Hamiltonian: channel still physical, fidelity down by the
    // coherent errors, and the vacuum-conditioned variant is sub-normalized
    {
        const auto outs =
            propagate_basis_inputs(HamiltonianSpec::full(chain, pair, res.pulse), sch, dt);
        const GateChannel ch = channel_from_states(outs);
        CHECK_NOTHROW(ch.validate());
        const double fp = process_fidelity(ch, chi_target);
        CHECK(fp > 0.99);
        CHECK(fp < 1.0 - 1e-6);
        const GateChannel cond = channel_from_states(outs, true);
        cplx tr = 0.0;
        for (int c = 0; c < 4; ++c) tr += cond.m(4 * c + c, 0);  // E(|00><00|)
        CHECK(tr.real() < 1.0);
        CHECK(tr.real() > 0.9);
    }

    // calibration drives the measured chi onto the target
    {
        const CalibrationResult cal =
            calibrate(HamiltonianSpec::full(chain, pair, res.pulse), sch, chi_target, 5, dt);
        CHECK(cal.iterations <= 3);
        CHECK(std::abs(cal.chi_final - chi_target) < 1e-6);
        CHECK(cal.chi_trajectory.size() >= 1);
        // the calibrated pulse is a scaled copy
        CHECK(cal.pulse.coeffs[0] / res.pulse.coeffs[0] ==
              doctest::Approx(cal.pulse.coeffs.back() / res.pulse.coeffs.back())
                  .epsilon(1e-12));
    }

    // greedy scheme growth reaches the self-test tolerance from a tight base
    {
        PhononScheme base;
        base.max_occ = {2, 2};
        const PhononScheme grown = converge_scheme(
            HamiltonianSpec::standard(chain, pair, res.pulse), base, chi_target, dt);
        for (int p = 0; p < 2; ++p) CHECK(grown.max_occ[p] >= base.max_occ[p]);
        const GateChannel ch =
            gate_channel(HamiltonianSpec::standard(chain, pair, res.pulse), grown, dt);
        CHECK(1.0 - process_fidelity(ch, chi_target) < 5e-5);
    }
}
