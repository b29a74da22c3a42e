#pragma once

// Fidelity metrics against the ideal XX gate, the phonon-traced gate
// channel, gate-angle extraction and the amplitude calibration loop.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "msgate/errors.hpp"
#include "msgate/focksim.hpp"
#include "msgate/synthesis.hpp"

namespace msgate {

using Mat4 = Eigen::Matrix<cplx, 4, 4>;

// U = exp(i chi sigma_x (x) sigma_x) on the computational indices c = 2a + b
inline Mat4 ideal_xx(double chi) {
    Mat4 u = Mat4::Zero();
    const cplx c = std::cos(chi);
    const cplx is = cplx(0.0, 1.0) * std::sin(chi);
    // XX maps |ab> -> |(1-a)(1-b)>, so cos on the diagonal, i sin anti-diagonal
    for (int k = 0; k < 4; ++k) {
        u(k, k) = c;
        u(3 - k, k) = is;
    }
    return u;
}

// F_S = |<psi_ideal|psi_actual>|^2 with psi_ideal = (e^{i chi XX} psi0) (x) vac
inline double state_fidelity(const JointState& psi_actual, double chi_target,
                             const Eigen::Vector4cd& psi0_comp) {
    const Mat4 u = ideal_xx(chi_target);
    const Eigen::Vector4cd ideal = u * psi0_comp;
    cplx ov = 0.0;
    const std::size_t P = psi_actual.phonon_dim();
    for (int c = 0; c < 4; ++c) ov += std::conj(ideal[c]) * psi_actual.amp[std::size_t(c) * P];
    return std::norm(ov);
}

// Phonon-traced channel on the 4-dim computational space: the matrix
// M[(c,d)][(a,b)] = E(|a><b|)_{cd} with flat row 4c+d, column 4a+b.
struct GateChannel {
    Eigen::Matrix<cplx, 16, 16> m;

    // trace preservation: sum_c E(|a><b|)_{cc} = delta_ab
    double trace_preservation_defect() const {
        double worst = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                cplx tr = 0.0;
                for (int c = 0; c < 4; ++c) tr += m(4 * c + c, 4 * a + b);
                worst = std::max(worst, std::abs(tr - (a == b ? 1.0 : 0.0)));
            }
        return worst;
    }
    // hermiticity preservation: E(X)^dag = E(X^dag)
    double hermiticity_defect() const {
        double worst = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d)
                        worst = std::max(
                            worst, std::abs(m(4 * c + d, 4 * a + b) -
                                            std::conj(m(4 * d + c, 4 * b + a))));
        return worst;
    }
    void validate() const {
        if (trace_preservation_defect() > 1e-6)
            throw NumericalError("gate channel: trace preservation violated beyond 1e-6");
        if (hermiticity_defect() > 1e-10)
            throw NumericalError("gate channel: hermiticity preservation violated beyond 1e-10");
    }

    static GateChannel from_unitary(const Mat4& u) {
        GateChannel ch;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d)
                        ch.m(4 * c + d, 4 * a + b) = u(c, a) * std::conj(u(d, b));
        return ch;
    }
};

// Builds the channel from the four computational basis propagations.
// vacuum_conditioned = true projects the outputs on the phonon vacuum
// instead of tracing (sub-normalized channel variant).
inline std::vector<JointState> propagate_basis_inputs(const HamiltonianSpec& spec,
                                                      const PhononScheme& scheme, double dt) {
    Propagator prop(spec, scheme);
    std::vector<JointState> outs;
    outs.reserve(4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            outs.push_back(prop.propagate(JointState::computational_basis(scheme, a, b), dt));
    return outs;
}

inline GateChannel channel_from_states(const std::vector<JointState>& outs,
                                       bool vacuum_conditioned = false) {
    GateChannel ch;
    const std::size_t P = outs.at(0).phonon_dim();
    for (int col_a = 0; col_a < 4; ++col_a)
        for (int col_b = 0; col_b < 4; ++col_b) {
            // E(|col_a><col_b|)_{cd} = sum_ph psi_a[c, ph] conj(psi_b[d, ph])
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    cplx v = 0.0;
                    if (vacuum_conditioned) {
                        v = outs[col_a].amp[std::size_t(c) * P] *
                            std::conj(outs[col_b].amp[std::size_t(d) * P]);
                    } else {
                        for (std::size_t ph = 0; ph < P; ++ph)
                            v += outs[col_a].amp[std::size_t(c) * P + ph] *
                                 std::conj(outs[col_b].amp[std::size_t(d) * P + ph]);
                    }
                    ch.m(4 * c + d, 4 * col_a + col_b) = v;
                }
        }
    if (!vacuum_conditioned) ch.validate();
    return ch;
}

inline GateChannel gate_channel(const HamiltonianSpec& spec, const PhononScheme& scheme,
                                double dt, bool vacuum_conditioned = false) {
    return channel_from_states(propagate_basis_inputs(spec, scheme, dt), vacuum_conditioned);
}

// F_P = (1/16) Tr[E_exact^dag E_actual]
inline double process_fidelity(const GateChannel& channel, double chi_target) {
    const GateChannel exact = GateChannel::from_unitary(ideal_xx(chi_target));
    cplx tr = 0.0;
    for (int r = 0; r < 16; ++r)
        for (int s = 0; s < 16; ++s) tr += std::conj(exact.m(r, s)) * channel.m(r, s);
    return tr.real() / 16.0;
}

// F_G over the 16 two-qubit Pauli basis operators U_j:
//   F_G = ( sum_j Tr[U U_j^dag U^dag E(U_j)] + 16 ) / 80,
// the additive d^2 = 16 making the ideal channel give exactly 1 (and the
// standard affine relation F_G = (4 F_P + 1)/5 hold).
inline double average_gate_fidelity(const GateChannel& channel, double chi_target) {
    const Mat4 u = ideal_xx(chi_target);
    Eigen::Matrix2cd pauli[4];
    pauli[0] << 1, 0, 0, 1;
    pauli[1] << 0, 1, 1, 0;
    pauli[2] << 0, cplx(0, -1), cplx(0, 1), 0;
    pauli[3] << 1, 0, 0, -1;
    cplx total = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            Mat4 uj;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d)
                            uj(2 * a + b, 2 * c + d) = pauli[i](a, c) * pauli[k](b, d);
            Mat4 euj = Mat4::Zero();
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    if (uj(a, b) != cplx(0.0, 0.0))
                        for (int c = 0; c < 4; ++c)
                            for (int d = 0; d < 4; ++d)
                                euj(c, d) += uj(a, b) * channel.m(4 * c + d, 4 * a + b);
            total += (u * uj.adjoint() * u.adjoint() * euj).trace();
        }
    return (total.real() + 16.0) / 80.0;
}

struct ChiExtraction {
    double chi = 0.0;      // signed, rad
    double leakage = 0.0;  // population outside the {|00>,|11>} (x) vac manifold
};

// From a run started at |00> (x) vac: e^{i chi XX}|00> = cos chi |00> + i sin chi |11>
inline ChiExtraction extract_chi(const JointState& psi) {
    const std::size_t P = psi.phonon_dim();
    const cplx a00 = psi.amp[0];                      // c = 0, vac
    const cplx a11 = psi.amp[std::size_t(3) * P];     // c = 3, vac
    if (std::abs(a00) < 1e-3 && std::abs(a11) < 1e-3)
        throw NumericalError("extract_chi: state left the |00>/|11> manifold");
    ChiExtraction out;
    const double mag = std::atan2(std::abs(a11), std::abs(a00));
    double sgn = 1.0;
    if (std::abs(a11) > 0.0 && std::abs(a00) > 0.0) {
        const double rel = std::arg(a11 / a00);  // ideally +-pi/2
        sgn = (rel >= 0.0) ? 1.0 : -1.0;
    }
    out.chi = sgn * mag;
    out.leakage = 1.0 - std::norm(a00) - std::norm(a11);
    return out;
}

struct CalibrationResult {
    Pulse pulse;
    int iterations = 0;
    double chi_final = 0.0;
    std::vector<double> chi_trajectory;
};

// Iterates pulse <- scale(pulse, sqrt(chi_target/chi)) until |chi - chi_target|
// < 1e-6 rad.  chi_target is signed (pass chi_sign * pi/4).
inline CalibrationResult calibrate(const HamiltonianSpec& spec, const PhononScheme& scheme,
                                   double chi_target, int max_iters = 5, double dt = 0.0) {
    if (dt <= 0.0) dt = Propagator::default_dt(spec.chain);
    CalibrationResult out;
    out.pulse = spec.pulse;
    for (int it = 0; it < max_iters; ++it) {
        HamiltonianSpec cur = spec;
        cur.pulse = out.pulse;
        Propagator prop(cur, scheme);
        const JointState fin =
            prop.propagate(JointState::computational_basis(scheme, 0, 0), dt);
        const double chi = extract_chi(fin).chi;
        out.chi_trajectory.push_back(chi);
        out.chi_final = chi;
        out.iterations = it;
        if (std::abs(chi - chi_target) < 1e-6) return out;
        out.pulse = scale(out.pulse, calibration_factor(chi_target, chi));
        out.iterations = it + 1;
    }
    if (std::abs(out.chi_final - chi_target) >= 1e-6) {
        std::ostringstream os;
        os << "calibrate: did not reach |chi - target| < 1e-6 in " << max_iters
           << " iterations; trajectory:";
        for (double c : out.chi_trajectory) os << ' ' << c;
        throw NumericalError(os.str());
    }
    return out;
}

// Population of the top Fock level of mode p (summed over everything else).
inline double top_level_population(const JointState& st, int p) {
    const int nm = int(st.dims.size());
    std::size_t stride = 1;
    for (int q = nm - 1; q > p; --q) stride *= st.dims[q];
    const std::size_t d = st.dims[p];
    const std::size_t P = st.phonon_dim();
    double pop = 0.0;
    for (int c = 0; c < 4; ++c) {
        const cplx* base = st.amp.data() + std::size_t(c) * P;
        const std::size_t block = d * stride;
        for (std::size_t off = 0; off < P; off += block)
            for (std::size_t i = 0; i < stride; ++i)
                pop += std::norm(base[off + (d - 1) * stride + i]);
    }
    return pop;
}

// Greedy phonon-scheme convergence on the H_S self-test: grow the occupation
// bound of the mode with the largest top-level population until the process
// infidelity is below tol_abs and stops changing by more than tol_change.
inline PhononScheme converge_scheme(const HamiltonianSpec& spec, const PhononScheme& base,
                                    double chi_target, double dt = 0.0, double tol_abs = 5e-5,
                                    double tol_change = 1e-5, int max_rounds = 30) {
    if (dt <= 0.0) dt = Propagator::default_dt(spec.chain);
    PhononScheme scheme = base;
    double prev = -1.0;
    for (int round = 0; round < max_rounds; ++round) {
        const auto outs = propagate_basis_inputs(spec, scheme, dt);
        const double infid =
            1.0 - process_fidelity(channel_from_states(outs), chi_target);
        const bool settled = (prev < 0.0) || (std::abs(infid - prev) < tol_change);
        if (infid < tol_abs && settled) return scheme;
        prev = infid;
        // grow the most-pressured mode
        int best = 0;
        double best_pop = -1.0;
        for (int p = 0; p < scheme.n_modes(); ++p) {
            double pop = 0.0;
            for (const auto& st : outs) pop += top_level_population(st, p);
            if (pop > best_pop) {
                best_pop = pop;
                best = p;
            }
        }
        scheme.max_occ[best] += 1;
        scheme.phonon_dim();  // re-check the cap
    }
    throw NumericalError("converge_scheme: no convergence within the round limit");
}

}  // namespace msgate
