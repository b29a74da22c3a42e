#pragma once

// Pulse synthesis: phase-space closure (one linear constraint per mode),
// optional Phi constraint (sum_n B_n / n = 0), and power-optimal selection
// of the entangling quadratic form over the constraint null space.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "msgate/chain.hpp"
#include "msgate/errors.hpp"
#include "msgate/exppoly.hpp"
#include "msgate/pulse.hpp"

namespace msgate {

// Closure rows A(p, i) = w_n / (w_n^2 - w_p^2), tones n = n_min + i.
//
// A tone that sits (numerically) on a mode frequency makes the rational form
// singular; there the resonant contribution to the mode displacement is
// (tau/2) B_n, so closure simply demands B_n = 0.  Such (mode, tone) index
// pairs are reported through `collisions` and the entry is zeroed; without a
// collisions sink the collision is an error.
inline Eigen::MatrixXd closure_matrix(const ChainSpec& chain, double tau, int n_min, int n_max,
                                      std::vector<std::pair<int, int>>* collisions = nullptr) {
    const int K = n_max - n_min + 1;
    Eigen::MatrixXd A(chain.n_modes(), K);
    for (int p = 0; p < chain.n_modes(); ++p) {
        const double wp = chain.mode_freqs[p];
        for (int i = 0; i < K; ++i) {
            const double wn = 2.0 * M_PI * (n_min + i) / tau;
            if (std::abs(wn - wp) < 1e-6 * wp) {
                if (!collisions)
                    throw ValidationError(
                        "closure_matrix: basis tone coincides with a mode frequency; "
                        "shift tau or the tone range");
                collisions->emplace_back(p, i);
                A(p, i) = 0.0;
                continue;
            }
            A(p, i) = wn / (wn * wn - wp * wp);
        }
    }
    return A;
}

// Residuals of the closure conditions, scaled by nothing (raw linear form).
// Resonant tones contribute their (tau/2) B_n displacement to the affected row.
inline Eigen::VectorXd closure_residuals(const ChainSpec& chain, const Pulse& pulse) {
    std::vector<std::pair<int, int>> coll;
    const Eigen::MatrixXd A =
        closure_matrix(chain, pulse.tau, pulse.n_min, pulse.n_max, &coll);
    Eigen::VectorXd b(pulse.basis_size());
    for (int i = 0; i < pulse.basis_size(); ++i) b[i] = pulse.coeffs[i];
    Eigen::VectorXd r = A * b;
    for (const auto& [p, i] : coll) r[p] += 0.5 * pulse.tau * b[i];
    return r;
}

// chi kernel K with chi = B^T K B  (symmetrized):
//   K(n,m) = sum_p eta_p^{j1} eta_p^{j2} [D_p(n,m) + D_p(m,n)]
//   D_p(n,m) = int_0^tau dt1 int_0^{t1} dt2 sin(w_n t1) sin(w_m t2) sin(w_p (t1-t2))
inline Eigen::MatrixXd chi_kernel(const ChainSpec& chain, const GatePair& pair, double tau,
                                  int n_min, int n_max) {
    pair.validate(chain);
    const int K = n_max - n_min + 1;
    Eigen::MatrixXd kern = Eigen::MatrixXd::Zero(K, K);
    std::vector<ExpPoly> sins(K);
    for (int i = 0; i < K; ++i) sins[i] = ExpPoly::sin_tone(2.0 * M_PI * (n_min + i) / tau);
    for (int p = 0; p < chain.n_modes(); ++p) {
        const double eta2 =
            chain.lamb_dicke(p, pair.ion(0)) * chain.lamb_dicke(p, pair.ion(1));
        if (eta2 == 0.0) continue;
        const double wp = chain.mode_freqs[p];
        const ExpPoly sin_p = ExpPoly::sin_tone(wp);
        const ExpPoly cos_p = ExpPoly::cos_tone(wp);
        for (int m = 0; m < K; ++m) {
            const ExpPoly ic = (sins[m] * cos_p).antiderivative();
            const ExpPoly is = (sins[m] * sin_p).antiderivative();
            const ExpPoly kern_t =
                sin_p * ic + cos_p * (is * cplx(-1.0, 0.0));  // sin(wp(t1-t2)) folded
            for (int n = 0; n < K; ++n) {
                const double d = (sins[n] * kern_t).integrate(tau).real();
                kern(n, m) += eta2 * d;
                kern(m, n) += eta2 * d;
            }
        }
    }
    return kern;
}

struct SynthesisRequest {
    double tau = 0.0;             // s
    int n_min = 0, n_max = 0;     // 0,0 = use default_basis(chain, tau)
    bool enforce_phi = false;
    double chi_target = M_PI / 4.0;  // magnitude of the entanglement angle
};

struct SynthesisResult {
    Pulse pulse;
    double chi = 0.0;  // signed value realized (chi_sign * chi_target)
    int null_dim = 0;
    double max_closure_residual = 0.0;  // relative to ||B||
    double phi_linear_residual = 0.0;   // |sum B_n/n| / ||B||, when enforced
};

inline SynthesisResult synthesize(const ChainSpec& chain, const GatePair& pair,
                                  const SynthesisRequest& req) {
    pair.validate(chain);
    if (req.tau <= 0.0) throw ValidationError("synthesize: tau must be positive");
    if (req.chi_target <= 0.0)
        throw ValidationError("synthesize: chi_target must be positive");
    int n_min = req.n_min, n_max = req.n_max;
    if (n_min == 0 && n_max == 0) {
        const auto b = default_basis(chain, req.tau);
        n_min = b.first;
        n_max = b.second;
    }
    if (n_min < 1 || n_max < n_min) throw ValidationError("synthesize: bad tone range");
    const int K = n_max - n_min + 1;

    std::vector<std::pair<int, int>> coll;
    const Eigen::MatrixXd closure = closure_matrix(chain, req.tau, n_min, n_max, &coll);
    const int n_rows = chain.n_modes() + (req.enforce_phi ? 1 : 0) + int(coll.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_rows, K);
    A.topRows(chain.n_modes()) = closure;
    int row = chain.n_modes();
    if (req.enforce_phi) {
        for (int i = 0; i < K; ++i) A(row, i) = 1.0 / double(n_min + i);
        ++row;
    }
    // resonant tones are pinned to zero amplitude
    for (const auto& [p, i] : coll) A(row++, i) = 1.0;
    // row-normalize so the null-space threshold is scale-free
    for (int r = 0; r < n_rows; ++r) {
        const double nrm = A.row(r).norm();
        if (nrm > 0.0) A.row(r) /= nrm;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh = 1e-10 * (sv.size() ? sv[0] : 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > thresh) ++rank;
    const int null_dim = K - rank;
    if (null_dim < 1)
        throw ValidationError(
            "synthesize: constraint system leaves no free pulse direction; widen the "
            "tone range or increase tau");
    const Eigen::MatrixXd V = svd.matrixV().rightCols(null_dim);

    const Eigen::MatrixXd kern = chi_kernel(chain, pair, req.tau, n_min, n_max);
    const Eigen::MatrixXd M = V.transpose() * kern * V;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    if (es.info() != Eigen::Success)
        throw NumericalError("synthesize: kernel eigen solve failed");

    // dominant |eigenvalue| = least total power at fixed |chi|
    int best = 0;
    for (int i = 1; i < null_dim; ++i)
        if (std::abs(es.eigenvalues()[i]) > std::abs(es.eigenvalues()[best])) best = i;
    const double lam = es.eigenvalues()[best];
    if (std::abs(lam) < 1e-300)
        throw NumericalError("synthesize: entangling form vanishes on the null space");

    Eigen::VectorXd y = es.eigenvectors().col(best);
    Eigen::VectorXd B = V * y;
    // deterministic sign convention
    int imax = 0;
    for (int i = 1; i < K; ++i)
        if (std::abs(B[i]) > std::abs(B[imax])) imax = i;
    if (B[imax] < 0.0) B = -B;
    B *= std::sqrt(req.chi_target / std::abs(lam));

    SynthesisResult out;
    out.pulse.tau = req.tau;
    out.pulse.n_min = n_min;
    out.pulse.n_max = n_max;
    out.pulse.coeffs.assign(B.data(), B.data() + K);
    out.pulse.chi_sign = (lam > 0.0) ? +1 : -1;
    out.chi = out.pulse.chi_sign * req.chi_target;
    out.null_dim = null_dim;
    const double bn = B.norm();
    out.max_closure_residual =
        closure_residuals(chain, out.pulse).lpNorm<Eigen::Infinity>() / bn;
    if (req.enforce_phi) {
        double s = 0.0;
        for (int i = 0; i < K; ++i) s += B[i] / double(n_min + i);
        out.phi_linear_residual = std::abs(s) / bn;
    }
    // guards against a fabricated null space when the constraint system is
    // numerically rank-deficient but not actually satisfiable
    if (out.max_closure_residual > 1e-10 || out.phi_linear_residual > 1e-10)
        throw ValidationError(
            "synthesize: constraints not satisfiable in this tone basis (residual "
            "check failed); widen the tone range");
    return out;
}

// Amplitude calibration factor: B -> cB rescales chi quadratically.
inline double calibration_factor(double chi_target, double chi_actual) {
    if (chi_actual == 0.0)
        throw ValidationError("calibration_factor: measured chi is zero");
    if ((chi_target > 0.0) != (chi_actual > 0.0))
        throw ValidationError("calibration_factor: chi sign mismatch");
    return std::sqrt(chi_target / chi_actual);
}

inline Pulse scale(const Pulse& pulse, double c) {
    if (!std::isfinite(c) || c == 0.0)
        throw ValidationError("scale: factor must be finite and nonzero");
    Pulse out = pulse;
    for (double& b : out.coeffs) b *= c;
    return out;
}

}  // namespace msgate
