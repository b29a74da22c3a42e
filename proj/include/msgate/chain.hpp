#pragma once

// Ion-chain data: published mode tables, synthetic Coulomb chains, and the
// mode-structure invariants every ChainSpec must satisfy.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msgate/errors.hpp"

namespace msgate {

struct ChainSpec {
    int n_ions = 0;
    std::vector<double> mode_freqs;  // angular, rad/s, strictly increasing
    Eigen::MatrixXd lamb_dicke;      // row p = mode, column j = ion

    int n_modes() const { return int(mode_freqs.size()); }

    // Index of the mode whose Lamb-Dicke row is constant across ions.
    // rel_tol is relative to the row mean; table data is rounded to 5 digits.
    int common_mode(double rel_tol = 1e-3) const {
        int found = -1;
        for (int p = 0; p < n_modes(); ++p) {
            const double mean = lamb_dicke.row(p).mean();
            const double spread = lamb_dicke.row(p).maxCoeff() - lamb_dicke.row(p).minCoeff();
            if (std::abs(mean) > 0.0 && spread <= rel_tol * std::abs(mean)) {
                if (found >= 0)
                    throw ValidationError("chain: more than one constant Lamb-Dicke row");
                found = p;
            }
        }
        if (found < 0) throw ValidationError("chain: no common (constant-row) mode found");
        return found;
    }

    void validate() const {
        if (n_ions < 1) throw ValidationError("chain: n_ions must be positive");
        if (int(mode_freqs.size()) != n_ions)
            throw ValidationError("chain: expected one transverse mode per ion");
        if (lamb_dicke.rows() != n_ions || lamb_dicke.cols() != n_ions)
            throw ValidationError("chain: Lamb-Dicke matrix must be n_ions x n_ions");
        for (int p = 0; p < n_modes(); ++p) {
            if (mode_freqs[p] <= 0.0)
                throw ValidationError("chain: mode frequencies must be positive");
            if (p > 0 && mode_freqs[p] <= mode_freqs[p - 1])
                throw ValidationError("chain: mode frequencies must be strictly increasing");
        }
        // Cross-mode ion sums vanish up to table rounding.
        double max_row_sq = 0.0;
        for (int p = 0; p < n_modes(); ++p)
            max_row_sq = std::max(max_row_sq, lamb_dicke.row(p).squaredNorm());
        for (int p = 0; p < n_modes(); ++p)
            for (int q = p + 1; q < n_modes(); ++q) {
                const double dot = lamb_dicke.row(p).dot(lamb_dicke.row(q));
                if (std::abs(dot) > 1e-4 * max_row_sq) {
                    std::ostringstream os;
                    os << "chain: Lamb-Dicke rows " << p + 1 << " and " << q + 1
                       << " are not orthogonal (dot = " << dot << ")";
                    throw ValidationError(os.str());
                }
            }
        common_mode();  // exactly one constant row
    }
};

struct GatePair {
    int j1 = 1, j2 = 2;  // 1-based ion indices

    void validate(const ChainSpec& chain) const {
        if (j1 == j2) throw ValidationError("gate pair: ions must be distinct");
        if (j1 < 1 || j1 > chain.n_ions || j2 < 1 || j2 > chain.n_ions)
            throw ValidationError("gate pair: ion index out of range");
    }
    // Lamb-Dicke column for pair member i (0 or 1), as 0-based column index.
    int ion(int i) const { return (i == 0 ? j1 : j2) - 1; }
};

inline constexpr double kTwoPiMHz = 2.0 * M_PI * 1e6;

// ---- document I/O -------------------------------------------------------
// Chain documents carry n_ions, mode_freqs_mhz (omega/2pi in MHz) and eta
// (mode-major). Internal frequencies are always angular rad/s.

inline ChainSpec load_chain(const nlohmann::json& doc) {
    ChainSpec spec;
    try {
        spec.n_ions = doc.at("n_ions").get<int>();
        const auto& freqs = doc.at("mode_freqs_mhz");
        for (const auto& f : freqs) spec.mode_freqs.push_back(f.get<double>() * kTwoPiMHz);
        const auto& eta = doc.at("eta");
        const int rows = int(eta.size());
        if (rows == 0) throw ValidationError("chain document: empty eta matrix");
        const int cols = int(eta.at(0).size());
        spec.lamb_dicke.resize(rows, cols);
        for (int p = 0; p < rows; ++p) {
            if (int(eta.at(p).size()) != cols)
                throw ValidationError("chain document: ragged eta matrix");
            for (int j = 0; j < cols; ++j) spec.lamb_dicke(p, j) = eta.at(p).at(j).get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed chain document: ") + e.what());
    }
    spec.validate();
    return spec;
}

inline nlohmann::json save_chain(const ChainSpec& spec) {
    nlohmann::json doc;
    doc["n_ions"] = spec.n_ions;
    for (double w : spec.mode_freqs) doc["mode_freqs_mhz"].push_back(w / kTwoPiMHz);
    for (int p = 0; p < spec.n_modes(); ++p) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < spec.n_ions; ++j) row.push_back(spec.lamb_dicke(p, j));
        doc["eta"].push_back(row);
    }
    return doc;
}

inline ChainSpec load_chain_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open chain file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed chain document: ") + e.what());
    }
    return load_chain(doc);
}

inline std::uint64_t chain_hash(const ChainSpec& spec) {
    // FNV-1a over the canonical serialized document.
    const std::string s = save_chain(spec).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---- synthetic chains ---------------------------------------------------

// Equilibrium positions of N ions in a harmonic axial well, in units of the
// Coulomb length scale: minimizes sum u_i^2/2 + sum_{i<j} 1/|u_i - u_j|.
// Damped Newton on the gradient.
inline std::vector<double> equilibrium_positions(int n) {
    if (n < 1) throw ValidationError("equilibrium_positions: n must be positive");

    auto gradient = [](const Eigen::VectorXd& x) {
        const int m = int(x.size());
        Eigen::VectorXd g = x;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                const double d = x[i] - x[j];
                g[i] -= (d > 0 ? 1.0 : -1.0) / (d * d);
            }
        return g;
    };
    auto hessian = [](const Eigen::VectorXd& x) {
        const int m = int(x.size());
        Eigen::MatrixXd h = Eigen::MatrixXd::Identity(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                const double d = std::abs(x[i] - x[j]);
                const double w = 2.0 / (d * d * d);
                h(i, i) += w;
                h(i, j) -= w;
            }
        return h;
    };
    auto solve = [&](Eigen::VectorXd u) {
        const int m = int(u.size());
        for (int iter = 0; iter < 300; ++iter) {
            const Eigen::VectorXd g = gradient(u);
            const double gn = g.lpNorm<Eigen::Infinity>();
            if (gn < 1e-12) return u;
            const Eigen::VectorXd step = hessian(u).ldlt().solve(g);
            double alpha = 1.0;
            const double g0 = g.squaredNorm();
            while (alpha > 1e-8) {
                Eigen::VectorXd trial = u - alpha * step;
                bool ordered = true;
                for (int i = 1; i < m; ++i) ordered &= trial[i] > trial[i - 1];
                if (ordered && gradient(trial).squaredNorm() < g0) break;
                alpha *= 0.5;
            }
            // stalled at rounding level: the iterate is as converged as
            // double precision allows
            if (alpha <= 1e-8 && gn < 1e-9) return u;
            u -= alpha * step;
        }
        throw NumericalError("equilibrium_positions: Newton iteration did not converge");
    };

    // Grow the chain one ion at a time; each stage starts from the previous
    // equilibrium, which keeps Newton in its convergence basin for large n.
    Eigen::VectorXd u(1);
    u[0] = 0.0;
    for (int m = 2; m <= n; ++m) {
        Eigen::VectorXd next(m);
        const double gap = (m == 2) ? 1.6 : (u[m - 2] - u[m - 3]);
        next.head(m - 1) = u;
        next[m - 1] = u[m - 2] + gap;
        next.array() -= next.mean();
        u = solve(next);
    }
    return {u.data(), u.data() + n};
}

// Synthetic chain with harmonic axial confinement.
//   trap_anisotropy  = omega_axial / omega_transverse (must be small enough
//                      for linear-chain stability)
//   com_freq         = transverse common-mode frequency, rad/s
//   lamb_dicke_scale_ref = per-ion Lamb-Dicke parameter of the common mode
// Transverse modes come from the standard Coulomb Hessian eigenproblem;
// eta_p^j = b_p^j * scale * sqrt(omega_com / omega_p).
inline ChainSpec synthesize_chain(int n_ions, double trap_anisotropy, double com_freq,
                                  double lamb_dicke_scale_ref) {
    if (n_ions < 2) throw ValidationError("synthesize_chain: need at least two ions");
    if (trap_anisotropy <= 0.0 || com_freq <= 0.0)
        throw ValidationError("synthesize_chain: frequencies must be positive");

    const std::vector<double> u = equilibrium_positions(n_ions);
    const double beta = 1.0 / trap_anisotropy;  // omega_t / omega_z

    // Transverse Hessian in units of omega_z^2:
    //   K_ii = beta^2 - sum_{k != i} 1/|u_i-u_k|^3,   K_ij = 1/|u_i-u_j|^3.
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n_ions, n_ions);
    for (int i = 0; i < n_ions; ++i) {
        double diag = beta * beta;
        for (int k = 0; k < n_ions; ++k) {
            if (k == i) continue;
            const double d = std::abs(u[i] - u[k]);
            const double w = 1.0 / (d * d * d);
            diag -= w;
            K(i, k) = w;
        }
        K(i, i) = diag;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
    if (es.info() != Eigen::Success)
        throw NumericalError("synthesize_chain: eigen solve failed");
    const Eigen::VectorXd lam = es.eigenvalues();  // ascending
    if (lam[0] <= 0.0)
        throw NumericalError(
            "synthesize_chain: unstable (imaginary-frequency) transverse mode; "
            "reduce trap_anisotropy");

    ChainSpec spec;
    spec.n_ions = n_ions;
    spec.lamb_dicke.resize(n_ions, n_ions);
    const double omega_z = com_freq / beta;
    for (int p = 0; p < n_ions; ++p) spec.mode_freqs.push_back(omega_z * std::sqrt(lam[p]));

    // The common mode is the top eigenvalue beta^2 with uniform eigenvector.
    const double omega_com = spec.mode_freqs.back();
    const double scale = lamb_dicke_scale_ref * std::sqrt(double(n_ions));
    for (int p = 0; p < n_ions; ++p) {
        Eigen::VectorXd b = es.eigenvectors().col(p);
        // deterministic sign: make the largest-magnitude component positive
        int imax = 0;
        for (int j = 1; j < n_ions; ++j)
            if (std::abs(b[j]) > std::abs(b[imax])) imax = j;
        if (b[imax] < 0) b = -b;
        const double mode_scale = scale * std::sqrt(omega_com / spec.mode_freqs[p]);
        for (int j = 0; j < n_ions; ++j) spec.lamb_dicke(p, j) = mode_scale * b[j];
    }
    // Force the common-mode row exactly constant (it is uniform analytically;
    // the eigensolver leaves O(1e-15) ripple).
    const double com_eta = spec.lamb_dicke.row(n_ions - 1).mean();
    spec.lamb_dicke.row(n_ions - 1).setConstant(com_eta);

    spec.validate();
    return spec;
}

}  // namespace msgate
