#pragma once

// Truncated-Fock-space gate simulator for the Molmer-Sorensen Hamiltonian
// family.  The joint state lives in (2-qubit computational space) x (product
// of per-mode Fock ladders); time evolution uses fixed-step RK4.
//
// The full cos/sin Lamb-Dicke operators are applied through the per-mode
// factorization of the displacement operator: exp(iV_j) is a tensor product
// of small per-mode matrices whose static magnitudes involve associated
// Laguerre polynomials and whose time dependence is a pure phase
// exp(i w_p (n_p - m_p) t).  In the ion-j computational block basis the
// Hamiltonian is  [[0, -i E+], [i E+^dag, 0]] * g(t)  with E+ = exp(iV_j),
// so one exponential application per computational component suffices.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "msgate/chain.hpp"
#include "msgate/errors.hpp"
#include "msgate/pulse.hpp"

namespace msgate {

struct PhononScheme {
    std::vector<int> max_occ;  // m_p^max per mode
    std::size_t dim_cap = 1000000;

    int n_modes() const { return int(max_occ.size()); }
    std::size_t phonon_dim() const {
        std::size_t d = 1;
        for (int m : max_occ) {
            if (m < 0) throw ValidationError("phonon scheme: negative occupation");
            d *= std::size_t(m + 1);
            if (d > dim_cap) throw ValidationError("phonon scheme: dimension cap exceeded");
        }
        return d;
    }
    void validate(const ChainSpec& chain) const {
        if (n_modes() != chain.n_modes())
            throw ValidationError("phonon scheme: one occupation bound per mode required");
        phonon_dim();
    }

    // "2,6,2,1,1,1,1" or compact digit string "2621111"
    static PhononScheme parse(const std::string& s) {
        PhononScheme sch;
        if (s.find(',') != std::string::npos) {
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ',')) sch.max_occ.push_back(std::stoi(tok));
        } else {
            for (char c : s) {
                if (c < '0' || c > '9')
                    throw ValidationError("phonon scheme: bad digit string");
                sch.max_occ.push_back(c - '0');
            }
        }
        return sch;
    }
    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < max_occ.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(max_occ[i]);
        }
        return s;
    }
};

// Joint computational (x) phonon state.  Layout: amp[c * P + ph] with
// c = 2a + b the computational index and ph the mixed-radix phonon index,
// mode 1 slowest:  ph = m_1 * stride_1 + ... + m_N * stride_N, stride_N = 1.
struct JointState {
    std::vector<int> dims;  // per-mode dimensions m_p^max + 1
    std::vector<cplx> amp;

    std::size_t phonon_dim() const { return amp.size() / 4; }
    cplx& at(int a, int b, std::size_t ph) { return amp[std::size_t(2 * a + b) * phonon_dim() + ph]; }
    cplx at(int a, int b, std::size_t ph) const {
        return amp[std::size_t(2 * a + b) * phonon_dim() + ph];
    }

    double norm() const {
        double s = 0.0;
        for (const cplx& z : amp) s += std::norm(z);
        return std::sqrt(s);
    }

    static JointState computational_basis(const PhononScheme& scheme, int a, int b) {
        JointState st;
        for (int m : scheme.max_occ) st.dims.push_back(m + 1);
        st.amp.assign(4 * scheme.phonon_dim(), cplx(0.0, 0.0));
        st.at(a, b, 0) = 1.0;  // phonon vacuum is ph = 0
        return st;
    }
};

struct HamiltonianSpec {
    enum class Kind { full_ms, expanded };
    Kind kind = Kind::full_ms;
    int nc = -2;  // -2, 0, 2, 4; -2 omits the cosine (carrier) series entirely
    int ns = 1;   // 1, 3, 5
    ChainSpec chain;
    GatePair pair;
    Pulse pulse;

    static HamiltonianSpec full(const ChainSpec& c, const GatePair& p, const Pulse& g) {
        HamiltonianSpec s;
        s.kind = Kind::full_ms;
        s.chain = c;
        s.pair = p;
        s.pulse = g;
        return s;
    }
    static HamiltonianSpec model(const ChainSpec& c, const GatePair& p, const Pulse& g, int nc,
                                 int ns) {
        HamiltonianSpec s;
        s.kind = Kind::expanded;
        s.nc = nc;
        s.ns = ns;
        s.chain = c;
        s.pair = p;
        s.pulse = g;
        return s;
    }
    // The standard Hamiltonian H_S = H^(-2,1)
    static HamiltonianSpec standard(const ChainSpec& c, const GatePair& p, const Pulse& g) {
        return model(c, p, g, -2, 1);
    }

    void validate() const {
        pair.validate(chain);
        pulse.validate();
        if (kind == Kind::expanded) {
            if (nc != -2 && nc != 0 && nc != 2 && nc != 4)
                throw ValidationError("hamiltonian: Nc must be in {-2, 0, 2, 4}");
            if (ns != 1 && ns != 3 && ns != 5)
                throw ValidationError("hamiltonian: Ns must be in {1, 3, 5}");
        }
    }
};

namespace focksim_detail {

// ln n! for the sqrt(m!/n!) prefactors
inline double log_factorial(int n) {
    double s = 0.0;
    for (int i = 2; i <= n; ++i) s += std::log(double(i));
    return s;
}

// Associated Laguerre L_m^{(d)}(x) via the stable three-term recurrence.
inline double assoc_laguerre(int m, int d, double x) {
    if (m == 0) return 1.0;
    double lm1 = 1.0;            // L_0
    double lm = 1.0 + d - x;     // L_1
    for (int i = 2; i <= m; ++i) {
        const double next = ((2.0 * i - 1.0 + d - x) * lm - (i - 1.0 + d) * lm1) / double(i);
        lm1 = lm;
        lm = next;
    }
    return lm;
}

// Static per-mode displacement magnitudes:
//   base[n][m] = e^{-eta^2/2} sqrt(min!/max!) eta^{|n-m|} L_min^{(|n-m|)}(eta^2)
// (eta signed; symmetric in n <-> m).  The full element of exp(iV) is
// base * i^{|n-m|} * e^{i w (n-m) t}.
inline Eigen::MatrixXd displacement_base(double eta, int dim) {
    Eigen::MatrixXd base(dim, dim);
    const double x = eta * eta;
    const double pref = std::exp(-0.5 * x);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m <= n; ++m) {
            const int d = n - m;
            const double ratio = std::exp(0.5 * (log_factorial(m) - log_factorial(n)));
            const double v = pref * ratio * std::pow(eta, d) * assoc_laguerre(m, d, x);
            base(n, m) = v;
            base(m, n) = v;
        }
    return base;
}

}  // namespace focksim_detail

// Static parts of the cos/sin Lamb-Dicke matrix elements for one ion over the
// full truncated phonon space, with the sigma = sum(n_p - m_p) mod 4 sign/zero
// selection applied.  Dense; intended for tests and modest dimensions.
struct DisplacementElements {
    Eigen::MatrixXd C, S;  // phonon_dim x phonon_dim, t = 0 static parts
};

inline DisplacementElements displacement_elements(const std::vector<double>& eta,
                                                  const PhononScheme& scheme) {
    if (int(eta.size()) != scheme.n_modes())
        throw ValidationError("displacement_elements: eta size mismatch");
    const std::size_t P = scheme.phonon_dim();
    if (P > 4096)
        throw ValidationError("displacement_elements: dense form capped at dimension 4096");
    const int nm = scheme.n_modes();
    std::vector<int> dims(nm);
    for (int p = 0; p < nm; ++p) dims[p] = scheme.max_occ[p] + 1;
    std::vector<Eigen::MatrixXd> base(nm);
    for (int p = 0; p < nm; ++p) base[p] = focksim_detail::displacement_base(eta[p], dims[p]);

    auto unpack = [&](std::size_t ph, std::vector<int>& occ) {
        for (int p = nm - 1; p >= 0; --p) {
            occ[p] = int(ph % dims[p]);
            ph /= dims[p];
        }
    };
    DisplacementElements out;
    out.C = Eigen::MatrixXd::Zero(P, P);
    out.S = Eigen::MatrixXd::Zero(P, P);
    std::vector<int> on(nm), om(nm);
    for (std::size_t n = 0; n < P; ++n) {
        unpack(n, on);
        for (std::size_t m = 0; m < P; ++m) {
            unpack(m, om);
            double mag = 1.0;
            int sigma = 0;
            for (int p = 0; p < nm; ++p) {
                mag *= base[p](on[p], om[p]);
                sigma += std::abs(on[p] - om[p]);
            }
            switch (sigma % 4) {
                case 0: out.C(n, m) = mag; break;
                case 1: out.S(n, m) = mag; break;
                case 2: out.C(n, m) = -mag; break;
                case 3: out.S(n, m) = -mag; break;
            }
        }
    }
    return out;
}

// Dense matrix of (sum_p eta_p (a_p^dag + a_p))^power on the truncated space
// at t = 0, truncate-then-multiply.  Test/API surface.
inline Eigen::MatrixXd v_power_elements(const std::vector<double>& eta,
                                        const PhononScheme& scheme, int power) {
    if (power < 1 || power > 5)
        throw ValidationError("v_power_elements: power must be in 1..5");
    const std::size_t P = scheme.phonon_dim();
    if (P > 4096) throw ValidationError("v_power_elements: dense form capped at dimension 4096");
    const int nm = scheme.n_modes();
    std::vector<int> dims(nm);
    std::vector<std::size_t> strides(nm);
    std::size_t s = 1;
    for (int p = nm - 1; p >= 0; --p) {
        dims[p] = scheme.max_occ[p] + 1;
        strides[p] = s;
        s *= dims[p];
    }
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(P, P);
    std::vector<int> occ(nm);
    for (std::size_t m = 0; m < P; ++m) {
        std::size_t r = m;
        for (int p = nm - 1; p >= 0; --p) {
            occ[p] = int(r % dims[p]);
            r /= dims[p];
        }
        for (int p = 0; p < nm; ++p) {
            if (occ[p] + 1 < dims[p])  // a^dag
                V(m + strides[p], m) += eta[p] * std::sqrt(double(occ[p] + 1));
            if (occ[p] > 0)  // a
                V(m - strides[p], m) += eta[p] * std::sqrt(double(occ[p]));
        }
    }
    Eigen::MatrixXd out = V;
    for (int k = 1; k < power; ++k) out = V * out;
    return out;
}

// Applies H(t)/hbar and runs RK4 propagation.
class Propagator {
public:
    Propagator(const HamiltonianSpec& spec, const PhononScheme& scheme)
        : spec_(spec), scheme_(scheme) {
        spec_.validate();
        scheme_.validate(spec_.chain);
        P_ = scheme_.phonon_dim();
        const int nm = scheme_.n_modes();
        dims_.resize(nm);
        strides_.resize(nm);
        std::size_t s = 1;
        for (int p = nm - 1; p >= 0; --p) {
            dims_[p] = scheme_.max_occ[p] + 1;
            strides_[p] = s;
            s *= dims_[p];
        }
        for (int i = 0; i < 2; ++i) {
            const int j = spec_.pair.ion(i);
            auto& bases = base_[i];
            bases.resize(nm);
            for (int p = 0; p < nm; ++p)
                bases[p] =
                    focksim_detail::displacement_base(spec_.chain.lamb_dicke(p, j), dims_[p]);
        }
        scratch_.resize(P_);
        scratch2_.resize(P_);
        mode_mats_.resize(nm);
        for (int p = 0; p < nm; ++p) mode_mats_[p].resize(std::size_t(dims_[p]) * dims_[p]);
    }

    const PhononScheme& scheme() const { return scheme_; }
    const HamiltonianSpec& spec() const { return spec_; }

    // out += (H(t)/hbar) psi
    void apply_hamiltonian(double t, const JointState& psi, JointState& out) const {
        const double g = spec_.pulse.g(t);
        if (g == 0.0) return;
        for (int i = 0; i < 2; ++i) {
            if (spec_.kind == HamiltonianSpec::Kind::full_ms)
                apply_full_ion(i, t, g, psi, out);
            else
                apply_expanded_ion(i, t, g, psi, out);
        }
    }

    // psi(tau) from psi0; dt is adjusted to divide tau exactly.
    JointState propagate(const JointState& psi0, double dt) const {
        const double tau = spec_.pulse.tau;
        if (dt <= 0.0) throw ValidationError("propagate: dt must be positive");
        const long nsteps = std::max(1L, long(std::ceil(tau / dt - 1e-12)));
        const double h = tau / nsteps;

        JointState psi = psi0;
        JointState k1 = psi0, k2 = psi0, k3 = psi0, k4 = psi0, tmp = psi0;
        const std::size_t sz = psi.amp.size();
        const cplx mi(0.0, -1.0);

        for (long step = 0; step < nsteps; ++step) {
            const double t = step * h;
            zero(k1);
            apply_hamiltonian(t, psi, k1);
            for (std::size_t i = 0; i < sz; ++i) {
                k1.amp[i] *= mi;
                tmp.amp[i] = psi.amp[i] + 0.5 * h * k1.amp[i];
            }
            zero(k2);
            apply_hamiltonian(t + 0.5 * h, tmp, k2);
            for (std::size_t i = 0; i < sz; ++i) {
                k2.amp[i] *= mi;
                tmp.amp[i] = psi.amp[i] + 0.5 * h * k2.amp[i];
            }
            zero(k3);
            apply_hamiltonian(t + 0.5 * h, tmp, k3);
            for (std::size_t i = 0; i < sz; ++i) {
                k3.amp[i] *= mi;
                tmp.amp[i] = psi.amp[i] + h * k3.amp[i];
            }
            zero(k4);
            apply_hamiltonian(t + h, tmp, k4);
            for (std::size_t i = 0; i < sz; ++i) {
                k4.amp[i] *= mi;
                psi.amp[i] += (h / 6.0) * (k1.amp[i] + 2.0 * (k2.amp[i] + k3.amp[i]) + k4.amp[i]);
            }
            if ((step & 1023) == 1023) check_norm(psi, h);
        }
        check_norm(psi, h);
        return psi;
    }

    static double default_dt(const ChainSpec& chain, int points_per_period = 40) {
        return 2.0 * M_PI / (chain.mode_freqs.back() * points_per_period);
    }

private:
    void check_norm(const JointState& psi, double h) const {
        const double drift = std::abs(psi.norm() - 1.0);
        if (drift > 1e-5) {
            std::ostringstream os;
            os << "propagate: norm drift " << drift << " exceeds 1e-5 at step size " << h
               << " s; reduce dt";
            throw NumericalError(os.str());
        }
    }

    static void zero(JointState& st) { std::fill(st.amp.begin(), st.amp.end(), cplx(0.0, 0.0)); }

    // y = M x along mode axis p (small dense dim_p x dim_p complex matrix)
    void apply_mode_matrix(int p, const cplx* M, cplx* x) const {
        const int d = dims_[p];
        const std::size_t inner = strides_[p];
        const std::size_t outer = P_ / (std::size_t(d) * inner);
        cplx* buf = scratch2_.data();
        for (std::size_t o = 0; o < outer; ++o) {
            cplx* blk = x + o * d * inner;
            for (std::size_t i = 0; i < inner; ++i) {
                for (int n = 0; n < d; ++n) {
                    cplx acc(0.0, 0.0);
                    const cplx* row = M + std::size_t(n) * d;
                    for (int m = 0; m < d; ++m) acc += row[m] * blk[std::size_t(m) * inner + i];
                    buf[n] = acc;
                }
                for (int n = 0; n < d; ++n) blk[std::size_t(n) * inner + i] = buf[n];
            }
        }
    }

    // Full MS: out(c with ion-i bit 0) += -g E+ psi(bit 1), out(bit 1) += g E+^dag psi(bit 0)
    // where the -i from the Schrodinger RHS is applied by the caller, i.e. here
    // we add H/hbar:  H(0<-1) = -i g E+,  H(1<-0) = +i g E+^dag.
    void apply_full_ion(int i, double t, double g, const JointState& psi, JointState& out) const {
        const int nm = scheme_.n_modes();
        // per-mode matrices of E+ = exp(iV):  base * i^{|d|} * e^{i w d t}
        for (int p = 0; p < nm; ++p) {
            const int d = dims_[p];
            cplx* M = mode_mats_[p].data();
            const cplx rot = std::exp(cplx(0.0, spec_.chain.mode_freqs[p] * t));
            // phase(k) = i^{|k|} rot^k for k = n - m
            for (int n = 0; n < d; ++n)
                for (int m = 0; m < d; ++m) {
                    const int k = n - m;
                    cplx ph = std::pow(rot, k);
                    switch (std::abs(k) % 4) {
                        case 1: ph *= cplx(0.0, 1.0); break;
                        case 2: ph *= -1.0; break;
                        case 3: ph *= cplx(0.0, -1.0); break;
                        default: break;
                    }
                    M[std::size_t(n) * d + m] = base_[i][p](n, m) * ph;
                }
        }
        // component pairing: ion 0 flips the "a" bit, ion 1 flips the "b" bit
        for (int other = 0; other < 2; ++other) {
            // iterate over the ion's bit value on the *input* component
            for (int bit_in = 0; bit_in < 2; ++bit_in) {
                const int c_in = (i == 0) ? 2 * bit_in + other : 2 * other + bit_in;
                const int c_out = (i == 0) ? 2 * (1 - bit_in) + other : 2 * other + (1 - bit_in);
                const cplx* src = psi.amp.data() + std::size_t(c_in) * P_;
                cplx* dst = out.amp.data() + std::size_t(c_out) * P_;
                cplx* work = scratch_.data();
                std::copy(src, src + P_, work);
                if (bit_in == 1) {
                    for (int p = 0; p < nm; ++p) apply_mode_matrix(p, mode_mats_[p].data(), work);
                    const cplx w = cplx(0.0, -1.0) * g;  // -i g E+
                    for (std::size_t n = 0; n < P_; ++n) dst[n] += w * work[n];
                } else {
                    // E+^dag: adjoint per-mode matrices
                    for (int p = 0; p < nm; ++p) {
                        const int d = dims_[p];
                        cplx* M = mode_mats_[p].data();
                        adj_.resize(std::size_t(d) * d);
                        for (int n = 0; n < d; ++n)
                            for (int m = 0; m < d; ++m)
                                adj_[std::size_t(n) * d + m] =
                                    std::conj(M[std::size_t(m) * d + n]);
                        apply_mode_matrix(p, adj_.data(), work);
                    }
                    const cplx w = cplx(0.0, 1.0) * g;  // +i g E+^dag
                    for (std::size_t n = 0; n < P_; ++n) dst[n] += w * work[n];
                }
            }
        }
    }

    // y += V(t) x for ion slot i (tridiagonal per mode, with e^{+-i w t} phases)
    void apply_v(int i, double t, const cplx* x, cplx* y) const {
        const int nm = scheme_.n_modes();
        const int j = spec_.pair.ion(i);
        for (int p = 0; p < nm; ++p) {
            const double eta = spec_.chain.lamb_dicke(p, j);
            const cplx up = eta * std::exp(cplx(0.0, spec_.chain.mode_freqs[p] * t));
            const cplx dn = std::conj(up);
            const int d = dims_[p];
            const std::size_t inner = strides_[p];
            const std::size_t outer = P_ / (std::size_t(d) * inner);
            for (std::size_t o = 0; o < outer; ++o) {
                const cplx* xb = x + o * d * inner;
                cplx* yb = y + o * d * inner;
                for (int n = 0; n < d; ++n) {
                    const double lo = (n > 0) ? std::sqrt(double(n)) : 0.0;
                    const double hi = (n + 1 < d) ? std::sqrt(double(n + 1)) : 0.0;
                    for (std::size_t iidx = 0; iidx < inner; ++iidx) {
                        cplx acc(0.0, 0.0);
                        if (n > 0) acc += up * lo * xb[std::size_t(n - 1) * inner + iidx];
                        if (n + 1 < d) acc += dn * hi * xb[std::size_t(n + 1) * inner + iidx];
                        yb[std::size_t(n) * inner + iidx] += acc;
                    }
                }
            }
        }
    }

    // Expanded model H^(Nc,Ns): block (0<-1) = -i Kc + Ks, (1<-0) = i Kc + Ks,
    // Kc = sum_{n even <= Nc} (-1)^{n/2} V^n / n!,  Ks = sum_{m odd <= Ns} ...
    void apply_expanded_ion(int i, double t, double g, const JointState& psi,
                            JointState& out) const {
        const int max_pow = std::max(spec_.nc, spec_.ns);
        static const double inv_fact[6] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0};
        for (int other = 0; other < 2; ++other) {
            for (int bit_in = 0; bit_in < 2; ++bit_in) {
                const int c_in = (i == 0) ? 2 * bit_in + other : 2 * other + bit_in;
                const int c_out = (i == 0) ? 2 * (1 - bit_in) + other : 2 * other + (1 - bit_in);
                const cplx* src = psi.amp.data() + std::size_t(c_in) * P_;
                cplx* dst = out.amp.data() + std::size_t(c_out) * P_;
                // accumulate Kc x and Ks x while walking powers of V
                kc_.assign(P_, cplx(0.0, 0.0));
                ks_.assign(P_, cplx(0.0, 0.0));
                std::copy(src, src + P_, scratch_.data());  // V^0 x
                if (spec_.nc >= 0)
                    for (std::size_t n = 0; n < P_; ++n) kc_[n] += scratch_[n];
                for (int pw = 1; pw <= max_pow; ++pw) {
                    std::fill(scratch2_.begin(), scratch2_.end(), cplx(0.0, 0.0));
                    apply_v(i, t, scratch_.data(), scratch2_.data());
                    std::swap(scratch_, scratch2_);
                    if (pw % 2 == 1 && pw <= spec_.ns) {
                        const double w = ((pw - 1) / 2 % 2 == 0 ? 1.0 : -1.0) * inv_fact[pw];
                        for (std::size_t n = 0; n < P_; ++n) ks_[n] += w * scratch_[n];
                    } else if (pw % 2 == 0 && pw <= spec_.nc) {
                        const double w = (pw / 2 % 2 == 0 ? 1.0 : -1.0) * inv_fact[pw];
                        for (std::size_t n = 0; n < P_; ++n) kc_[n] += w * scratch_[n];
                    }
                }
                const cplx ic = (bit_in == 1) ? cplx(0.0, -g) : cplx(0.0, g);
                for (std::size_t n = 0; n < P_; ++n) dst[n] += ic * kc_[n] + g * ks_[n];
            }
        }
    }

    HamiltonianSpec spec_;
    PhononScheme scheme_;
    std::size_t P_ = 0;
    std::vector<int> dims_;
    std::vector<std::size_t> strides_;
    Eigen::MatrixXd base_raw_;
    std::array<std::vector<Eigen::MatrixXd>, 2> base_;  // [pair slot][mode]
    mutable std::vector<cplx> scratch_, scratch2_, kc_, ks_, adj_;
    mutable std::vector<std::vector<cplx>> mode_mats_;
};

}  // namespace msgate
