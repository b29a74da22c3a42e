#pragma once

// Sine-AMFM control pulse g(t) = sum_n B_n sin(2 pi n t / tau).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msgate/chain.hpp"
#include "msgate/errors.hpp"
#include "msgate/exppoly.hpp"

namespace msgate {

struct Pulse {
    double tau = 0.0;        // gate time, s
    int n_min = 1, n_max = 1;  // basis index bounds
    std::vector<double> coeffs;  // B_n, rad/s, n = n_min..n_max
    int chi_sign = +1;       // sign of the entanglement angle this pulse realizes

    int basis_size() const { return n_max - n_min + 1; }
    double omega(int n) const { return 2.0 * M_PI * n / tau; }
    double omega_at(int idx) const { return omega(n_min + idx); }

    void validate() const {
        if (tau <= 0.0) throw ValidationError("pulse: tau must be positive");
        if (n_min < 1 || n_max < n_min) throw ValidationError("pulse: bad basis bounds");
        if (int(coeffs.size()) != basis_size())
            throw ValidationError("pulse: coefficient count does not match basis bounds");
    }

    double g(double t) const {
        double v = 0.0;
        for (int i = 0; i < basis_size(); ++i) v += coeffs[i] * std::sin(omega_at(i) * t);
        return v;
    }

    // sqrt(sum B_n^2); the scale used in residual tolerances
    double coeff_norm() const {
        double s = 0.0;
        for (double b : coeffs) s += b * b;
        return std::sqrt(s);
    }

    ExpPoly as_exppoly() const {
        ExpPoly g;
        for (int i = 0; i < basis_size(); ++i) g += ExpPoly::sin_tone(omega_at(i), coeffs[i]);
        return g;
    }
};

// Default tone range brackets the mode band: two tones of margin on each side.
inline std::pair<int, int> default_basis(const ChainSpec& chain, double tau) {
    const double lo = chain.mode_freqs.front() * tau / (2.0 * M_PI);
    const double hi = chain.mode_freqs.back() * tau / (2.0 * M_PI);
    int n_min = int(std::floor(lo)) - 2;
    int n_max = int(std::ceil(hi)) + 2;
    if (n_min < 1) n_min = 1;
    return {n_min, n_max};
}

inline nlohmann::json save_pulse(const Pulse& pulse) {
    nlohmann::json doc;
    doc["tau_s"] = pulse.tau;
    doc["n_min"] = pulse.n_min;
    doc["n_max"] = pulse.n_max;
    doc["coeffs"] = pulse.coeffs;
    doc["chi_sign"] = pulse.chi_sign;
    return doc;
}

inline Pulse load_pulse(const nlohmann::json& doc) {
    Pulse p;
    try {
        p.tau = doc.at("tau_s").get<double>();
        p.n_min = doc.at("n_min").get<int>();
        p.n_max = doc.at("n_max").get<int>();
        p.coeffs = doc.at("coeffs").get<std::vector<double>>();
        p.chi_sign = doc.value("chi_sign", +1);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed pulse document: ") + e.what());
    }
    p.validate();
    return p;
}

inline Pulse load_pulse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open pulse file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed pulse document: ") + e.what());
    }
    return load_pulse(doc);
}

}  // namespace msgate
