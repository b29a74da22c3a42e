// msgate: pulse synthesis, Fock-space simulation and fidelity analysis for
// sine-AMFM Molmer-Sorensen gates.
//
// Subcommands: synth, simulate, fidelity, calibrate, audit, sweep,
// functionals.  Every file-producing run also writes a manifest
// (<out>.manifest.json by default) recording the command line, input hashes
// and wall time.  Exit codes: 0 success, 2 validation error, 3 numerical
// failure (norm drift, non-convergence).

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "msgate/chain.hpp"
#include "msgate/fidelity.hpp"
#include "msgate/focksim.hpp"
#include "msgate/functionals.hpp"
#include "msgate/magnus.hpp"
#include "msgate/synthesis.hpp"

using namespace msgate;
using nlohmann::json;

static const char* kVersion = "msgate 0.1.0";

static std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

static std::string hex64(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016" PRIx64, h);
    return buf;
}

// round-trip-exact decimal for CSV cells
static std::string full_precision(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Manifest {
    std::string command_line;
    std::string chain_hash, pulse_hash;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const std::string& path) const {
        json doc;
        doc["tool_version"] = kVersion;
        doc["command_line"] = command_line;
        if (!chain_hash.empty()) doc["chain_hash"] = chain_hash;
        if (!pulse_hash.empty()) doc["pulse_hash"] = pulse_hash;
        doc["config_hash"] = hex64(fnv1a(command_line));
        doc["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        doc["outputs"] = outputs;
        std::ofstream out(path);
        if (!out) throw ValidationError("cannot write manifest: " + path);
        out << doc.dump(2) << '\n';
    }
};

static void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write output: " + path);
    out << doc.dump(2) << '\n';
}

static GatePair parse_pair(const std::string& s) {
    GatePair p;
    if (std::sscanf(s.c_str(), "%d,%d", &p.j1, &p.j2) != 2)
        throw ValidationError("pair must be given as j1,j2 (1-based)");
    return p;
}

// "pi/4", "-pi/4", "0.785", ...
static double parse_angle(std::string s) {
    double sign = 1.0;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        if (s[0] == '-') sign = -1.0;
        s.erase(0, 1);
    }
    if (s.rfind("pi", 0) == 0) {
        double denom = 1.0;
        if (s.size() > 2) {
            if (s[2] != '/' || std::sscanf(s.c_str() + 3, "%lf", &denom) != 1 || denom == 0.0)
                throw ValidationError("bad angle expression: " + s);
        }
        return sign * M_PI / denom;
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ValidationError("bad angle expression: " + s);
        return sign * v;
    } catch (const std::exception&) {
        throw ValidationError("bad angle expression: " + s);
    }
}

// "full" or "nc,ns" like "0,3" / "-2,1"
static HamiltonianSpec make_ham(const std::string& ham, const ChainSpec& chain,
                                const GatePair& pair, const Pulse& pulse) {
    if (ham == "full") return HamiltonianSpec::full(chain, pair, pulse);
    int nc = 0, ns = 0;
    if (std::sscanf(ham.c_str(), "%d,%d", &nc, &ns) != 2)
        throw ValidationError("--ham must be 'full' or 'nc,ns'");
    return HamiltonianSpec::model(chain, pair, pulse, nc, ns);
}

static json pulse_doc_with_provenance(const Pulse& pulse, const ChainSpec& chain,
                                      const GatePair& pair, bool enforce_phi) {
    json doc = save_pulse(pulse);
    doc["provenance"] = {{"chain_hash", hex64(chain_hash(chain))},
                         {"pair", {pair.j1, pair.j2}},
                         {"enforce_phi", enforce_phi}};
    return doc;
}

static json state_doc(const JointState& st, const PhononScheme& scheme) {
    json doc;
    doc["scheme"] = scheme.to_string();
    doc["dims"] = st.dims;
    doc["index_map"] =
        "amp[(2*a+b)*P + ph], P = prod(dims); ph mixed-radix over the per-mode "
        "occupations, first mode slowest / last mode fastest (stride 1)";
    std::vector<double> re, im;
    re.reserve(st.amp.size());
    im.reserve(st.amp.size());
    for (const cplx& z : st.amp) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    doc["amp_re"] = re;
    doc["amp_im"] = im;
    doc["norm"] = st.norm();
    return doc;
}

static JointState load_state(const std::string& path, PhononScheme* scheme_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open state file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed state document: ") + e.what());
    }
    JointState st;
    try {
        st.dims = doc.at("dims").get<std::vector<int>>();
        const auto re = doc.at("amp_re").get<std::vector<double>>();
        const auto im = doc.at("amp_im").get<std::vector<double>>();
        if (re.size() != im.size()) throw ValidationError("state: re/im size mismatch");
        st.amp.resize(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) st.amp[i] = cplx(re[i], im[i]);
        if (scheme_out) scheme_out->max_occ.clear();
        if (scheme_out)
            for (int d : st.dims) scheme_out->max_occ.push_back(d - 1);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed state document: ") + e.what());
    }
    std::size_t P = 1;
    for (int d : st.dims) P *= std::size_t(d);
    if (st.amp.size() != 4 * P) throw ValidationError("state: amplitude count mismatch");
    return st;
}

static json budget_doc(const ErrorBudget& b) {
    json doc;
    doc["gamma2"] = b.gamma2;
    doc["gamma3_plus"] = b.gamma3_plus;
    doc["gamma3_minus"] = b.gamma3_minus;
    doc["gamma4"] = b.gamma4;
    doc["gamma01"] = b.gamma01;
    doc["gamma03_plus"] = b.gamma03_plus;
    doc["gamma03_minus"] = b.gamma03_minus;
    doc["gamma12_a"] = b.gamma12_a;
    doc["gamma12_c"] = b.gamma12_c;
    doc["gamma13_d"] = b.gamma13_d;
    doc["gamma001"] = b.gamma001;
    doc["delta_chi_analytic"] = b.delta_chi_analytic;
    doc["phi_value"] = b.phi_value;
    doc["phi_infidelity"] = b.phi_infidelity;
    doc["total_estimate"] = b.total_estimate;
    return doc;
}

// like sweep_phi but optionally threaded over the pair list
static std::vector<SweepEntry> run_sweep(const ChainSpec& chain, double tau, bool enforce_phi,
                                         int jobs) {
    if (jobs <= 1) return sweep_phi(chain, tau, enforce_phi);
    std::vector<std::pair<int, int>> pairs;
    for (int j1 = 1; j1 <= chain.n_ions; ++j1)
        for (int j2 = j1 + 1; j2 <= chain.n_ions; ++j2) pairs.emplace_back(j1, j2);
    std::vector<SweepEntry> out(pairs.size());
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < pairs.size(); i = next++) {
                SweepEntry e;
                e.j1 = pairs[i].first;
                e.j2 = pairs[i].second;
                try {
                    SynthesisRequest req;
                    req.tau = tau;
                    req.enforce_phi = enforce_phi;
                    const SynthesisResult res =
                        synthesize(chain, GatePair{e.j1, e.j2}, req);
                    e.phi = res.chi * tau / (4.0 * M_PI) * phi_linear_form(res.pulse);
                    if (enforce_phi) e.phi = 0.0;
                    e.phi_infidelity = phi_infidelity_from_phi(e.phi, res.chi);
                    e.ok = true;
                } catch (const std::exception& ex) {
                    e.error = ex.what();
                }
                out[i] = e;
            }
        });
    for (auto& t : workers) t.join();
    return out;
}

int main(int argc, char** argv) {
    CLI::App app{"sine-AMFM Molmer-Sorensen gate toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Manifest manifest;
    {
        std::ostringstream os;
        for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
        manifest.command_line = os.str();
    }

    // shared option storage
    std::string chain_path, pulse_path, out_path, manifest_path, state_path;
    std::string pair_str = "1,2", scheme_str, ham_str = "full", psi0_str = "00";
    std::string chi_str = "pi/4", histogram_path, pairs_csv_path;
    double tau_us = 0.0, dt_ns = 0.0, bin_width = 1.0;
    int n_min = 0, n_max = 0, max_iters = 5, jobs = 1;
    bool enforce_phi = false, vacuum_conditioned = false;

    auto* synth = app.add_subcommand("synth", "synthesize a closed sine pulse");
    synth->add_option("--chain", chain_path, "chain JSON file")->required();
    synth->add_option("--pair", pair_str, "gate pair j1,j2 (1-based)")->required();
    synth->add_option("--tau-us", tau_us, "gate time in microseconds")->required();
    synth->add_flag("--phi", enforce_phi, "also enforce sum B_n/n = 0");
    synth->add_option("--n-min", n_min, "lowest tone index (default: auto)");
    synth->add_option("--n-max", n_max, "highest tone index (default: auto)");
    synth->add_option("--chi-target", chi_str, "target |chi| (default pi/4)");
    synth->add_option("--out", out_path, "output pulse JSON")->required();

    auto* simulate = app.add_subcommand("simulate", "propagate a joint state to t = tau");
    simulate->add_option("--chain", chain_path)->required();
    simulate->add_option("--pulse", pulse_path)->required();
    simulate->add_option("--pair", pair_str)->required();
    simulate->add_option("--ham", ham_str, "'full' or 'nc,ns' (e.g. -2,1 / 0,3)");
    simulate->add_option("--scheme", scheme_str, "phonon scheme, e.g. 2,6,2,1,1,1,1")->required();
    simulate->add_option("--dt-ns", dt_ns, "RK4 step in ns (default: 40 pts/period)");
    simulate->add_option("--psi0", psi0_str, "computational input: 00, 01, 10 or 11");
    simulate->add_option("--out", out_path, "output state JSON")->required();

    auto* fid = app.add_subcommand("fidelity", "fidelity metrics of a state or a channel");
    fid->add_option("--state", state_path, "state JSON from 'simulate' (psi0 = 00)");
    fid->add_option("--chi", chi_str, "target chi, e.g. pi/4 or -pi/4");
    fid->add_option("--chain", chain_path, "chain file (channel mode)");
    fid->add_option("--pulse", pulse_path, "pulse file (channel mode)");
    fid->add_option("--pair", pair_str);
    fid->add_option("--ham", ham_str);
    fid->add_option("--scheme", scheme_str);
    fid->add_option("--dt-ns", dt_ns);
    fid->add_flag("--vacuum-conditioned", vacuum_conditioned,
                  "condition the channel on the phonon vacuum instead of tracing");
    fid->add_option("--out", out_path, "report JSON (default: stdout)");

    auto* cal = app.add_subcommand("calibrate", "rescale the pulse until chi hits the target");
    cal->add_option("--chain", chain_path)->required();
    cal->add_option("--pulse", pulse_path)->required();
    cal->add_option("--pair", pair_str)->required();
    cal->add_option("--scheme", scheme_str)->required();
    cal->add_option("--ham", ham_str);
    cal->add_option("--chi-target", chi_str, "signed target (default pi/4)");
    cal->add_option("--dt-ns", dt_ns);
    cal->add_option("--max-iters", max_iters);
    cal->add_option("--out", out_path, "calibrated pulse JSON")->required();

    auto* audit_cmd = app.add_subcommand("audit", "Magnus error budget for one pulse");
    audit_cmd->add_option("--chain", chain_path)->required();
    audit_cmd->add_option("--pulse", pulse_path)->required();
    audit_cmd->add_option("--pair", pair_str)->required();
    audit_cmd->add_option("--out", out_path, "budget JSON (default: stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "all-pairs Phi audit of a chain");
    sweep_cmd->add_option("--chain", chain_path)->required();
    sweep_cmd->add_option("--tau-us", tau_us)->required();
    sweep_cmd->add_flag("--phi", enforce_phi, "synthesize with the Phi constraint");
    sweep_cmd->add_option("--jobs", jobs, "worker threads (default 1, reference mode)");
    sweep_cmd->add_option("--bin-width", bin_width, "histogram bin width in pptt");
    sweep_cmd->add_option("--histogram", histogram_path, "histogram CSV (bin_lo,bin_hi,count)")
        ->required();
    sweep_cmd->add_option("--pairs-csv", pairs_csv_path, "per-pair CSV");

    auto* func = app.add_subcommand("functionals", "tabulate the spectral functionals");
    func->add_option("--pulse", pulse_path)->required();
    func->add_option("--chain", chain_path)->required();
    func->add_option("--pair", pair_str)->required();
    func->add_option("--out", out_path, "JSON dump (default: table on stdout)");

    for (auto* sc : {synth, simulate, fid, cal, audit_cmd, sweep_cmd, func})
        sc->add_option("--manifest", manifest_path, "manifest path (default <out>.manifest.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        ChainSpec chain;
        if (!chain_path.empty()) {
            chain = load_chain_file(chain_path);
            manifest.chain_hash = hex64(chain_hash(chain));
        }
        Pulse pulse;
        if (!pulse_path.empty()) {
            pulse = load_pulse_file(pulse_path);
            manifest.pulse_hash = hex64(fnv1a(save_pulse(pulse).dump()));
        }
        const double dt = dt_ns > 0.0 ? dt_ns * 1e-9 : 0.0;

        if (*synth) {
            const GatePair pair = parse_pair(pair_str);
            SynthesisRequest req;
            req.tau = tau_us * 1e-6;
            req.n_min = n_min;
            req.n_max = n_max;
            req.enforce_phi = enforce_phi;
            req.chi_target = std::abs(parse_angle(chi_str));
            const SynthesisResult res = synthesize(chain, pair, req);
            json doc = pulse_doc_with_provenance(res.pulse, chain, pair, enforce_phi);
            doc["chi"] = res.chi;
            doc["null_dim"] = res.null_dim;
            doc["max_closure_residual"] = res.max_closure_residual;
            write_json(out_path, doc);
            manifest.outputs.push_back(out_path);
            std::cout << "pulse written to " << out_path << " (chi = " << res.chi
                      << ", tones " << res.pulse.n_min << ".." << res.pulse.n_max << ")\n";
        } else if (*simulate) {
            const GatePair pair = parse_pair(pair_str);
            const PhononScheme scheme = PhononScheme::parse(scheme_str);
            const HamiltonianSpec spec = make_ham(ham_str, chain, pair, pulse);
            if (psi0_str.size() != 2 || (psi0_str[0] != '0' && psi0_str[0] != '1') ||
                (psi0_str[1] != '0' && psi0_str[1] != '1'))
                throw ValidationError("--psi0 must be one of 00, 01, 10, 11");
            const JointState psi0 = JointState::computational_basis(
                scheme, psi0_str[0] - '0', psi0_str[1] - '0');
            Propagator prop(spec, scheme);
            const JointState fin =
                prop.propagate(psi0, dt > 0.0 ? dt : Propagator::default_dt(chain));
            json doc = state_doc(fin, scheme);
            doc["tau_s"] = pulse.tau;
            doc["psi0"] = psi0_str;
            write_json(out_path, doc);
            manifest.outputs.push_back(out_path);
            std::cout << "state written to " << out_path << " (norm = " << fin.norm() << ")\n";
        } else if (*fid) {
            const double chi_target = parse_angle(chi_str);
            json doc;
            if (!state_path.empty()) {
                const JointState st = load_state(state_path);
                const Eigen::Vector4cd psi0(1.0, 0.0, 0.0, 0.0);
                const ChiExtraction ex = extract_chi(st);
                doc["state_fidelity"] = state_fidelity(st, chi_target, psi0);
                doc["chi_extracted"] = ex.chi;
                doc["delta_chi"] = ex.chi - chi_target;
                doc["leakage"] = ex.leakage;
            } else if (!chain_path.empty() && !pulse_path.empty() && !scheme_str.empty()) {
                const GatePair pair = parse_pair(pair_str);
                const PhononScheme scheme = PhononScheme::parse(scheme_str);
                const HamiltonianSpec spec = make_ham(ham_str, chain, pair, pulse);
                const auto outs = propagate_basis_inputs(
                    spec, scheme, dt > 0.0 ? dt : Propagator::default_dt(chain));
                const GateChannel ch = channel_from_states(outs, vacuum_conditioned);
                const ChiExtraction ex = extract_chi(outs[0]);
                const Eigen::Vector4cd psi0(1.0, 0.0, 0.0, 0.0);
                doc["state_fidelity"] = state_fidelity(outs[0], chi_target, psi0);
                doc["process_fidelity"] = process_fidelity(ch, chi_target);
                doc["average_gate_fidelity"] = average_gate_fidelity(ch, chi_target);
                doc["chi_extracted"] = ex.chi;
                doc["delta_chi"] = ex.chi - chi_target;
                doc["leakage"] = ex.leakage;
                doc["vacuum_conditioned"] = vacuum_conditioned;
            } else {
                throw ValidationError(
                    "fidelity: pass --state FILE, or --chain/--pulse/--pair/--scheme for "
                    "the channel metrics");
            }
            doc["chi_target"] = chi_target;
            if (out_path.empty())
                std::cout << doc.dump(2) << '\n';
            else {
                write_json(out_path, doc);
                manifest.outputs.push_back(out_path);
            }
        } else if (*cal) {
            const GatePair pair = parse_pair(pair_str);
            const PhononScheme scheme = PhononScheme::parse(scheme_str);
            const HamiltonianSpec spec = make_ham(ham_str, chain, pair, pulse);
            const double chi_target = parse_angle(chi_str);
            const CalibrationResult res = calibrate(spec, scheme, chi_target, max_iters, dt);
            json doc = pulse_doc_with_provenance(res.pulse, chain, pair, false);
            doc["calibration"] = {{"iterations", res.iterations},
                                  {"chi_final", res.chi_final},
                                  {"chi_trajectory", res.chi_trajectory},
                                  {"chi_target", chi_target}};
            write_json(out_path, doc);
            manifest.outputs.push_back(out_path);
            std::cout << "calibrated pulse written to " << out_path << " (chi = "
                      << res.chi_final << " after " << res.iterations << " iterations)\n";
        } else if (*audit_cmd) {
            const GatePair pair = parse_pair(pair_str);
            const ErrorBudget b = audit(chain, pair, pulse);
            const json doc = budget_doc(b);
            if (out_path.empty())
                std::cout << doc.dump(2) << '\n';
            else {
                write_json(out_path, doc);
                manifest.outputs.push_back(out_path);
            }
        } else if (*sweep_cmd) {
            const auto entries = run_sweep(chain, tau_us * 1e-6, enforce_phi, jobs);
            const auto bins = phi_histogram(entries, bin_width);
            {
                std::ofstream out(histogram_path);
                if (!out) throw ValidationError("cannot write histogram: " + histogram_path);
                out << "bin_lo,bin_hi,count\n";
                for (const auto& b : bins)
                    out << full_precision(b.lo) << ',' << full_precision(b.hi) << ','
                        << b.count << '\n';
                manifest.outputs.push_back(histogram_path);
            }
            if (!pairs_csv_path.empty()) {
                std::ofstream out(pairs_csv_path);
                if (!out) throw ValidationError("cannot write pairs CSV: " + pairs_csv_path);
                out << "j1,j2,ok,phi,phi_infidelity_pptt,error\n";
                for (const auto& e : entries)
                    out << e.j1 << ',' << e.j2 << ',' << (e.ok ? 1 : 0) << ','
                        << full_precision(e.phi) << ','
                        << full_precision(e.phi_infidelity * 1e4) << ",\"" << e.error
                        << "\"\n";
                manifest.outputs.push_back(pairs_csv_path);
            }
            int ok = 0;
            for (const auto& e : entries) ok += e.ok;
            std::cout << "swept " << entries.size() << " pairs (" << ok << " ok), histogram in "
                      << histogram_path << '\n';
        } else if (*func) {
            const GatePair pair = parse_pair(pair_str);
            json doc;
            doc["chi"] = eval_chi(chain, pair, pulse);
            doc["chi_tilde"] = eval_chi_tilde(chain, pair, pulse);
            const PhiValue phi = eval_phi(chain, pair, pulse);
            doc["phi_closed_form"] = phi.closed_form;
            doc["phi_double_integral"] = phi.double_integral;
            doc["sum_bn_over_n"] = phi_linear_form(pulse);
            json modes = json::array();
            for (int p = 0; p < chain.n_modes(); ++p) {
                const double wp = chain.mode_freqs[p];
                const cplx q = eval_Q(pulse, wp).value;
                const cplx fv = eval_f(pulse, wp).value;
                const cplx sp = eval_Sp(pulse, wp, 0.0).value;
                const cplx jp = eval_Jp(pulse, wp).value;
                modes.push_back({{"mode", p + 1},
                                 {"omega_over_2pi_mhz", wp / kTwoPiMHz},
                                 {"Q_re", q.real()},
                                 {"Q_im", q.imag()},
                                 {"f_re", fv.real()},
                                 {"f_im", fv.imag()},
                                 {"Sp0_re", sp.real()},
                                 {"Sp0_im", sp.imag()},
                                 {"Jp_re", jp.real()},
                                 {"Jp_im", jp.imag()}});
            }
            doc["modes"] = modes;
            if (out_path.empty()) {
                std::printf("chi              = %s\n", full_precision(doc["chi"]).c_str());
                std::printf("chi_tilde        = %s\n",
                            full_precision(doc["chi_tilde"]).c_str());
                std::printf("phi (closed)     = %s\n",
                            full_precision(phi.closed_form).c_str());
                std::printf("phi (double int) = %s\n",
                            full_precision(phi.double_integral).c_str());
                std::printf("sum B_n/n        = %s\n",
                            full_precision(doc["sum_bn_over_n"]).c_str());
                std::printf("%4s %12s %12s %12s %12s %12s\n", "mode", "w/2pi MHz", "|Q|",
                            "|f|", "Re S_p(0)", "|J_p|");
                for (const auto& m : modes) {
                    const double qa = std::hypot(double(m["Q_re"]), double(m["Q_im"]));
                    const double fa = std::hypot(double(m["f_re"]), double(m["f_im"]));
                    const double ja = std::hypot(double(m["Jp_re"]), double(m["Jp_im"]));
                    std::printf("%4d %12.6f %12.4e %12.4e %12.4e %12.4e\n", int(m["mode"]),
                                double(m["omega_over_2pi_mhz"]), qa, fa,
                                double(m["Sp0_re"]), ja);
                }
            } else {
                write_json(out_path, doc);
                manifest.outputs.push_back(out_path);
            }
        }

        if (!manifest.outputs.empty()) {
            const std::string mpath =
                manifest_path.empty() ? manifest.outputs.front() + ".manifest.json"
                                      : manifest_path;
            manifest.write(mpath);
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
