#include "holodot/runner.hpp"

#include "holodot/darkspace.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <random>
#include <tuple>

#ifndef HOLODOT_VERSION
#define HOLODOT_VERSION "0.0.0"
#endif

namespace holodot {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string num(double v) { return fmt::format("{:.11e}", v); }

/// Collects the files written by a run so the manifest can list them.
class OutputDir {
public:
    explicit OutputDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

    void write_csv(const std::string& name, const std::string& header, const std::vector<std::string>& rows) {
        std::ofstream out(root_ / name, std::ios::binary);
        if (!out) throw std::runtime_error(fmt::format("cannot write {}", (root_ / name).string()));
        out << header << '\n';
        for (const auto& r : rows) out << r << '\n';
        files_.push_back(name);
    }

    const fs::path& root() const { return root_; }
    const std::vector<std::string>& files() const { return files_; }

private:
    fs::path root_;
    std::vector<std::string> files_;
};

struct RunState {
    std::vector<Check> checks;
    std::vector<std::string> warnings;
    ordered_json results = ordered_json::object();

    void check(std::string name, bool pass, double value) { checks.push_back({std::move(name), pass, value}); }
    bool all_pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }
};

DensityMatrix embed_qubit_state(const Mat2& q) {
    Mat5 m = Mat5::Zero();
    m.topLeftCorner<2, 2>() = q;
    return DensityMatrix(m);
}

QuadratureSpec quadrature(const RunConfig& cfg) {
    QuadratureSpec q;
    q.accept_tol = cfg.quad_accept_tol;
    return q;
}

void run_init(const RunConfig& cfg, OutputDir& out, RunState& st) {
    const auto& mp = cfg.gate.model;
    const auto res = run_initialization(cfg.init_polarization, embed_qubit_state(qubit_preset_state(cfg.init_state)),
                                        cfg.init_rabi_over_gamma * mp.gamma, cfg.init_duration, mp,
                                        cfg.init_record_stride);
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < res.trajectory.size(); ++i) {
        const auto& rho = res.trajectory.states[i];
        rows.push_back(fmt::format("{},{},{},{},{},{},{}", num(res.trajectory.times[i]), num(rho.population(kDown)),
                                   num(rho.population(kUp)), num(rho.population(kAux)), num(rho.population(kE1)),
                                   num(rho.population(kE2)), num(res.fidelity[i])));
    }
    out.write_csv("init.csv", "t_ps,rho00,rho11,rho_aa,rho_e1e1,rho_e2e2,fidelity", rows);
    st.check("trace_drift_below_1e-9", res.max_trace_drift < 1e-9, res.max_trace_drift);
    st.check("min_eigenvalue_above_-1e-8", res.min_eigenvalue > -1e-8, res.min_eigenvalue);
    st.results["final_fidelity"] = res.fidelity.back();
}

void run_sweep(const RunConfig& cfg, bool beta, OutputDir& out, RunState& st) {
    const auto& g = cfg.gate;
    const QuadratureSpec q = quadrature(cfg);
    auto one = [&](std::size_t i) {
        const double r = cfg.sweep[i];
        const auto res = beta ? beta_integral(make_y_pulseset(g.amps.pump, g.amps.stokes, g.amps.driving, r * g.tau,
                                                              g.tau),
                                              g.model, q)
                              : gamma_f_integral(make_z_pulseset(g.amps.stokes, g.amps.driving, r * g.tau, g.tau,
                                                                 g.rotation_angle),
                                                 g.model, q);
        return SweepRow{r, res.angle, res.estimated_quadrature_error};
    };
    const auto rows = parallel_map(cfg.sweep.size(), cfg.threads, one);
    std::vector<std::string> lines;
    double worst = 0.0;
    for (const auto& r : rows) {
        lines.push_back(fmt::format("{},{},{},{}", num(r.tau0_over_tau), num(r.angle), num(r.angle / kPi),
                                    num(r.quadrature_error)));
        worst = std::max(worst, r.quadrature_error);
    }
    if (beta) {
        out.write_csv("sweep_beta.csv", "tau0_over_tau,beta_rad,beta_over_pi,quad_err", lines);
    } else {
        out.write_csv("sweep_gamma.csv", "tau0_over_tau,gamma_f_rad,gamma_f_over_pi,quad_err", lines);
        st.results["gamma_f_sign"] = "magnitude of the signed integral -int sin(phi) dtheta";
    }
    st.check("quadrature_error_within_accept_tol", worst <= cfg.quad_accept_tol, worst);
}

void run_gate(const RunConfig& cfg, OutputDir& out, RunState& st) {
    GateParams params = cfg.gate;
    params.quad = quadrature(cfg);
    const GateRun run = simulate_gate(cfg.gate_variant, params, cfg.decoherence);
    const auto& rep = run.report;
    const FidelityDetail fid = gate_fidelity_detail(run.process, rep.target, cfg.seed);
    out.write_csv("gate.csv",
                  "variant,with_decoherence,fidelity,fidelity_sphere,leakage_final,z_prediction_overlap,gamma_f_rad",
                  {fmt::format("{},{},{},{},{},{},{}", to_string(rep.variant), rep.with_decoherence ? 1 : 0,
                               num(fid.six_state), num(fid.sphere), num(rep.leakage_final),
                               num(rep.z_prediction_overlap), num(rep.gamma_f))});
    static const char* kInputs[] = {"0", "1", "+", "+i"};
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < 4; ++i) {
        const Mat5& rho = run.process.final_states[i];
        rows.push_back(fmt::format("{},{},{},{},{}", kInputs[i], num(rho(0, 0).real()), num(rho(1, 1).real()),
                                   num(std::abs(rho(0, 1))), num(run.process.input_leakage[i])));
    }
    out.write_csv("gate_inputs.csv", "input,rho00,rho11,abs_rho01,leakage", rows);
    st.check("fidelity_at_most_one", fid.six_state <= 1.0 + 1e-9, fid.six_state);
    st.check("fidelity_rules_agree", std::abs(fid.six_state - fid.sphere) <= 1e-4,
             std::abs(fid.six_state - fid.sphere));
    for (const auto& w : rep.warnings) st.warnings.push_back(w);
    st.results["fidelity"] = fid.six_state;
    st.results["sphere_points"] = fid.sphere_points;
    st.results["parameters"] = rep.parameters;
}

void run_readout_scenario(const RunConfig& cfg, OutputDir& out, RunState& st) {
    const auto& mp = cfg.gate.model;
    const auto res = run_readout(qubit_preset_state(cfg.readout_state), cfg.readout_duration, mp,
                                 cfg.readout_rabi_over_gamma * mp.gamma);
    const char* name = cfg.readout_state == QubitPreset::up     ? "up"
                       : cfg.readout_state == QubitPreset::down ? "down"
                                                                : "mixed";
    out.write_csv("readout.csv",
                  "state,expected_photons,photons_to_down,photons_to_up,driven_population_final,shelving_complete",
                  {fmt::format("{},{},{},{},{},{}", name, num(res.expected_photons), num(res.photons_to_down),
                               num(res.photons_to_up), num(res.driven_population_final),
                               res.shelving_complete ? 1 : 0)});
    st.check("photon_count_finite_non_negative",
             std::isfinite(res.expected_photons) && res.expected_photons >= -1e-12, res.expected_photons);
    if (!res.shelving_complete) st.warnings.push_back("driven manifold still populated at the end of the readout");
    st.results["expected_photons"] = res.expected_photons;
    st.results["photon_count_scope"] = "both e->|0> and e->|1> recombination channels";
}

void run_validate(const RunConfig& cfg, OutputDir& out, RunState& st) {
    const auto checks = validation_checks(cfg);
    std::vector<std::string> rows;
    for (const auto& c : checks) {
        rows.push_back(fmt::format("{},{},{}", c.name, c.pass ? 1 : 0, num(c.value)));
        st.checks.push_back(c);
    }
    out.write_csv("validate.csv", "check,pass,value", rows);
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : config_echo(cfg)) {
        const auto src = cfg.sources.find(k);
        j[k] = {{"value", v}, {"source", src == cfg.sources.end() ? "default" : src->second}};
    }
    return j;
}

void write_manifest(const fs::path& dir, const ordered_json& m) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out(dir / "manifest.json");
    if (!out) {
        std::cerr << "error: cannot write manifest in " << dir.string() << '\n';
        return;
    }
    out << m.dump(2) << '\n';
}

}  // namespace

const char* artifact_version() { return HOLODOT_VERSION; }

std::vector<Check> validation_checks(const RunConfig& cfg) {
    const GateParams& g = cfg.gate;
    const ModelParams& mp = g.model;
    std::vector<Check> out;
    std::mt19937_64 rng(cfg.seed + 20240611u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Dark states are null vectors of H at random protocol times.
    const PulseSet py = make_y_pulseset(g.amps.pump, g.amps.stokes, g.amps.driving, g.y_tau0_over_tau * g.tau, g.tau);
    const PulseSet pz =
        make_z_pulseset(g.amps.stokes, g.amps.driving, g.z_tau0_over_tau * g.tau, g.tau, g.rotation_angle);
    for (auto [cfg_kind, p, label] : {std::tuple{Configuration::y, &py, "dark_nullity_y"},
                                      std::tuple{Configuration::z, &pz, "dark_nullity_z"}}) {
        const auto [lo, hi] = p->window();
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double t = lo + (hi - lo) * unit(rng);
            const Mat5 h = build_h(cfg_kind, t, *p, mp);
            const auto [r1, r2] = darkness_residual(h, protocol_dark_pair(cfg_kind, *p, mp, t));
            worst = std::max(worst, std::max(r1, r2) / (1.0 + max_abs(h)));
        }
        out.push_back({label, worst <= 1e-10, worst});
    }

    // Analytic connection against Richardson-extrapolated finite differences.
    {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double theta = 0.5 * kPi * unit(rng), phi = 0.5 * kPi * unit(rng), chi = 2 * kPi * unit(rng);
            const Mat2 ny = connection_richardson([&](double th) { return dark_states_y(th, phi); }, theta, 1e-3);
            const Mat2 nz = connection_richardson([&](double th) { return dark_states_z(th, phi, chi); }, theta, 1e-3);
            worst = std::max({worst, max_abs(Mat2(ny - connection_y(phi))), max_abs(Mat2(nz - connection_z(phi)))});
        }
        out.push_back({"connection_oracle", worst < 1e-8, worst});
    }

    // Geometric angles: endpoints and scaling invariances.
    {
        const QuadratureSpec q = quadrature(cfg);
        const double b0 = beta_integral(make_y_pulseset(0.5, 0.5, 0.5, 0.0, g.tau), mp, q).angle;
        const double b6 = beta_integral(make_y_pulseset(0.5, 0.5, 0.5, 6.0 * g.tau, g.tau), mp, q).angle;
        out.push_back({"beta_zero_delay", std::abs(b0) < 1e-9, b0});
        out.push_back({"beta_plateau", std::abs(b6 - 0.5 * kPi) < 1e-3, b6});
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double k = std::exp(std::log(0.1) + std::log(100.0) * unit(rng));
            const double r = 3.0 * unit(rng);
            const double a = beta_integral(make_y_pulseset(0.5, 0.4, 0.3, r * g.tau, g.tau), mp, q).angle;
            const double b =
                beta_integral(make_y_pulseset(0.5 * k, 0.4 * k, 0.3 * k, r * g.tau, g.tau), mp, q).angle;
            worst = std::max(worst, std::abs(a - b));
        }
        out.push_back({"beta_amplitude_scaling", worst < 1e-9, worst});
        worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double k = std::exp(std::log(0.1) + std::log(100.0) * unit(rng));
            const double r = 8.0 * unit(rng);
            ModelParams scaled = mp;
            scaled.delta *= k;
            const double a = gamma_f_integral(make_z_pulseset(0.5, 0.5, r * g.tau, g.tau, 0.0), mp, q).angle;
            const double b =
                gamma_f_integral(make_z_pulseset(0.5 * k, 0.5 * k, r * g.tau, g.tau, 0.0), scaled, q).angle;
            worst = std::max(worst, std::abs(a - b));
        }
        out.push_back({"gamma_f_joint_scaling", worst < 1e-9, worst});
    }

    // Adaptive propagation against the matrix-exponential oracle.
    {
        const auto [lo, hi] = py.window();
        PropagationSpec spec;
        spec.t_start = lo;
        spec.t_end = hi;
        spec.rel_tol = g.rel_tol;
        spec.abs_tol = g.abs_tol;
        spec.max_step = g.max_step_over_tau * g.tau;
        auto h = [&](double t) { return build_h_y(t, py, mp); };
        const StateVector psi0 = embed_qubit(0.6, 0.8);
        const auto adaptive = schrodinger_propagate(h, psi0, spec);
        const StateVector oracle = oracle_propagate(h, psi0, g.tau / 2000.0, lo, hi);
        const double deficit = 1.0 - std::norm(oracle.overlap(adaptive.trajectory.back()));
        out.push_back({"propagator_oracle_y", deficit < 1e-6, deficit});
        out.push_back({"norm_drift_y", adaptive.norm_drift < 1e-8, adaptive.norm_drift});
    }

    // Lindblad bookkeeping on a short optical-pumping run.
    {
        const auto res = run_initialization(Polarization::sigma_minus, embed_qubit_state(qubit_preset_state(
                                                                           QubitPreset::mixed)),
                                            mp.gamma, 2000.0, mp, 500.0);
        out.push_back({"lindblad_trace_drift", res.max_trace_drift < 1e-9, res.max_trace_drift});
        out.push_back({"lindblad_min_eigenvalue", res.min_eigenvalue > -1e-8, res.min_eigenvalue});
    }

    // Fidelity of a unitary channel against itself.
    {
        const QubitGate u = compose_rx(0.3);
        const double f = gate_fidelity(unitary_process(u), u, cfg.seed);
        out.push_back({"fidelity_identity_channel", std::abs(f - 1.0) < 1e-12, f});
    }
    return out;
}

void write_failure_manifest(const std::string& out_dir, const std::string& error, int exit_code) {
    ordered_json m;
    m["artifact"] = "holodot";
    m["version"] = artifact_version();
    m["status"] = "config_error";
    m["exit_code"] = exit_code;
    m["error"] = error;
    m["files"] = ordered_json::array({"manifest.json"});
    write_manifest(out_dir, m);
}

int run(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunState st;
    int code = kExitOk;
    std::string error;
    std::vector<std::string> files;
    try {
        OutputDir out(cfg.out_dir);
        try {
            switch (cfg.scenario) {
                case Scenario::init: run_init(cfg, out, st); break;
                case Scenario::sweep_beta: run_sweep(cfg, true, out, st); break;
                case Scenario::sweep_gamma: run_sweep(cfg, false, out, st); break;
                case Scenario::gate: run_gate(cfg, out, st); break;
                case Scenario::readout: run_readout_scenario(cfg, out, st); break;
                case Scenario::validate: run_validate(cfg, out, st); break;
            }
            if (!st.all_pass()) {
                code = kExitPhysics;
                error = "one or more checks failed";
            }
        } catch (const PhysicsError& e) {
            code = kExitPhysics;
            error = e.what();
        } catch (const std::invalid_argument& e) {
            code = kExitConfig;
            error = e.what();
        } catch (const std::exception& e) {
            code = kExitPhysics;
            error = e.what();
        }
        files = out.files();
    } catch (const std::exception& e) {
        code = kExitConfig;
        error = e.what();
    }
    if (!error.empty()) std::cerr << "error: " << error << '\n';
    for (const auto& w : st.warnings) std::cerr << "warning: " << w << '\n';

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ordered_json m;
    m["artifact"] = "holodot";
    m["version"] = artifact_version();
    m["scenario"] = to_string(cfg.scenario);
    m["status"] = code == kExitOk ? "ok" : code == kExitConfig ? "config_error" : "physics_failure";
    m["exit_code"] = code;
    if (!error.empty()) m["error"] = error;
    m["wall_seconds"] = wall;
    m["config"] = config_json(cfg);
    ordered_json checks = ordered_json::array();
    for (const auto& c : st.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}});
    m["checks"] = checks;
    m["warnings"] = st.warnings;
    m["results"] = st.results;
    files.push_back("manifest.json");
    m["files"] = files;
    write_manifest(cfg.out_dir, m);
    return code;
}

}  // namespace holodot
