#include "holodot/scenarios.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <random>
#include <stdexcept>

namespace holodot {

namespace {

constexpr double kLeakageWarning = 0.05;
constexpr double kFidelityAgreement = 1e-4;
constexpr double kLongDelayOverTau = 4.0;

void check_sweep_grid(const std::vector<double>& ratios) {
    if (ratios.empty()) throw std::invalid_argument("sweep needs at least one delay");
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] >= 0.0)) throw std::invalid_argument("sweep delays must be non-negative");
        if (i > 0 && !(ratios[i] > ratios[i - 1])) {
            throw std::invalid_argument("sweep delays must be strictly increasing");
        }
    }
}

Mat5 embed_block(const Mat2& block) {
    Mat5 m = Mat5::Zero();
    m.topLeftCorner<2, 2>() = block;
    return m;
}

std::array<StateVector, 4> process_inputs() {
    const double r = 1.0 / std::sqrt(2.0);
    return {embed_qubit(1.0, 0.0), embed_qubit(0.0, 1.0), embed_qubit(r, r), embed_qubit(r, kI * r)};
}

PropagationSpec segment_spec(const GateSegment& seg, const GateParams& params) {
    const auto [lo, hi] = seg.pulses.window();
    PropagationSpec spec;
    spec.t_start = lo;
    spec.t_end = hi;
    spec.rel_tol = params.rel_tol;
    spec.abs_tol = params.abs_tol;
    spec.max_step = params.max_step_over_tau * params.tau;
    return spec;
}

HamiltonianFn segment_hamiltonian(const GateSegment& seg, const ModelParams& mp) {
    return [cfg = seg.cfg, pulses = seg.pulses, mp](double t) { return build_h(cfg, t, pulses, mp); };
}

Mat5 evolve_input(const StateVector& input, const std::vector<GateSegment>& segments, const GateParams& params,
                  bool with_decoherence) {
    if (!with_decoherence) {
        StateVector psi = input;
        for (const auto& seg : segments) {
            const auto r = schrodinger_propagate(segment_hamiltonian(seg, params.model), psi, segment_spec(seg, params));
            if (r.norm_drift > 1e-6) {
                throw PhysicsError(fmt::format("norm drift {:.3e} in gate segment", r.norm_drift));
            }
            // Each leg takes a unit-norm input, so the small integrator drift is removed here.
            psi = normalize(r.trajectory.back());
        }
        return psi.projector();
    }
    const auto channels = lindblad_channels(params.model);
    DensityMatrix rho = DensityMatrix::pure(input);
    for (const auto& seg : segments) {
        rho = lindblad_propagate(segment_hamiltonian(seg, params.model), channels, rho, segment_spec(seg, params))
                  .trajectory.back();
    }
    return rho.matrix();
}

// Rotation of the Bloch sphere drawn from a seed; identity for seed 0.
Eigen::Matrix3d seeded_rotation(std::uint64_t seed) {
    if (seed == 0) return Eigen::Matrix3d::Identity();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double u1 = u(rng), u2 = u(rng), u3 = u(rng);
    const Eigen::Quaterniond q(std::sqrt(u1) * std::cos(2 * kPi * u3), std::sqrt(1 - u1) * std::sin(2 * kPi * u2),
                               std::sqrt(1 - u1) * std::cos(2 * kPi * u2), std::sqrt(u1) * std::sin(2 * kPi * u3));
    return q.normalized().toRotationMatrix();
}

Mat2 bloch_density(const Eigen::Vector3d& n) {
    return 0.5 * (Mat2::Identity() + n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z());
}

double state_fidelity_term(const QubitProcess& process, const Mat2& u, const Mat2& rho) {
    return (u * rho * u.adjoint() * process.apply(rho)).trace().real();
}

}  // namespace

// ---------------------------------------------------------------- init

double preparation_fidelity(Polarization pol, const DensityMatrix& rho) {
    const double p0 = rho.population(kDown);
    const double p1 = rho.population(kUp);
    const double f = (p1 - p0) / (p0 + p1);
    return pol == Polarization::sigma_minus ? f : -f;
}

InitializationResult run_initialization(Polarization pol, const DensityMatrix& rho0, double rabi, double duration,
                                        const ModelParams& mp, double record_stride) {
    mp.validate();
    if (!(rabi >= 0.0)) throw std::invalid_argument("rabi must be non-negative");
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
    FieldSample f;
    if (pol == Polarization::sigma_minus) {
        f.pump = rabi;
    } else {
        f.stokes = rabi;
    }
    const Mat5 h = hamiltonian_y(f, mp);
    PropagationSpec spec;
    spec.t_start = 0.0;
    spec.t_end = duration;
    spec.max_step = std::max(1.0, std::min(record_stride > 0.0 ? record_stride : duration, 100.0));
    spec.record_stride = record_stride;
    const auto channels = lindblad_channels(mp);
    LindbladResult run = lindblad_propagate([&h](double) { return h; }, channels, rho0, spec);

    InitializationResult out;
    out.max_trace_drift = run.max_trace_drift;
    out.min_eigenvalue = run.min_eigenvalue;
    out.trajectory = std::move(run.trajectory);
    out.fidelity.reserve(out.trajectory.size());
    for (const auto& rho : out.trajectory.states) out.fidelity.push_back(preparation_fidelity(pol, rho));
    return out;
}

// ---------------------------------------------------------------- sweeps

SweepTable sweep_beta(const std::vector<double>& tau0_over_tau, const Amplitudes& amps, double tau,
                      const ModelParams& mp, unsigned threads) {
    check_sweep_grid(tau0_over_tau);
    SweepTable table;
    table.rows = parallel_map(tau0_over_tau.size(), threads, [&](std::size_t i) {
        const double r = tau0_over_tau[i];
        const auto res = beta_integral(make_y_pulseset(amps.pump, amps.stokes, amps.driving, r * tau, tau), mp);
        return SweepRow{r, res.angle, res.estimated_quadrature_error};
    });
    return table;
}

SweepTable sweep_gamma_f(const std::vector<double>& tau0_over_tau, const Amplitudes& amps, double tau,
                         const ModelParams& mp, unsigned threads) {
    check_sweep_grid(tau0_over_tau);
    SweepTable table;
    table.rows = parallel_map(tau0_over_tau.size(), threads, [&](std::size_t i) {
        const double r = tau0_over_tau[i];
        const auto res = gamma_f_integral(make_z_pulseset(amps.stokes, amps.driving, r * tau, tau, 0.0), mp);
        return SweepRow{r, res.angle, res.estimated_quadrature_error};
    });
    return table;
}

// ---------------------------------------------------------------- gates

const char* to_string(GateVariant v) {
    switch (v) {
        case GateVariant::y_single_pass: return "y_single_pass";
        case GateVariant::y_closed_loop: return "y_closed_loop";
        case GateVariant::z_fractional: return "z_fractional";
        case GateVariant::x_composite: return "x_composite";
    }
    return "unknown";
}

double solve_y_delay_for_beta(double target_beta, const Amplitudes& amps, double tau, const ModelParams& mp,
                              const QuadratureSpec& quad) {
    auto beta_minus_target = [&](double r) {
        return beta_integral(make_y_pulseset(amps.pump, amps.stokes, amps.driving, r * tau, tau), mp, quad).angle -
               target_beta;
    };
    const double lo = 0.0, hi = kLongDelayOverTau;
    const double f_lo = beta_minus_target(lo), f_hi = beta_minus_target(hi);
    if (f_lo == 0.0) return lo;
    if (f_lo * f_hi > 0.0) {
        throw std::invalid_argument(
            fmt::format("target beta {:.6f} not reachable with delays in [0, {}] tau", target_beta, hi));
    }
    std::uintmax_t iterations = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(beta_minus_target, lo, hi, f_lo, f_hi,
                                                          boost::math::tools::eps_tolerance<double>(45), iterations);
    return 0.5 * (a + b);
}

std::vector<GateSegment> gate_segments(GateVariant variant, const GateParams& params) {
    const Amplitudes& a = params.amps;
    const double tau = params.tau;
    const double ret = params.return_delay_over_tau * tau;
    auto y_loop = [&](double ratio) {
        return GateSegment{Configuration::y,
                           make_y_closed_loop_pulseset(a.pump, a.stokes, a.driving, ratio * tau, tau, ret)};
    };
    auto z_leg = [&] {
        return GateSegment{Configuration::z, make_z_pulseset(a.stokes, a.driving, params.z_tau0_over_tau * tau, tau,
                                                             params.rotation_angle)};
    };
    switch (variant) {
        case GateVariant::y_single_pass:
            return {GateSegment{Configuration::y,
                                make_y_pulseset(a.pump, a.stokes, a.driving, params.y_tau0_over_tau * tau, tau)}};
        case GateVariant::y_closed_loop: return {y_loop(params.y_tau0_over_tau)};
        case GateVariant::z_fractional: return {z_leg()};
        case GateVariant::x_composite: {
            // R_x = R_y(-pi/4) R_z R_y(pi/4), with R_y(-pi/4) = -R_y(pi/4) R_y(pi/2):
            // the reachable betas per loop lie in [0, pi/2].
            const double quarter = solve_y_delay_for_beta(0.25 * kPi, a, tau, params.model, params.quad);
            return {y_loop(quarter), z_leg(), y_loop(kLongDelayOverTau), y_loop(quarter)};
        }
    }
    throw std::invalid_argument("unknown gate variant");
}

QubitGate gate_target(GateVariant variant, const GateParams& params) {
    switch (variant) {
        case GateVariant::y_single_pass:
        case GateVariant::y_closed_loop: return predicted_ry(params.target_beta);
        case GateVariant::z_fractional: return predicted_rz(params.rotation_angle);
        case GateVariant::x_composite: return compose_rx(params.rotation_angle);
    }
    throw std::invalid_argument("unknown gate variant");
}

Mat2 QubitProcess::apply(const Mat2& rho) const {
    return rho(0, 0) * images[0] + rho(0, 1) * images[1] + rho(1, 0) * images[2] + rho(1, 1) * images[3];
}

QubitProcess unitary_process(const QubitGate& u) {
    QubitProcess p;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Mat2 unit = Mat2::Zero();
            unit(i, j) = 1.0;
            p.images[static_cast<std::size_t>(2 * i + j)] = u.matrix() * unit * u.matrix().adjoint();
        }
    }
    for (auto& m : p.final_states) m = Mat5::Zero();
    return p;
}

FidelityDetail gate_fidelity_detail(const QubitProcess& process, const QubitGate& target, std::uint64_t seed) {
    const Mat2& u = target.matrix();
    FidelityDetail out;

    const std::array<Eigen::Vector3d, 6> axes{Eigen::Vector3d::UnitX(), -Eigen::Vector3d::UnitX(),
                                              Eigen::Vector3d::UnitY(), -Eigen::Vector3d::UnitY(),
                                              Eigen::Vector3d::UnitZ(), -Eigen::Vector3d::UnitZ()};
    for (const auto& n : axes) out.six_state += state_fidelity_term(process, u, bloch_density(n));
    out.six_state /= 6.0;

    using Rule = boost::math::quadrature::gauss<double, 20>;
    constexpr int kAzimuth = 20;
    const Eigen::Matrix3d rot = seeded_rotation(seed);
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (double sign : {1.0, -1.0}) {
            const double z = sign * x[i];
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            for (int k = 0; k < kAzimuth; ++k) {
                const double az = 2.0 * kPi * (k + 0.5) / kAzimuth;
                const Eigen::Vector3d n = rot * Eigen::Vector3d(s * std::cos(az), s * std::sin(az), z);
                acc += w[i] * state_fidelity_term(process, u, bloch_density(n));
                ++out.sphere_points;
            }
        }
    }
    // Weights sum to 2 over z and the azimuth rule averages; the sphere mean
    // is the weighted sum / (2 * kAzimuth).
    out.sphere = acc / (2.0 * kAzimuth);
    if (std::abs(out.sphere - out.six_state) > kFidelityAgreement) {
        throw PhysicsError(fmt::format("channel average inconsistency: six-state {:.10f} vs sphere {:.10f}",
                                       out.six_state, out.sphere));
    }
    return out;
}

double gate_fidelity(const QubitProcess& process, const QubitGate& target, std::uint64_t seed) {
    return gate_fidelity_detail(process, target, seed).six_state;
}

GateRun simulate_gate(GateVariant variant, const GateParams& params, bool with_decoherence) {
    params.model.validate();
    const auto segments = gate_segments(variant, params);
    const auto inputs = process_inputs();

    const auto finals = parallel_map(inputs.size(), params.threads, [&](std::size_t i) {
        return evolve_input(inputs[i], segments, params, with_decoherence);
    });

    GateRun run;
    QubitProcess& proc = run.process;
    std::array<Mat2, 4> blocks;
    for (std::size_t i = 0; i < 4; ++i) {
        proc.final_states[i] = finals[i];
        blocks[i] = finals[i].topLeftCorner<2, 2>();
        proc.input_leakage[i] = 1.0 - (finals[i](kDown, kDown).real() + finals[i](kUp, kUp).real());
    }
    const Mat2 diag_sum = blocks[0] + blocks[1];
    proc.images[0] = blocks[0];
    proc.images[1] = blocks[2] + kI * blocks[3] - 0.5 * (1.0 + kI) * diag_sum;
    proc.images[2] = blocks[2] - kI * blocks[3] - 0.5 * (1.0 - kI) * diag_sum;
    proc.images[3] = blocks[1];

    GateReport& rep = run.report;
    rep.variant = variant;
    rep.with_decoherence = with_decoherence;
    rep.target = gate_target(variant, params);
    rep.leakage_final = *std::max_element(proc.input_leakage.begin(), proc.input_leakage.end());
    if (rep.leakage_final > kLeakageWarning) {
        rep.warnings.push_back(fmt::format("final leakage {:.4f} exceeds {:.2f}: protocol failed adiabaticity",
                                           rep.leakage_final, kLeakageWarning));
    }
    const FidelityDetail fid = gate_fidelity_detail(proc, rep.target);
    rep.fidelity = fid.six_state;
    rep.fidelity_sphere = fid.sphere;

    if (variant == GateVariant::z_fractional) {
        const auto gf = gamma_f_integral(segments.front().pulses, params.model, params.quad);
        rep.gamma_f = gf.angle;
        const Vec5 pred = predicted_final_state_z(gf.angle, params.rotation_angle).amplitudes();
        rep.z_prediction_overlap = (pred.adjoint() * proc.final_states[1] * pred).value().real();
    }

    rep.parameters = {
        {"delta", params.model.delta},
        {"detuning_common", params.model.detuning_common},
        {"gamma", params.model.gamma},
        {"gamma_hh", params.model.gamma_hh},
        {"gamma_ee", params.model.gamma_ee},
        {"amp_p", params.amps.pump},
        {"amp_s", params.amps.stokes},
        {"amp_d", params.amps.driving},
        {"tau", params.tau},
        {"y_tau0_over_tau", params.y_tau0_over_tau},
        {"z_tau0_over_tau", params.z_tau0_over_tau},
        {"return_delay_over_tau", params.return_delay_over_tau},
        {"rotation_angle", params.rotation_angle},
        {"target_beta", params.target_beta},
    };
    return run;
}

// ---------------------------------------------------------------- readout

ReadoutResult run_readout(const Mat2& spin_state, double duration, const ModelParams& mp,
                          std::optional<double> rabi) {
    mp.validate();
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");
    const DensityMatrix rho0(embed_block(spin_state));
    FieldSample f;
    f.stokes = rabi.value_or(mp.gamma);
    const Mat5 h = hamiltonian_y(f, mp);
    PropagationSpec spec;
    spec.t_start = 0.0;
    spec.t_end = duration;
    spec.max_step = 100.0;
    const auto channels = lindblad_channels(mp);
    const LindbladResult run = lindblad_propagate([&h](double) { return h; }, channels, rho0, spec);

    ReadoutResult out;
    for (std::size_t k = 0; k < channels.size(); ++k) {
        const auto& c = channels[k];
        if (c.from != kE1 && c.from != kE2) continue;
        if (c.to == kDown) out.photons_to_down += run.jump_counts[k];
        if (c.to == kUp) out.photons_to_up += run.jump_counts[k];
    }
    out.expected_photons = out.photons_to_down + out.photons_to_up;
    const DensityMatrix& fin = run.trajectory.back();
    out.driven_population_final = fin.population(kUp) + fin.population(kE1) + fin.population(kE2);
    out.shelving_complete = out.driven_population_final < 1e-3;
    return out;
}

}  // namespace holodot
