#pragma once

// End-to-end runs: optical-pumping initialization, geometric-phase sweeps,
// gate simulation with fidelity, and the readout emission model.

#include "holodot/holonomy.hpp"
#include "holodot/model.hpp"
#include "holodot/propagate.hpp"
#include "holodot/pulses.hpp"
#include "holodot/qcore.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace holodot {

/// Runs fn(i) for i in [0, count) on up to `threads` workers and returns the
/// results in index order. The first exception (by index) is rethrown.
template <class Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<R> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                results[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

// ---------------------------------------------------------------- init

enum class Polarization { sigma_plus, sigma_minus };

struct InitializationResult {
    Trajectory<DensityMatrix> trajectory;
    std::vector<double> fidelity;  // signed preparation fidelity per snapshot
    double max_trace_drift = 0.0;
    double min_eigenvalue = 1.0;
};

/// Continuous single-field drive: sigma- couples |0> to e1/e2 (pump), sigma+
/// couples |1> (Stokes). Full Lindblad channels.
InitializationResult run_initialization(Polarization pol, const DensityMatrix& rho0, double rabi, double duration,
                                        const ModelParams& mp, double record_stride = 100.0);

/// (rho_11 - rho_00)/(rho_00 + rho_11) for sigma-, the negative for sigma+.
double preparation_fidelity(Polarization pol, const DensityMatrix& rho);

// ---------------------------------------------------------------- sweeps

struct SweepRow {
    double tau0_over_tau;
    double angle;  // rad
    double quadrature_error;
};

struct SweepTable {
    std::vector<SweepRow> rows;
};

struct Amplitudes {
    double pump = 0.5;
    double stokes = 0.5;
    double driving = 0.5;
};

SweepTable sweep_beta(const std::vector<double>& tau0_over_tau, const Amplitudes& amps, double tau,
                      const ModelParams& mp, unsigned threads = 1);
SweepTable sweep_gamma_f(const std::vector<double>& tau0_over_tau, const Amplitudes& amps, double tau,
                         const ModelParams& mp, unsigned threads = 1);

// ---------------------------------------------------------------- gates

enum class GateVariant { y_single_pass, y_closed_loop, z_fractional, x_composite };

const char* to_string(GateVariant v);

struct GateParams {
    ModelParams model;
    Amplitudes amps;
    double tau = 100.0;
    double y_tau0_over_tau = 1.5;
    double z_tau0_over_tau = 6.5;
    double return_delay_over_tau = 1.0;
    double rotation_angle = 0.5 * kPi;  // Stokes phase for z, rotation angle for x
    double target_beta = 0.5 * kPi;     // target of the y variants
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step_over_tau = 1.0 / 50.0;
    QuadratureSpec quad;  // for gamma_f and the composite's delay search
    unsigned threads = 1;
};

/// One leg of a gate: a configuration and its pulses, propagated over the
/// pulse window.
struct GateSegment {
    Configuration cfg;
    PulseSet pulses;
};

/// Smallest y-loop delay (in units of tau) with beta = target, found by
/// bracketing beta(tau0) on [0, 4].
double solve_y_delay_for_beta(double target_beta, const Amplitudes& amps, double tau, const ModelParams& mp,
                              const QuadratureSpec& quad = {});

std::vector<GateSegment> gate_segments(GateVariant variant, const GateParams& params);
QubitGate gate_target(GateVariant variant, const GateParams& params);

/// A qubit channel assembled from the images of the matrix units |i><j|.
struct QubitProcess {
    std::array<Mat2, 4> images;             // E(|0><0|), E(|0><1|), E(|1><0|), E(|1><1|)
    std::array<double, 4> input_leakage{};  // leakage for inputs |0>, |1>, |+>, |+i>
    std::array<Mat5, 4> final_states;       // 5-level density matrices for the four inputs

    Mat2 apply(const Mat2& rho) const;
};

struct GateReport {
    QubitGate target = QubitGate::identity();
    GateVariant variant = GateVariant::y_closed_loop;
    double fidelity = 0.0;
    double fidelity_sphere = 0.0;
    double leakage_final = 0.0;
    bool with_decoherence = false;
    /// Overlap of the propagated |1> input with the adiabatic prediction
    /// (z_fractional only; negative otherwise).
    double z_prediction_overlap = -1.0;
    double gamma_f = 0.0;
    std::vector<std::string> warnings;
    std::map<std::string, double> parameters;
};

struct GateRun {
    QubitProcess process;
    GateReport report;
};

/// Evolves |0><0|, |1><1|, |+><+|, |+i><+i| through the five-level dynamics
/// (Lindblad when with_decoherence) and fills the report, fidelity included.
GateRun simulate_gate(GateVariant variant, const GateParams& params, bool with_decoherence);

struct FidelityDetail {
    double six_state = 0.0;
    double sphere = 0.0;
    std::size_t sphere_points = 0;
};

/// Average of <psi|U^dag E(psi) U|psi> over input states, by the six axial
/// states and by a 20x20 Gauss-Legendre x azimuth sphere rule (rotated by a
/// seed-derived rotation when seed != 0). Throws PhysicsError if the two
/// differ by more than 1e-4.
FidelityDetail gate_fidelity_detail(const QubitProcess& process, const QubitGate& target, std::uint64_t seed = 0);
double gate_fidelity(const QubitProcess& process, const QubitGate& target, std::uint64_t seed = 0);

/// Process of the exact unitary u (no leakage).
QubitProcess unitary_process(const QubitGate& u);

// ---------------------------------------------------------------- readout

struct ReadoutResult {
    double expected_photons = 0.0;
    double photons_to_down = 0.0;  // e -> |0> emissions
    double photons_to_up = 0.0;    // e -> |1> emissions
    bool shelving_complete = false;
    double driven_population_final = 0.0;
};

/// Continuous sigma+ drive (couples |1>) at Rabi `rabi` (default 1.0 gamma);
/// counts recombination photons from both destinations.
ReadoutResult run_readout(const Mat2& spin_state, double duration, const ModelParams& mp,
                          std::optional<double> rabi = std::nullopt);

}  // namespace holodot
