#pragma once

// RWA Hamiltonians of the driven double-tripod and its dissipation channels.
// Units: rad/ps for energies (hbar = 1), 1/ps for rates.

#include "holodot/pulses.hpp"
#include "holodot/qcore.hpp"

#include <string>
#include <vector>

namespace holodot {

struct ModelParams {
    double delta = 1.016e-3;       // electron Zeeman splitting, rad/ps (B = 55 mT, g = -0.21)
    double detuning_common = 0.0;  // shared one-photon detuning of the y-configuration, rad/ps
    double gamma = 6.25e-4;        // per-channel recombination rate, 1/ps (1/(2 gamma) = 800 ps)
    double gamma_hh = 1e-9;        // hole spin flip, 1/ps (1 ms)
    double gamma_ee = 1e-9;        // electron spin flip, 1/ps (1 ms)

    /// Throws std::invalid_argument when a field is outside its range.
    void validate() const;
};

/// |g| mu_B B / hbar in rad/ps.
double zeeman_from_field(double b_field_tesla, double g_factor);

/// Instantaneous field amplitudes (rad/ps) and the Stokes phase.
struct FieldSample {
    double pump = 0.0;
    double stokes = 0.0;
    double driving = 0.0;
    double stokes_phase = 0.0;
};

FieldSample sample_fields(const PulseSet& p, double t);

/// y-configuration Hamiltonian for given field values and common detuning.
/// Throws when the common detuning sits at the Zeeman midpoint -delta/2.
Mat5 hamiltonian_y(const FieldSample& f, const ModelParams& mp);

/// Hamiltonian with the z-configuration coupling structure (Stokes phase,
/// no pump) at an explicit Stokes/driving detuning. The z protocol uses the
/// midpoint -delta/2; other values are for negative controls.
Mat5 hamiltonian_z(const FieldSample& f, const ModelParams& mp, double detuning_s);

Mat5 build_h_y(double t, const PulseSet& p, const ModelParams& mp);

/// Throws std::invalid_argument if the pump envelope is not identically zero.
Mat5 build_h_z(double t, const PulseSet& p, const ModelParams& mp);

enum class Configuration { y, z };

/// build_h_y or build_h_z.
Mat5 build_h(Configuration cfg, double t, const PulseSet& p, const ModelParams& mp);

struct LindbladChannel {
    std::string name;
    int from;
    int to;
    double rate;
    Mat5 op;  // sqrt(rate) |to><from|
};

LindbladChannel make_channel(std::string name, int from, int to, double rate);

/// Four recombination channels, two hole spin flips, two electron spin flips,
/// in that order.
std::vector<LindbladChannel> lindblad_channels(const ModelParams& mp);

}  // namespace holodot
