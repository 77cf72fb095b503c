#pragma once

// Mixing angles, the degenerate dark pair of each configuration and its
// Wilczek-Zee connection.

#include "holodot/model.hpp"
#include "holodot/qcore.hpp"

#include <functional>
#include <optional>
#include <utility>

namespace holodot {

struct MixingAngles {
    double theta = 0.0;  // [0, pi/2]
    double phi = 0.0;    // [0, pi/2]
};

struct DarkPair {
    StateVector d1;
    StateVector d2;
};

/// atan2(omega_s, omega_d). Both zero: returns `limit` if given, else throws.
double mixing_theta(double omega_s, double omega_d, std::optional<double> limit = std::nullopt);
/// atan2(omega_p, sqrt(omega_s^2 + omega_d^2)). All zero: `limit` or throw.
double mixing_phi_y(double omega_p, double omega_s, double omega_d, std::optional<double> limit = std::nullopt);
/// atan2(delta/2, sqrt(2 (omega_s^2 + omega_d^2))); pi/2 when both fields vanish.
double mixing_phi_z(double delta, double omega_s, double omega_d);

DarkPair dark_states_y(double theta, double phi);
DarkPair dark_states_z(double theta, double phi, double stokes_phase);

/// Connection per unit theta in the ordered dark basis (d1, d2):
/// y: -i sin(phi) sigma_y, i.e. A(0,1) = -sin(phi), A(1,0) = +sin(phi).
Mat2 connection_y(double phi);
/// z: A(1,0) = <d2|d/dtheta d1> = -sin(phi), A(0,1) = +sin(phi).
Mat2 connection_z(double phi);

using BasisFamily = std::function<DarkPair(double)>;

/// Central-difference estimate of A^{ab} = <psi^a|d/dtheta psi^b>, anti-Hermitian part.
Mat2 connection_numeric(const BasisFamily& basis_at, double theta, double h);
/// One Richardson step on connection_numeric: (4 A(h/2) - A(h)) / 3.
Mat2 connection_richardson(const BasisFamily& basis_at, double theta, double h);

/// (|H d1|, |H d2|).
std::pair<double, double> darkness_residual(const Mat5& h, const DarkPair& pair);

// Protocol-level evaluation. Angles are computed from log-envelopes so that
// ratios of far-separated Gaussian tails stay finite; where both fields
// vanish the angles take their continuous limits along the protocol.

struct AngleSample {
    double theta = 0.0;
    double phi = 0.0;
    double theta_rate = 0.0;  // d theta / dt, rad/ps (analytic)
};

AngleSample angles_y(const PulseSet& p, double t);
AngleSample angles_z(const PulseSet& p, const ModelParams& mp, double t);
AngleSample protocol_angles(Configuration cfg, const PulseSet& p, const ModelParams& mp, double t);

DarkPair protocol_dark_pair(Configuration cfg, const PulseSet& p, const ModelParams& mp, double t);

/// Largest |<v_k| (1 - P_dark) d/dt [d1 d2]>| / |E_k| over the eigenvectors of
/// H(t) outside its null space. Infinite if the dark pair leaks into a null
/// eigenvector other than itself.
double adiabaticity_ratio(Configuration cfg, const PulseSet& p, const ModelParams& mp, double t);

/// 2 sqrt(2 (Os^2 + Od^2) + (delta/2)^2): bright-state splitting of the z-configuration.
double bright_splitting_z(double delta, double omega_s, double omega_d);

}  // namespace holodot
