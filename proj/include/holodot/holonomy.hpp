#pragma once

// Geometric-phase integrals along the pulse protocols, path-ordered
// exponentials of the dark-space connection, and the gates they predict.

#include "holodot/darkspace.hpp"
#include "holodot/model.hpp"
#include "holodot/pulses.hpp"
#include "holodot/qcore.hpp"

#include <span>
#include <vector>

namespace holodot {

struct QuadratureSpec {
    double abs_tol = 1e-8;          // per-panel target, rad
    double accept_tol = 1e-6;       // largest accepted total error estimate, rad
    double panel_width_over_tau = 0.5;
    unsigned max_depth = 15;
};

struct HolonomyResult {
    double angle = 0.0;         // magnitude reported to callers
    double signed_angle = 0.0;  // sign as integrated
    QubitGate predicted_gate = QubitGate::identity();
    std::size_t grid_points = 0;  // integrand evaluations
    double estimated_quadrature_error = 0.0;
};

/// beta = int sin(phi_y) d theta over the pulse window.
HolonomyResult beta_integral(const PulseSet& p, const ModelParams& mp, const QuadratureSpec& spec = {});

/// gamma_f = -int sin(phi_z) d theta (the coupling <D2|dD1/dt> = -sin(phi) theta').
/// `angle` is |gamma_f|; `signed_angle` keeps the integrated sign.
HolonomyResult gamma_f_integral(const PulseSet& p, const ModelParams& mp, const QuadratureSpec& spec = {});

/// One factor exp(generator * step) of an ordered product.
struct ConnectionSample {
    Mat2 generator;
    double step;
};

/// Ordered product of exp(generator_k * step_k); later samples multiply from
/// the left.
Mat2 path_ordered_exponential(std::span<const ConnectionSample> samples);

/// Midpoint samples (A_theta(t_k), theta'(t_k) dt) of the connection along the
/// protocol window on a uniform grid of n cells.
std::vector<ConnectionSample> connection_samples(Configuration cfg, const PulseSet& p, const ModelParams& mp,
                                                 std::size_t n);

/// Coefficient transport of the dark pair, P exp(-int A d theta), re-expressed
/// in the (|0>, |1>) basis. Valid when the dark basis at both ends is (|1>, |0>),
/// i.e. for closed y-loops.
QubitGate dark_transport_qubit_basis(std::span<const ConnectionSample> samples);

/// [[cos b, -sin b], [sin b, cos b]] on (|0>, |1>).
QubitGate predicted_ry(double beta);
/// diag(1, e^{i phase}).
QubitGate predicted_rz(double phase);
/// (1/sqrt 2)[e^{i phase}(sin g + cos g)|1> + (sin g - cos g)|a>].
StateVector predicted_final_state_z(double gamma_f, double phase);
/// R_y^dag R_z(phi) R_y with R_y the Bloch quarter turn predicted_ry(pi/4).
QubitGate compose_rx(double phi);

}  // namespace holodot
