#pragma once

// Time propagation: adaptive Dormand-Prince 5(4) for the Schrodinger and
// Lindblad equations, plus a midpoint matrix-exponential oracle.

#include "holodot/model.hpp"
#include "holodot/qcore.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace holodot {

using HamiltonianFn = std::function<Mat5(double)>;

struct PropagationSpec {
    double t_start = 0.0;
    double t_end = 1.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 2.0;       // ps
    double record_stride = 0.0;  // ps; 0 records the endpoints only

    void validate() const;
};

template <class Snapshot>
struct Trajectory {
    std::vector<double> times;
    std::vector<Snapshot> states;

    const Snapshot& back() const { return states.back(); }
    std::size_t size() const { return times.size(); }
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double min_step = 0.0;
};

struct SchrodingerResult {
    Trajectory<StateVector> trajectory;
    StepStats stats;
    double norm_drift = 0.0;  // |‖psi(t_end)‖ - 1|
};

struct LindbladResult {
    Trajectory<DensityMatrix> trajectory;
    StepStats stats;
    /// Integrated jump expectation per channel, int Tr(L rho L^dag) dt, in the
    /// order the channels were given.
    std::vector<double> jump_counts;
    double max_trace_drift = 0.0;
    double min_eigenvalue = 1.0;
    double max_hermiticity_fix = 0.0;  // largest deviation removed by symmetrization
};

/// d psi/dt = -i H(t) psi. Throws PhysicsError on step-size underflow.
SchrodingerResult schrodinger_propagate(const HamiltonianFn& h_of_t, const StateVector& psi0,
                                        const PropagationSpec& spec);

/// d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2).
/// Throws PhysicsError on step-size underflow or an eigenvalue below -1e-8.
LindbladResult lindblad_propagate(const HamiltonianFn& h_of_t, std::span<const LindbladChannel> channels,
                                  const DensityMatrix& rho0, const PropagationSpec& spec);

/// Product of exp(-i H(t_mid) dt) over uniform steps. dt is shrunk so that an
/// integer number of steps covers [t_start, t_end].
StateVector oracle_propagate(const HamiltonianFn& h_of_t, const StateVector& psi0, double dt, double t_start,
                             double t_end);

}  // namespace holodot
