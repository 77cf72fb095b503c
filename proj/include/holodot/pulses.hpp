#pragma once

// Laser envelopes. Time in ps, envelopes are half Rabi frequencies in rad/ps
// and enter the Hamiltonians as-is.

#include <utility>
#include <vector>

namespace holodot {

/// amp * exp(-(t - center)^2 / width^2). Throws if width <= 0 or amp < 0.
double gaussian(double t, double amp, double center, double width);

struct GaussianComponent {
    double amp;     // rad/ps
    double center;  // ps
    double width;   // ps
};

/// Sum of Gaussian components; an empty sum is the identically-zero field.
///
/// Besides the plain value, the envelope exposes its logarithm and logarithmic
/// derivative. Ratios of far-separated Gaussians underflow in linear space long
/// before the ratio itself becomes extreme, so mixing angles are evaluated in
/// log space.
class Envelope {
public:
    Envelope() = default;
    explicit Envelope(std::vector<GaussianComponent> components);

    static Envelope single(double amp, double center, double width);

    double operator()(double t) const { return value(t); }
    double value(double t) const;
    double derivative(double t) const;

    /// ln(value(t)); -infinity for the zero envelope.
    double log_value(double t) const;
    /// value'(t) / value(t), evaluated without forming either factor.
    double log_derivative(double t) const;

    bool is_zero() const { return components_.empty(); }
    const std::vector<GaussianComponent>& components() const { return components_; }

    /// Support where every component exceeds 1e-27 of its peak: [min(c) - 8w, max(c) + 8w].
    std::pair<double, double> support() const;

    /// Envelope with every amplitude multiplied by k.
    Envelope scaled(double k) const;

private:
    std::vector<GaussianComponent> components_;
};

struct PulseSet {
    Envelope pump;
    Envelope stokes;
    Envelope driving;
    double stokes_phase = 0.0;  // rad
    double delay = 0.0;         // tau0, ps
    double width = 1.0;         // tau, ps

    /// Union of the envelopes' supports.
    std::pair<double, double> window() const;
};

/// Driving at -tau0, pump at 0, Stokes at +tau0 (counterintuitive STIRAP order).
PulseSet make_y_pulseset(double amp_p, double amp_s, double amp_d, double tau0, double tau);

/// Fractional STIRAP: pump off, Stokes at 0, driving = Gaussian at -tau0 plus
/// Gaussian at 0, so that the Stokes/driving ratio freezes at amp_s/amp_d.
PulseSet make_z_pulseset(double amp_s, double amp_d, double tau0, double tau, double phi);

/// make_y_pulseset followed by a return pass with the pump off: a Stokes pulse
/// then a driving pulse (separated by `return_delay`), which carries the
/// ancilla back to |1> while the pump-free connection vanishes. The return
/// pass is centered far enough after the first pass that the tails do not
/// overlap above 1e-27.
PulseSet make_y_closed_loop_pulseset(double amp_p, double amp_s, double amp_d, double tau0, double tau,
                                     double return_delay);

}  // namespace holodot
