#include "holodot/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <stdexcept>

namespace holodot {

namespace {

constexpr double kTailWidths = 8.0;

void check_width(double width) {
    if (!(width > 0.0)) {
        throw std::invalid_argument(fmt::format("pulse width must be positive, got {}", width));
    }
}

double exponent(const GaussianComponent& c, double t) {
    const double x = (t - c.center) / c.width;
    return std::log(c.amp) - x * x;
}

}  // namespace

double gaussian(double t, double amp, double center, double width) {
    check_width(width);
    if (!(amp >= 0.0)) {
        throw std::invalid_argument(fmt::format("pulse amplitude must be non-negative, got {}", amp));
    }
    const double x = (t - center) / width;
    return amp * std::exp(-x * x);
}

Envelope::Envelope(std::vector<GaussianComponent> components) {
    for (const auto& c : components) {
        check_width(c.width);
        if (!(c.amp >= 0.0)) {
            throw std::invalid_argument(fmt::format("pulse amplitude must be non-negative, got {}", c.amp));
        }
        // Zero-amplitude components carry no field; dropping them keeps
        // is_zero() and log_value() exact.
        if (c.amp > 0.0) components_.push_back(c);
    }
}

Envelope Envelope::single(double amp, double center, double width) {
    return Envelope({GaussianComponent{amp, center, width}});
}

double Envelope::value(double t) const {
    double v = 0.0;
    for (const auto& c : components_) v += gaussian(t, c.amp, c.center, c.width);
    return v;
}

double Envelope::derivative(double t) const {
    double d = 0.0;
    for (const auto& c : components_) {
        d += gaussian(t, c.amp, c.center, c.width) * (-2.0 * (t - c.center) / (c.width * c.width));
    }
    return d;
}

double Envelope::log_value(double t) const {
    if (components_.empty()) return -std::numeric_limits<double>::infinity();
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& c : components_) m = std::max(m, exponent(c, t));
    double s = 0.0;
    for (const auto& c : components_) s += std::exp(exponent(c, t) - m);
    return m + std::log(s);
}

double Envelope::log_derivative(double t) const {
    if (components_.empty()) return 0.0;
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& c : components_) m = std::max(m, exponent(c, t));
    double weight_sum = 0.0;
    double acc = 0.0;
    for (const auto& c : components_) {
        const double w = std::exp(exponent(c, t) - m);
        weight_sum += w;
        acc += w * (-2.0 * (t - c.center) / (c.width * c.width));
    }
    return acc / weight_sum;
}

std::pair<double, double> Envelope::support() const {
    if (components_.empty()) return {0.0, 0.0};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : components_) {
        lo = std::min(lo, c.center - kTailWidths * c.width);
        hi = std::max(hi, c.center + kTailWidths * c.width);
    }
    return {lo, hi};
}

Envelope Envelope::scaled(double k) const {
    std::vector<GaussianComponent> out = components_;
    for (auto& c : out) c.amp *= k;
    return Envelope(std::move(out));
}

std::pair<double, double> PulseSet::window() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Envelope* e : {&pump, &stokes, &driving}) {
        if (e->is_zero()) continue;
        const auto [a, b] = e->support();
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    if (lo > hi) {
        // No field at all: a nominal window of +-(tau0 + 8 tau).
        lo = -(std::abs(delay) + kTailWidths * width);
        hi = -lo;
    }
    return {lo, hi};
}

PulseSet make_y_pulseset(double amp_p, double amp_s, double amp_d, double tau0, double tau) {
    check_width(tau);
    if (!(tau0 >= 0.0)) throw std::invalid_argument("delay tau0 must be non-negative");
    PulseSet p;
    p.pump = Envelope::single(amp_p, 0.0, tau);
    p.stokes = Envelope::single(amp_s, tau0, tau);
    p.driving = Envelope::single(amp_d, -tau0, tau);
    p.stokes_phase = 0.0;
    p.delay = tau0;
    p.width = tau;
    return p;
}

PulseSet make_z_pulseset(double amp_s, double amp_d, double tau0, double tau, double phi) {
    check_width(tau);
    if (!(tau0 >= 0.0)) throw std::invalid_argument("delay tau0 must be non-negative");
    PulseSet p;
    p.stokes = Envelope::single(amp_s, 0.0, tau);
    p.driving = Envelope({GaussianComponent{amp_d, -tau0, tau}, GaussianComponent{amp_d, 0.0, tau}});
    p.stokes_phase = phi;
    p.delay = tau0;
    p.width = tau;
    return p;
}

PulseSet make_y_closed_loop_pulseset(double amp_p, double amp_s, double amp_d, double tau0, double tau,
                                     double return_delay) {
    PulseSet p = make_y_pulseset(amp_p, amp_s, amp_d, tau0, tau);
    if (!(return_delay >= 0.0)) throw std::invalid_argument("return delay must be non-negative");
    // The last first-pass tail ends at tau0 + 8 tau; the return Stokes pulse
    // (centered at c - return_delay/2) starts its own 8 tau tail after that.
    const double center = tau0 + 2.0 * kTailWidths * tau + 0.5 * return_delay;
    p.stokes = Envelope({GaussianComponent{amp_s, tau0, tau},
                         GaussianComponent{amp_s, center - 0.5 * return_delay, tau}});
    p.driving = Envelope({GaussianComponent{amp_d, -tau0, tau},
                          GaussianComponent{amp_d, center + 0.5 * return_delay, tau}});
    return p;
}

}  // namespace holodot
