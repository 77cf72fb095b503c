#include "holodot/holonomy.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <functional>

namespace holodot {

namespace {

struct QuadratureOutcome {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
};

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

// Bisection on a single 30/61-point Gauss-Kronrod pair with an absolute
// tolerance. Boost's own adaptive driver stops on a relative criterion,
// which never triggers on panels holding only Gaussian-tail rounding noise.
void integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol, unsigned depth,
                        QuadratureOutcome& out) {
    double err = 0.0;
    const double half = 0.5 * (b - a);
    const double v = Kronrod::integrate(f, a, b, 0, 0.0, &err);
    out.evaluations += 61;
    err *= half;  // boost reports the error on the reference interval [-1, 1]
    if (err <= std::max(tol, 1e-13 * std::abs(v)) || depth == 0) {
        out.value += v;
        out.error += err;
        return;
    }
    const double mid = a + half;
    integrate_adaptive(f, a, mid, 0.5 * tol, depth - 1, out);
    integrate_adaptive(f, mid, b, 0.5 * tol, depth - 1, out);
}

QuadratureOutcome integrate_window(const std::function<double(double)>& f, double lo, double hi, double tau,
                                   const QuadratureSpec& spec) {
    QuadratureOutcome out;
    const double panel = spec.panel_width_over_tau * tau;
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / panel)));
    const double width = (hi - lo) / static_cast<double>(panels);
    for (std::size_t k = 0; k < panels; ++k) {
        const double a = lo + width * static_cast<double>(k);
        const double b = (k + 1 == panels) ? hi : a + width;
        integrate_adaptive(f, a, b, spec.abs_tol, spec.max_depth, out);
    }
    if (!(out.error <= spec.accept_tol) || !std::isfinite(out.value)) {
        throw PhysicsError(fmt::format("non-convergent quadrature: error estimate {:.3e} rad exceeds {:.1e}",
                                       out.error, spec.accept_tol));
    }
    return out;
}

Mat2 swap_qubit_order(const Mat2& m) {
    Mat2 s;
    s << 0.0, 1.0, 1.0, 0.0;
    return s * m * s;
}

}  // namespace

HolonomyResult beta_integral(const PulseSet& p, const ModelParams& mp, const QuadratureSpec& spec) {
    mp.validate();
    const auto [lo, hi] = p.window();
    const auto q = integrate_window(
        [&](double t) {
            const AngleSample a = angles_y(p, t);
            return std::sin(a.phi) * a.theta_rate;
        },
        lo, hi, p.width, spec);
    HolonomyResult r;
    r.signed_angle = q.value;
    r.angle = q.value;
    r.predicted_gate = predicted_ry(q.value);
    r.grid_points = q.evaluations;
    r.estimated_quadrature_error = q.error;
    return r;
}

HolonomyResult gamma_f_integral(const PulseSet& p, const ModelParams& mp, const QuadratureSpec& spec) {
    mp.validate();
    const auto [lo, hi] = p.window();
    const auto q = integrate_window(
        [&](double t) {
            const AngleSample a = angles_z(p, mp, t);
            return -std::sin(a.phi) * a.theta_rate;
        },
        lo, hi, p.width, spec);
    HolonomyResult r;
    r.signed_angle = q.value;
    r.angle = std::abs(q.value);
    r.predicted_gate = predicted_rz(p.stokes_phase);
    r.grid_points = q.evaluations;
    r.estimated_quadrature_error = q.error;
    return r;
}

Mat2 path_ordered_exponential(std::span<const ConnectionSample> samples) {
    Mat2 u = Mat2::Identity();
    for (const auto& s : samples) u = dense_expm(s.generator, s.step) * u;
    return u;
}

std::vector<ConnectionSample> connection_samples(Configuration cfg, const PulseSet& p, const ModelParams& mp,
                                                 std::size_t n) {
    if (n == 0) throw std::invalid_argument("connection_samples needs at least one cell");
    const auto [lo, hi] = p.window();
    const double dt = (hi - lo) / static_cast<double>(n);
    std::vector<ConnectionSample> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = lo + (static_cast<double>(k) + 0.5) * dt;
        const AngleSample a = protocol_angles(cfg, p, mp, t);
        const Mat2 gen = cfg == Configuration::y ? connection_y(a.phi) : connection_z(a.phi);
        out.push_back({gen, a.theta_rate * dt});
    }
    return out;
}

QubitGate dark_transport_qubit_basis(std::span<const ConnectionSample> samples) {
    Mat2 u = Mat2::Identity();
    for (const auto& s : samples) u = dense_expm(s.generator, -s.step) * u;
    return QubitGate(swap_qubit_order(u));
}

QubitGate predicted_ry(double beta) {
    Mat2 u;
    u << std::cos(beta), -std::sin(beta), std::sin(beta), std::cos(beta);
    return QubitGate(u);
}

QubitGate predicted_rz(double phase) {
    Mat2 u = Mat2::Identity();
    u(1, 1) = std::exp(kI * phase);
    return QubitGate(u);
}

StateVector predicted_final_state_z(double gamma_f, double phase) {
    const double s = std::sin(gamma_f), c = std::cos(gamma_f);
    Vec5 v = Vec5::Zero();
    v(kUp) = std::exp(kI * phase) * (s + c) / std::sqrt(2.0);
    v(kAux) = (s - c) / std::sqrt(2.0);
    return StateVector(v);
}

QubitGate compose_rx(double phi) {
    const QubitGate quarter = predicted_ry(0.25 * kPi);
    return quarter.adjoint() * predicted_rz(phi) * quarter;
}

}  // namespace holodot
