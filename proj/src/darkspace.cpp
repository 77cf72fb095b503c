#include "holodot/darkspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace holodot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// atan(exp(x)) without overflow, including x = +-inf.
double atan_exp(double x) {
    if (x <= 0.0) return std::atan(std::exp(x));
    return 0.5 * kPi - std::atan(std::exp(-x));
}

double log_sum_exp(double a, double b) {
    const double m = std::max(a, b);
    if (m == -kInf) return -kInf;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// theta and its analytic rate from the Stokes and driving log-envelopes.
std::pair<double, double> theta_from_logs(const PulseSet& p, double t) {
    if (p.stokes.is_zero() && p.driving.is_zero()) {
        throw std::invalid_argument("mixing angle theta undefined: Stokes and driving envelopes are both zero");
    }
    const double ls = p.stokes.log_value(t);
    const double ld = p.driving.log_value(t);
    double ratio_log;
    if (ls == -kInf) {
        ratio_log = -kInf;
    } else if (ld == -kInf) {
        ratio_log = kInf;
    } else {
        ratio_log = ls - ld;
    }
    const double theta = atan_exp(ratio_log);
    double rate = 0.0;
    if (std::isfinite(ratio_log)) {
        const double dlog = p.stokes.log_derivative(t) - p.driving.log_derivative(t);
        rate = dlog / (2.0 * std::cosh(ratio_log));
    }
    return {theta, rate};
}

StateVector column(const Vec5& v) { return StateVector(v); }

}  // namespace

double mixing_theta(double omega_s, double omega_d, std::optional<double> limit) {
    if (omega_s < 0.0 || omega_d < 0.0) throw std::invalid_argument("field amplitudes must be non-negative");
    if (omega_s == 0.0 && omega_d == 0.0) {
        if (limit) return *limit;
        throw std::invalid_argument("mixing angle theta undefined for vanishing fields");
    }
    return std::atan2(omega_s, omega_d);
}

double mixing_phi_y(double omega_p, double omega_s, double omega_d, std::optional<double> limit) {
    if (omega_p < 0.0 || omega_s < 0.0 || omega_d < 0.0) {
        throw std::invalid_argument("field amplitudes must be non-negative");
    }
    if (omega_p == 0.0 && omega_s == 0.0 && omega_d == 0.0) {
        if (limit) return *limit;
        throw std::invalid_argument("mixing angle phi undefined for vanishing fields");
    }
    return std::atan2(omega_p, std::hypot(omega_s, omega_d));
}

double mixing_phi_z(double delta, double omega_s, double omega_d) {
    return std::atan2(0.5 * delta, std::sqrt(2.0) * std::hypot(omega_s, omega_d));
}

DarkPair dark_states_y(double theta, double phi) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    Vec5 d1 = Vec5::Zero();
    d1(kUp) = ct;
    d1(kAux) = -st;
    Vec5 d2 = Vec5::Zero();
    d2(kDown) = cp;
    d2(kUp) = -sp * st;
    d2(kAux) = -sp * ct;
    return {column(d1), column(d2)};
}

DarkPair dark_states_z(double theta, double phi, double stokes_phase) {
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const cplx ph = std::exp(kI * stokes_phase);
    Vec5 d1 = Vec5::Zero();
    d1(kUp) = ct * ph;
    d1(kAux) = -st;
    Vec5 d2 = Vec5::Zero();
    d2(kE1) = cp / std::sqrt(2.0);
    d2(kE2) = -cp / std::sqrt(2.0);
    d2(kAux) = sp * ct;
    d2(kUp) = sp * st * ph;
    return {column(d1), column(d2)};
}

Mat2 connection_y(double phi) { return -kI * std::sin(phi) * pauli_y(); }

Mat2 connection_z(double phi) { return kI * std::sin(phi) * pauli_y(); }

Mat2 connection_numeric(const BasisFamily& basis_at, double theta, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
    const DarkPair mid = basis_at(theta);
    const DarkPair plus = basis_at(theta + h);
    const DarkPair minus = basis_at(theta - h);
    const std::array<const StateVector*, 2> at{&mid.d1, &mid.d2};
    const std::array<Vec5, 2> deriv{(plus.d1.amplitudes() - minus.d1.amplitudes()) / (2.0 * h),
                                    (plus.d2.amplitudes() - minus.d2.amplitudes()) / (2.0 * h)};
    Mat2 a;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) a(i, j) = at[i]->amplitudes().dot(deriv[j]);
    }
    return 0.5 * (a - a.adjoint());
}

Mat2 connection_richardson(const BasisFamily& basis_at, double theta, double h) {
    return (4.0 * connection_numeric(basis_at, theta, 0.5 * h) - connection_numeric(basis_at, theta, h)) / 3.0;
}

std::pair<double, double> darkness_residual(const Mat5& h, const DarkPair& pair) {
    return {(h * pair.d1.amplitudes()).norm(), (h * pair.d2.amplitudes()).norm()};
}

AngleSample angles_y(const PulseSet& p, double t) {
    const auto [theta, rate] = theta_from_logs(p, t);
    const double lp = p.pump.log_value(t);
    const double lsd = log_sum_exp(2.0 * p.stokes.log_value(t), 2.0 * p.driving.log_value(t));
    double tan_log;
    if (lp == -kInf) {
        tan_log = -kInf;
    } else {
        tan_log = lp - 0.5 * lsd;
    }
    return {theta, atan_exp(tan_log), rate};
}

AngleSample angles_z(const PulseSet& p, const ModelParams& mp, double t) {
    const auto [theta, rate] = theta_from_logs(p, t);
    const double lsd = log_sum_exp(2.0 * p.stokes.log_value(t), 2.0 * p.driving.log_value(t));
    const double tan_log = std::log(0.5 * mp.delta) - 0.5 * std::log(2.0) - 0.5 * lsd;
    return {theta, atan_exp(tan_log), rate};
}

AngleSample protocol_angles(Configuration cfg, const PulseSet& p, const ModelParams& mp, double t) {
    return cfg == Configuration::y ? angles_y(p, t) : angles_z(p, mp, t);
}

DarkPair protocol_dark_pair(Configuration cfg, const PulseSet& p, const ModelParams& mp, double t) {
    const AngleSample a = protocol_angles(cfg, p, mp, t);
    return cfg == Configuration::y ? dark_states_y(a.theta, a.phi) : dark_states_z(a.theta, a.phi, p.stokes_phase);
}

double adiabaticity_ratio(Configuration cfg, const PulseSet& p, const ModelParams& mp, double t) {
    const double dt = 1e-4 * p.width;
    const DarkPair mid = protocol_dark_pair(cfg, p, mp, t);
    const DarkPair plus = protocol_dark_pair(cfg, p, mp, t + dt);
    const DarkPair minus = protocol_dark_pair(cfg, p, mp, t - dt);

    Eigen::Matrix<cplx, 5, 2> basis;
    basis.col(0) = mid.d1.amplitudes();
    basis.col(1) = mid.d2.amplitudes();
    Eigen::Matrix<cplx, 5, 2> rate;
    rate.col(0) = (plus.d1.amplitudes() - minus.d1.amplitudes()) / (2.0 * dt);
    rate.col(1) = (plus.d2.amplitudes() - minus.d2.amplitudes()) / (2.0 * dt);
    const Eigen::Matrix<cplx, 5, 2> leak = rate - basis * (basis.adjoint() * rate);

    // Standard adiabatic condition per eigenvector: |<v_k| d/dt D>| / |E_k|.
    // Null eigenvectors (the dark pair and any decoupled level) are skipped.
    const Mat5 h = build_h(cfg, t, p, mp);
    Eigen::SelfAdjointEigenSolver<Mat5> es(h);
    const double null_tol = 1e-12 * (1.0 + max_abs(h));
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        const double e = std::abs(es.eigenvalues()(k));
        const double c = (es.eigenvectors().col(k).adjoint() * leak).norm();
        if (e <= null_tol) {
            if (c > 1e-9) return kInf;
            continue;
        }
        worst = std::max(worst, c / e);
    }
    return worst;
}

double bright_splitting_z(double delta, double omega_s, double omega_d) {
    return 2.0 * std::sqrt(2.0 * (omega_s * omega_s + omega_d * omega_d) + 0.25 * delta * delta);
}

}  // namespace holodot
