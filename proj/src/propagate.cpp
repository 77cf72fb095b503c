#include "holodot/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace holodot {

namespace {

constexpr double kPositivityAbort = -1e-8;
constexpr std::size_t kMaxChannels = 16;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants (Hairer & Wanner, DOPRI5).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

using JumpVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxChannels, 1>;

struct LindbladState {
    Mat5 rho;
    JumpVec jumps;
};

LindbladState operator+(const LindbladState& a, const LindbladState& b) { return {a.rho + b.rho, a.jumps + b.jumps}; }
LindbladState operator*(double s, const LindbladState& a) { return {s * a.rho, s * a.jumps}; }

template <class Derived>
double scaled_sq_sum(const Eigen::MatrixBase<Derived>& err, const Eigen::MatrixBase<Derived>& y0,
                     const Eigen::MatrixBase<Derived>& y1, double atol, double rtol, std::size_t& count) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i)) / sc;
        acc += r * r;
    }
    count += static_cast<std::size_t>(err.size());
    return acc;
}

double error_norm(const Vec5& err, const Vec5& y0, const Vec5& y1, double atol, double rtol) {
    std::size_t n = 0;
    const double s = scaled_sq_sum(err, y0, y1, atol, rtol, n);
    return std::sqrt(s / static_cast<double>(n));
}

double error_norm(const LindbladState& err, const LindbladState& y0, const LindbladState& y1, double atol,
                  double rtol) {
    std::size_t n = 0;
    double s = scaled_sq_sum(err.rho, y0.rho, y1.rho, atol, rtol, n);
    if (err.jumps.size() > 0) s += scaled_sq_sum(err.jumps, y0.jumps, y1.jumps, atol, rtol, n);
    return std::sqrt(s / static_cast<double>(n));
}

std::vector<double> record_times(const PropagationSpec& spec) {
    std::vector<double> out;
    if (spec.record_stride > 0.0) {
        for (std::size_t k = 1;; ++k) {
            const double t = spec.t_start + spec.record_stride * static_cast<double>(k);
            if (t >= spec.t_end - 1e-9 * spec.record_stride) break;
            out.push_back(t);
        }
    }
    out.push_back(spec.t_end);
    return out;
}

// Integrates y' = f(t, y) over spec, calling post(t, y) after each accepted
// step (it may adjust y in place) and record(t, y) at t_start, at every
// record time and at t_end.
template <class State, class Rhs, class Post, class Record>
StepStats integrate(State y, const Rhs& f, Post&& post, Record&& record, const PropagationSpec& spec) {
    StepStats stats;
    stats.min_step = spec.t_end - spec.t_start;
    double t = spec.t_start;
    double h = std::min(spec.max_step, 1e-2 * (spec.t_end - spec.t_start));
    double err_prev = 1e-4;
    bool last_rejected = false;
    record(t, y);

    for (double target : record_times(spec)) {
        while (t < target) {
            const bool hits_target = t + h >= target;
            const double step = hits_target ? target - t : h;
            if (step < 1e-13 * std::max(1.0, std::abs(t))) {
                throw PhysicsError(fmt::format("stiffness/tolerance failure: step size underflow at t = {:.6f} ps", t));
            }
            const State k1 = f(t, y);
            const State k2 = f(t + c2 * step, y + (step * a21) * k1);
            const State k3 = f(t + c3 * step, y + (step * a31) * k1 + (step * a32) * k2);
            const State k4 = f(t + c4 * step, y + (step * a41) * k1 + (step * a42) * k2 + (step * a43) * k3);
            const State k5 = f(t + c5 * step,
                               y + (step * a51) * k1 + (step * a52) * k2 + (step * a53) * k3 + (step * a54) * k4);
            const State k6 = f(t + step, y + (step * a61) * k1 + (step * a62) * k2 + (step * a63) * k3 +
                                             (step * a64) * k4 + (step * a65) * k5);
            const State y_new =
                y + (step * b1) * k1 + (step * b3) * k3 + (step * b4) * k4 + (step * b5) * k5 + (step * b6) * k6;
            const State k7 = f(t + step, y_new);
            const State y_err = (step * e1) * k1 + (step * e3) * k3 + (step * e4) * k4 + (step * e5) * k5 +
                                (step * e6) * k6 + (step * e7) * k7;
            const double err = std::max(error_norm(y_err, y, y_new, spec.abs_tol, spec.rel_tol), 1e-16);

            if (err <= 1.0) {
                t = hits_target ? target : t + step;
                y = y_new;
                post(t, y);
                ++stats.accepted;
                stats.min_step = std::min(stats.min_step, step);
                double fac = kSafety * std::pow(err, -kAlpha) * std::pow(err_prev, kBeta);
                fac = std::clamp(fac, kFacMin, last_rejected ? 1.0 : kFacMax);
                // A step shortened to land on a record time says nothing about
                // the natural step size; keep h unless the error asks to shrink.
                h = hits_target ? std::max(h, step * fac) : step * fac;
                h = std::min(h, spec.max_step);
                err_prev = err;
                last_rejected = false;
            } else {
                ++stats.rejected;
                h = step * std::max(kFacMin, kSafety * std::pow(err, -kAlpha));
                last_rejected = true;
            }
        }
        record(t, y);
    }
    return stats;
}

}  // namespace

void PropagationSpec::validate() const {
    if (!(t_end > t_start)) throw std::invalid_argument("propagation requires t_end > t_start");
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw std::invalid_argument("rel_tol must lie in (0, 1e-2]");
    if (!(abs_tol > 0.0 && abs_tol <= 1e-2)) throw std::invalid_argument("abs_tol must lie in (0, 1e-2]");
    if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
    if (!(record_stride >= 0.0)) throw std::invalid_argument("record_stride must be non-negative");
}

SchrodingerResult schrodinger_propagate(const HamiltonianFn& h_of_t, const StateVector& psi0,
                                        const PropagationSpec& spec) {
    spec.validate();
    if (std::abs(psi0.norm() - 1.0) > 1e-9) throw std::invalid_argument("initial state must be normalized");
    SchrodingerResult out;
    auto rhs = [&](double t, const Vec5& psi) -> Vec5 { return -kI * (h_of_t(t) * psi); };
    auto post = [](double, Vec5&) {};
    auto record = [&](double t, const Vec5& psi) {
        out.trajectory.times.push_back(t);
        out.trajectory.states.emplace_back(psi);
    };
    out.stats = integrate<Vec5>(psi0.amplitudes(), rhs, post, record, spec);
    out.norm_drift = std::abs(out.trajectory.back().norm() - 1.0);
    return out;
}

LindbladResult lindblad_propagate(const HamiltonianFn& h_of_t, std::span<const LindbladChannel> channels,
                                  const DensityMatrix& rho0, const PropagationSpec& spec) {
    spec.validate();
    if (channels.size() > kMaxChannels) {
        throw std::invalid_argument(fmt::format("at most {} Lindblad channels supported", kMaxChannels));
    }
    if (rho0.min_eigenvalue() < -DensityMatrix::kPositivityTol) {
        throw std::invalid_argument("initial density matrix is not positive semidefinite");
    }
    const auto n = static_cast<Eigen::Index>(channels.size());
    // Every channel is sqrt(rate)|to><from|, so L rho L^dag = rate rho_ff |to><to|
    // and sum_k L_k^dag L_k is diagonal.
    Eigen::Matrix<double, 5, 1> decay = Eigen::Matrix<double, 5, 1>::Zero();
    for (const auto& c : channels) {
        if (c.from < 0 || c.from >= kDim || c.to < 0 || c.to >= kDim) {
            throw std::invalid_argument(fmt::format("channel '{}' has out-of-range levels", c.name));
        }
        decay(c.from) += c.rate;
    }

    LindbladResult out;
    auto rhs = [&](double t, const LindbladState& s) -> LindbladState {
        const Mat5 h = h_of_t(t);
        Mat5 d = -kI * (h * s.rho - s.rho * h);
        for (int i = 0; i < kDim; ++i) {
            for (int j = 0; j < kDim; ++j) d(i, j) -= 0.5 * (decay(i) + decay(j)) * s.rho(i, j);
        }
        JumpVec rates(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const LindbladChannel& c = channels[static_cast<std::size_t>(k)];
            const double r = c.rate * s.rho(c.from, c.from).real();
            d(c.to, c.to) += r;
            rates(k) = r;
        }
        return {d, rates};
    };
    auto post = [&](double t, LindbladState& s) {
        const Mat5 sym = 0.5 * (s.rho + s.rho.adjoint());
        out.max_hermiticity_fix = std::max(out.max_hermiticity_fix, max_abs(Mat5(sym - s.rho)));
        s.rho = sym;
        out.max_trace_drift = std::max(out.max_trace_drift, std::abs(s.rho.trace().real() - 1.0));
        Eigen::SelfAdjointEigenSolver<Mat5> es(s.rho, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        out.min_eigenvalue = std::min(out.min_eigenvalue, lo);
        if (lo < kPositivityAbort) {
            throw PhysicsError(fmt::format("positivity violation: eigenvalue {:.3e} at t = {:.6f} ps", lo, t));
        }
    };
    auto record = [&](double t, const LindbladState& s) {
        out.trajectory.times.push_back(t);
        out.trajectory.states.emplace_back(s.rho);
    };
    LindbladState start{rho0.matrix(), JumpVec::Zero(n)};
    out.min_eigenvalue = rho0.min_eigenvalue();
    LindbladState last = start;
    auto record_and_keep = [&](double t, const LindbladState& s) {
        record(t, s);
        last = s;
    };
    out.stats = integrate<LindbladState>(start, rhs, post, record_and_keep, spec);
    out.jump_counts.assign(last.jumps.data(), last.jumps.data() + last.jumps.size());
    return out;
}

StateVector oracle_propagate(const HamiltonianFn& h_of_t, const StateVector& psi0, double dt, double t_start,
                             double t_end) {
    if (!(dt > 0.0)) throw std::invalid_argument("oracle step dt must be positive");
    if (!(t_end > t_start)) throw std::invalid_argument("oracle requires t_end > t_start");
    const auto steps = static_cast<std::size_t>(std::ceil((t_end - t_start) / dt - 1e-9));
    const double h = (t_end - t_start) / static_cast<double>(steps);
    Vec5 psi = psi0.amplitudes();
    for (std::size_t k = 0; k < steps; ++k) {
        const double mid = t_start + (static_cast<double>(k) + 0.5) * h;
        psi = dense_expm(Mat5(-kI * h_of_t(mid)), h) * psi;
    }
    return StateVector(psi);
}

}  // namespace holodot
