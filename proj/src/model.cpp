#include "holodot/model.hpp"

#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace holodot {

namespace {

constexpr double kBohrMagneton = 9.2740e-24;  // J/T
constexpr double kHbar = 1.0546e-34;          // J s
constexpr double kPerSecondToPerPs = 1e-12;

void couple(Mat5& h, int excited, int ground, cplx amplitude) {
    h(excited, ground) += -amplitude;
    h(ground, excited) += -std::conj(amplitude);
}

}  // namespace

void ModelParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument(fmt::format("delta must be positive, got {}", delta));
    }
    if (!std::isfinite(detuning_common)) throw std::invalid_argument("detuning_common must be finite");
    if (!(gamma >= 0.0)) throw std::invalid_argument(fmt::format("gamma must be >= 0, got {}", gamma));
    if (!(gamma_hh >= 0.0)) throw std::invalid_argument(fmt::format("gamma_hh must be >= 0, got {}", gamma_hh));
    if (!(gamma_ee >= 0.0)) throw std::invalid_argument(fmt::format("gamma_ee must be >= 0, got {}", gamma_ee));
}

double zeeman_from_field(double b_field_tesla, double g_factor) {
    if (!(b_field_tesla >= 0.0)) throw std::invalid_argument("magnetic field must be non-negative");
    return std::abs(g_factor) * kBohrMagneton * b_field_tesla / kHbar * kPerSecondToPerPs;
}

FieldSample sample_fields(const PulseSet& p, double t) {
    return FieldSample{p.pump(t), p.stokes(t), p.driving(t), p.stokes_phase};
}

Mat5 hamiltonian_y(const FieldSample& f, const ModelParams& mp) {
    const double d0 = mp.detuning_common;
    if (std::abs(d0 + 0.5 * mp.delta) <= 1e-15 * std::max(1.0, mp.delta)) {
        throw std::invalid_argument("midpoint tuning reserved for z-configuration");
    }
    Mat5 h = Mat5::Zero();
    h(kE1, kE1) = -d0;
    h(kE2, kE2) = -(d0 + mp.delta);
    for (int e : {kE1, kE2}) {
        couple(h, e, kDown, f.pump);
        couple(h, e, kUp, f.stokes);
        couple(h, e, kAux, f.driving);
    }
    return h;
}

Mat5 hamiltonian_z(const FieldSample& f, const ModelParams& mp, double detuning_s) {
    Mat5 h = Mat5::Zero();
    h(kE1, kE1) = -detuning_s;
    h(kE2, kE2) = -(detuning_s + mp.delta);
    const cplx stokes = f.stokes * std::exp(-kI * f.stokes_phase);
    for (int e : {kE1, kE2}) {
        couple(h, e, kAux, f.driving);
        couple(h, e, kUp, stokes);
    }
    return h;
}

Mat5 build_h_y(double t, const PulseSet& p, const ModelParams& mp) {
    return hamiltonian_y(sample_fields(p, t), mp);
}

Mat5 build_h_z(double t, const PulseSet& p, const ModelParams& mp) {
    if (!p.pump.is_zero()) {
        throw std::invalid_argument("z-configuration requires an identically zero pump envelope");
    }
    return hamiltonian_z(sample_fields(p, t), mp, -0.5 * mp.delta);
}

Mat5 build_h(Configuration cfg, double t, const PulseSet& p, const ModelParams& mp) {
    return cfg == Configuration::y ? build_h_y(t, p, mp) : build_h_z(t, p, mp);
}

LindbladChannel make_channel(std::string name, int from, int to, double rate) {
    if (!(rate >= 0.0)) throw std::invalid_argument("channel rate must be non-negative");
    LindbladChannel c{std::move(name), from, to, rate, Mat5::Zero()};
    c.op(to, from) = std::sqrt(rate);
    return c;
}

std::vector<LindbladChannel> lindblad_channels(const ModelParams& mp) {
    return {
        make_channel("e1->0", kE1, kDown, mp.gamma),
        make_channel("e1->1", kE1, kUp, mp.gamma),
        make_channel("e2->0", kE2, kDown, mp.gamma),
        make_channel("e2->1", kE2, kUp, mp.gamma),
        make_channel("1->0", kUp, kDown, mp.gamma_hh),
        make_channel("0->1", kDown, kUp, mp.gamma_hh),
        make_channel("e2->e1", kE2, kE1, mp.gamma_ee),
        make_channel("e1->e2", kE1, kE2, mp.gamma_ee),
    };
}

}  // namespace holodot
