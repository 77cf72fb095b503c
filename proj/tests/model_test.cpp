#include "holodot/model.hpp"

#include "gtest/gtest.h"
#include "testing.hpp"

#include <cmath>

using namespace holodot;

TEST(model, zeeman_examples) {
    EXPECT_EQ(zeeman_from_field(0.0, -0.21), 0.0);
    EXPECT_NEAR(zeeman_from_field(0.055, -0.21), 1.016e-3, 1e-6);
    EXPECT_NEAR(zeeman_from_field(0.110, -0.21), 2 * zeeman_from_field(0.055, -0.21), 1e-18);
    EXPECT_THROW(zeeman_from_field(-1.0, 2.0), std::invalid_argument);
}

TEST(model, params_validation) {
    ModelParams mp;
    EXPECT_NO_THROW(mp.validate());
    mp.delta = -1;
    EXPECT_THROW(mp.validate(), std::invalid_argument);
    mp = ModelParams{};
    mp.gamma = -1e-3;
    EXPECT_THROW(mp.validate(), std::invalid_argument);
}

TEST(model, field_free_y_is_diagonal) {
    ModelParams mp;
    mp.detuning_common = 0.1;
    mp.delta = 1e-3;
    const Mat5 h = hamiltonian_y(FieldSample{}, mp);
    Mat5 expected = Mat5::Zero();
    expected(3, 3) = -0.1;
    expected(4, 4) = -0.101;
    EXPECT_LT(max_abs(Mat5(h - expected)), 1e-17);
}

TEST(model, y_hamiltonian_exactly_hermitian) {
    gen::Gen g(31);
    ModelParams mp;
    for (int i = 0; i < 100; ++i) {
        const PulseSet p = make_y_pulseset(g.uniform(0, 1), g.uniform(0, 1), g.uniform(0, 1), g.uniform(0, 400), 100);
        const Mat5 h = build_h_y(g.uniform(-900, 900), p, mp);
        EXPECT_EQ(hermiticity_defect(h), 0.0);
    }
}

TEST(model, y_coupling_pattern) {
    ModelParams mp;
    const Mat5 h = hamiltonian_y(FieldSample{0.1, 0.2, 0.3, 0.0}, mp);
    for (int e : {kE1, kE2}) {
        EXPECT_EQ(h(e, kDown), cplx(-0.1));
        EXPECT_EQ(h(e, kUp), cplx(-0.2));
        EXPECT_EQ(h(e, kAux), cplx(-0.3));
    }
    EXPECT_EQ(h(kE1, kE2), cplx(0.0));
    EXPECT_EQ((h.topLeftCorner<3, 3>().cwiseAbs().maxCoeff()), 0.0);
}

TEST(model, y_annihilates_d1_at_equal_fields) {
    ModelParams mp;
    const double o = 0.37;
    const Mat5 h = hamiltonian_y(FieldSample{0.2, o, o, 0.0}, mp);
    const double th = kPi / 4;
    Vec5 d1 = Vec5::Zero();
    d1(kUp) = std::cos(th);
    d1(kAux) = -std::sin(th);
    EXPECT_LT((h * d1).norm(), 1e-16);
}

TEST(model, midpoint_reserved_for_z) {
    ModelParams mp;
    mp.detuning_common = -0.5 * mp.delta;
    try {
        hamiltonian_y(FieldSample{}, mp);
        FAIL() << "expected an error";
    } catch (const std::invalid_argument& e) {
        EXPECT_STREQ(e.what(), "midpoint tuning reserved for z-configuration");
    }
}

TEST(model, field_free_z_is_symmetric_detuning) {
    ModelParams mp;
    const PulseSet p = make_z_pulseset(0.5, 0.5, 650, 100, 0.7);
    const Mat5 h = build_h_z(1e5, p, mp);
    Mat5 expected = Mat5::Zero();
    expected(3, 3) = 0.5 * mp.delta;
    expected(4, 4) = -0.5 * mp.delta;
    EXPECT_LT(max_abs(Mat5(h - expected)), 1e-18);
}

TEST(model, z_real_at_zero_phase) {
    ModelParams mp;
    const PulseSet p = make_z_pulseset(0.5, 0.3, 650, 100, 0.0);
    const Mat5 h = build_h_z(-300, p, mp);
    EXPECT_EQ(h.imag().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT(max_abs(Mat5(h - h.transpose())), 1e-18);

    const PulseSet q = make_z_pulseset(0.5, 0.3, 650, 100, 1.1);
    const Mat5 hq = build_h_z(-300, q, mp);
    EXPECT_NEAR(std::arg(-hq(kE1, kUp)), -1.1, 1e-14);
}

TEST(model, z_annihilates_both_dark_states_symbolic) {
    // <e1|H|D2> = (delta/2)(cos phi / sqrt 2) - sin phi sqrt(Os^2 + Od^2) = 0
    ModelParams mp;
    const double os = 0.02, od = 0.03, chi = 0.4;
    const Mat5 h = hamiltonian_z(FieldSample{0, os, od, chi}, mp, -0.5 * mp.delta);
    const double th = std::atan2(os, od);
    const double ph = std::atan2(0.5 * mp.delta, std::sqrt(2 * (os * os + od * od)));
    Vec5 d1 = Vec5::Zero(), d2 = Vec5::Zero();
    d1(kUp) = std::cos(th) * std::exp(kI * chi);
    d1(kAux) = -std::sin(th);
    d2(kE1) = std::cos(ph) / std::sqrt(2.0);
    d2(kE2) = -std::cos(ph) / std::sqrt(2.0);
    d2(kAux) = std::sin(ph) * std::cos(th);
    d2(kUp) = std::sin(ph) * std::sin(th) * std::exp(kI * chi);
    EXPECT_LT((h * d1).norm(), 1e-16);
    EXPECT_LT((h * d2).norm(), 1e-16);
}

TEST(model, z_requires_pump_off) {
    ModelParams mp;
    const PulseSet p = make_y_pulseset(0.5, 0.5, 0.5, 150, 100);
    EXPECT_THROW(build_h_z(0, p, mp), std::invalid_argument);
}

TEST(model, lindblad_channel_set) {
    ModelParams mp;
    EXPECT_DOUBLE_EQ(1.0 / (2 * mp.gamma), 800.0);
    EXPECT_DOUBLE_EQ(mp.gamma_hh, 1e-9);
    EXPECT_DOUBLE_EQ(mp.gamma_ee, 1e-9);
    const auto ch = lindblad_channels(mp);
    ASSERT_EQ(ch.size(), 8u);
    const int expected[8][2] = {{kE1, kDown}, {kE1, kUp}, {kE2, kDown}, {kE2, kUp},
                                {kUp, kDown}, {kDown, kUp}, {kE2, kE1}, {kE1, kE2}};
    const double rates[8] = {mp.gamma, mp.gamma, mp.gamma, mp.gamma, mp.gamma_hh, mp.gamma_hh, mp.gamma_ee, mp.gamma_ee};
    for (std::size_t k = 0; k < 8; ++k) {
        EXPECT_EQ(ch[k].from, expected[k][0]);
        EXPECT_EQ(ch[k].to, expected[k][1]);
        EXPECT_DOUBLE_EQ(ch[k].rate, rates[k]);
        // exactly one nonzero entry, sqrt(rate) at (to, from)
        EXPECT_NEAR(std::abs(ch[k].op(ch[k].to, ch[k].from)), std::sqrt(rates[k]), 1e-18);
        EXPECT_EQ((ch[k].op.array() != cplx(0.0)).count(), 1);
    }
    // Total decay out of e1 is 2 gamma.
    double out_e1 = 0.0;
    for (const auto& c : ch) {
        if (c.from == kE1 && (c.to == kDown || c.to == kUp)) out_e1 += c.rate;
    }
    EXPECT_DOUBLE_EQ(out_e1, 2 * mp.gamma);
}

TEST(model, zero_rates_give_zero_operators) {
    ModelParams mp;
    mp.gamma = mp.gamma_hh = mp.gamma_ee = 0.0;
    const auto ch = lindblad_channels(mp);
    ASSERT_EQ(ch.size(), 8u);
    for (const auto& c : ch) EXPECT_EQ(c.op, Mat5::Zero());
}
