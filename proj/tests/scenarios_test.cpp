#include "holodot/scenarios.hpp"

#include "gtest/gtest.h"
#include "testing.hpp"

#include <cmath>
#include <stdexcept>

using namespace holodot;

namespace {

DensityMatrix mixed_qubit() {
    Eigen::Matrix<double, 5, 1> p;
    p << 0.5, 0.5, 0, 0, 0;
    return DensityMatrix::diagonal(p);
}

// Fixed-step RK4 on the master equation, written out directly.
Mat5 rk4_lindblad(const Mat5& h, const std::vector<LindbladChannel>& channels, Mat5 rho, double t_end, double dt) {
    auto rhs = [&](const Mat5& r) {
        Mat5 out = -kI * (h * r - r * h);
        for (const auto& c : channels) {
            const Mat5 ldl = c.op.adjoint() * c.op;
            out += c.op * r * c.op.adjoint() - 0.5 * (ldl * r + r * ldl);
        }
        return out;
    };
    const int n = static_cast<int>(std::lround(t_end / dt));
    for (int i = 0; i < n; ++i) {
        const Mat5 k1 = rhs(rho);
        const Mat5 k2 = rhs(rho + 0.5 * dt * k1);
        const Mat5 k3 = rhs(rho + 0.5 * dt * k2);
        const Mat5 k4 = rhs(rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

Mat2 spin(double p_up) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = 1.0 - p_up;
    m(1, 1) = p_up;
    return m;
}

}  // namespace

// ---------------------------------------------------------------- init

TEST(scenarios, preparation_fidelity_examples) {
    EXPECT_EQ(preparation_fidelity(Polarization::sigma_minus, DensityMatrix::pure(StateVector::basis(kUp))), 1.0);
    EXPECT_EQ(preparation_fidelity(Polarization::sigma_plus, DensityMatrix::pure(StateVector::basis(kUp))), -1.0);
    EXPECT_EQ(preparation_fidelity(Polarization::sigma_minus, mixed_qubit()), 0.0);
}

TEST(scenarios, init_keeps_target_state) {
    ModelParams mp;
    const auto r = run_initialization(Polarization::sigma_minus, DensityMatrix::pure(StateVector::basis(kUp)),
                                      mp.gamma, 2000, mp);
    for (double f : r.fidelity) EXPECT_GE(f, 0.9995);
}

TEST(scenarios, init_without_field_is_constant) {
    ModelParams mp;
    const auto r = run_initialization(Polarization::sigma_minus, mixed_qubit(), 0.0, 4000, mp, 500);
    for (const auto& rho : r.trajectory.states) {
        EXPECT_NEAR(rho.population(kDown), 0.5, 1e-12);
        EXPECT_NEAR(rho.population(kUp), 0.5, 1e-12);
    }
}

TEST(scenarios, init_sigma_plus_pumps_to_down) {
    ModelParams mp;
    const auto r = run_initialization(Polarization::sigma_plus, mixed_qubit(), mp.gamma, 8000, mp, 1000);
    EXPECT_GT(r.fidelity.back(), 0.9);
    EXPECT_GT(r.trajectory.back().population(kDown), 0.9);
}

TEST(scenarios, init_fidelity_monotone_after_first_lifetime) {
    ModelParams mp;
    const auto r = run_initialization(Polarization::sigma_minus, mixed_qubit(), mp.gamma, 8000, mp, 100);
    EXPECT_LT(r.max_trace_drift, 1e-9);
    EXPECT_GT(r.min_eigenvalue, -1e-8);
    for (std::size_t i = 1; i < r.fidelity.size(); ++i) {
        if (r.trajectory.times[i] < 800) continue;
        EXPECT_GE(r.fidelity[i], r.fidelity[i - 1] - 1e-12) << r.trajectory.times[i];
    }
}

TEST(scenarios, init_matches_fixed_step_oracle) {
    ModelParams mp;
    const auto r = run_initialization(Polarization::sigma_minus, mixed_qubit(), mp.gamma, 8000, mp, 8000);
    FieldSample f;
    f.pump = mp.gamma;
    const Mat5 oracle = rk4_lindblad(hamiltonian_y(f, mp), lindblad_channels(mp), mixed_qubit().matrix(), 8000, 0.5);
    EXPECT_LT(max_abs(Mat5(r.trajectory.back().matrix() - oracle)), 1e-8);
    EXPECT_NEAR(r.fidelity.back(), preparation_fidelity(Polarization::sigma_minus, DensityMatrix(oracle)), 1e-8);
}

TEST(scenarios, init_rejects_bad_arguments) {
    ModelParams mp;
    EXPECT_THROW(run_initialization(Polarization::sigma_minus, mixed_qubit(), -1.0, 100, mp), std::invalid_argument);
    EXPECT_THROW(run_initialization(Polarization::sigma_minus, mixed_qubit(), 1e-3, 0.0, mp), std::invalid_argument);
}

// ---------------------------------------------------------------- sweeps

TEST(scenarios, sweep_grid_validation) {
    ModelParams mp;
    EXPECT_THROW(sweep_beta({}, {}, 100, mp), std::invalid_argument);
    EXPECT_THROW(sweep_beta({0, -1}, {}, 100, mp), std::invalid_argument);
    EXPECT_THROW(sweep_gamma_f({1, 1}, {}, 100, mp), std::invalid_argument);
}

TEST(scenarios, sweeps_start_at_zero_and_are_deterministic) {
    ModelParams mp;
    const std::vector<double> grid{0, 1, 2, 3, 6.5};
    const auto b1 = sweep_beta(grid, {}, 100, mp, 1);
    const auto b3 = sweep_beta(grid, {}, 100, mp, 3);
    const auto g1 = sweep_gamma_f(grid, {}, 100, mp, 1);
    const auto g3 = sweep_gamma_f(grid, {}, 100, mp, 3);
    ASSERT_EQ(b1.rows.size(), grid.size());
    EXPECT_EQ(b1.rows[0].angle, 0.0);
    EXPECT_EQ(g1.rows[0].angle, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(b1.rows[i].tau0_over_tau, grid[i]);
        EXPECT_EQ(b1.rows[i].angle, b3.rows[i].angle);
        EXPECT_EQ(g1.rows[i].angle, g3.rows[i].angle);
    }
    EXPECT_NEAR(g1.rows.back().angle, kPi / 4, 0.01 * kPi / 4);
}

// ---------------------------------------------------------------- parallel_map

TEST(scenarios, parallel_map_keeps_index_order) {
    const auto v = parallel_map(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<int>(i * i));
    EXPECT_TRUE(parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
}

TEST(scenarios, parallel_map_rethrows_lowest_index) {
    try {
        parallel_map(20, 4, [](std::size_t i) -> int {
            if (i == 7 || i == 13) throw std::runtime_error("fail " + std::to_string(i));
            return 0;
        });
        FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "fail 7");
    }
}

// ---------------------------------------------------------------- fidelity

TEST(scenarios, unitary_process_has_unit_fidelity_property) {
    gen::Gen g(71);
    for (int i = 0; i < 30; ++i) {
        const QubitGate u(g.unitary2());
        const auto d = gate_fidelity_detail(unitary_process(u), u, i);
        EXPECT_NEAR(d.six_state, 1.0, 1e-12);
        EXPECT_NEAR(d.sphere, 1.0, 1e-12);
        EXPECT_EQ(d.sphere_points, 400u);
    }
}

TEST(scenarios, fidelity_of_wrong_target) {
    // Average fidelity of a pi rotation against the identity is 1/3.
    const QubitProcess x = unitary_process(QubitGate(pauli_x()));
    EXPECT_NEAR(gate_fidelity(x, QubitGate::identity()), 1.0 / 3.0, 1e-12);
    const QubitGate h(dense_expm(Mat2(-0.5 * kI * pauli_y()), 0.3));
    // 1/3 + 2/3 cos^2(0.15)
    EXPECT_NEAR(gate_fidelity(unitary_process(h), QubitGate::identity()),
                1.0 / 3 + 2.0 / 3 * std::pow(std::cos(0.15), 2), 1e-12);
}

TEST(scenarios, fidelity_rules_agree_under_seed_rotation_property) {
    gen::Gen g(72);
    for (int i = 0; i < 20; ++i) {
        QubitProcess p = unitary_process(QubitGate(g.unitary2()));
        // Shrink toward the maximally mixed output: depolarizing with weight 0.2.
        for (int k : {0, 3}) p.images[k] = 0.8 * p.images[k] + 0.1 * Mat2::Identity();
        for (int k : {1, 2}) p.images[k] *= 0.8;
        const QubitGate target(g.unitary2());
        const auto a = gate_fidelity_detail(p, target, 0);
        const auto b = gate_fidelity_detail(p, target, 1234 + i);
        EXPECT_NEAR(a.six_state, a.sphere, 1e-12);
        EXPECT_NEAR(a.sphere, b.sphere, 1e-12);
    }
}

// ---------------------------------------------------------------- gates

TEST(scenarios, solve_y_delay_for_beta_roots) {
    ModelParams mp;
    const double r = solve_y_delay_for_beta(kPi / 4, {}, 100, mp);
    EXPECT_NEAR(beta_integral(make_y_pulseset(0.5, 0.5, 0.5, r * 100, 100), mp).angle, kPi / 4, 1e-9);
    EXPECT_THROW(solve_y_delay_for_beta(2.0, {}, 100, mp), std::invalid_argument);
}

TEST(scenarios, gate_segments_layout) {
    GateParams gp;
    const auto x = gate_segments(GateVariant::x_composite, gp);
    ASSERT_EQ(x.size(), 4u);
    EXPECT_EQ(x[0].cfg, Configuration::y);
    EXPECT_EQ(x[1].cfg, Configuration::z);
    EXPECT_EQ(x[2].cfg, Configuration::y);
    EXPECT_EQ(x[3].cfg, Configuration::y);
    EXPECT_EQ(x[1].pulses.stokes_phase, gp.rotation_angle);
    EXPECT_EQ(gate_segments(GateVariant::z_fractional, gp).at(0).cfg, Configuration::z);
    EXPECT_EQ(gate_segments(GateVariant::y_closed_loop, gp).size(), 1u);
    EXPECT_LT(gate_target(GateVariant::x_composite, gp).phase_insensitive_distance(compose_rx(gp.rotation_angle)),
              1e-15);
    EXPECT_STREQ(to_string(GateVariant::z_fractional), "z_fractional");
}

TEST(scenarios, z_gate_leaves_down_untouched) {
    GateParams gp;
    const GateRun run = simulate_gate(GateVariant::z_fractional, gp, false);
    EXPECT_GE(run.process.final_states[0](kDown, kDown).real(), 1.0 - 1e-6);
    EXPECT_NEAR(run.report.gamma_f, 0.777843416617127, 1e-9);
    EXPECT_GE(run.report.z_prediction_overlap, 0.0);
    EXPECT_LE(run.report.z_prediction_overlap, 1.0 + 1e-12);
}

TEST(scenarios, y_closed_loop_tracks_holonomy) {
    GateParams gp;
    const GateRun coherent = simulate_gate(GateVariant::y_closed_loop, gp, false);
    EXPECT_GT(coherent.report.fidelity, 0.99);
    EXPECT_LT(coherent.report.leakage_final, 1e-3);
    EXPECT_NEAR(coherent.report.fidelity, coherent.report.fidelity_sphere, 1e-4);
    EXPECT_TRUE(coherent.report.warnings.empty());

    const GateRun noisy = simulate_gate(GateVariant::y_closed_loop, gp, true);
    EXPECT_TRUE(noisy.report.with_decoherence);
    EXPECT_LE(noisy.report.fidelity, coherent.report.fidelity + 1e-9);
    for (const auto& rho : noisy.process.final_states) {
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-9);
    }
}

// The single pass ends in the auxiliary level, so most of the qubit leaks.
TEST(scenarios, y_single_pass_reports_leakage) {
    GateParams gp;
    const GateRun run = simulate_gate(GateVariant::y_single_pass, gp, false);
    EXPECT_GT(run.report.leakage_final, 0.9);
    EXPECT_FALSE(run.report.warnings.empty());
}

// ---------------------------------------------------------------- readout

// Each excitation of |1> returns to |1> or |0> with equal weight, so the photon
// number is geometric with mean 2 for |1> and 0 for |0>.
TEST(scenarios, readout_matches_branching_counts) {
    ModelParams mp;
    const ReadoutResult up = run_readout(spin(1.0), 40000, mp);
    const ReadoutResult down = run_readout(spin(0.0), 40000, mp);
    const ReadoutResult mix = run_readout(spin(0.5), 40000, mp);
    EXPECT_NEAR(up.expected_photons, 2.0, 1e-3);
    EXPECT_NEAR(up.photons_to_down, 1.0, 1e-3);
    EXPECT_NEAR(up.photons_to_up, 1.0, 1e-3);
    EXPECT_TRUE(up.shelving_complete);
    EXPECT_LT(down.expected_photons, 1e-3);
    EXPECT_NEAR(mix.expected_photons, 0.5 * (up.expected_photons + down.expected_photons), 1e-9);
}

TEST(scenarios, readout_shelving_incomplete_when_short) {
    ModelParams mp;
    const ReadoutResult r = run_readout(spin(1.0), 1000, mp);
    EXPECT_FALSE(r.shelving_complete);
    EXPECT_LT(r.expected_photons, 2.0);
    EXPECT_THROW(run_readout(spin(1.0), 0.0, mp), std::invalid_argument);
}
