#include "holodot/qcore.hpp"

#include "gtest/gtest.h"
#include "testing.hpp"

using namespace holodot;

TEST(qcore, normalize_examples) {
    Vec5 v = Vec5::Zero();
    v(0) = 2.0;
    EXPECT_NEAR(std::abs(normalize(StateVector(v))[0] - 1.0), 0.0, 1e-15);

    v(1) = 2.0;
    const StateVector n = normalize(StateVector(v));
    EXPECT_NEAR(n[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(n[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(n.norm(), 1.0, 1e-15);

    EXPECT_THROW(normalize(StateVector(Vec5::Zero())), std::invalid_argument);
}

TEST(qcore, normalize_idempotent_property) {
    gen::Gen g(11);
    for (int i = 0; i < 200; ++i) {
        const StateVector s(g.vec5() * g.log_uniform(1e-3, 1e3));
        const StateVector once = normalize(s);
        const StateVector twice = normalize(once);
        EXPECT_NEAR(once.norm(), 1.0, 1e-9);
        EXPECT_LT((once.amplitudes() - twice.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(qcore, embed_qubit) {
    EXPECT_EQ(embed_qubit(1.0, 0.0).amplitudes(), StateVector::basis(kDown).amplitudes());
    EXPECT_EQ(embed_qubit(0.0, 1.0).amplitudes(), StateVector::basis(kUp).amplitudes());
    const double r = 1.0 / std::sqrt(2.0);
    const StateVector s = embed_qubit(r, kI * r);
    EXPECT_EQ(s[0], cplx(r, 0.0));
    EXPECT_EQ(s[1], cplx(0.0, r));
    EXPECT_EQ(s[2], cplx(0.0));
    EXPECT_THROW(embed_qubit(1.0, 1.0), std::invalid_argument);
}

TEST(qcore, project_qubit) {
    const auto down = project_qubit(DensityMatrix::pure(StateVector::basis(kDown)));
    EXPECT_EQ(down.block(0, 0), cplx(1.0));
    EXPECT_EQ(down.block(1, 1), cplx(0.0));
    EXPECT_NEAR(down.leakage, 0.0, 1e-15);

    const auto aux = project_qubit(DensityMatrix::pure(StateVector::basis(kAux)));
    EXPECT_EQ(aux.block, Mat2::Zero());
    EXPECT_NEAR(aux.leakage, 1.0, 1e-15);

    Eigen::Matrix<double, 5, 1> pops;
    pops << 0.5, 0, 0, 0.5, 0;
    const auto half = project_qubit(DensityMatrix::diagonal(pops));
    EXPECT_EQ(half.block(0, 0), cplx(0.5));
    EXPECT_NEAR(half.leakage, 0.5, 1e-15);
}

TEST(qcore, density_matrix_rejects_invalid) {
    Mat5 m = Mat5::Zero();
    m(0, 0) = 0.9;
    EXPECT_THROW(DensityMatrix{m}, std::invalid_argument);  // trace
    m(0, 0) = 1.0;
    m(0, 1) = 1e-6;
    EXPECT_THROW(DensityMatrix{m}, std::invalid_argument);  // Hermiticity
    m(1, 0) = 1e-6;
    EXPECT_NO_THROW(DensityMatrix{m});
    m(2, 2) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(DensityMatrix{m}, std::invalid_argument);
}

TEST(qcore, density_matrix_positivity) {
    Eigen::Matrix<double, 5, 1> pops;
    pops << 1.1, -0.1, 0, 0, 0;
    const DensityMatrix rho = DensityMatrix::diagonal(pops);
    EXPECT_NEAR(rho.min_eigenvalue(), -0.1, 1e-14);
    EXPECT_FALSE(rho.is_positive());
    EXPECT_TRUE(DensityMatrix::pure(StateVector::basis(kE2)).is_positive());
}

TEST(qcore, qubit_gate_unitarity) {
    Mat2 m;
    m << 1, 0, 0, 1.0 + 1e-6;
    EXPECT_THROW(QubitGate{m}, std::invalid_argument);
    const QubitGate x(pauli_x());
    EXPECT_NEAR(x.phase_insensitive_distance(QubitGate(Mat2(kI * pauli_x()))), 0.0, 1e-15);
    EXPECT_NEAR((x * x).phase_insensitive_distance(QubitGate::identity()), 0.0, 1e-15);
}

TEST(qcore, expm_examples) {
    const Mat5 id = dense_expm(Mat5(Mat5::Zero()), 3.0);
    EXPECT_LT(max_abs(Mat5(id - Mat5::Identity())), 1e-15);

    const double d[5] = {0.3, -1.2, 0.0, 2.5, 0.7};
    Mat5 diag = Mat5::Zero();
    for (int i = 0; i < 5; ++i) diag(i, i) = -kI * d[i];
    const double t = 1.7;
    const Mat5 e = dense_expm(diag, t);
    for (int i = 0; i < 5; ++i) EXPECT_LT(std::abs(e(i, i) - std::exp(-kI * d[i] * t)), 1e-14);

    Mat5 sx = Mat5::Zero();
    sx(0, 1) = sx(1, 0) = -kI;
    const Mat5 r = dense_expm(sx, t);
    EXPECT_LT(std::abs(r(0, 0) - std::cos(t)), 1e-14);
    EXPECT_LT(std::abs(r(1, 1) - std::cos(t)), 1e-14);
    EXPECT_LT(std::abs(r(0, 1) + kI * std::sin(t)), 1e-14);
    EXPECT_LT(std::abs(r(1, 0) + kI * std::sin(t)), 1e-14);
    EXPECT_LT(std::abs(r(2, 2) - 1.0), 1e-14);
}

TEST(qcore, expm_group_and_unitarity_property) {
    gen::Gen g(12);
    for (int i = 0; i < 100; ++i) {
        const Mat5 a = -kI * g.hermitian5(g.log_uniform(0.01, 3.0));
        const double t1 = g.uniform(-2, 2), t2 = g.uniform(-2, 2);
        const Mat5 lhs = dense_expm(a, t1) * dense_expm(a, t2);
        EXPECT_LT(max_abs(Mat5(lhs - dense_expm(a, t1 + t2))), 1e-10);
        const Mat5 u = dense_expm(a, t1);
        EXPECT_LT(max_abs(Mat5(u.adjoint() * u - Mat5::Identity())), 1e-10);
    }
}

TEST(qcore, expm_rejects_non_finite) {
    Mat5 m = Mat5::Zero();
    m(0, 0) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(dense_expm(m, 1.0), std::invalid_argument);
}
