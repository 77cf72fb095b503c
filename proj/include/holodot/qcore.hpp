#pragma once

// Fixed-dimension complex linear algebra for the five-level dot.
//
// Basis order is global and never changes:
//   0 = |0>  (HH spin down, |3/2, 3/2>)
//   1 = |1>  (HH spin up,   |3/2,-3/2>)
//   2 = |a>  (ancillary light-hole |x->)
//   3 = |e1>
//   4 = |e2>

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace holodot {

using cplx = std::complex<double>;
using Vec5 = Eigen::Matrix<cplx, 5, 1>;
using Mat5 = Eigen::Matrix<cplx, 5, 5>;
using Vec2 = Eigen::Matrix<cplx, 2, 1>;
using Mat2 = Eigen::Matrix<cplx, 2, 2>;

inline constexpr int kDim = 5;

enum Level : int { kDown = 0, kUp = 1, kAux = 2, kE1 = 3, kE2 = 4 };

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Raised when a numerical physics check fails (positivity, stiffness, ...).
/// Distinct from std::invalid_argument, which signals bad caller input.
class PhysicsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StateVector {
public:
    StateVector() : amps_(Vec5::Zero()) {}
    explicit StateVector(const Vec5& amps) : amps_(amps) {}

    static StateVector basis(int level);

    const Vec5& amplitudes() const { return amps_; }
    cplx operator[](int i) const { return amps_(i); }
    double norm() const { return amps_.norm(); }
    double population(int i) const { return std::norm(amps_(i)); }

    /// <this|other>
    cplx overlap(const StateVector& other) const { return amps_.dot(other.amps_); }

    Mat5 projector() const { return amps_ * amps_.adjoint(); }

private:
    Vec5 amps_;
};

/// 5x5 density matrix. Construction checks Hermiticity (1e-12, max entry) and
/// unit trace (1e-9). Positivity is checked separately by callers that care,
/// because propagation has its own (looser) abort threshold.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-9;
    static constexpr double kPositivityTol = 1e-10;

    explicit DensityMatrix(const Mat5& m);
    static DensityMatrix pure(const StateVector& s);
    static DensityMatrix diagonal(const Eigen::Matrix<double, 5, 1>& populations);

    const Mat5& matrix() const { return m_; }
    double population(int i) const { return m_(i, i).real(); }
    double trace() const { return m_.trace().real(); }
    double min_eigenvalue() const;
    bool is_positive(double tol = kPositivityTol) const { return min_eigenvalue() >= -tol; }

private:
    Mat5 m_;
};

/// 2x2 unitary on span{|0>, |1>}.
class QubitGate {
public:
    static constexpr double kUnitaryTol = 1e-10;

    explicit QubitGate(const Mat2& u);
    static QubitGate identity() { return QubitGate(Mat2::Identity()); }

    const Mat2& matrix() const { return u_; }
    QubitGate adjoint() const { return QubitGate(u_.adjoint()); }
    QubitGate operator*(const QubitGate& rhs) const { return QubitGate(u_ * rhs.u_); }

    /// Distance to `other` after removing the best global phase, as the max
    /// entry deviation.
    double phase_insensitive_distance(const QubitGate& other) const;

private:
    Mat2 u_;
};

struct QubitBlock {
    Mat2 block;      // {|0>,|1>} block of rho, not renormalized
    double leakage;  // 1 - (rho_00 + rho_11)
};

StateVector normalize(const StateVector& s);
StateVector embed_qubit(cplx alpha, cplx beta);
QubitBlock project_qubit(const DensityMatrix& rho);

/// exp(scale * m). Throws std::invalid_argument on non-finite input.
Mat5 dense_expm(const Mat5& m, double scale);
Mat2 dense_expm(const Mat2& m, double scale);

double max_abs(const Mat5& m);
double max_abs(const Mat2& m);
double hermiticity_defect(const Mat5& m);

/// Pauli matrices on the qubit block.
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

}  // namespace holodot
