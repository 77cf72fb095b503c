#include "holodot/qcore.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <fmt/format.h>

namespace holodot {

StateVector StateVector::basis(int level) {
    if (level < 0 || level >= kDim) {
        throw std::invalid_argument(fmt::format("basis index {} out of range", level));
    }
    Vec5 v = Vec5::Zero();
    v(level) = 1.0;
    return StateVector(v);
}

DensityMatrix::DensityMatrix(const Mat5& m) : m_(m) {
    if (!m.allFinite()) {
        throw std::invalid_argument("density matrix has non-finite entries");
    }
    const double herm = hermiticity_defect(m);
    if (herm > kHermitianTol) {
        throw std::invalid_argument(fmt::format("density matrix not Hermitian (defect {:.3e})", herm));
    }
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw std::invalid_argument(fmt::format("density matrix trace {:.12f} != 1", tr));
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& s) {
    const StateVector n = normalize(s);
    Mat5 p = n.projector();
    p = 0.5 * (p + p.adjoint()).eval();
    return DensityMatrix(p);
}

DensityMatrix DensityMatrix::diagonal(const Eigen::Matrix<double, 5, 1>& populations) {
    Mat5 m = Mat5::Zero();
    for (int i = 0; i < kDim; ++i) m(i, i) = populations(i);
    return DensityMatrix(m);
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat5> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

QubitGate::QubitGate(const Mat2& u) : u_(u) {
    const double defect = max_abs(Mat2(u.adjoint() * u - Mat2::Identity()));
    if (!(defect <= kUnitaryTol)) {
        throw std::invalid_argument(fmt::format("qubit gate not unitary (defect {:.3e})", defect));
    }
}

double QubitGate::phase_insensitive_distance(const QubitGate& other) const {
    const cplx tr = (other.u_.adjoint() * u_).trace();
    const cplx phase = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx{1.0, 0.0};
    return max_abs(Mat2(u_ - phase * other.u_));
}

StateVector normalize(const StateVector& s) {
    const double n = s.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("degenerate state");
    }
    return StateVector(s.amplitudes() / n);
}

StateVector embed_qubit(cplx alpha, cplx beta) {
    const double n2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(n2 - 1.0) > 1e-9) {
        throw std::invalid_argument(fmt::format("qubit amplitudes not normalized (|a|^2+|b|^2 = {:.12f})", n2));
    }
    Vec5 v = Vec5::Zero();
    v(kDown) = alpha;
    v(kUp) = beta;
    return StateVector(v);
}

QubitBlock project_qubit(const DensityMatrix& rho) {
    const Mat5& m = rho.matrix();
    QubitBlock out;
    out.block = m.topLeftCorner<2, 2>();
    out.leakage = 1.0 - (m(kDown, kDown).real() + m(kUp, kUp).real());
    return out;
}

Mat5 dense_expm(const Mat5& m, double scale) {
    if (!m.allFinite() || !std::isfinite(scale)) {
        throw std::invalid_argument("dense_expm: non-finite input");
    }
    const Mat5 a = scale * m;
    return a.exp();
}

Mat2 dense_expm(const Mat2& m, double scale) {
    if (!m.allFinite() || !std::isfinite(scale)) {
        throw std::invalid_argument("dense_expm: non-finite input");
    }
    const Mat2 a = scale * m;
    return a.exp();
}

double max_abs(const Mat5& m) { return m.cwiseAbs().maxCoeff(); }
double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const Mat5& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

Mat2 pauli_x() {
    Mat2 s;
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

Mat2 pauli_y() {
    Mat2 s;
    s << 0.0, -kI, kI, 0.0;
    return s;
}

Mat2 pauli_z() {
    Mat2 s;
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

}  // namespace holodot
