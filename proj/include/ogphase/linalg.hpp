#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "ogphase/errors.hpp"
#include "ogphase/tolerances.hpp"

namespace ogphase {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Wrap an angle into (-pi, pi].
inline double principal_angle(double a) {
    a = std::remainder(a, 2.0 * pi);
    if (a <= -pi) a += 2.0 * pi;
    return a;
}

// arg(z) normalized to (-pi, pi].
inline double argument_of(Complex z) {
    return principal_angle(std::arg(z));
}

inline Complex pow_int(Complex z, int n) {
    Complex out{1.0, 0.0};
    for (int i = 0; i < n; ++i) out *= z;
    return out;
}

inline void require_square(const Matrix& m, const char* where) {
    if (m.rows() < 1 || m.rows() != m.cols())
        throw DimensionMismatch(std::string(where) + ": matrix must be square and nonempty");
    if (!m.allFinite())
        throw Error(std::string(where) + ": matrix has non-finite entries");
}

// Hermitian matrix with validated symmetry.
class HermitianMatrix {
  public:
    explicit HermitianMatrix(Matrix m, const ToleranceConfig& tol = {}) : m_(std::move(m)) {
        require_square(m_, "HermitianMatrix");
        if (max_abs(m_ - m_.adjoint()) > tol.hermiticity)
            throw NotHermitian("HermitianMatrix: |M - M^dag| exceeds tolerance");
    }

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    Matrix m_;
};

// Unitary matrix; `special()` reports membership in SU(N) within tolerance.
class UnitaryMatrix {
  public:
    explicit UnitaryMatrix(Matrix m, const ToleranceConfig& tol = {}) : m_(std::move(m)) {
        require_square(m_, "UnitaryMatrix");
        const Matrix gram = m_.adjoint() * m_;
        if (max_abs(gram - Matrix::Identity(m_.rows(), m_.cols())) > tol.unitarity)
            throw NotUnitary("UnitaryMatrix: |U^dag U - I| exceeds tolerance");
        special_ = std::abs(m_.determinant() - Complex{1.0, 0.0}) <= tol.unitarity;
    }

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    bool special() const { return special_; }

  private:
    Matrix m_;
    bool special_ = false;
};

struct Eigensystem {
    RealVector eigenvalues;      // ascending
    UnitaryMatrix eigenvectors;  // columns paired with eigenvalues
};

// Fix each eigenvector's gauge: the largest-magnitude component is made
// real and positive. Keeps decompositions reproducible across runs.
inline void fix_column_phases(Matrix& v) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index imax = 0;
        double best = 0.0;
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            const double a = std::abs(v(i, j));
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        if (best > 0.0) v.col(j) *= std::conj(v(imax, j)) / best;
    }
}

inline Eigensystem eig_hermitian(const HermitianMatrix& m, const ToleranceConfig& tol = {}) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("eig_hermitian: eigensolver did not converge");
    Matrix v = solver.eigenvectors();
    fix_column_phases(v);
    return Eigensystem{solver.eigenvalues(), UnitaryMatrix(std::move(v), tol)};
}

// l-th root of a positive semidefinite Hermitian matrix via spectral calculus.
// Eigenvalues within psd_clamp of zero are treated as exact zeros.
inline HermitianMatrix matrix_root(const HermitianMatrix& m, int l,
                                   const ToleranceConfig& tol = {}) {
    if (l < 1) throw Error("matrix_root: order must be >= 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix());
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("matrix_root: eigensolver did not converge");
    RealVector lam = solver.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] < -tol.psd_clamp)
            throw NotPositiveSemidefinite("matrix_root: eigenvalue below -psd_clamp");
        // Symmetric dead zone: eigenvalues indistinguishable from zero stay
        // zero, otherwise the fractional power amplifies rounding noise.
        if (lam[i] < tol.psd_clamp) lam[i] = 0.0;
        lam[i] = std::pow(lam[i], 1.0 / static_cast<double>(l));
    }
    const Matrix& v = solver.eigenvectors();
    Matrix root = v * lam.cast<Complex>().asDiagonal() * v.adjoint();
    root = 0.5 * (root + root.adjoint().eval());
    return HermitianMatrix(std::move(root), tol);
}

// Tr(F_1 F_2 ... F_k) by dense multiplication, left to right. This is the
// brute-force reference against which all structured evaluations are checked.
inline Complex trace_product(const std::vector<Matrix>& factors) {
    if (factors.empty()) throw DimensionMismatch("trace_product: factor list is empty");
    const Eigen::Index n = factors.front().rows();
    for (const Matrix& f : factors) {
        require_square(f, "trace_product");
        if (f.rows() != n) throw DimensionMismatch("trace_product: factor dimensions differ");
    }
    Matrix acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = acc * factors[i];
    return acc.trace();
}

// A complex interference trace together with its phase factor. Nodal points
// (|z| below the definedness threshold) are legitimate outcomes, not errors.
struct PhaseResult {
    Complex trace{0.0, 0.0};
    bool defined = false;
    std::optional<Complex> factor;
    std::optional<double> argument;  // in (-pi, pi]
};

inline PhaseResult phase_factor(Complex z, double definedness_threshold = 1e-10) {
    PhaseResult out;
    out.trace = z;
    const double mag = std::abs(z);
    if (mag > definedness_threshold) {
        out.defined = true;
        out.factor = z / mag;
        out.argument = argument_of(z);
    }
    return out;
}

// exp(-i * J * dt) for Hermitian J, evaluated spectrally; exactly unitary
// up to the eigensolver's accuracy.
inline Matrix exp_hermitian_generator(const HermitianMatrix& j, double dt) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(j.matrix());
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("exp_hermitian_generator: eigensolver did not converge");
    const RealVector& lam = solver.eigenvalues();
    Eigen::VectorXcd phases(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        phases[i] = std::exp(Complex{0.0, -lam[i] * dt});
    const Matrix& v = solver.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

// Nearest unitary (polar factor) of a nonsingular matrix.
inline Matrix polar_unitary(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace ogphase
