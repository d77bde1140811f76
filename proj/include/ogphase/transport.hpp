#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ogphase/linalg.hpp"

namespace ogphase {

// A continuous family of Hermitian generators J(s) on [s0, s1] together with
// the basis it is meant to parallel transport. Samplers must be reentrant;
// they are called at arbitrary quadrature points.
class GeneratorPath {
  public:
    using Sampler = std::function<Matrix(double)>;

    GeneratorPath(Matrix basis, Sampler sampler, double s0, double s1,
                  const ToleranceConfig& tol = {})
        : basis_(UnitaryMatrix(std::move(basis), tol).matrix()),
          sampler_(std::move(sampler)),
          s0_(s0),
          s1_(s1) {
        if (!(s1_ > s0_)) throw Error("GeneratorPath: need s1 > s0");
        if (!sampler_) throw Error("GeneratorPath: sampler is empty");
    }

    HermitianMatrix sample(double s, const ToleranceConfig& tol = {}) const {
        Matrix j = sampler_(s);
        if (j.rows() != basis_.rows() || j.cols() != basis_.cols())
            throw DimensionMismatch("GeneratorPath: sampler dimension mismatch");
        return HermitianMatrix(std::move(j), tol);
    }

    // Largest diagonal element |<psi_k| J(s) |psi_k>| in the stored basis.
    double diagonal_magnitude(double s, const ToleranceConfig& tol = {}) const {
        const Matrix j = basis_.adjoint() * sample(s, tol).matrix() * basis_;
        double worst = 0.0;
        for (Eigen::Index k = 0; k < j.rows(); ++k) worst = std::max(worst, std::abs(j(k, k)));
        return worst;
    }

    void require_transporting(double s, const ToleranceConfig& tol = {}) const {
        if (diagonal_magnitude(s, tol) > tol.transport)
            throw NotParallelTransporting(
                "GeneratorPath: generator has diagonal elements in the transported basis");
        const Complex tr = sample(s, tol).matrix().trace();
        if (std::abs(tr) > 10.0 * tol.transport)
            throw NotParallelTransporting("GeneratorPath: generator is not traceless");
    }

    const Matrix& basis() const { return basis_; }
    double s0() const { return s0_; }
    double s1() const { return s1_; }
    Eigen::Index dim() const { return basis_.rows(); }

  private:
    Matrix basis_;
    Sampler sampler_;
    double s0_;
    double s1_;
};

// Result of integrating a generator path: the endpoint unitary plus the
// per-step checkpoints U(s0 + i*h) used for residual evaluation.
struct Propagator {
    UnitaryMatrix endpoint;
    GeneratorPath path;
    int step_count = 0;
    std::vector<Matrix> checkpoints;  // size step_count + 1, checkpoints[0] = I
};

namespace detail {

inline Propagator integrate_impl(const GeneratorPath& path, int steps, bool enforce,
                                 const ToleranceConfig& tol) {
    if (steps < 1) throw Error("integrate: need at least one step");
    const Eigen::Index n = path.dim();
    const double h = (path.s1() - path.s0()) / steps;
    Matrix u = Matrix::Identity(n, n);
    std::vector<Matrix> checkpoints;
    checkpoints.reserve(static_cast<std::size_t>(steps) + 1);
    checkpoints.push_back(u);
    for (int i = 0; i < steps; ++i) {
        const double s_mid = path.s0() + (i + 0.5) * h;
        if (enforce) path.require_transporting(s_mid, tol);
        // Midpoint exponential step; new factors multiply on the right,
        // matching i dU/ds = U J with increasing s ordered left to right.
        u = u * exp_hermitian_generator(path.sample(s_mid, tol), h);
        u = polar_unitary(u);
        checkpoints.push_back(u);
    }
    return Propagator{UnitaryMatrix(std::move(u), tol), path, steps, std::move(checkpoints)};
}

}  // namespace detail

inline double transport_residual(const Propagator& p, int samples = 64);

// Integrate the path into its endpoint unitary, checking the transport
// condition at every quadrature point and the instantaneous-basis residual
// on the integrated result.
inline Propagator integrate(const GeneratorPath& path, int steps = 1024,
                            const ToleranceConfig& tol = {}) {
    Propagator p = detail::integrate_impl(path, steps, true, tol);
    const int probes = std::min(64, steps + 1);
    if (transport_residual(p, probes) > 10.0 * tol.transport)
        throw NotParallelTransporting("integrate: instantaneous-basis residual above tolerance");
    if (!p.endpoint.special())
        throw NotParallelTransporting("integrate: endpoint drifted off SU(N)");
    return p;
}

// Same integration without the transport gate. Exists so that non-transporting
// generators can be driven through the residual diagnostics as negative
// controls; checked code paths should use `integrate`.
inline Propagator integrate_unchecked(const GeneratorPath& path, int steps = 1024,
                                      const ToleranceConfig& tol = {}) {
    return detail::integrate_impl(path, steps, false, tol);
}

// max over sampled s and k of |<psi_k(s)| H(s) |psi_k(s)>| with
// H = U J U^dag and |psi_k(s)> = U(s)|psi_k>.
inline double transport_residual(const Propagator& p, int samples) {
    if (samples < 1) throw Error("transport_residual: need at least one sample");
    const double h = (p.path.s1() - p.path.s0()) / p.step_count;
    double worst = 0.0;
    for (int j = 0; j < samples; ++j) {
        const int idx = samples == 1 ? 0
                                     : static_cast<int>(std::lround(
                                           static_cast<double>(j) * p.step_count / (samples - 1)));
        const double s = p.path.s0() + idx * h;
        const Matrix& u = p.checkpoints[static_cast<std::size_t>(idx)];
        const Matrix hs = u * p.path.sample(s).matrix() * u.adjoint();
        const Matrix frame = u * p.path.basis();
        const Matrix diag = frame.adjoint() * hs * frame;
        for (Eigen::Index k = 0; k < diag.rows(); ++k)
            worst = std::max(worst, std::abs(diag(k, k)));
    }
    return worst;
}

// Polarization rotation by beta along the great circle selected by theta,
// exp(-i beta/2 [cos(theta) sigma_x + sin(theta) sigma_y]) in the h-v basis.
// Parallel transports the h-v basis for every (beta, theta).
inline UnitaryMatrix polarization_rotation(double beta, double theta,
                                           const ToleranceConfig& tol = {}) {
    const double c = std::cos(0.5 * beta);
    const double s = std::sin(0.5 * beta);
    Matrix u(2, 2);
    const Complex off{-s * std::sin(theta), -s * std::cos(theta)};  // -i s e^{-i theta}
    u << Complex{c, 0.0}, off, Complex{s * std::sin(theta), -s * std::cos(theta)}, Complex{c, 0.0};
    return UnitaryMatrix(std::move(u), tol);
}

// Visibility and solid angle read off a special unitary qubit matrix:
// U_11 = eta * exp(-i Omega / 2). Omega is reported in (-2pi, 2pi] and is
// undefined at eta below the definedness threshold.
struct QubitDescriptor {
    double eta = 0.0;
    std::optional<double> omega;
};

inline QubitDescriptor qubit_descriptor(const UnitaryMatrix& u, const ToleranceConfig& tol = {}) {
    if (u.dim() != 2) throw NotSpecialUnitary("qubit_descriptor: matrix is not 2x2");
    if (!u.special()) throw NotSpecialUnitary("qubit_descriptor: determinant differs from 1");
    const Complex u11 = u.matrix()(0, 0);
    QubitDescriptor d;
    d.eta = std::min(std::abs(u11), 1.0);
    if (d.eta > tol.definedness) {
        double omega = -2.0 * argument_of(u11);
        if (omega <= -2.0 * pi) omega += 4.0 * pi;
        d.omega = omega;
    }
    return d;
}

}  // namespace ogphase
