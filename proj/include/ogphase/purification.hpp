#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "ogphase/phases.hpp"
#include "ogphase/states.hpp"

namespace ogphase {

// Pure system+ancilla state sum_k sqrt(lambda_k) |psi_k> x |psi_k| with the
// ancilla basis locked to the system eigenbasis. Amplitudes are stored in
// that shared basis, so the ancilla-basis transpose of an operator is a
// plain index swap.
class JointState {
  public:
    JointState(Matrix amplitudes, Matrix system_basis, const ToleranceConfig& tol = {})
        : amps_(std::move(amplitudes)), basis_(UnitaryMatrix(system_basis, tol).matrix()) {
        if (amps_.rows() != amps_.cols() || amps_.rows() != basis_.rows())
            throw DimensionMismatch("JointState: amplitude/basis size mismatch");
        const double norm = amps_.norm();
        if (std::abs(norm - 1.0) > 1e-12) throw Error("JointState: state is not normalized");
    }

    Eigen::Index dim() const { return amps_.rows(); }
    const Matrix& amplitudes() const { return amps_; }  // family coordinates
    const Matrix& basis() const { return basis_; }

    // Coefficients on the ambient product basis, (B C B^T)_{ab}.
    Matrix ambient_amplitudes() const { return basis_ * amps_ * basis_.transpose(); }

    // Reduced system state Tr_a |Psi><Psi| in ambient coordinates.
    Matrix reduced_system() const {
        return basis_ * (amps_ * amps_.adjoint()) * basis_.adjoint();
    }

  private:
    Matrix amps_;
    Matrix basis_;
};

inline JointState purify(const DensityOperator& seed, const ToleranceConfig& tol = {}) {
    Matrix amps = seed.spectrum().cwiseSqrt().cast<Complex>().asDiagonal();
    JointState psi(std::move(amps), seed.eigenbasis(), tol);
    if (max_abs(psi.reduced_system() - seed.matrix()) > 1e-10)
        throw Error("purify: partial trace does not reproduce the seed");
    return psi;
}

// Purification of the family seed rho_1 in family labels.
inline JointState purify(const OrthogonalFamily& family, const ToleranceConfig& tol = {}) {
    Matrix amps = family.family_spectrum().cwiseSqrt().cast<Complex>().asDiagonal();
    JointState psi(std::move(amps), family.family_basis(), tol);
    if (max_abs(psi.reduced_system() - family.seed().matrix()) > 1e-10)
        throw Error("purify: partial trace does not reproduce the seed");
    return psi;
}

// Long-arm (u_s, u_a) and short-arm (v_s, v_a) unitaries of the two-particle
// interferometer, all in the joint state's coordinates. The variable U(1)
// shift chi multiplies the long system arm.
struct ArmConfiguration {
    Matrix u_s, u_a, v_s, v_a;
    double chi = 0.0;

    ArmConfiguration with_chi(double value) const {
        ArmConfiguration out = *this;
        out.chi = value;
        return out;
    }
};

// Coincidence profile 2 + 2 Re[e^{-i chi} Tr((u_s^dag v_s) x (u_a^dag v_a)
// |Psi><Psi|)], evaluated without forming the N^2 x N^2 product.
inline double coincidence_intensity(const JointState& state, const ArmConfiguration& arms) {
    const Eigen::Index n = state.dim();
    for (const Matrix* u : {&arms.u_s, &arms.u_a, &arms.v_s, &arms.v_a})
        if (u->rows() != n || u->cols() != n)
            throw DimensionMismatch("coincidence_intensity: arm dimension mismatch");
    const Matrix a = arms.u_s.adjoint() * arms.v_s;
    const Matrix b = arms.u_a.adjoint() * arms.v_a;
    const Matrix& c = state.amplitudes();
    const Complex t = (c.adjoint() * a * c * b.transpose()).trace();
    const Complex rotated = std::polar(1.0, -arms.chi) * t;
    return 2.0 + 2.0 * rotated.real();
}

namespace detail {

// Canonical cycle matrix in family coordinates: e_n -> e_{n+1 mod N}.
inline Matrix cycle_matrix(Eigen::Index n, int power) {
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) p((((c + power) % n) + n) % n, c) = 1.0;
    return p;
}

}  // namespace detail

// Arm choices whose fringe reproduces the l = 1 phase of member j1:
// U_s = e^{i chi} U_g^{j1-1}, V_s = U U_g^{j1-1}, ancilla arms idle.
inline ArmConfiguration l1_recipe(const OrthogonalFamily& family, const UnitaryMatrix& u_parallel,
                                  int j1) {
    const Eigen::Index n = family.dim();
    if (j1 < 1 || j1 > static_cast<int>(n)) throw Error("l1_recipe: member index out of range");
    if (u_parallel.dim() != n) throw DimensionMismatch("l1_recipe: unitary dimension mismatch");
    ArmConfiguration arms;
    const Matrix g = detail::cycle_matrix(n, j1 - 1);
    arms.u_s = g;
    arms.v_s = family.to_family_coords(u_parallel.matrix()) * g;
    arms.u_a = Matrix::Identity(n, n);
    arms.v_a = Matrix::Identity(n, n);
    return arms;
}

// Arm choices whose fringe reproduces the l = 2 phase of the pair (j1, j2):
// U_s = e^{i chi} U_g^{j2-1}, V_s = U U_g^{j1-1}, U_a = U_g^{j2-1},
// V_a = U^T U_g^{j1-1} with the transpose taken in the ancilla basis.
inline ArmConfiguration l2_recipe(const OrthogonalFamily& family, const UnitaryMatrix& u_parallel,
                                  int j1, int j2) {
    const Eigen::Index n = family.dim();
    if (j1 < 1 || j1 > static_cast<int>(n) || j2 < 1 || j2 > static_cast<int>(n))
        throw Error("l2_recipe: member index out of range");
    if (j1 == j2) throw Error("l2_recipe: members must differ");
    if (u_parallel.dim() != n) throw DimensionMismatch("l2_recipe: unitary dimension mismatch");
    ArmConfiguration arms;
    const Matrix u = family.to_family_coords(u_parallel.matrix());
    const Matrix g1 = detail::cycle_matrix(n, j1 - 1);
    const Matrix g2 = detail::cycle_matrix(n, j2 - 1);
    arms.u_s = g2;
    arms.v_s = u * g1;
    arms.u_a = g2;
    arms.v_a = u.transpose() * g1;
    return arms;
}

// Fringe fit I(chi) = 2 + 2 v cos(chi - phi) by linear least squares on the
// (cos chi, sin chi) regressors. `amplitude` carries v e^{i phi}; the phase
// is undefined below the visibility threshold.
struct FringeFit {
    Complex amplitude{0.0, 0.0};
    double visibility = 0.0;
    std::optional<double> phase;
};

inline FringeFit extract_phase(const std::vector<std::pair<double, double>>& samples,
                               const ToleranceConfig& tol = {}) {
    if (samples.size() < 3)
        throw InsufficientSamples("extract_phase: need at least three samples");
    double chi_min = samples.front().first;
    double chi_max = samples.front().first;
    for (const auto& [chi, intensity] : samples) {
        (void)intensity;
        chi_min = std::min(chi_min, chi);
        chi_max = std::max(chi_max, chi);
    }
    if (chi_max - chi_min < pi)
        throw InsufficientSamples("extract_phase: samples must span at least pi");

    // Normal equations for I - 2 = a cos(chi) + b sin(chi).
    double scc = 0.0, sss = 0.0, scs = 0.0, sc = 0.0, ss = 0.0;
    for (const auto& [chi, intensity] : samples) {
        const double c = std::cos(chi);
        const double s = std::sin(chi);
        const double y = intensity - 2.0;
        scc += c * c;
        sss += s * s;
        scs += c * s;
        sc += c * y;
        ss += s * y;
    }
    const double det = scc * sss - scs * scs;
    if (std::abs(det) < 1e-12)
        throw InsufficientSamples("extract_phase: degenerate sample placement");
    const double a = (sss * sc - scs * ss) / det;
    const double b = (scc * ss - scs * sc) / det;

    FringeFit fit;
    fit.amplitude = 0.5 * Complex{a, b};
    fit.visibility = std::abs(fit.amplitude);
    if (fit.visibility > tol.definedness) fit.phase = argument_of(fit.amplitude);
    return fit;
}

// Sample the coincidence fringe over one chi period and fit it.
inline FringeFit scan_fringe(const JointState& state, const ArmConfiguration& arms,
                             int chi_samples = 24, const ToleranceConfig& tol = {}) {
    if (chi_samples < 3) throw InsufficientSamples("scan_fringe: need at least three samples");
    std::vector<std::pair<double, double>> samples;
    samples.reserve(static_cast<std::size_t>(chi_samples));
    for (int i = 0; i < chi_samples; ++i) {
        const double chi = 2.0 * pi * i / chi_samples;
        samples.emplace_back(chi, coincidence_intensity(state, arms.with_chi(chi)));
    }
    return extract_phase(samples, tol);
}

// Photon-pair source state sqrt((1+r)/2)|hh> + sqrt((1-r)/2)|vv> with
// polarization degree r; each subsystem is mixed with spectrum (1+-r)/2.
struct EntangledPairState {
    double r = 0.0;

    explicit EntangledPairState(double degree) : r(degree) {
        if (r < 0.0 || r > 1.0) throw Error("EntangledPairState: r must be in [0, 1]");
    }
};

// Family generated from one photon of the pair: rho_1 has spectrum
// ((1+r)/2, (1-r)/2) on the h-v basis and U_g is the polarization flip.
inline OrthogonalFamily entangled_pair_family(const EntangledPairState& pair,
                                              const ToleranceConfig& tol = {}) {
    RealVector lambda(2);
    lambda << 0.5 * (1.0 + pair.r), 0.5 * (1.0 - pair.r);
    return family_from_listed_spectrum(lambda, Matrix::Identity(2, 2), tol);
}

}  // namespace ogphase
