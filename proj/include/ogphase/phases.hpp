#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ogphase/perm_engine.hpp"
#include "ogphase/rootfind.hpp"
#include "ogphase/transport.hpp"

namespace ogphase {

enum class GammaMethod { automatic, dense, perm };

struct GammaOptions {
    GammaMethod method = GammaMethod::automatic;
    const GeneratorPath* path = nullptr;  // generator that produced the unitary, if any
    int steps = 1024;                     // integration steps for the transport check
};

struct GammaResult {
    PhaseResult phase;
    std::string method;  // "perm-engine" or "dense"
    bool transport_verified = false;
};

namespace detail {

inline Complex gamma_dense_trace(const UnitaryMatrix& u, const OrthogonalFamily& family,
                                 const SequenceSpec& seq, const ToleranceConfig& tol) {
    const int l = seq.length();
    std::vector<Matrix> factors;
    factors.reserve(2 * static_cast<std::size_t>(l));
    for (int j : seq.indexes()) {
        factors.push_back(u.matrix());
        factors.push_back(
            matrix_root(HermitianMatrix(family.member(j).matrix(), tol), l, tol).matrix());
    }
    return trace_product(factors);
}

}  // namespace detail

// Order-l off-diagonal mixed state phase
//   Phi[ Tr(U rho_{j_1}^{1/l} U rho_{j_2}^{1/l} ... U rho_{j_l}^{1/l}) ].
// Uses the permutation-block fast path whenever the unitary decomposes in the
// family basis, dense trace evaluation otherwise. Supplying the generator
// path that produced `u` verifies parallel transport; without one the result
// is marked unverified but still evaluated.
inline GammaResult gamma(const UnitaryMatrix& u, const OrthogonalFamily& family,
                         const SequenceSpec& seq, const GammaOptions& opts = {},
                         const ToleranceConfig& tol = {}) {
    if (u.dim() != family.dim()) throw DimensionMismatch("gamma: unitary/family mismatch");
    if (!family.seed().nondegenerate())
        throw DegenerateSpectrum("gamma: family spectrum is degenerate");

    GammaResult out;
    if (opts.path != nullptr) {
        const Propagator p = integrate(*opts.path, opts.steps, tol);
        out.transport_verified =
            max_abs(p.endpoint.matrix() - u.matrix()) <= tol.transport_endpoint;
    }

    const GammaMethod method = opts.method;
    Complex trace;
    if (method == GammaMethod::dense) {
        trace = detail::gamma_dense_trace(u, family, seq, tol);
        out.method = "dense";
    } else if (method == GammaMethod::perm) {
        const BlockDecomposition d = decompose(u, family.family_basis(), tol);
        trace = diagonal_part(d, family, seq) + permutation_part(d, family, seq);
        out.method = "perm-engine";
    } else {
        try {
            const BlockDecomposition d = decompose(u, family.family_basis(), tol);
            trace = diagonal_part(d, family, seq) + permutation_part(d, family, seq);
            out.method = "perm-engine";
        } catch (const NotBlockStructured&) {
            trace = detail::gamma_dense_trace(u, family, seq, tol);
            out.method = "dense";
        } catch (const MultiCycleUnsupported&) {
            trace = detail::gamma_dense_trace(u, family, seq, tol);
            out.method = "dense";
        }
    }
    out.phase = phase_factor(trace, tol.definedness);
    return out;
}

// Closed-form qubit inputs: visibility eta and solid angle Omega read off
// U_11, plus the Bures fidelity 4 lambda_1 lambda_2 of the family pair.
struct QubitPathDescriptor {
    double eta = 0.0;
    double omega = 0.0;
    double fidelity = 0.0;
};

inline QubitPathDescriptor qubit_path_descriptor(const UnitaryMatrix& u, double lambda1,
                                                 const ToleranceConfig& tol = {}) {
    const QubitDescriptor d = qubit_descriptor(u, tol);
    return QubitPathDescriptor{d.eta, d.omega.value_or(0.0),
                               4.0 * lambda1 * (1.0 - lambda1)};
}

// Tr(U rho_1) = eta (lambda_1 e^{-i Omega/2} + lambda_2 e^{i Omega/2});
// which = 2 returns the conjugate, Tr(U rho_2). lambda1 is the larger
// eigenvalue attached to psi_1.
inline Complex qubit_l1_trace(const QubitPathDescriptor& d, double lambda1, int which,
                              const ToleranceConfig& tol = {}) {
    if (which != 1 && which != 2) throw Error("qubit_l1_trace: which must be 1 or 2");
    if (std::abs(lambda1 - 0.5) <= tol.degeneracy_gap)
        throw DegenerateSpectrum("qubit_l1_trace: lambda1 = 1/2 leaves the phase undefined");
    if (lambda1 < 0.5 || lambda1 > 1.0 + tol.psd_clamp)
        throw Error("qubit_l1_trace: lambda1 must lie in (0.5, 1]");
    const double lambda2 = 1.0 - lambda1;
    const Complex half{std::cos(0.5 * d.omega), -std::sin(0.5 * d.omega)};
    const Complex t = d.eta * (lambda1 * half + lambda2 * std::conj(half));
    return which == 1 ? t : std::conj(t);
}

// Tr(U sqrt(rho_1) U sqrt(rho_2)) = -1 + eta^2 + eta^2 sqrt(F_B) cos(Omega).
inline double qubit_l2_trace(const QubitPathDescriptor& d) {
    return -1.0 + d.eta * d.eta +
           d.eta * d.eta * std::sqrt(std::max(d.fidelity, 0.0)) * std::cos(d.omega);
}

// Visibility at which the l=2 trace vanishes: eta = (1 + sqrt(F_B) cos
// Omega)^{-1/2}, defined whenever the value does not exceed 1.
inline std::optional<double> nodal_eta(double fidelity, double omega) {
    if (fidelity < 0.0 || fidelity > 1.0) throw Error("nodal_eta: fidelity must be in [0, 1]");
    const double s = std::sqrt(fidelity) * std::cos(omega);
    if (s < 0.0) return std::nullopt;
    return 1.0 / std::sqrt(1.0 + s);
}

// Inputs for the projection phase Phi[Tr(U rho U P)] with P projecting onto
// the eigenstate of the smaller eigenvalue and U_11 = eta e^{i alpha}.
struct ProjectionConfig {
    double lambda1 = 1.0;  // larger eigenvalue
    double lambda2 = 0.0;
    double eta = 1.0;
    double alpha = 0.0;
    double theta = 0.0;  // geometry that produced (eta, alpha), when applicable
    double delta = 0.0;
};

inline void validate_projection_config(const ProjectionConfig& c, const ToleranceConfig& tol) {
    if (std::abs(c.lambda1 + c.lambda2 - 1.0) > tol.unit_trace)
        throw Error("ProjectionConfig: eigenvalues must sum to 1");
    if (!(c.lambda1 > c.lambda2)) throw Error("ProjectionConfig: need lambda1 > lambda2");
    if (c.eta < 0.0 || c.eta > 1.0 + tol.psd_clamp)
        throw Error("ProjectionConfig: eta must lie in [0, 1]");
}

// Spin precessing by delta about the field axis, seen from the eigenbasis of
// a spinor polarized at polar angle theta: the diagonal element is
// cos(delta/2) - i cos(theta) sin(delta/2).
inline ProjectionConfig hasegawa_config(double lambda1, double theta, double delta,
                                        const ToleranceConfig& tol = {}) {
    ProjectionConfig c;
    c.lambda1 = lambda1;
    c.lambda2 = 1.0 - lambda1;
    c.theta = theta;
    c.delta = delta;
    const Complex u11{std::cos(0.5 * delta), -std::cos(theta) * std::sin(0.5 * delta)};
    c.eta = std::min(std::abs(u11), 1.0);
    c.alpha = argument_of(u11);
    validate_projection_config(c, tol);
    return c;
}

// Closed form Tr[U rho U P] = lambda_1 (-1 + eta^2) + lambda_2 eta^2 e^{-2 i alpha}.
inline Complex projection_trace(const ProjectionConfig& c, const ToleranceConfig& tol = {}) {
    validate_projection_config(c, tol);
    const Complex phase{std::cos(2.0 * c.alpha), -std::sin(2.0 * c.alpha)};
    return c.lambda1 * (c.eta * c.eta - 1.0) + c.lambda2 * c.eta * c.eta * phase;
}

// Same trace from explicit 2x2 matrices built out of (eta, alpha); the free
// off-diagonal phase of U drops out of the trace.
inline Complex projection_trace_dense(const ProjectionConfig& c, const ToleranceConfig& tol = {}) {
    validate_projection_config(c, tol);
    const double off = std::sqrt(std::max(0.0, 1.0 - c.eta * c.eta));
    Matrix u(2, 2);
    u << std::polar(c.eta, c.alpha), Complex{off, 0.0}, Complex{-off, 0.0},
        std::polar(c.eta, -c.alpha);
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = c.lambda1;
    rho(1, 1) = c.lambda2;
    Matrix p = Matrix::Zero(2, 2);
    p(1, 1) = 1.0;
    return (u * rho * u * p).trace();
}

struct ProjectionPoint {
    double delta = 0.0;
    std::optional<double> argument;  // in [0, 2pi)
};

inline std::vector<ProjectionPoint> projection_sweep(double lambda1, double theta,
                                                     const std::vector<double>& deltas,
                                                     const ToleranceConfig& tol = {}) {
    if (deltas.empty()) throw Error("projection_sweep: empty grid");
    std::vector<ProjectionPoint> out;
    out.reserve(deltas.size());
    for (double delta : deltas) {
        const Complex t = projection_trace(hasegawa_config(lambda1, theta, delta, tol), tol);
        ProjectionPoint pt;
        pt.delta = delta;
        if (std::abs(t) > tol.definedness) {
            double a = argument_of(t);
            if (a < 0.0) a += 2.0 * pi;
            pt.argument = a;
        }
        out.push_back(pt);
    }
    return out;
}

// Phase jumps along a projection sweep. A jump is a zero crossing of the
// (real) trace; brackets are detected from argument discontinuities and
// pinned down by bisection on Re of the trace.
inline std::vector<double> projection_jump_loci(double lambda1, double theta,
                                                const std::vector<double>& deltas,
                                                double xtol = 1e-6,
                                                const ToleranceConfig& tol = {}) {
    const auto re_trace = [&](double delta) {
        return projection_trace(hasegawa_config(lambda1, theta, delta, tol), tol).real();
    };
    const std::vector<ProjectionPoint> sweep = projection_sweep(lambda1, theta, deltas, tol);
    std::vector<double> loci;
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        if (!sweep[i - 1].argument || !sweep[i].argument) continue;
        double gap = std::abs(*sweep[i].argument - *sweep[i - 1].argument);
        gap = std::min(gap, 2.0 * pi - gap);
        if (gap < 0.5 * pi) continue;
        const double flo = re_trace(sweep[i - 1].delta);
        const double fhi = re_trace(sweep[i].delta);
        if (flo == 0.0 || fhi == 0.0 || (flo < 0.0) == (fhi < 0.0)) continue;
        loci.push_back(bisect(re_trace, sweep[i - 1].delta, sweep[i].delta, flo, fhi, xtol));
    }
    return loci;
}

}  // namespace ogphase
