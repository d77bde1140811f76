#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "ogphase/linalg.hpp"

namespace ogphase {

// Unit-trace positive semidefinite Hermitian operator. The spectrum is stored
// ascending with eigenvectors paired by rank; `nondegenerate()` reflects the
// minimum gap between consecutive eigenvalues.
class DensityOperator {
  public:
    static DensityOperator from_matrix(const Matrix& rho, const ToleranceConfig& tol = {}) {
        HermitianMatrix h(rho, tol);
        if (std::abs(h.matrix().trace().real() - 1.0) > tol.unit_trace ||
            std::abs(h.matrix().trace().imag()) > tol.unit_trace)
            throw Error("DensityOperator: trace differs from 1");
        Eigensystem es = eig_hermitian(h, tol);
        RealVector lam = es.eigenvalues;
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            if (lam[i] < -tol.psd_clamp)
                throw NotPositiveSemidefinite("DensityOperator: negative eigenvalue");
            if (lam[i] > 1.0 + tol.psd_clamp)
                throw Error("DensityOperator: eigenvalue above 1");
            lam[i] = std::clamp(lam[i], 0.0, 1.0);
        }
        return DensityOperator(rho, std::move(lam), es.eigenvectors.matrix(), tol);
    }

    // Assemble sum_k lambda[k] |basis_k><basis_k| and validate it.
    static DensityOperator from_spectrum(const RealVector& lambda, const Matrix& basis,
                                         const ToleranceConfig& tol = {}) {
        UnitaryMatrix b(basis, tol);
        if (lambda.size() != basis.rows())
            throw DimensionMismatch("DensityOperator: spectrum/basis size mismatch");
        Matrix rho = basis * lambda.cast<Complex>().asDiagonal() * basis.adjoint();
        rho = 0.5 * (rho + rho.adjoint().eval());
        return from_matrix(rho, tol);
    }

    const Matrix& matrix() const { return rho_; }
    const RealVector& spectrum() const { return spectrum_; }  // ascending
    const Matrix& eigenbasis() const { return basis_; }
    bool nondegenerate() const { return nondegenerate_; }
    Eigen::Index dim() const { return rho_.rows(); }

  private:
    DensityOperator(Matrix rho, RealVector spectrum, Matrix basis, const ToleranceConfig& tol)
        : rho_(std::move(rho)), spectrum_(std::move(spectrum)), basis_(std::move(basis)) {
        double min_gap = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i + 1 < spectrum_.size(); ++i)
            min_gap = std::min(min_gap, spectrum_[i + 1] - spectrum_[i]);
        nondegenerate_ = spectrum_.size() < 2 || min_gap > tol.degeneracy_gap;
    }

    Matrix rho_;
    RealVector spectrum_;
    Matrix basis_;
    bool nondegenerate_ = false;
};

// The cyclic shift U_g on an ordered orthonormal basis:
// U_g |psi_n> = |psi_{n+1}>, indices wrapping modulo N.
class CyclicShift {
  public:
    explicit CyclicShift(Matrix basis, const ToleranceConfig& tol = {})
        : basis_(UnitaryMatrix(std::move(basis), tol).matrix()) {}

    Eigen::Index dim() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }

    // (U_g)^k in ambient coordinates; k may be negative.
    Matrix power(int k) const {
        const Eigen::Index n = dim();
        Matrix p = Matrix::Zero(n, n);
        for (Eigen::Index c = 0; c < n; ++c) {
            Eigen::Index r = ((c + k) % n + n) % n;
            p(r, c) = 1.0;
        }
        return basis_ * p * basis_.adjoint();
    }

    Matrix matrix() const { return power(1); }

  private:
    Matrix basis_;
};

// An ordered set {rho_1, ..., rho_N} generated from a seed by powers of the
// cyclic shift. All members are isospectral and mutually orthogonal in the
// interference sense tested by `is_orthogonal`. `family_spectrum()[k]` is the
// seed eigenvalue attached to the k-th family basis vector (family labels,
// not necessarily ascending once a nonidentity ordering is applied).
class OrthogonalFamily {
  public:
    OrthogonalFamily(DensityOperator seed, Matrix family_basis, RealVector family_lambda,
                     const ToleranceConfig& tol = {})
        : seed_(std::move(seed)),
          shift_(family_basis, tol),
          basis_(std::move(family_basis)),
          lambda_(std::move(family_lambda)) {
        const Eigen::Index n = seed_.dim();
        if (basis_.rows() != n || lambda_.size() != n)
            throw DimensionMismatch("OrthogonalFamily: basis/spectrum size mismatch");
        if (!seed_.nondegenerate())
            throw DegenerateSpectrum("OrthogonalFamily: seed spectrum is degenerate");
        Matrix rebuilt = basis_ * lambda_.cast<Complex>().asDiagonal() * basis_.adjoint();
        if (max_abs(rebuilt - seed_.matrix()) > 1e-9)
            throw Error("OrthogonalFamily: basis/spectrum do not reproduce the seed");
        if (max_abs(shift_.power(static_cast<int>(n)) - Matrix::Identity(n, n)) > tol.unitarity)
            throw Error("OrthogonalFamily: (U_g)^N differs from identity");
        members_.reserve(static_cast<std::size_t>(n));
        for (Eigen::Index k = 0; k < n; ++k) {
            Matrix shift = shift_.power(static_cast<int>(k));
            Matrix rho = shift * seed_.matrix() * shift.adjoint();
            rho = 0.5 * (rho + rho.adjoint().eval());
            members_.push_back(DensityOperator::from_matrix(rho, tol));
        }
    }

    Eigen::Index dim() const { return seed_.dim(); }
    const DensityOperator& seed() const { return seed_; }
    const CyclicShift& shift() const { return shift_; }
    const std::vector<DensityOperator>& members() const { return members_; }

    // 1-based member access matching the rho_n labels.
    const DensityOperator& member(int n) const {
        if (n < 1 || n > static_cast<int>(members_.size()))
            throw DimensionMismatch("OrthogonalFamily: member index out of range");
        return members_[static_cast<std::size_t>(n - 1)];
    }

    const Matrix& family_basis() const { return basis_; }
    const RealVector& family_spectrum() const { return lambda_; }

    // Express an ambient operator in family-basis coordinates.
    Matrix to_family_coords(const Matrix& ambient) const {
        if (ambient.rows() != dim() || ambient.cols() != dim())
            throw DimensionMismatch("OrthogonalFamily: operator dimension mismatch");
        return basis_.adjoint() * ambient * basis_;
    }

  private:
    DensityOperator seed_;
    CyclicShift shift_;
    Matrix basis_;
    RealVector lambda_;
    std::vector<DensityOperator> members_;
};

// Build the family with a chosen labeling: `ordering[n]` (1-based) selects
// which ascending-rank eigenvector of the seed plays the role of psi_{n+1}.
// Permuting the labels generates the distinct orthogonal sets obtained by
// permuting the psi_n's in U_g.
inline OrthogonalFamily make_family(const DensityOperator& seed, const std::vector<int>& ordering,
                                    const ToleranceConfig& tol = {}) {
    const Eigen::Index n = seed.dim();
    if (!seed.nondegenerate())
        throw DegenerateSpectrum("make_family: seed spectrum is degenerate");
    if (static_cast<Eigen::Index>(ordering.size()) != n)
        throw Error("make_family: ordering size mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int idx : ordering) {
        if (idx < 1 || idx > static_cast<int>(n) || seen[static_cast<std::size_t>(idx - 1)])
            throw Error("make_family: ordering is not a permutation of 1..N");
        seen[static_cast<std::size_t>(idx - 1)] = true;
    }
    Matrix basis(n, n);
    RealVector lambda(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = ordering[static_cast<std::size_t>(k)] - 1;
        basis.col(k) = seed.eigenbasis().col(src);
        lambda[k] = seed.spectrum()[src];
    }
    return OrthogonalFamily(seed, std::move(basis), std::move(lambda), tol);
}

inline OrthogonalFamily make_family(const DensityOperator& seed) {
    std::vector<int> identity(static_cast<std::size_t>(seed.dim()));
    std::iota(identity.begin(), identity.end(), 1);
    return make_family(seed, identity);
}

// Family whose labels follow a user-supplied spectrum list verbatim:
// psi_n = basis column n with eigenvalue lambda[n] as given.
inline OrthogonalFamily family_from_listed_spectrum(const RealVector& lambda, const Matrix& basis,
                                                    const ToleranceConfig& tol = {}) {
    DensityOperator seed = DensityOperator::from_spectrum(lambda, basis, tol);
    return OrthogonalFamily(std::move(seed), basis, lambda, tol);
}

// Interference orthogonality for unitarily connected isospectral operators:
// true iff every eigenvector of `a` is mapped off itself, i.e.
// max_k |<psi_k| U |psi_k>| is below tolerance.
inline bool is_orthogonal(const DensityOperator& a, const DensityOperator& b,
                          const UnitaryMatrix& connecting, const ToleranceConfig& tol = {}) {
    if (a.dim() != b.dim() || connecting.dim() != a.dim())
        throw DimensionMismatch("is_orthogonal: dimension mismatch");
    if ((a.spectrum() - b.spectrum()).cwiseAbs().maxCoeff() > tol.isospectral)
        throw NotIsospectral("is_orthogonal: spectra differ");
    const Matrix conjugated = connecting.matrix() * a.matrix() * connecting.matrix().adjoint();
    if (max_abs(conjugated - b.matrix()) > tol.connected)
        throw NotUnitarilyConnected("is_orthogonal: b != U a U^dag for the given U");
    const Matrix overlaps = a.eigenbasis().adjoint() * connecting.matrix() * a.eigenbasis();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < a.dim(); ++k)
        worst = std::max(worst, std::abs(overlaps(k, k)));
    return worst <= tol.orthogonality;
}

// Bures fidelity [Tr sqrt(sqrt(a) b sqrt(a))]^2.
inline double bures_fidelity(const DensityOperator& a, const DensityOperator& b,
                             const ToleranceConfig& tol = {}) {
    if (a.dim() != b.dim()) throw DimensionMismatch("bures_fidelity: dimension mismatch");
    const Matrix sa = matrix_root(HermitianMatrix(a.matrix(), tol), 2, tol).matrix();
    Matrix inner = sa * b.matrix() * sa;
    inner = 0.5 * (inner + inner.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(inner);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("bures_fidelity: eigensolver did not converge");
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        s += std::sqrt(std::max(solver.eigenvalues()[i], 0.0));
    return std::clamp(s * s, 0.0, 1.0);
}

// Normalization probe Tr(U_g^dag rho_k^{1/l} U_g^dag rho_{k+1}^{1/l} ...),
// with l shift/root pairs starting at member k. Equals delta_{lN} for the
// l-th-root convention used throughout.
inline Complex normalization_check(const OrthogonalFamily& family, int l, int k = 1,
                                   const ToleranceConfig& tol = {}) {
    const int n = static_cast<int>(family.dim());
    if (l < 1 || l > n) throw Error("normalization_check: l must be in 1..N");
    if (k < 1 || k > n) throw Error("normalization_check: k must be in 1..N");
    const Matrix shift_dag = family.shift().power(-1);
    std::vector<Matrix> factors;
    factors.reserve(2 * static_cast<std::size_t>(l));
    for (int step = 0; step < l; ++step) {
        const int member = ((k - 1 + step) % n) + 1;
        factors.push_back(shift_dag);
        factors.push_back(
            matrix_root(HermitianMatrix(family.member(member).matrix(), tol), l, tol).matrix());
    }
    return trace_product(factors);
}

}  // namespace ogphase
