#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "ogphase/states.hpp"

namespace ogphase {

// An ordered list of distinct family indexes j_1..j_l (1-based) selecting the
// mutually orthogonal density operators entering an order-l phase.
class SequenceSpec {
  public:
    SequenceSpec(std::vector<int> indexes, int dim) : indexes_(std::move(indexes)) {
        if (indexes_.empty() || static_cast<int>(indexes_.size()) > dim)
            throw Error("SequenceSpec: length must be in 1..N");
        std::vector<bool> seen(static_cast<std::size_t>(dim), false);
        for (int j : indexes_) {
            if (j < 1 || j > dim) throw Error("SequenceSpec: index out of range");
            if (seen[static_cast<std::size_t>(j - 1)])
                throw Error("SequenceSpec: indexes must be distinct");
            seen[static_cast<std::size_t>(j - 1)] = true;
        }
    }

    const std::vector<int>& indexes() const { return indexes_; }
    int length() const { return static_cast<int>(indexes_.size()); }

  private:
    std::vector<int> indexes_;
};

// Split of a unitary, expressed in the family eigenbasis, into a single
// permutation cycle on m basis vectors and a diagonal action on the rest.
// `permuted_indexes[q]` is the 1-based family position carrying cycle label
// q+1 after relabeling to the canonical orientation
// psi_1 -> psi_m -> ... -> psi_2 -> psi_1.
struct BlockDecomposition {
    int dim = 0;
    int m = 0;                          // 0 (fully diagonal) or >= 2
    std::vector<int> permuted_indexes;  // size m, cycle labels 1..m
    std::vector<int> cyclic_indexes;    // ascending family positions
    Matrix in_family_basis;             // U in family coordinates
    Complex det_up{1.0, 0.0};           // determinant of the permuted block
};

// Recover the block structure of `u` relative to `basis`. Fails with
// NotBlockStructured when the entry pattern is not one-per-row-and-column,
// and with MultiCycleUnsupported when the moved indexes split into more
// than one cycle.
inline BlockDecomposition decompose(const UnitaryMatrix& u, const Matrix& basis,
                                    const ToleranceConfig& tol = {}) {
    const Eigen::Index n = u.dim();
    UnitaryMatrix b(basis, tol);
    if (b.dim() != n) throw DimensionMismatch("decompose: basis dimension mismatch");
    const Matrix m = basis.adjoint() * u.matrix() * basis;

    std::vector<int> row_of_col(static_cast<std::size_t>(n), -1);
    std::vector<int> col_hits(static_cast<std::size_t>(n), 0);
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::Index r = 0; r < n; ++r) {
            if (std::abs(m(r, c)) <= tol.block) continue;
            if (row_of_col[static_cast<std::size_t>(c)] != -1)
                throw NotBlockStructured("decompose: column has more than one entry");
            row_of_col[static_cast<std::size_t>(c)] = static_cast<int>(r);
        }
        if (row_of_col[static_cast<std::size_t>(c)] == -1)
            throw NotBlockStructured("decompose: column has no entry above tolerance");
        ++col_hits[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(c)])];
    }
    for (int hits : col_hits)
        if (hits != 1) throw NotBlockStructured("decompose: row has more than one entry");

    BlockDecomposition d;
    d.dim = static_cast<int>(n);
    d.in_family_basis = m;
    std::vector<bool> moved(static_cast<std::size_t>(n), false);
    for (Eigen::Index c = 0; c < n; ++c) {
        if (row_of_col[static_cast<std::size_t>(c)] == static_cast<int>(c))
            d.cyclic_indexes.push_back(static_cast<int>(c) + 1);
        else
            moved[static_cast<std::size_t>(c)] = true;
    }
    d.m = static_cast<int>(std::count(moved.begin(), moved.end(), true));
    if (d.m == 0) return d;

    // Walk the cycle from its smallest member. Following the mapping
    // direction psi_{l_1} -> psi_{l_m} -> ... assigns labels m, m-1, ..., 2.
    int start = 0;
    while (!moved[static_cast<std::size_t>(start)]) ++start;
    d.permuted_indexes.assign(static_cast<std::size_t>(d.m), 0);
    d.permuted_indexes[0] = start + 1;
    int cursor = row_of_col[static_cast<std::size_t>(start)];
    for (int label = d.m; label >= 2; --label) {
        if (cursor == start || !moved[static_cast<std::size_t>(cursor)])
            throw MultiCycleUnsupported("decompose: permuted block closes early");
        d.permuted_indexes[static_cast<std::size_t>(label - 1)] = cursor + 1;
        cursor = row_of_col[static_cast<std::size_t>(cursor)];
    }
    if (cursor != start)
        throw MultiCycleUnsupported("decompose: permuted block is not a single cycle");

    Complex entry_product{1.0, 0.0};
    for (Eigen::Index c = 0; c < n; ++c)
        if (moved[static_cast<std::size_t>(c)])
            entry_product *= m(row_of_col[static_cast<std::size_t>(c)], c);
    const double cycle_sign = (d.m % 2 == 0) ? -1.0 : 1.0;  // sign of a single m-cycle
    d.det_up = cycle_sign * entry_product;
    return d;
}

namespace detail {

inline int mod_index(int x, int n) {
    return ((x % n) + n) % n;
}

// Seed eigenvalue sitting at family position `pos` (0-based) of rho_j:
// rho_j = U_g^{j-1} rho_1 U_g^{dag(j-1)} shifts the spectrum by j-1 slots.
inline double member_diagonal(const OrthogonalFamily& family, int j, int pos) {
    const int n = static_cast<int>(family.dim());
    return family.family_spectrum()[mod_index(pos - (j - 1), n)];
}

}  // namespace detail

// Contribution of the diagonal block:
//   sum over cyclic k of (U_kk)^l * (lambda_{k_1} ... lambda_{k_l})^{1/l},
// each factor traced back to the seed spectrum through the member shifts.
// Vanishes identically when l exceeds the rank of the seed.
inline Complex diagonal_part(const BlockDecomposition& d, const OrthogonalFamily& family,
                             const SequenceSpec& seq) {
    if (d.dim != static_cast<int>(family.dim()))
        throw DimensionMismatch("diagonal_part: decomposition/family mismatch");
    const int l = seq.length();
    Complex total{0.0, 0.0};
    for (int pos1 : d.cyclic_indexes) {
        const int pos = pos1 - 1;
        double lam_product = 1.0;
        for (int j : seq.indexes()) lam_product *= detail::member_diagonal(family, j, pos);
        total += pow_int(d.in_family_basis(pos, pos), l) *
                 std::pow(lam_product, 1.0 / static_cast<double>(l));
    }
    return total;
}

struct FTerms {
    std::vector<double> terms;  // the m cycle-start products A_i, each >= 0
    double value = 0.0;         // their sum
};

// Index-tracing evaluation of f^{(l)}: every l-step walk around the permuted
// cycle contributes one product of l-th roots of seed eigenvalues. The walk
// position is first unwound by one cycle step per factor, then shifted back
// to the seed by j_k - 1 slots; all index arithmetic is 0-based with
// wraparound.
inline FTerms compute_f_terms(const BlockDecomposition& d, const OrthogonalFamily& family,
                              const SequenceSpec& seq) {
    if (d.dim != static_cast<int>(family.dim()))
        throw DimensionMismatch("compute_f_terms: decomposition/family mismatch");
    const int l = seq.length();
    const int n = d.dim;
    if (d.m < 2 || l % d.m != 0)
        throw SequenceNotMultiple("compute_f_terms: sequence length is not a multiple of m");
    FTerms out;
    out.terms.reserve(static_cast<std::size_t>(d.m));
    const double root = 1.0 / static_cast<double>(l);
    for (int i = 0; i < d.m; ++i) {
        double lam_product = 1.0;
        for (int k = 1; k <= l; ++k) {
            const int slot = detail::mod_index(i + k, d.m);
            const int pos = d.permuted_indexes[static_cast<std::size_t>(slot)] - 1;
            const int jk = seq.indexes()[static_cast<std::size_t>(k - 1)];
            lam_product *= family.family_spectrum()[detail::mod_index(pos - (jk - 1), n)];
        }
        const double term = std::pow(lam_product, root);
        out.terms.push_back(term);
        out.value += term;
    }
    return out;
}

inline double compute_f(const BlockDecomposition& d, const OrthogonalFamily& family,
                        const SequenceSpec& seq) {
    return compute_f_terms(d, family, seq).value;
}

// Contribution of the permuted block:
//   [(-1)^{m-1} det u_p]^{l/m} * f^{(l)},
// exactly zero unless the sequence length is a whole number of cycle turns.
inline Complex permutation_part(const BlockDecomposition& d, const OrthogonalFamily& family,
                                const SequenceSpec& seq) {
    if (d.dim != static_cast<int>(family.dim()))
        throw DimensionMismatch("permutation_part: decomposition/family mismatch");
    const int l = seq.length();
    if (d.m < 2 || l % d.m != 0) return Complex{0.0, 0.0};
    const int turns = l / d.m;
    const double cycle_sign = (d.m % 2 == 0) ? -1.0 : 1.0;
    const Complex prefactor = pow_int(cycle_sign * d.det_up, turns);
    return prefactor * compute_f(d, family, seq);
}

// Parity law for full permutations (m = N): the phase factor is -1 in even
// dimension and +1 in odd dimension whenever f^{(N)} does not vanish.
inline PhaseResult gamma_parity(const BlockDecomposition& d, const OrthogonalFamily& family,
                                const SequenceSpec& seq, const ToleranceConfig& tol = {}) {
    const int n = static_cast<int>(family.dim());
    if (d.m != n) throw Error("gamma_parity: decomposition is not a full permutation");
    if (std::abs(d.det_up - Complex{1.0, 0.0}) > tol.unitarity)
        throw NotSpecialUnitary("gamma_parity: permuted block determinant differs from 1");
    const double f = compute_f(d, family, seq);
    if (f <= tol.definedness)
        throw IndeterminatePhase("gamma_parity: f^{(N)} vanishes for this sequence");
    const double sign = (n % 2 == 0) ? -1.0 : 1.0;
    return phase_factor(Complex{sign * f, 0.0}, tol.definedness);
}

}  // namespace ogphase
