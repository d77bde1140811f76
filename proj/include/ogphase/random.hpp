#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "ogphase/linalg.hpp"

namespace ogphase {

// Seeded source for all randomized suites; a fixed seed reproduces every
// matrix and spectrum bit for bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

// Random probability vector with a guaranteed eigenvalue gap and floor, so
// the resulting density operator is comfortably nondegenerate and full rank.
inline RealVector random_spectrum(Rng& rng, int n, double min_gap = 1e-3,
                                  double min_value = 1e-3) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        RealVector lam(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            lam[i] = -std::log(rng.uniform(1e-12, 1.0));
            sum += lam[i];
        }
        lam /= sum;
        std::sort(lam.data(), lam.data() + n);
        bool ok = lam[0] >= min_value;
        for (int i = 0; i + 1 < n && ok; ++i) ok = lam[i + 1] - lam[i] >= min_gap;
        if (ok) return lam;
    }
    throw Error("random_spectrum: failed to draw a gapped spectrum");
}

// Haar-distributed unitary via QR of a complex Ginibre matrix.
inline Matrix random_unitary(Rng& rng, int n) {
    Matrix g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g(r, c) = Complex{rng.normal(), rng.normal()};
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const Complex d = rmat(i, i);
        q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex{1.0, 0.0};
    }
    return q;
}

inline HermitianMatrix random_hermitian(Rng& rng, int n, const ToleranceConfig& tol = {}) {
    Matrix g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g(r, c) = Complex{rng.normal(), rng.normal()};
    Matrix h = 0.5 * (g + g.adjoint().eval());
    return HermitianMatrix(std::move(h), tol);
}

inline std::vector<int> random_permutation(Rng& rng, int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    std::shuffle(p.begin(), p.end(), rng.engine());
    return p;
}

// l distinct indexes from 1..n, in random order.
inline std::vector<int> random_sequence(Rng& rng, int n, int l) {
    std::vector<int> p = random_permutation(rng, n);
    p.resize(static_cast<std::size_t>(l));
    return p;
}

// Block unitary in family coordinates: a single phase-decorated cycle on
// `cycle` (u maps cycle[0] -> cycle[m-1] -> ... -> cycle[1] -> cycle[0],
// 0-based positions) and random diagonal phases elsewhere. With
// `special_cycle` the cycle-entry phases are adjusted so the permuted block
// has determinant exactly 1.
inline Matrix random_block_unitary(Rng& rng, int n, const std::vector<int>& cycle,
                                   bool special_cycle = false) {
    const int m = static_cast<int>(cycle.size());
    if (m == 1) throw Error("random_block_unitary: cycle length must be 0 or >= 2");
    std::vector<bool> in_cycle(static_cast<std::size_t>(n), false);
    for (int p : cycle) {
        if (p < 0 || p >= n || in_cycle[static_cast<std::size_t>(p)])
            throw Error("random_block_unitary: invalid cycle positions");
        in_cycle[static_cast<std::size_t>(p)] = true;
    }
    Matrix u = Matrix::Zero(n, n);
    for (int p = 0; p < n; ++p)
        if (!in_cycle[static_cast<std::size_t>(p)])
            u(p, p) = std::polar(1.0, rng.uniform(-pi, pi));
    if (m == 0) return u;

    std::vector<Complex> phases(static_cast<std::size_t>(m));
    Complex rest{1.0, 0.0};
    for (int a = 1; a < m; ++a) {
        phases[static_cast<std::size_t>(a)] = std::polar(1.0, rng.uniform(-pi, pi));
        rest *= phases[static_cast<std::size_t>(a)];
    }
    if (special_cycle) {
        // det u_p = (-1)^{m-1} * prod(phases); force it to 1.
        const double cycle_sign = (m % 2 == 0) ? -1.0 : 1.0;
        phases[0] = cycle_sign * std::conj(rest);
    } else {
        phases[0] = std::polar(1.0, rng.uniform(-pi, pi));
    }
    for (int a = 0; a < m; ++a) {
        const int col = cycle[static_cast<std::size_t>(a)];
        const int row = cycle[static_cast<std::size_t>((a - 1 + m) % m)];
        u(row, col) = phases[static_cast<std::size_t>(a)];
    }
    return u;
}

}  // namespace ogphase
