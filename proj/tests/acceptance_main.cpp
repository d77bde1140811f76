// Acceptance suite: one line per criterion, PASS/FAIL with the measured
// deviation against the pinned tolerance. Exit code is the number of
// failing criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "ogphase/ogphase.hpp"

using namespace ogphase;

namespace {

int failures = 0;

void report(int criterion, const std::string& label, bool passed, const std::string& detail) {
    std::printf("%s  criterion %2d: %s (%s)\n", passed ? "PASS" : "FAIL", criterion,
                label.c_str(), detail.c_str());
    if (!passed) ++failures;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

Matrix sigma(int axis) {
    Matrix s(2, 2);
    switch (axis) {
        case 0: s << 0, 1, 1, 0; break;
        case 1: s << 0, Complex{0, -1}, Complex{0, 1}, 0; break;
        default: s << 1, 0, 0, -1; break;
    }
    return s;
}

// --- criterion 1: oracle equivalence --------------------------------------

void criterion_oracle() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(2024);
    double worst = 0.0;
    long instances = 0;
    for (int n = 2; n <= 8; ++n) {
        for (int m = 0; m <= n; m == 0 ? m = 2 : ++m) {
            for (int l = 1; l <= std::min(n, 4); ++l) {
                for (int trial = 0; trial < 500; ++trial) {
                    const RealVector lam = random_spectrum(rng, n);
                    const Matrix basis = random_unitary(rng, n);
                    const OrthogonalFamily family = family_from_listed_spectrum(lam, basis);
                    std::vector<int> all = random_permutation(rng, n);
                    std::vector<int> cycle;
                    for (int i = 0; i < m; ++i)
                        cycle.push_back(all[static_cast<std::size_t>(i)] - 1);
                    const Matrix block = random_block_unitary(rng, n, cycle);
                    const UnitaryMatrix u(basis * block * basis.adjoint());
                    const BlockDecomposition d = decompose(u, family.family_basis());
                    const SequenceSpec seq(random_sequence(rng, n, l), n);
                    const Complex fast =
                        diagonal_part(d, family, seq) + permutation_part(d, family, seq);
                    const Complex dense = detail::gamma_dense_trace(u, family, seq, {});
                    worst = std::max(worst, std::abs(fast - dense));
                    ++instances;
                }
            }
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(1, "oracle equivalence, 500 instances per (N, m, l) cell",
           worst < 1e-10 && elapsed < 60.0,
           std::to_string(instances) + " instances, max dev " + fmt(worst) + ", " +
               fmt(elapsed) + " s");
}

// --- criterion 2: worked-example pins --------------------------------------

void criterion_pins() {
    Rng rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        // N = 3, m = 2 block with random phases
        {
            const RealVector lam = random_spectrum(rng, 3);
            const OrthogonalFamily family =
                family_from_listed_spectrum(lam, Matrix::Identity(3, 3));
            Matrix u = Matrix::Zero(3, 3);
            u(0, 1) = std::polar(1.0, rng.uniform(-pi, pi));
            u(1, 0) = std::polar(1.0, rng.uniform(-pi, pi));
            u(2, 2) = std::polar(1.0, rng.uniform(-pi, pi));
            const BlockDecomposition d = decompose(UnitaryMatrix(u), family.family_basis());
            const Complex d2 = diagonal_part(d, family, SequenceSpec({1, 2}, 3));
            worst = std::max(worst,
                             std::abs(d2 - std::sqrt(lam[1] * lam[2]) * pow_int(u(2, 2), 2)));
            const Complex d3 = diagonal_part(d, family, SequenceSpec({1, 2, 3}, 3));
            worst = std::max(
                worst, std::abs(d3 - std::cbrt(lam[0] * lam[1] * lam[2]) * pow_int(u(2, 2), 3)));
            const Complex p2 = permutation_part(d, family, SequenceSpec({1, 2}, 3));
            worst = std::max(worst, std::abs(p2 - u(0, 1) * u(1, 0) *
                                                      (lam[0] + std::sqrt(lam[1] * lam[2]))));
        }
        // N = 3, m = 0 diagonal forms
        {
            const RealVector lam = random_spectrum(rng, 3);
            const OrthogonalFamily family =
                family_from_listed_spectrum(lam, Matrix::Identity(3, 3));
            Matrix u = Matrix::Zero(3, 3);
            for (int k = 0; k < 3; ++k) u(k, k) = std::polar(1.0, rng.uniform(-pi, pi));
            const BlockDecomposition d = decompose(UnitaryMatrix(u), family.family_basis());
            const Complex d2 = diagonal_part(d, family, SequenceSpec({1, 2}, 3));
            const Complex expected2 = std::sqrt(lam[0] * lam[2]) * pow_int(u(0, 0), 2) +
                                      std::sqrt(lam[0] * lam[1]) * pow_int(u(1, 1), 2) +
                                      std::sqrt(lam[1] * lam[2]) * pow_int(u(2, 2), 2);
            worst = std::max(worst, std::abs(d2 - expected2));
            const Complex d3 = diagonal_part(d, family, SequenceSpec({1, 2, 3}, 3));
            const Complex expected3 =
                std::cbrt(lam[0] * lam[1] * lam[2]) *
                (pow_int(u(0, 0), 3) + pow_int(u(1, 1), 3) + pow_int(u(2, 2), 3));
            worst = std::max(worst, std::abs(d3 - expected3));
        }
        // N = 3 full permutations with det u_p = 1
        {
            const RealVector lam = random_spectrum(rng, 3);
            const OrthogonalFamily family =
                family_from_listed_spectrum(lam, Matrix::Identity(3, 3));
            const Matrix u = random_block_unitary(rng, 3, {0, 1, 2}, true);
            const BlockDecomposition d = decompose(UnitaryMatrix(u), family.family_basis());
            const Complex p123 = permutation_part(d, family, SequenceSpec({1, 2, 3}, 3));
            worst = std::max(worst, std::abs(p123 - Complex{1, 0}));
            const Complex p132 = permutation_part(d, family, SequenceSpec({1, 3, 2}, 3));
            worst = std::max(
                worst, std::abs(p132 - Complex{3.0 * std::cbrt(lam[0] * lam[1] * lam[2]), 0}));
        }
        // N = 5 partial permutation f^{(4)}
        {
            const RealVector lam = random_spectrum(rng, 5);
            const OrthogonalFamily family =
                family_from_listed_spectrum(lam, Matrix::Identity(5, 5));
            const Matrix u = random_block_unitary(rng, 5, {0, 1});
            const BlockDecomposition d = decompose(UnitaryMatrix(u), family.family_basis());
            const double f = compute_f(d, family, SequenceSpec({1, 4, 5, 3}, 5));
            const double expected = std::pow(lam[1] * lam[2] * lam[2] * lam[3], 0.25) +
                                    std::pow(lam[0] * lam[1] * lam[3] * lam[4], 0.25);
            worst = std::max(worst, std::abs(f - expected));
        }
    }
    report(2, "worked-example pins (N=3 D/P forms, N=5 f)", worst < 1e-11,
           "max dev " + fmt(worst));
}

// --- criterion 3: parity law ------------------------------------------------

void criterion_parity() {
    Rng rng(17);
    long checked = 0;
    long violations = 0;
    for (int n = 2; n <= 8; ++n) {
        const RealVector lam = random_spectrum(rng, n);
        const OrthogonalFamily family = family_from_listed_spectrum(lam, random_unitary(rng, n));
        std::vector<int> cycle(static_cast<std::size_t>(n));
        std::iota(cycle.begin(), cycle.end(), 0);
        const Matrix block = random_block_unitary(rng, n, cycle, true);
        const UnitaryMatrix u(family.family_basis() * block * family.family_basis().adjoint());
        const BlockDecomposition d = decompose(u, family.family_basis());
        const double expected = (n % 2 == 0) ? -1.0 : 1.0;
        std::vector<int> seq(static_cast<std::size_t>(n));
        std::iota(seq.begin(), seq.end(), 1);
        do {
            const double f = compute_f(d, family, SequenceSpec(seq, n));
            if (f <= 1e-10) continue;
            const PhaseResult p = gamma_parity(d, family, SequenceSpec(seq, n));
            if (!p.defined || std::abs(*p.factor - Complex{expected, 0}) > 1e-12) ++violations;
            ++checked;
        } while (std::next_permutation(seq.begin(), seq.end()));
    }
    report(3, "parity law over every full-permutation sequence ordering, N <= 8",
           violations == 0, std::to_string(checked) + " sequences, " +
                                std::to_string(violations) + " violations");
}

// --- criterion 4: normalization ----------------------------------------------

void criterion_normalization() {
    Rng rng(23);
    double worst_f = 0.0;
    double worst_norm = 0.0;
    for (int n = 2; n <= 8; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const OrthogonalFamily family =
                family_from_listed_spectrum(random_spectrum(rng, n), random_unitary(rng, n));
            std::vector<int> cycle(static_cast<std::size_t>(n));
            std::iota(cycle.begin(), cycle.end(), 0);
            const Matrix block = random_block_unitary(rng, n, cycle);
            const UnitaryMatrix u(family.family_basis() * block *
                                  family.family_basis().adjoint());
            const BlockDecomposition d = decompose(u, family.family_basis());
            std::vector<int> idseq(static_cast<std::size_t>(n));
            std::iota(idseq.begin(), idseq.end(), 1);
            worst_f = std::max(worst_f,
                               std::abs(compute_f(d, family, SequenceSpec(idseq, n)) - 1.0));
            for (int l = 1; l <= n; ++l) {
                const double expected = (l == n) ? 1.0 : 0.0;
                worst_norm = std::max(
                    worst_norm, std::abs(normalization_check(family, l) - expected));
            }
        }
    }
    report(4, "f^(N) = 1 on identity sequences; trace normalization delta_{lN}",
           worst_f < 1e-12 && worst_norm < 1e-10,
           "f dev " + fmt(worst_f) + ", normalization dev " + fmt(worst_norm));
}

// --- criteria 5 and 10: qubit closed forms + transport residuals -------------

void criterion_qubit_forms_and_transport() {
    Rng rng(29);
    double worst_closed = 0.0;
    double worst_residual = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        double c[6];
        for (double& x : c) x = rng.uniform(-2.0, 2.0);
        const GeneratorPath path(
            Matrix::Identity(2, 2),
            [c](double s) {
                const double a = c[0] * std::sin(2.0 * pi * s + c[1]) + c[2];
                const double b = c[3] * std::cos(pi * s + c[4]) + c[5] * s;
                return Matrix(a * sigma(0) + b * sigma(1));
            },
            0.0, 1.0);
        const Propagator p = integrate(path, 256);
        worst_residual = std::max(worst_residual, transport_residual(p, 64));

        const double lambda1 = rng.uniform(0.55, 0.98);
        RealVector lam(2);
        lam << lambda1, 1.0 - lambda1;
        const OrthogonalFamily family =
            family_from_listed_spectrum(lam, Matrix::Identity(2, 2));
        const QubitPathDescriptor d = qubit_path_descriptor(p.endpoint, lambda1);
        const Complex dense1 =
            detail::gamma_dense_trace(p.endpoint, family, SequenceSpec({1}, 2), {});
        const Complex dense2 =
            detail::gamma_dense_trace(p.endpoint, family, SequenceSpec({1, 2}, 2), {});
        worst_closed = std::max(worst_closed,
                                std::abs(dense1 - qubit_l1_trace(d, lambda1, 1)));
        worst_closed = std::max(worst_closed,
                                std::abs(dense2 - Complex{qubit_l2_trace(d), 0}));
    }
    report(5, "qubit closed forms vs dense traces over 1000 integrated propagators",
           worst_closed < 1e-8, "max dev " + fmt(worst_closed));

    bool rejected = false;
    try {
        const GeneratorPath bad(
            Matrix::Identity(2, 2), [](double) { return Matrix(sigma(2)); }, 0.0, 1.0);
        integrate(bad, 32);
    } catch (const NotParallelTransporting&) {
        rejected = true;
    }
    report(10, "transport residual < 1e-8 at 64 samples; sigma_z control rejected",
           worst_residual < 1e-8 && rejected,
           "max residual " + fmt(worst_residual) + (rejected ? ", control rejected" : ", control NOT rejected"));
}

// --- criterion 6: nodal surface ----------------------------------------------

void criterion_nodal() {
    double worst_trace = 0.0;
    double worst_eta = 0.0;
    long points = 0;
    for (double f : linspace(0.0, 1.0, 100)) {
        for (double omega : linspace(0.0, 2.0 * pi, 100)) {
            if (std::sqrt(f) * std::cos(omega) <= 0.0) continue;
            const auto eta = nodal_eta(f, omega);
            if (!eta) continue;
            ++points;
            worst_trace = std::max(worst_trace, std::abs(qubit_l2_trace({*eta, omega, f})));
            const auto trace_of_eta = [&](double e) {
                return qubit_l2_trace({e, omega, f});
            };
            const std::vector<double> zeros =
                sign_change_roots(trace_of_eta, linspace(0.0, 1.0, 50), 1e-10);
            if (zeros.size() != 1) {
                worst_eta = 1.0;
                continue;
            }
            worst_eta = std::max(worst_eta, std::abs(zeros[0] - *eta));
        }
    }
    report(6, "nodal surface: closed-form eta zeroes the l=2 trace; bisection agrees",
           worst_trace < 1e-8 && worst_eta < 1e-8,
           std::to_string(points) + " grid points, trace dev " + fmt(worst_trace) +
               ", eta dev " + fmt(worst_eta));
}

// --- criterion 7: purification consistency ------------------------------------

void criterion_purification() {
    Rng rng(31);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double r = rng.uniform(0.05, 0.98);
        const double beta = rng.uniform(0.0, 2.0 * pi);
        const double theta = rng.uniform(0.0, 2.0 * pi);
        const OrthogonalFamily family = entangled_pair_family(EntangledPairState(r));
        const UnitaryMatrix u = polarization_rotation(beta, theta);
        const JointState psi = purify(family);
        const Complex g1 = detail::gamma_dense_trace(u, family, SequenceSpec({1}, 2), {});
        const Complex g2 = detail::gamma_dense_trace(u, family, SequenceSpec({1, 2}, 2), {});
        const FringeFit f1 = scan_fringe(psi, l1_recipe(family, u, 1));
        const FringeFit f2 = scan_fringe(psi, l2_recipe(family, u, 1, 2));
        worst = std::max({worst, std::abs(f1.amplitude - g1), std::abs(f2.amplitude - g2)});
        if (f1.phase && std::abs(g1) > 1e-9)
            worst = std::max(worst, std::abs(std::polar(1.0, *f1.phase) - g1 / std::abs(g1)));
        if (f2.phase && std::abs(g2) > 1e-9)
            worst = std::max(worst, std::abs(std::polar(1.0, *f2.phase) - g2 / std::abs(g2)));
    }

    // Sign-change loci from full fringe scans.
    double worst_locus = 0.0;
    for (double r : {0.3, 0.6, 0.9}) {
        const OrthogonalFamily family = entangled_pair_family(EntangledPairState(r));
        const JointState psi = purify(family);
        const auto l1_trace = [&](double beta) {
            return scan_fringe(psi, l1_recipe(family, polarization_rotation(beta, 0.8), 1))
                .amplitude.real();
        };
        const auto l2_trace = [&](double beta) {
            return scan_fringe(psi, l2_recipe(family, polarization_rotation(beta, 0.8), 1, 2))
                .amplitude.real();
        };
        const std::vector<double> z1 = sign_change_roots(l1_trace, linspace(0.0, 12.0, 200), 1e-7);
        const double expected1[] = {pi, 3.0 * pi};
        if (z1.size() != 2) worst_locus = 1.0;
        for (std::size_t i = 0; i < std::min<std::size_t>(2, z1.size()); ++i)
            worst_locus = std::max(worst_locus, std::abs(z1[i] - expected1[i]));
        const std::vector<double> z2 =
            sign_change_roots(l2_trace, linspace(0.0, 2.0 * pi, 200), 1e-7);
        const double root = 2.0 * std::atan(std::pow(1.0 - r * r, 0.25));
        const double expected2[] = {root, 2.0 * pi - root};
        if (z2.size() != 2) worst_locus = 1.0;
        for (std::size_t i = 0; i < std::min<std::size_t>(2, z2.size()); ++i)
            worst_locus = std::max(worst_locus, std::abs(z2[i] - expected2[i]));
    }
    report(7, "purification: recipe fringes equal gamma; sign-change loci",
           worst < 1e-9 && worst_locus < 1e-6,
           "fringe dev " + fmt(worst) + ", locus dev " + fmt(worst_locus));
}

// --- criterion 8: complementarity ----------------------------------------------

void criterion_complementarity() {
    const double lambda1 = 0.7;
    const double fidelity = 4.0 * lambda1 * (1.0 - lambda1);
    long bad = 0;
    for (double eta : linspace(0.0, 1.0, 200)) {
        for (double omega : linspace(0.0, 2.0 * pi, 200)) {
            const QubitPathDescriptor d{eta, omega, fidelity};
            const double l1 = std::abs(qubit_l1_trace(d, lambda1, 1));
            const double l2 = std::abs(qubit_l2_trace(d));
            if (l1 < 1e-10 && l2 < 1e-10) ++bad;
        }
    }
    report(8, "complementarity: l=1 and l=2 never vanish together on a 200x200 grid",
           bad == 0, std::to_string(bad) + " simultaneous nodes");
}

// --- criterion 9: projection phase ----------------------------------------------

void criterion_projection() {
    // pure limit: constant argument pi on the open interval
    bool pure_ok = true;
    for (const ProjectionPoint& pt :
         projection_sweep(1.0, pi / 6.0, linspace(0.01, 2.0 * pi - 0.01, 500))) {
        if (!pt.argument || std::abs(*pt.argument - pi) > 1e-10) pure_ok = false;
    }

    // Jump loci at delta = 2 arccos(sqrt(lambda1)) and its 2pi complement.
    const std::vector<double> loci =
        projection_jump_loci(0.87, 0.5 * pi, linspace(0.0, 2.0 * pi, 500));
    const double expected = 2.0 * std::acos(std::sqrt(0.87));
    double locus_dev = 1.0;
    if (loci.size() == 2) {
        locus_dev = std::max(std::abs(loci[0] - expected),
                             std::abs(loci[1] - (2.0 * pi - expected)));
    }

    Rng rng(37);
    double worst_dense = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        ProjectionConfig c;
        c.lambda1 = rng.uniform(0.5 + 1e-9, 1.0);
        c.lambda2 = 1.0 - c.lambda1;
        c.eta = rng.uniform(0.0, 1.0);
        c.alpha = rng.uniform(-pi, pi);
        worst_dense =
            std::max(worst_dense, std::abs(projection_trace(c) - projection_trace_dense(c)));
    }
    report(9, "projection phase: pure-limit pi, theta=pi/2 jump loci, closed vs dense",
           pure_ok && locus_dev < 1e-6 && worst_dense < 1e-12,
           std::string(pure_ok ? "pure limit ok" : "pure limit BROKEN") + ", locus dev " +
               fmt(locus_dev) + ", dense dev " + fmt(worst_dense));
}

}  // namespace

int main() {
    criterion_oracle();
    criterion_pins();
    criterion_parity();
    criterion_normalization();
    criterion_qubit_forms_and_transport();
    criterion_nodal();
    criterion_purification();
    criterion_complementarity();
    criterion_projection();
    std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "OK" : "FAILED", failures);
    return failures;
}
