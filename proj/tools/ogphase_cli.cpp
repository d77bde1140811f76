// Command-line front end: off-diagonal mixed-state phase computations,
// nodal/franson/projection sweeps as plot-ready CSV, and the randomized
// self-test. Input is a single JSON document per invocation (stdin or
// --input); complex numbers are [re, im] pairs, matrices row-major, angles
// in radians.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ogphase/ogphase.hpp"

namespace {

using nlohmann::json;
using namespace ogphase;

struct CliOptions {
    std::string input_path;   // empty = stdin
    std::string output_path;  // empty = stdout
    std::string tolerance_path;
    std::string method = "auto";
    std::uint64_t seed = 0;
    int jobs = 1;
};

std::string format12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// Doubles pass through a 12-significant-digit round trip before JSON
// emission so CSV and JSON carry identical formatting.
double round12(double x) {
    return std::strtod(format12(x).c_str(), nullptr);
}

json json_complex(Complex z) {
    return json::array({round12(z.real()), round12(z.imag())});
}

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json read_input(const CliOptions& cli) {
    std::string text;
    if (cli.input_path.empty()) {
        std::ostringstream os;
        os << std::cin.rdbuf();
        text = os.str();
    } else {
        std::ifstream in(cli.input_path);
        if (!in) throw ValidationError("cannot open input file: " + cli.input_path);
        std::ostringstream os;
        os << in.rdbuf();
        text = os.str();
    }
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) throw ValidationError("input is not valid JSON");
    return parsed;
}

void write_output(const CliOptions& cli, const std::string& text) {
    if (cli.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cli.output_path);
        if (!out) throw ValidationError("cannot open output file: " + cli.output_path);
        out << text;
    }
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ValidationError("missing or non-numeric field: " + key);
    return j[key].get<double>();
}

Complex parse_complex(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(where + ": complex values must be [re, im]");
    return Complex{j[0].get<double>(), j[1].get<double>()};
}

Matrix parse_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ValidationError(where + ": expected a matrix");
    const auto rows = j.size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != rows)
            throw ValidationError(where + ": matrix must be square, row-major");
        for (std::size_t c = 0; c < rows; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_complex(j[r][c], where);
    }
    return m;
}

std::vector<double> parse_grid(const json& j, const std::string& where) {
    if (j.is_array()) {
        std::vector<double> out;
        for (const auto& v : j) {
            if (!v.is_number()) throw ValidationError(where + ": grid entries must be numbers");
            out.push_back(v.get<double>());
        }
        if (out.empty()) throw ValidationError(where + ": grid is empty");
        return out;
    }
    if (j.is_object()) {
        const double lo = require_number(j, "min");
        const double hi = require_number(j, "max");
        const int count = static_cast<int>(require_number(j, "count"));
        if (count < 1) throw ValidationError(where + ": grid count must be >= 1");
        return linspace(lo, hi, count);
    }
    throw ValidationError(where + ": grid must be an array or {min, max, count}");
}

void apply_tolerance_overrides(ToleranceConfig& tol, const json& j) {
    if (!j.is_object()) throw ValidationError("tolerances must be an object");
    const auto set = [&](const char* key, double& field) {
        if (j.contains(key)) {
            if (!j[key].is_number()) throw ValidationError("tolerance must be numeric");
            field = j[key].get<double>();
        }
    };
    set("hermiticity", tol.hermiticity);
    set("unitarity", tol.unitarity);
    set("psd_clamp", tol.psd_clamp);
    set("definedness", tol.definedness);
    set("unit_trace", tol.unit_trace);
    set("degeneracy_gap", tol.degeneracy_gap);
    set("orthogonality", tol.orthogonality);
    set("isospectral", tol.isospectral);
    set("connected", tol.connected);
    set("transport", tol.transport);
    set("block", tol.block);
    set("transport_endpoint", tol.transport_endpoint);
}

ToleranceConfig load_tolerances(const CliOptions& cli, const json& problem) {
    ToleranceConfig tol;
    if (!cli.tolerance_path.empty()) {
        std::ifstream in(cli.tolerance_path);
        if (!in) throw ValidationError("cannot open tolerance file: " + cli.tolerance_path);
        json file = json::parse(in, nullptr, false);
        if (file.is_discarded()) throw ValidationError("tolerance file is not valid JSON");
        apply_tolerance_overrides(tol, file);
    }
    if (problem.is_object() && problem.contains("tolerances"))
        apply_tolerance_overrides(tol, problem["tolerances"]);
    return tol;
}

// Index-ordered parallel map; results land by index so output never depends
// on scheduling.
template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += jobs) fn(i);
        });
    for (auto& t : pool) t.join();
}

struct UnitaryInput {
    UnitaryMatrix matrix;
    std::optional<GeneratorPath> path;  // generator evidence for transport checks
    int steps = 1024;
};

Matrix pauli(int axis) {
    Matrix s(2, 2);
    switch (axis) {
        case 0: s << 0, 1, 1, 0; break;
        case 1: s << 0, Complex{0, -1}, Complex{0, 1}, 0; break;
        default: s << 1, 0, 0, -1; break;
    }
    return s;
}

// A constant generator becomes transport evidence only when its diagonal
// vanishes in the family basis; otherwise the unitary is evaluated anyway
// and reported as unverified.
std::optional<GeneratorPath> constant_path_if_transporting(const Matrix& j, const Matrix& basis,
                                                           const ToleranceConfig& tol) {
    const Matrix in_basis = basis.adjoint() * j * basis;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < in_basis.rows(); ++k)
        worst = std::max(worst, std::abs(in_basis(k, k)));
    if (worst > tol.transport) return std::nullopt;
    return GeneratorPath(basis, [j](double) { return j; }, 0.0, 1.0, tol);
}

UnitaryInput parse_unitary(const json& spec, Eigen::Index dim, const Matrix& family_basis,
                           const ToleranceConfig& tol) {
    if (!spec.is_object()) throw ValidationError("unitary must be an object");
    if (spec.contains("matrix")) {
        Matrix m = parse_matrix(spec["matrix"], "unitary.matrix");
        if (m.rows() != dim) throw ValidationError("unitary dimension differs from dim");
        return UnitaryInput{UnitaryMatrix(std::move(m), tol), std::nullopt, 1024};
    }
    if (spec.contains("polarization")) {
        if (dim != 2) throw ValidationError("polarization unitaries are qubit-only");
        const json& p = spec["polarization"];
        const double beta = require_number(p, "beta");
        const double theta = require_number(p, "theta");
        const Matrix j = 0.5 * beta * (std::cos(theta) * pauli(0) + std::sin(theta) * pauli(1));
        return UnitaryInput{polarization_rotation(beta, theta, tol),
                            constant_path_if_transporting(j, family_basis, tol), 1024};
    }
    if (spec.contains("precession")) {
        if (dim != 2) throw ValidationError("precession unitaries are qubit-only");
        const json& p = spec["precession"];
        const double delta = require_number(p, "delta");
        double axis[3] = {1.0, 0.0, 0.0};
        if (p.contains("axis")) {
            if (!p["axis"].is_array() || p["axis"].size() != 3)
                throw ValidationError("precession.axis must be [nx, ny, nz]");
            for (int i = 0; i < 3; ++i) axis[i] = p["axis"][i].get<double>();
            const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] +
                                          axis[2] * axis[2]);
            if (norm <= 0.0) throw ValidationError("precession.axis must be nonzero");
            for (double& a : axis) a /= norm;
        }
        const Matrix n_sigma = axis[0] * pauli(0) + axis[1] * pauli(1) + axis[2] * pauli(2);
        // exp(-i delta n.sigma) = cos(delta) I - i sin(delta) n.sigma
        const Matrix u = std::cos(delta) * Matrix::Identity(2, 2) -
                         Complex{0.0, 1.0} * std::sin(delta) * n_sigma;
        return UnitaryInput{UnitaryMatrix(u, tol),
                            constant_path_if_transporting(delta * n_sigma, family_basis, tol),
                            1024};
    }
    if (spec.contains("generator_path")) {
        const json& p = spec["generator_path"];
        const double s0 = p.contains("s0") ? require_number(p, "s0") : 0.0;
        const double s1 = p.contains("s1") ? require_number(p, "s1") : 1.0;
        if (!(s1 > s0)) throw ValidationError("generator_path: need s1 > s0");
        const int steps = p.contains("steps") ? static_cast<int>(require_number(p, "steps")) : 1024;
        if (!p.contains("samples") || !p["samples"].is_array() || p["samples"].size() < 2)
            throw ValidationError("generator_path: need at least two samples");
        std::vector<Matrix> samples;
        for (const auto& s : p["samples"]) {
            samples.push_back(parse_matrix(s, "generator_path.samples"));
            if (samples.back().rows() != dim)
                throw ValidationError("generator_path: sample dimension differs from dim");
        }
        // Piecewise-linear interpolation between uniformly spaced samples.
        auto sampler = [samples, s0, s1](double s) -> Matrix {
            const double t = (s - s0) / (s1 - s0) * (samples.size() - 1);
            const auto lo = static_cast<std::size_t>(
                std::clamp(t, 0.0, static_cast<double>(samples.size() - 2)));
            const double w = t - static_cast<double>(lo);
            return (1.0 - w) * samples[lo] + w * samples[lo + 1];
        };
        GeneratorPath path(family_basis, sampler, s0, s1, tol);
        UnitaryMatrix endpoint = integrate(path, steps, tol).endpoint;
        return UnitaryInput{std::move(endpoint), std::move(path), steps};
    }
    throw ValidationError(
        "unitary must contain one of: matrix, polarization, precession, generator_path");
}

GammaMethod parse_method(const std::string& name) {
    if (name == "auto") return GammaMethod::automatic;
    if (name == "dense") return GammaMethod::dense;
    if (name == "perm") return GammaMethod::perm;
    throw ValidationError("method must be one of auto|dense|perm");
}

int cmd_gamma(const CliOptions& cli) {
    const json problem = read_input(cli);
    const ToleranceConfig tol = load_tolerances(cli, problem);

    const int dim = static_cast<int>(require_number(problem, "dim"));
    if (dim < 1) throw ValidationError("dim must be >= 1");
    if (!problem.contains("spectrum") || !problem["spectrum"].is_array() ||
        problem["spectrum"].size() != static_cast<std::size_t>(dim))
        throw ValidationError("spectrum must list dim eigenvalues");
    RealVector lambda(dim);
    for (int i = 0; i < dim; ++i) {
        if (!problem["spectrum"][static_cast<std::size_t>(i)].is_number())
            throw ValidationError("spectrum entries must be numbers");
        lambda[i] = problem["spectrum"][static_cast<std::size_t>(i)].get<double>();
    }
    Matrix basis = Matrix::Identity(dim, dim);
    if (problem.contains("basis")) {
        basis = parse_matrix(problem["basis"], "basis");
        if (basis.rows() != dim) throw ValidationError("basis dimension differs from dim");
    }
    if (!problem.contains("sequence") || !problem["sequence"].is_array() ||
        problem["sequence"].empty())
        throw ValidationError("sequence must be a nonempty list of member indexes");
    std::vector<int> seq_indexes;
    for (const auto& v : problem["sequence"]) {
        if (!v.is_number_integer()) throw ValidationError("sequence entries must be integers");
        seq_indexes.push_back(v.get<int>());
    }

    const OrthogonalFamily family = family_from_listed_spectrum(lambda, basis, tol);
    const SequenceSpec seq(seq_indexes, dim);
    if (!problem.contains("unitary")) throw ValidationError("missing unitary");
    const UnitaryInput u = parse_unitary(problem["unitary"], dim, family.family_basis(), tol);

    GammaOptions opts;
    opts.method = parse_method(cli.method);
    opts.path = u.path ? &*u.path : nullptr;
    opts.steps = u.steps;
    const GammaResult result = gamma(u.matrix, family, seq, opts, tol);

    json out;
    out["trace"] = json_complex(result.phase.trace);
    out["defined"] = result.phase.defined;
    if (result.phase.factor) out["factor"] = json_complex(*result.phase.factor);
    if (result.phase.argument) out["argument"] = round12(*result.phase.argument);
    out["method"] = result.method;
    out["transport_verified"] = result.transport_verified;
    write_output(cli, out.dump(2) + "\n");
    return 0;
}

int cmd_nodal(const CliOptions& cli) {
    const json problem = read_input(cli);
    load_tolerances(cli, problem);  // validates overrides; nodal_eta needs no cutoffs
    if (!problem.contains("fidelity_grid") || !problem.contains("omega_grid"))
        throw ValidationError("nodal needs fidelity_grid and omega_grid");
    const std::vector<double> fgrid = parse_grid(problem["fidelity_grid"], "fidelity_grid");
    const std::vector<double> ogrid = parse_grid(problem["omega_grid"], "omega_grid");
    for (double f : fgrid)
        if (f < 0.0 || f > 1.0) throw ValidationError("fidelity values must be in [0, 1]");

    std::ostringstream csv;
    csv << "F_B,Omega,eta_node\n";
    for (double f : fgrid) {
        for (double omega : ogrid) {
            csv << format12(f) << ',' << format12(omega) << ',';
            if (const auto eta = nodal_eta(f, omega)) csv << format12(*eta);
            csv << '\n';
        }
    }
    write_output(cli, csv.str());
    return 0;
}

int cmd_franson(const CliOptions& cli) {
    const json problem = read_input(cli);
    const ToleranceConfig tol = load_tolerances(cli, problem);
    const double r = require_number(problem, "r");
    if (r < 0.0 || r > 1.0) throw ValidationError("r must be in [0, 1]");
    const double theta = require_number(problem, "theta");
    const int order = static_cast<int>(require_number(problem, "order"));
    if (order != 1 && order != 2) throw ValidationError("order must be 1 or 2");
    if (!problem.contains("beta_grid")) throw ValidationError("franson needs beta_grid");
    const std::vector<double> betas = parse_grid(problem["beta_grid"], "beta_grid");

    const OrthogonalFamily family = entangled_pair_family(EntangledPairState(r), tol);
    const JointState psi = purify(family, tol);
    const auto simulate = [&](double beta) -> FringeFit {
        const UnitaryMatrix u = polarization_rotation(beta, theta, tol);
        const ArmConfiguration arms = (order == 1) ? l1_recipe(family, u, 1)
                                                   : l2_recipe(family, u, 1, 2);
        return scan_fringe(psi, arms, 24, tol);
    };

    std::vector<FringeFit> fits(betas.size());
    parallel_for(static_cast<int>(betas.size()), cli.jobs,
                 [&](int i) { fits[static_cast<std::size_t>(i)] = simulate(betas[static_cast<std::size_t>(i)]); });

    const std::vector<double> loci = sign_change_roots(
        [&](double beta) { return simulate(beta).amplitude.real(); }, betas, 1e-6);

    std::ostringstream csv;
    csv << "# franson r=" << format12(r) << " theta=" << format12(theta) << " order=" << order
        << "\n";
    for (double locus : loci) csv << "# sign_change_locus," << format12(locus) << "\n";
    csv << "beta,visibility,phase,trace\n";
    for (std::size_t i = 0; i < betas.size(); ++i) {
        csv << format12(betas[i]) << ',' << format12(fits[i].visibility) << ',';
        if (fits[i].phase) csv << format12(*fits[i].phase);
        csv << ',' << format12(fits[i].amplitude.real()) << '\n';
    }
    write_output(cli, csv.str());
    return 0;
}

int cmd_projection(const CliOptions& cli) {
    const json problem = read_input(cli);
    const ToleranceConfig tol = load_tolerances(cli, problem);
    const double lambda1 = require_number(problem, "lambda1");
    if (!(lambda1 > 0.5) || lambda1 > 1.0)
        throw ValidationError("lambda1 must lie in (0.5, 1]");
    const double theta = require_number(problem, "theta");
    if (!problem.contains("delta_grid")) throw ValidationError("projection needs delta_grid");
    const std::vector<double> deltas = parse_grid(problem["delta_grid"], "delta_grid");

    const std::vector<ProjectionPoint> sweep = projection_sweep(lambda1, theta, deltas, tol);
    const std::vector<double> loci = projection_jump_loci(lambda1, theta, deltas, 1e-6, tol);

    std::ostringstream csv;
    csv << "# projection lambda1=" << format12(lambda1) << " theta=" << format12(theta) << "\n";
    for (double locus : loci) csv << "# jump_locus," << format12(locus) << "\n";
    csv << "delta,arg_mod_2pi\n";
    for (const ProjectionPoint& pt : sweep) {
        csv << format12(pt.delta) << ',';
        if (pt.argument) csv << format12(*pt.argument);
        csv << '\n';
    }
    write_output(cli, csv.str());
    return 0;
}

int cmd_selftest(const CliOptions& cli, bool has_input, int max_dim_flag, int trials_flag) {
    SelfTestConfig cfg;
    cfg.seed = cli.seed;
    json problem;
    if (has_input) {
        problem = read_input(cli);
        if (problem.contains("max_dim"))
            cfg.max_dim = static_cast<int>(require_number(problem, "max_dim"));
        if (problem.contains("trials"))
            cfg.trials = static_cast<int>(require_number(problem, "trials"));
    }
    if (max_dim_flag > 0) cfg.max_dim = max_dim_flag;
    if (trials_flag > 0) cfg.trials = trials_flag;
    if (cfg.max_dim < 2 || cfg.max_dim > 8)
        throw ValidationError("max_dim must be in 2..8");
    if (cfg.trials < 1) throw ValidationError("trials must be >= 1");
    const ToleranceConfig tol = load_tolerances(cli, problem);

    const std::vector<SuiteResult> suites = run_selftest(cfg, tol);
    bool all_passed = true;
    json out;
    out["seed"] = cfg.seed;
    out["max_dim"] = cfg.max_dim;
    out["trials"] = cfg.trials;
    out["suites"] = json::array();
    for (const SuiteResult& s : suites) {
        json entry;
        entry["name"] = s.name;
        entry["trials"] = s.trials;
        entry["max_deviation"] = round12(s.max_deviation);
        entry["threshold"] = round12(s.threshold);
        entry["passed"] = s.passed;
        if (!s.passed) entry["failing_case"] = s.failure_dump;
        out["suites"].push_back(entry);
        all_passed = all_passed && s.passed;
    }
    out["passed"] = all_passed;
    write_output(cli, out.dump(2) + "\n");
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"off-diagonal mixed-state geometric phases"};
    app.require_subcommand(1);

    CliOptions cli;
    app.add_option("--input", cli.input_path, "JSON problem file (default: stdin)");
    app.add_option("--output", cli.output_path, "output file (default: stdout)");
    app.add_option("--seed", cli.seed, "seed for randomized suites")->default_val(0);
    app.add_option("--tolerance-file", cli.tolerance_path, "JSON tolerance overrides");
    app.add_option("--method", cli.method, "trace evaluation route")
        ->check(CLI::IsMember({"auto", "dense", "perm"}))
        ->default_val("auto");
    app.add_option("--jobs", cli.jobs, "worker threads for sweeps")->default_val(1);

    auto* sub_gamma = app.add_subcommand("gamma", "off-diagonal phase of one problem spec");
    auto* sub_nodal = app.add_subcommand("nodal", "qubit l=2 nodal surface (CSV)");
    auto* sub_franson = app.add_subcommand("franson", "two-photon coincidence sweep (CSV)");
    auto* sub_projection = app.add_subcommand("projection", "projection phase sweep (CSV)");
    auto* sub_selftest = app.add_subcommand("selftest", "oracle-equivalence and invariant suites");
    int selftest_max_dim = 0;
    int selftest_trials = 0;
    sub_selftest->add_option("--max-dim", selftest_max_dim, "largest Hilbert dimension (2..8)");
    sub_selftest->add_option("--trials", selftest_trials, "trials per randomized cell");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (sub_gamma->parsed()) return cmd_gamma(cli);
        if (sub_nodal->parsed()) return cmd_nodal(cli);
        if (sub_franson->parsed()) return cmd_franson(cli);
        if (sub_projection->parsed()) return cmd_projection(cli);
        if (sub_selftest->parsed())
            return cmd_selftest(cli, !cli.input_path.empty(), selftest_max_dim, selftest_trials);
    } catch (const ValidationError& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    } catch (const Error& e) {
        json err;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    }
    return 2;
}
