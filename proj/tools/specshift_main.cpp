// specshift command line front end. Loads Matrix Market operators and
// labeled block manifests, runs the SSF engines and the verification suite,
// and emits CSV reports. Talks to the library exclusively through the C API.
//
// Exit codes: 0 success, 1 a verification residual exceeded its bound
// (report still written), 2 input or computation errors.

#include "specshift/specshift.h"

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitError = 2;

[[noreturn]] void die(const std::string& message) {
    std::cerr << "specshift: " << message << "\n";
    std::exit(kExitError);
}

void check(specshift_status status) {
    if (status != SPECSHIFT_OK) die(specshift_last_error());
}

struct OperatorDeleter {
    void operator()(specshift_operator* p) const { specshift_operator_free(p); }
};
struct TestfnDeleter {
    void operator()(specshift_testfn* p) const { specshift_testfn_free(p); }
};
struct StepfnDeleter {
    void operator()(specshift_stepfn* p) const { specshift_stepfn_free(p); }
};
struct LabeledDeleter {
    void operator()(specshift_labeled* p) const { specshift_labeled_free(p); }
};

using OperatorPtr = std::unique_ptr<specshift_operator, OperatorDeleter>;
using TestfnPtr = std::unique_ptr<specshift_testfn, TestfnDeleter>;
using StepfnPtr = std::unique_ptr<specshift_stepfn, StepfnDeleter>;
using LabeledPtr = std::unique_ptr<specshift_labeled, LabeledDeleter>;

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

OperatorPtr load_operator(const std::string& path) {
    specshift_operator* op = nullptr;
    check(specshift_operator_read_matrix_market(path.c_str(), &op));
    return OperatorPtr(op);
}

// One of --h1/--v is given; derive the other through the library.
struct OperatorPair {
    OperatorPtr h0;
    OperatorPtr h1;
    OperatorPtr v;
};

OperatorPair load_pair(const std::string& h0_path, const std::string& h1_path,
                       const std::string& v_path) {
    OperatorPair pair;
    pair.h0 = load_operator(h0_path);
    if (!h1_path.empty() && !v_path.empty())
        die("load_pair: InvalidArgument: give either --h1 or --v, not both");
    if (h1_path.empty() && v_path.empty())
        die("load_pair: InvalidArgument: one of --h1 or --v is required");
    if (!h1_path.empty()) {
        pair.h1 = load_operator(h1_path);
        specshift_operator* v = nullptr;
        check(specshift_operator_add_scaled(pair.h1.get(), pair.h0.get(), -1.0, &v));
        pair.v = OperatorPtr(v);
    } else {
        pair.v = load_operator(v_path);
        specshift_operator* h1 = nullptr;
        check(specshift_operator_add_scaled(pair.h0.get(), pair.v.get(), 1.0, &h1));
        pair.h1 = OperatorPtr(h1);
    }
    return pair;
}

// --phi family:a:b:amplitude with family in {bump, cosine, hat, plateau}.
TestfnPtr parse_phi(const std::string& spec) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream in(spec);
    while (std::getline(in, token, ':')) parts.push_back(token);
    if (parts.size() != 4)
        die("parse_phi: ParseError: expected family:a:b:amplitude, got '" + spec + "'");

    specshift_testfn_family family;
    if (parts[0] == "bump")
        family = SPECSHIFT_TESTFN_BUMP;
    else if (parts[0] == "cosine")
        family = SPECSHIFT_TESTFN_COSINE;
    else if (parts[0] == "hat")
        family = SPECSHIFT_TESTFN_HAT;
    else if (parts[0] == "plateau")
        family = SPECSHIFT_TESTFN_PLATEAU;
    else
        die("parse_phi: ParseError: unknown family '" + parts[0] + "'");

    char* end = nullptr;
    const double a = std::strtod(parts[1].c_str(), &end);
    const double b = std::strtod(parts[2].c_str(), &end);
    const double amplitude = std::strtod(parts[3].c_str(), &end);
    specshift_testfn* f = nullptr;
    check(specshift_testfn_create(family, a, b, amplitude, &f));
    return TestfnPtr(f);
}

// --grid a:b:n, n evenly spaced points including both ends.
std::vector<double> parse_grid(const std::string& spec) {
    double a = 0.0, b = 0.0;
    long n = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld", &a, &b, &n) != 3 || n < 1 || b < a)
        die("parse_grid: ParseError: expected a:b:n with a <= b, n >= 1, got '" +
            spec + "'");
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] =
            n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return grid;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) die("emit: IoError: cannot open '" + out_path + "'");
    out << text;
    if (!out) die("emit: IoError: write failed for '" + out_path + "'");
}

std::string step_csv(const specshift_stepfn* s) {
    char* text = nullptr;
    check(specshift_stepfn_to_csv(s, &text));
    std::string out(text);
    specshift_string_free(text);
    return out;
}

double spectral_diameter(const specshift_operator* h0, const specshift_operator* h1) {
    const size_t dim = specshift_operator_dim(h0);
    std::vector<double> e0(dim), e1(dim);
    check(specshift_operator_eigenvalues(h0, e0.data()));
    check(specshift_operator_eigenvalues(h1, e1.data()));
    const double lo = std::min(e0.front(), e1.front());
    const double hi = std::max(e0.back(), e1.back());
    return hi - lo;
}

int run_ssf(const std::string& h0_path, const std::string& h1_path,
            const std::string& v_path, const std::string& engine,
            const std::string& phi_spec, const std::string& grid_spec, double tol,
            const std::string& out_path) {
    const OperatorPair pair = load_pair(h0_path, h1_path, v_path);

    if (engine == "counting") {
        specshift_stepfn* xi = nullptr;
        check(specshift_ssf_counting(pair.h0.get(), pair.h1.get(), &xi));
        StepfnPtr guard(xi);
        emit(step_csv(xi), out_path);
        return kExitOk;
    }
    if (engine == "averaging") {
        if (phi_spec.empty()) die("ssf: InvalidArgument: --phi required for averaging");
        const TestfnPtr f = parse_phi(phi_spec);
        double value = 0.0;
        check(specshift_ssf_averaging(pair.h0.get(), pair.v.get(), f.get(), tol,
                                      &value));
        emit("quantity,value\nxi_phi," + g17(value) + "\n", out_path);
        return kExitOk;
    }
    if (engine == "krein") {
        if (grid_spec.empty()) die("ssf: InvalidArgument: --grid required for krein");
        const std::vector<double> grid = parse_grid(grid_spec);
        const double scale =
            std::max(spectral_diameter(pair.h0.get(), pair.h1.get()), 1.0);
        std::vector<double> xi(grid.size());
        check(specshift_ssf_krein(pair.h0.get(), pair.v.get(), grid.data(),
                                  grid.size(), 0.1 * scale, 1e-13 * scale, 0.25,
                                  xi.data()));
        std::string text = "lambda,xi\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            text += g17(grid[i]) + "," + g17(xi[i]) + "\n";
        emit(text, out_path);
        return kExitOk;
    }
    die("ssf: InvalidArgument: unknown engine '" + engine + "'");
}

int run_flow(const std::string& h0_path, const std::string& h1_path,
             const std::string& v_path, double lambda, double max_step,
             const std::string& out_path) {
    const OperatorPair pair = load_pair(h0_path, h1_path, v_path);
    int64_t flow = 0;
    check(specshift_spectral_flow(pair.h0.get(), pair.v.get(), lambda, max_step,
                                  &flow));
    emit(std::to_string(flow) + "\n", out_path);
    return kExitOk;
}

int run_decompose(const std::string& h0_path, const std::string& v_path,
                  const std::string& phi_spec, double tol,
                  const std::string& out_path) {
    specshift_labeled* h0_raw = nullptr;
    check(specshift_labeled_read_manifest(h0_path.c_str(), &h0_raw));
    LabeledPtr h0(h0_raw);
    specshift_labeled* v_raw = nullptr;
    check(specshift_labeled_read_manifest(v_path.c_str(), &v_raw));
    LabeledPtr v(v_raw);
    const TestfnPtr f = parse_phi(phi_spec);

    double xi_ac = 0.0, xi_sing = 0.0;
    check(specshift_ssf_part(h0.get(), v.get(), SPECSHIFT_LABEL_AC, f.get(), tol,
                             &xi_ac));
    check(specshift_ssf_part(h0.get(), v.get(), SPECSHIFT_LABEL_SING, f.get(), tol,
                             &xi_sing));

    specshift_operator* h0_flat_raw = nullptr;
    check(specshift_labeled_flatten(h0.get(), &h0_flat_raw));
    OperatorPtr h0_flat(h0_flat_raw);
    specshift_operator* v_flat_raw = nullptr;
    check(specshift_labeled_flatten(v.get(), &v_flat_raw));
    OperatorPtr v_flat(v_flat_raw);
    double xi_total = 0.0;
    check(specshift_ssf_averaging(h0_flat.get(), v_flat.get(), f.get(), tol,
                                  &xi_total));

    const double residual = std::abs(xi_ac + xi_sing - xi_total);
    const double bound = 2.0 * tol;
    const bool pass = residual <= bound;

    std::string text = "quantity,value\n";
    text += "xi_ac," + g17(xi_ac) + "\n";
    text += "xi_sing," + g17(xi_sing) + "\n";
    text += "xi_total," + g17(xi_total) + "\n";
    text += "identity_residual," + g17(residual) + "\n";
    text += "identity_bound," + g17(bound) + "\n";
    text += std::string("identity_pass,") + (pass ? "1" : "0") + "\n";
    emit(text, out_path);
    return pass ? kExitOk : kExitVerifyFailed;
}

int run_verify(uint64_t seed, double tol, const std::string& out_path) {
    char* report = nullptr;
    int failed = 0;
    check(specshift_verify_run(seed, tol, 0, &report, &failed));
    std::string text(report);
    specshift_string_free(report);
    emit(text, out_path);
    std::cerr << "verify: " << (failed == 0 ? "all checks passed"
                                            : std::to_string(failed) + " check(s) failed")
              << "\n";
    return failed == 0 ? kExitOk : kExitVerifyFailed;
}

int run_compare(const std::string& h0_path, const std::string& h1_path,
                const std::string& v_path, const std::string& grid_spec,
                double lambda, bool lambda_set, double tol,
                const std::string& out_path) {
    const OperatorPair pair = load_pair(h0_path, h1_path, v_path);
    std::vector<double> grid;
    if (!grid_spec.empty())
        grid = parse_grid(grid_spec);
    else if (lambda_set)
        grid.push_back(lambda);
    else
        die("compare-engines: InvalidArgument: give --lambda or --grid");

    specshift_stepfn* xi_raw = nullptr;
    check(specshift_ssf_counting(pair.h0.get(), pair.h1.get(), &xi_raw));
    StepfnPtr xi(xi_raw);

    const double scale = std::max(spectral_diameter(pair.h0.get(), pair.h1.get()), 1.0);
    std::vector<double> krein(grid.size());
    check(specshift_ssf_krein(pair.h0.get(), pair.v.get(), grid.data(), grid.size(),
                              0.1 * scale, 1e-13 * scale, 0.25, krein.data()));

    // The averaging column is a normalized local average: the averaging SSF
    // against a narrow plateau window around lambda, divided by the window
    // mass 3*delta. Exact whenever xi is constant across the window.
    const double delta = std::max(0.05 * scale, 1e-3);
    std::string text = "lambda,counting,averaging,krein\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double l = grid[i];
        int64_t counted = 0;
        check(specshift_stepfn_evaluate(xi.get(), l, &counted));

        specshift_testfn* window_raw = nullptr;
        check(specshift_testfn_create_plateau(l - 2.0 * delta, l - delta, l + delta,
                                              l + 2.0 * delta, 1.0, &window_raw));
        TestfnPtr window(window_raw);
        const double window_mass = 3.0 * delta;
        double averaged = 0.0;
        check(specshift_ssf_averaging(pair.h0.get(), pair.v.get(), window.get(),
                                      tol * window_mass, &averaged));
        averaged /= window_mass;

        text += g17(l) + "," + std::to_string(counted) + "," + g17(averaged) + "," +
                g17(krein[i]) + "\n";
    }
    emit(text, out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral shift functions of finite self-adjoint operator pairs"};
    app.require_subcommand(1);

    std::string h0_path, h1_path, v_path, phi_spec, grid_spec, out_path, engine;
    double tol = 1e-8;
    double lambda = 0.0;
    double max_step = 1.0 / 64.0;
    uint64_t seed = 7;

    CLI::App* ssf = app.add_subcommand("ssf", "Compute the SSF of a pair");
    ssf->add_option("--h0", h0_path, "H0 operator file (Matrix Market)")->required();
    ssf->add_option("--h1", h1_path, "H1 operator file");
    ssf->add_option("--v", v_path, "perturbation file (H1 = H0 + V)");
    ssf->add_option("--engine", engine, "counting|averaging|krein")
        ->default_val("counting");
    ssf->add_option("--phi", phi_spec, "test function family:a:b:amplitude");
    ssf->add_option("--grid", grid_spec, "lambda grid a:b:n (krein)");
    ssf->add_option("--tol", tol, "quadrature tolerance");
    ssf->add_option("--out", out_path, "output CSV path (default stdout)");

    CLI::App* flow = app.add_subcommand("flow", "Signed eigenvalue flow through a level");
    flow->add_option("--h0", h0_path, "H0 operator file")->required();
    flow->add_option("--h1", h1_path, "H1 operator file");
    flow->add_option("--v", v_path, "perturbation file");
    flow->add_option("--lambda", lambda, "reference level")->required();
    flow->add_option("--max-step", max_step, "largest parameter step");
    flow->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* decompose =
        app.add_subcommand("decompose", "AC/SING part SSFs of a labeled model");
    decompose->add_option("--h0", h0_path, "H0 manifest file")->required();
    decompose->add_option("--v", v_path, "V manifest file")->required();
    decompose->add_option("--phi", phi_spec, "test function family:a:b:amplitude")
        ->required();
    decompose->add_option("--tol", tol, "quadrature tolerance");
    decompose->add_option("--out", out_path, "output CSV path (default stdout)");

    CLI::App* verify = app.add_subcommand("verify", "Run the built-in identity suite");
    verify->add_option("--seed", seed, "suite seed");
    verify->add_option("--tol", tol, "quadrature tolerance");
    verify->add_option("--out", out_path, "report CSV path (default stdout)");

    CLI::App* compare =
        app.add_subcommand("compare-engines", "All three engines at given levels");
    compare->add_option("--h0", h0_path, "H0 operator file")->required();
    compare->add_option("--h1", h1_path, "H1 operator file");
    compare->add_option("--v", v_path, "perturbation file");
    CLI::Option* lambda_opt = compare->add_option("--lambda", lambda, "single level");
    compare->add_option("--grid", grid_spec, "level grid a:b:n");
    compare->add_option("--tol", tol, "quadrature tolerance");
    compare->add_option("--out", out_path, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "specshift: ParseError: " << e.what() << "\n";
        return kExitError;
    }

    if (!(tol > 0.0)) die("InvalidArgument: --tol must be positive");

    try {
        if (ssf->parsed())
            return run_ssf(h0_path, h1_path, v_path, engine, phi_spec, grid_spec, tol,
                           out_path);
        if (flow->parsed())
            return run_flow(h0_path, h1_path, v_path, lambda, max_step, out_path);
        if (decompose->parsed())
            return run_decompose(h0_path, v_path, phi_spec, tol, out_path);
        if (verify->parsed()) return run_verify(seed, tol, out_path);
        if (compare->parsed())
            return run_compare(h0_path, h1_path, v_path, grid_spec, lambda,
                               lambda_opt->count() > 0, tol, out_path);
    } catch (const std::exception& e) {
        die(e.what());
    }
    return kExitError;
}
