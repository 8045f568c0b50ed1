// Acceptance suite: runs every check of the built-in verification suite at
// its pinned bound plus the CLI determinism and round-trip checks, printing
// one PASS/FAIL line per criterion. Exits nonzero when any criterion fails.

#include "verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("%s  %2d. %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

std::string describe(const std::vector<specshift::verify::CheckResult>& rows) {
    std::string detail;
    for (const auto& r : rows) {
        if (!detail.empty()) detail += "; ";
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s: residual %.3g <= bound %.3g",
                      r.check.c_str(), r.residual, r.bound);
        detail += buf;
    }
    return detail;
}

void criterion_from_checks(int criterion, const std::string& name,
                           const std::vector<specshift::verify::CheckResult>& rows) {
    bool pass = true;
    for (const auto& r : rows) pass = pass && r.pass;
    report(criterion, name, pass, describe(rows));
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string command =
        std::string(SPECSHIFT_CLI_PATH) + " " + args + " 2>/dev/null";
    return WEXITSTATUS(std::system(command.c_str()));
}

void criterion_cli_determinism(int criterion) {
    const fs::path dir = fs::current_path() / "acceptance_scratch";
    fs::create_directories(dir);
    const fs::path first = dir / "report_a.csv";
    const fs::path second = dir / "report_b.csv";

    const int code_a = run_cli("verify --seed 7 --out " + first.string());
    const int code_b = run_cli("verify --seed 7 --out " + second.string());
    const std::string text_a = slurp(first);
    const std::string text_b = slurp(second);

    const bool deterministic =
        code_a == 0 && code_b == 0 && !text_a.empty() && text_a == text_b;

    const auto roundtrip = specshift::verify::check_csv_roundtrip(7);
    const bool roundtrip_ok = roundtrip.front().pass;

    report(criterion, "CLI determinism and step CSV round-trip",
           deterministic && roundtrip_ok,
           std::string("verify twice byte-identical: ") +
               (deterministic ? "yes" : "NO") +
               "; CSV round-trip exact: " + (roundtrip_ok ? "yes" : "NO"));
}

} // namespace

int main() {
    const std::uint64_t seed = 7;
    const double tol = 1e-8;
    using namespace specshift::verify;

    criterion_from_checks(1, "trace formula, 200 pairs x 3 families",
                          check_trace_formula(seed));
    criterion_from_checks(2, "averaging formula vs counting, 100 paths",
                          check_averaging_agreement(seed, tol));
    criterion_from_checks(3, "Krein additivity, 100 triples",
                          check_additivity(seed, tol));
    criterion_from_checks(4, "part additivity, 50 labeled triples",
                          check_part_additivity(seed, tol));
    criterion_from_checks(5, "antisymmetry, 100 pairs", check_antisymmetry(seed));
    criterion_from_checks(6, "weak continuity bound and limit, 20 models",
                          check_weak_continuity(seed, tol));
    criterion_from_checks(7, "flow-SSF identity, 100 paths x 5 levels",
                          check_flow_identity(seed));
    criterion_from_checks(8, "Krein determinant engine, 30 pairs",
                          check_krein_agreement(seed));
    criterion_from_checks(9, "mass identity, 100 pairs", check_mass_identity(seed));
    criterion_cli_determinism(10);

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return EXIT_SUCCESS;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return EXIT_FAILURE;
}
