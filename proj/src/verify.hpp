#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace specshift::verify {

struct CheckResult {
    std::string check;
    std::string engine; // counting | averaging | krein
    double residual;
    double bound;
    bool pass;
};

struct Options {
    std::uint64_t seed = 7;
    double tol = 1e-8; // quadrature tolerance for the averaging engine
    int max_threads = 0; // 0: SPECSHIFT_THREADS, else hardware concurrency
};

// The built-in suite. Check bounds are pinned; --tol only feeds the
// quadratures, so a loose tolerance legitimately fails the toleranced
// checks. Results come back in a fixed order regardless of fan-out.
std::vector<CheckResult> run_all(const Options& opts);

std::string report_csv(const std::vector<CheckResult>& results);
int count_failures(const std::vector<CheckResult>& results);

// Individual checks (the acceptance suite drives them one by one).
std::vector<CheckResult> check_trace_formula(std::uint64_t seed);
std::vector<CheckResult> check_averaging_agreement(std::uint64_t seed, double tol);
std::vector<CheckResult> check_additivity(std::uint64_t seed, double tol);
std::vector<CheckResult> check_part_additivity(std::uint64_t seed, double tol);
std::vector<CheckResult> check_antisymmetry(std::uint64_t seed);
std::vector<CheckResult> check_weak_continuity(std::uint64_t seed, double tol);
std::vector<CheckResult> check_flow_identity(std::uint64_t seed);
std::vector<CheckResult> check_krein_agreement(std::uint64_t seed);
std::vector<CheckResult> check_mass_identity(std::uint64_t seed);
std::vector<CheckResult> check_csv_roundtrip(std::uint64_t seed);

} // namespace specshift::verify
