#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir() {
    const fs::path dir = fs::current_path() / "test_cli_scratch";
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args) {
    const fs::path dir = scratch_dir();
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string command = std::string(SPECSHIFT_CLI_PATH) + " " + args + " >" +
                                out.string() + " 2>" + err.string();
    const int raw = std::system(command.c_str());
    return {WEXITSTATUS(raw), slurp(out), slurp(err)};
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

// 1x1 model: H0 = [0], H1 = [1].
void write_scalar_pair(const fs::path& dir) {
    write_file(dir / "h0.mtx",
               "%%MatrixMarket matrix coordinate complex hermitian\n1 1 1\n1 1 0 0\n");
    write_file(dir / "h1.mtx",
               "%%MatrixMarket matrix coordinate complex hermitian\n1 1 1\n1 1 1 0\n");
}

} // namespace

TEST_CASE("ssf counting writes the step CSV and exits zero") {
    const fs::path dir = scratch_dir();
    write_scalar_pair(dir);
    const fs::path out = dir / "xi.csv";
    const RunResult r = run_cli("ssf --h0 " + (dir / "h0.mtx").string() + " --h1 " +
                                (dir / "h1.mtx").string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(slurp(out) == "breakpoint,value\n0,1\n1,0\n");
}

TEST_CASE("dimension mismatch maps to exit 2 with a named diagnostic") {
    const fs::path dir = scratch_dir();
    write_scalar_pair(dir);
    write_file(dir / "wide.mtx",
               "%%MatrixMarket matrix coordinate complex hermitian\n"
               "2 2 2\n1 1 0 0\n2 2 1 0\n");
    const RunResult r = run_cli("ssf --h0 " + (dir / "h0.mtx").string() + " --h1 " +
                                (dir / "wide.mtx").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("DimensionMismatch") != std::string::npos);
}

TEST_CASE("parse errors map to exit 2") {
    const fs::path dir = scratch_dir();
    write_file(dir / "junk.mtx", "not a matrix\n");
    const RunResult r =
        run_cli("ssf --h0 " + (dir / "junk.mtx").string() + " --v " +
                (dir / "junk.mtx").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("ParseError") != std::string::npos);

    const RunResult usage = run_cli("ssf");
    CHECK(usage.exit_code == 2);
}

TEST_CASE("ssf averaging emits the paired value") {
    const fs::path dir = scratch_dir();
    write_scalar_pair(dir);
    const RunResult r = run_cli("ssf --engine averaging --phi bump:-0.25:1.25:1.0 "
                                "--tol 1e-8 --h0 " +
                                (dir / "h0.mtx").string() + " --h1 " +
                                (dir / "h1.mtx").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("quantity,value\nxi_phi,") == 0);
}

TEST_CASE("compare-engines on the scalar model agrees across engines") {
    const fs::path dir = scratch_dir();
    write_scalar_pair(dir);
    const RunResult r = run_cli("compare-engines --lambda 0.5 --tol 1e-8 --h0 " +
                                (dir / "h0.mtx").string() + " --h1 " +
                                (dir / "h1.mtx").string());
    REQUIRE(r.exit_code == 0);

    std::istringstream lines(r.out);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(header == "lambda,counting,averaging,krein");

    double lambda = 0.0, averaging = 0.0, krein = 0.0;
    long counting = 0;
    REQUIRE(std::sscanf(row.c_str(), "%lf,%ld,%lf,%lf", &lambda, &counting,
                        &averaging, &krein) == 4);
    CHECK(lambda == 0.5);
    CHECK(counting == 1);
    CHECK(std::abs(averaging - 1.0) <= 1e-8);
    CHECK(std::abs(krein - 1.0) <= 1e-3);
}

TEST_CASE("flow prints the signed crossing count") {
    const fs::path dir = scratch_dir();
    write_scalar_pair(dir);
    const RunResult r = run_cli("flow --lambda 0.5 --h0 " + (dir / "h0.mtx").string() +
                                " --h1 " + (dir / "h1.mtx").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "1\n");
}

TEST_CASE("decompose reports part values and the identity residual") {
    const fs::path dir = scratch_dir();
    write_file(dir / "ac.mtx",
               "%%MatrixMarket matrix coordinate complex hermitian\n1 1 1\n1 1 0 0\n");
    write_file(dir / "sing.mtx",
               "%%MatrixMarket matrix coordinate complex hermitian\n"
               "2 2 3\n1 1 1 0\n2 1 0.25 0.125\n2 2 2 0\n");
    write_file(dir / "vac.mtx",
               "%%MatrixMarket matrix coordinate complex hermitian\n1 1 1\n1 1 0.5 0\n");
    write_file(dir / "vsing.mtx",
               "%%MatrixMarket matrix coordinate complex hermitian\n"
               "2 2 3\n1 1 -0.5 0\n2 1 0.1 0\n2 2 0.25 0\n");
    write_file(dir / "h0.manifest", "ac.mtx label=AC\nsing.mtx label=SING\n");
    write_file(dir / "v.manifest", "vac.mtx label=AC\nvsing.mtx label=SING\n");

    const RunResult r = run_cli("decompose --h0 " + (dir / "h0.manifest").string() +
                                " --v " + (dir / "v.manifest").string() +
                                " --phi cosine:-2:4:1.0 --tol 1e-8");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("quantity,value\nxi_ac,") == 0);
    CHECK(r.out.find("identity_pass,1\n") != std::string::npos);

    // Conformality violation: swapped labels in the V manifest.
    write_file(dir / "v_bad.manifest", "vac.mtx label=SING\nvsing.mtx label=AC\n");
    const RunResult bad = run_cli("decompose --h0 " + (dir / "h0.manifest").string() +
                                  " --v " + (dir / "v_bad.manifest").string() +
                                  " --phi cosine:-2:4:1.0");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("LabelStructureViolation") != std::string::npos);
}

TEST_CASE("verify passes at the calibrated tolerance and writes the report") {
    const fs::path dir = scratch_dir();
    const fs::path report = dir / "report.csv";
    const RunResult r =
        run_cli("verify --seed 7 --tol 1e-8 --out " + report.string());
    CHECK(r.exit_code == 0);

    const std::string text = slurp(report);
    CHECK(text.find("check,engine,residual,bound,pass\n") == 0);
    CHECK(text.find(",0\n") == std::string::npos); // no failed rows
    CHECK(text.find("trace_formula,counting,") != std::string::npos);
    CHECK(text.find("krein_agreement,krein,") != std::string::npos);
}

TEST_CASE("verify exits 1 when a loose tolerance breaks the pinned bounds") {
    const fs::path dir = scratch_dir();
    const fs::path report = dir / "loose.csv";
    const RunResult r =
        run_cli("verify --seed 7 --tol 1e-2 --out " + report.string());
    CHECK(r.exit_code == 1);
    CHECK(slurp(report).find(",0\n") != std::string::npos); // a failed row exists
}
