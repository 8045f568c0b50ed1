#include "io.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace specshift {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::ifstream open_input(const std::string& path, const char* operation) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, operation, "cannot open '" + path + "'");
    return in;
}

// Next content line: comments (%) and blank lines skipped.
bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        std::size_t pos = line.find_first_not_of(" \t\r\n");
        if (pos == std::string::npos) continue;
        if (line[pos] == '%') continue;
        return true;
    }
    return false;
}

double parse_double(const std::string& token, const char* operation) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        raise(ErrorCode::ParseError, operation, "bad number '" + token + "'");
    return v;
}

} // namespace

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

HermitianOperator read_matrix_market(const std::string& path) {
    std::ifstream in = open_input(path, "read_matrix_market");

    std::string banner;
    if (!std::getline(in, banner))
        raise(ErrorCode::ParseError, "read_matrix_market", "empty file '" + path + "'");
    std::istringstream hs(lowercase(banner));
    std::string magic, object, format, field, symmetry;
    hs >> magic >> object >> format >> field >> symmetry;
    if (magic != "%%matrixmarket" || object != "matrix")
        raise(ErrorCode::ParseError, "read_matrix_market",
              "'" + path + "' is not a Matrix Market matrix file");

    const bool coordinate = format == "coordinate";
    if (coordinate && !(field == "complex" && symmetry == "hermitian"))
        raise(ErrorCode::ParseError, "read_matrix_market",
              "coordinate files must be 'complex hermitian' in '" + path + "'");
    if (!coordinate &&
        !(format == "array" && field == "complex" && symmetry == "general"))
        raise(ErrorCode::ParseError, "read_matrix_market",
              "unsupported header '" + banner + "' in '" + path + "'");

    std::string line;
    if (!next_data_line(in, line))
        raise(ErrorCode::ParseError, "read_matrix_market", "missing size line in '" + path + "'");
    std::istringstream sz(line);

    if (coordinate) {
        long rows = 0, cols = 0, nnz = 0;
        sz >> rows >> cols >> nnz;
        if (!sz || rows < 1 || rows != cols || nnz < 0)
            raise(ErrorCode::ParseError, "read_matrix_market",
                  "bad size line '" + line + "' in '" + path + "'");
        Matrix m = Matrix::Zero(rows, cols);
        std::vector<bool> seen(static_cast<std::size_t>(rows) *
                                   static_cast<std::size_t>(cols),
                               false);
        for (long k = 0; k < nnz; ++k) {
            if (!next_data_line(in, line))
                raise(ErrorCode::ParseError, "read_matrix_market",
                      "expected " + std::to_string(nnz) + " entries in '" + path + "'");
            std::istringstream es(line);
            long i = 0, j = 0;
            double re = 0.0, im = 0.0;
            es >> i >> j >> re >> im;
            if (!es || i < 1 || j < 1 || i > rows || j > cols)
                raise(ErrorCode::ParseError, "read_matrix_market",
                      "bad entry '" + line + "' in '" + path + "'");
            if (j > i)
                raise(ErrorCode::ParseError, "read_matrix_market",
                      "hermitian files store the lower triangle; got (" +
                          std::to_string(i) + "," + std::to_string(j) + ") in '" +
                          path + "'");
            const std::size_t flat = static_cast<std::size_t>(i - 1) *
                                         static_cast<std::size_t>(cols) +
                                     static_cast<std::size_t>(j - 1);
            if (seen[flat])
                raise(ErrorCode::ParseError, "read_matrix_market",
                      "duplicate entry (" + std::to_string(i) + "," +
                          std::to_string(j) + ") in '" + path + "'");
            seen[flat] = true;
            m(i - 1, j - 1) = std::complex<double>(re, im);
            if (i != j) m(j - 1, i - 1) = std::complex<double>(re, -im);
        }
        return HermitianOperator(m);
    }

    long rows = 0, cols = 0;
    sz >> rows >> cols;
    if (!sz || rows < 1 || rows != cols)
        raise(ErrorCode::ParseError, "read_matrix_market",
              "bad size line '" + line + "' in '" + path + "'");
    Matrix m(rows, cols);
    for (long j = 0; j < cols; ++j)
        for (long i = 0; i < rows; ++i) {
            if (!next_data_line(in, line))
                raise(ErrorCode::ParseError, "read_matrix_market",
                      "expected " + std::to_string(rows * cols) + " entries in '" +
                          path + "'");
            std::istringstream es(line);
            double re = 0.0, im = 0.0;
            es >> re >> im;
            if (!es)
                raise(ErrorCode::ParseError, "read_matrix_market",
                      "bad entry '" + line + "' in '" + path + "'");
            m(i, j) = std::complex<double>(re, im);
        }
    return HermitianOperator(m);
}

void write_matrix_market(const std::string& path, const HermitianOperator& op) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "write_matrix_market", "cannot open '" + path + "'");
    const Matrix& m = op.entries();
    const Eigen::Index n = m.rows();
    out << "%%MatrixMarket matrix coordinate complex hermitian\n";
    out << n << " " << n << " " << n * (n + 1) / 2 << "\n";
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            out << (i + 1) << " " << (j + 1) << " " << format_g17(m(i, j).real())
                << " " << format_g17(m(i, j).imag()) << "\n";
    if (!out) raise(ErrorCode::IoError, "write_matrix_market", "write failed for '" + path + "'");
}

LabeledOperator read_labeled_manifest(const std::string& path) {
    std::ifstream in = open_input(path, "read_labeled_manifest");
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::vector<LabeledBlock> blocks;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t pos = line.find_first_not_of(" \t\r\n");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        std::string file, label_token;
        ls >> file >> label_token;
        if (file.empty() || label_token.empty())
            raise(ErrorCode::ParseError, "read_labeled_manifest",
                  "expected '<file> label=AC|SING', got '" + line + "' in '" + path + "'");
        PartLabel label;
        if (label_token == "label=AC")
            label = PartLabel::AC;
        else if (label_token == "label=SING")
            label = PartLabel::Sing;
        else
            raise(ErrorCode::ParseError, "read_labeled_manifest",
                  "unknown label token '" + label_token + "' in '" + path + "'");
        std::filesystem::path block_path(file);
        if (!block_path.is_absolute()) block_path = base / block_path;
        blocks.push_back({read_matrix_market(block_path.string()), label});
    }
    if (blocks.empty())
        raise(ErrorCode::ParseError, "read_labeled_manifest",
              "no blocks listed in '" + path + "'");
    return LabeledOperator(std::move(blocks));
}

std::string step_to_csv(const StepFunction& s) {
    std::string out = "breakpoint,value\n";
    const auto& bp = s.breakpoints();
    const auto& vv = s.values();
    for (std::size_t k = 0; k < vv.size(); ++k)
        out += format_g17(bp[k]) + "," + std::to_string(vv[k]) + "\n";
    if (!bp.empty()) out += format_g17(bp.back()) + ",0\n";
    return out;
}

StepFunction step_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        (line != "breakpoint,value" && line != "breakpoint,value\r"))
        raise(ErrorCode::ParseError, "step_from_csv", "missing 'breakpoint,value' header");

    std::vector<double> bp;
    std::vector<std::int64_t> vv;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            raise(ErrorCode::ParseError, "step_from_csv", "bad row '" + line + "'");
        bp.push_back(parse_double(line.substr(0, comma), "step_from_csv"));
        const std::string value_token = line.substr(comma + 1);
        char* end = nullptr;
        vv.push_back(std::strtoll(value_token.c_str(), &end, 10));
        if (end == value_token.c_str() || *end != '\0')
            raise(ErrorCode::ParseError, "step_from_csv",
                  "bad integer '" + value_token + "'");
    }
    if (bp.empty()) return StepFunction{};
    if (vv.back() != 0)
        raise(ErrorCode::ParseError, "step_from_csv", "final row must carry value 0");
    vv.pop_back();
    return StepFunction(std::move(bp), std::move(vv));
}

void write_step_csv(const std::string& path, const StepFunction& s) {
    std::ofstream out(path);
    if (!out) raise(ErrorCode::IoError, "write_step_csv", "cannot open '" + path + "'");
    out << step_to_csv(s);
    if (!out) raise(ErrorCode::IoError, "write_step_csv", "write failed for '" + path + "'");
}

StepFunction read_step_csv(const std::string& path) {
    std::ifstream in = open_input(path, "read_step_csv");
    std::stringstream buf;
    buf << in.rdbuf();
    return step_from_csv(buf.str());
}

} // namespace specshift
