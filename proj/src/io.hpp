#pragma once

#include "decomposition.hpp"
#include "hermitian.hpp"
#include "testfn.hpp"

#include <string>

namespace specshift {

// Shortest-round-trip decimal formatting used in every CSV we emit; 17
// significant digits reproduce a double exactly.
std::string format_g17(double x);

// Matrix Market operator files. Accepted headers:
//   %%MatrixMarket matrix coordinate complex hermitian   (lower triangle)
//   %%MatrixMarket matrix array complex general          (column-major, dense)
// The usual symmetrization rule applies on construction.
HermitianOperator read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const HermitianOperator& op);

// Labeled block model manifest: one `<operator-file> label=AC|SING` line per
// block, `#` comments allowed, paths relative to the manifest.
LabeledOperator read_labeled_manifest(const std::string& path);

// Step function CSV, header `breakpoint,value`: one row per breakpoint with
// the value on the right-open interval starting there; the final row carries
// value 0. Round-trips exactly.
std::string step_to_csv(const StepFunction& s);
StepFunction step_from_csv(const std::string& text);
void write_step_csv(const std::string& path, const StepFunction& s);
StepFunction read_step_csv(const std::string& path);

} // namespace specshift
