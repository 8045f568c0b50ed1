#pragma once

#include "hermitian.hpp"
#include "testfn.hpp"

#include <utility>
#include <vector>

namespace specshift {

// Finite surrogate of the absolutely-continuous / singular split: genuine
// a.c. spectrum does not exist in finite dimension, so the decomposition is
// modeled by explicit block labels, and perturbations must preserve the
// block structure. Identities about the part SSFs then become exactly
// testable per block.
enum class PartLabel { AC, Sing };

struct LabeledBlock {
    HermitianOperator op;
    PartLabel label;
};

// Block direct sum with per-block labels. The assembled operator is block
// diagonal in the standard basis ordering of the blocks.
class LabeledOperator {
public:
    explicit LabeledOperator(std::vector<LabeledBlock> blocks);

    const std::vector<LabeledBlock>& blocks() const { return blocks_; }
    std::size_t block_count() const { return blocks_.size(); }
    std::size_t total_dim() const { return total_dim_; }

    bool conformal_with(const LabeledOperator& other) const;

    HermitianOperator flatten() const;
    LabeledOperator add_scaled(const LabeledOperator& other, double scale) const;
    LabeledOperator scaled(double scale) const;

private:
    std::vector<LabeledBlock> blocks_;
    std::size_t total_dim_ = 0;
};

// Pair (H0, V) with conformal block structure, so every H_r = H0 + rV is
// block diagonal with the same labeling and the part projectors are constant
// along the path. Non-conformal V is rejected, not projected.
class LabeledPath {
public:
    LabeledPath(LabeledOperator h0, LabeledOperator v);

    const LabeledOperator& h0() const { return h0_; }
    const LabeledOperator& v() const { return v_; }

private:
    LabeledOperator h0_;
    LabeledOperator v_;
};

// Orthogonal projector onto the span of the basis indices carrying `label`.
HermitianOperator part_projector(const LabeledOperator& h, PartLabel label);

// Part SSF: integral over r in [0,1] of Tr(V phi(H_r) E^{label}), absolute
// quadrature error <= tol. phi is applied to the restricted block matrices
// directly and embedded by zero, so no phi(0) offset leaks onto the
// complementary blocks. By the block structure this equals the plain
// averaging SSF of the labeled sub-path.
double ssf_part(const LabeledPath& path, PartLabel label, const TestFunction& f,
                double tol);

// Residual of the part chain rule
// xi^{label}_{H0+V2,H0} - xi^{label}_{H0+V2,H0+V1} - xi^{label}_{H0+V1,H0}
// evaluated on phi, each term from ssf_part (error <= 3 tol).
double part_additivity_residual(const LabeledOperator& h0, const LabeledOperator& v1,
                                const LabeledOperator& v2, PartLabel label,
                                const TestFunction& f, double tol);

// For each V_n returns (||V - V_n||_1, |xi^(a)_{H0+V_n,H0}(phi) -
// xi^(a)_{H0+V,H0}(phi)|). The gap is expected to satisfy
// gap <= 2 ||V - V_n||_1 ||phi||_inf + 2 tol; the verification suite checks
// that bound.
std::vector<std::pair<double, double>> weak_continuity_table(
    const LabeledOperator& h0, const LabeledOperator& v,
    const std::vector<LabeledOperator>& vseq, const TestFunction& f, double tol);

} // namespace specshift
