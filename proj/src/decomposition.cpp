#include "decomposition.hpp"

#include "errors.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <string>

namespace specshift {

LabeledOperator::LabeledOperator(std::vector<LabeledBlock> blocks)
    : blocks_(std::move(blocks)) {
    if (blocks_.empty())
        raise(ErrorCode::InvalidArgument, "LabeledOperator", "needs at least one block");
    for (const LabeledBlock& b : blocks_) total_dim_ += b.op.dim();
}

bool LabeledOperator::conformal_with(const LabeledOperator& other) const {
    if (blocks_.size() != other.blocks_.size()) return false;
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        if (blocks_[i].op.dim() != other.blocks_[i].op.dim() ||
            blocks_[i].label != other.blocks_[i].label)
            return false;
    return true;
}

HermitianOperator LabeledOperator::flatten() const {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(total_dim_),
                            static_cast<Eigen::Index>(total_dim_));
    Eigen::Index offset = 0;
    for (const LabeledBlock& b : blocks_) {
        const Eigen::Index d = static_cast<Eigen::Index>(b.op.dim());
        m.block(offset, offset, d, d) = b.op.entries();
        offset += d;
    }
    return HermitianOperator(m);
}

LabeledOperator LabeledOperator::add_scaled(const LabeledOperator& other,
                                            double scale) const {
    if (!conformal_with(other))
        raise(ErrorCode::LabelStructureViolation, "LabeledOperator::add_scaled",
              "block structures are not conformal");
    std::vector<LabeledBlock> out;
    out.reserve(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        out.push_back({blocks_[i].op.add_scaled(other.blocks_[i].op, scale),
                       blocks_[i].label});
    return LabeledOperator(std::move(out));
}

LabeledOperator LabeledOperator::scaled(double scale) const {
    std::vector<LabeledBlock> out;
    out.reserve(blocks_.size());
    for (const LabeledBlock& b : blocks_) out.push_back({b.op.scaled(scale), b.label});
    return LabeledOperator(std::move(out));
}

LabeledPath::LabeledPath(LabeledOperator h0, LabeledOperator v)
    : h0_(std::move(h0)), v_(std::move(v)) {
    if (!h0_.conformal_with(v_))
        raise(ErrorCode::LabelStructureViolation, "LabeledPath",
              "V must be block conformal with H0 (same dims and labels)");
}

HermitianOperator part_projector(const LabeledOperator& h, PartLabel label) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(h.total_dim()),
                            static_cast<Eigen::Index>(h.total_dim()));
    Eigen::Index offset = 0;
    for (const LabeledBlock& b : h.blocks()) {
        const Eigen::Index d = static_cast<Eigen::Index>(b.op.dim());
        if (b.label == label)
            m.block(offset, offset, d, d) = Matrix::Identity(d, d);
        offset += d;
    }
    return HermitianOperator(m);
}

double ssf_part(const LabeledPath& path, PartLabel label, const TestFunction& f,
                double tol) {
    if (!(tol > 0.0))
        raise(ErrorCode::InvalidArgument, "ssf_part", "tol must be positive");

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < path.h0().block_count(); ++i)
        if (path.h0().blocks()[i].label == label) active.push_back(i);
    if (active.empty()) return 0.0; // the part is zero-dimensional

    const auto integrand = [&path, &active, &f](double r) {
        double sum = 0.0;
        for (std::size_t i : active) {
            const HermitianOperator& h0b = path.h0().blocks()[i].op;
            const Matrix& vb = path.v().blocks()[i].op.entries();
            const HermitianOperator h_rb = h0b.add_scaled(path.v().blocks()[i].op, r);
            const EigenSystem& sys = h_rb.eigensystem();
            const Matrix vu = sys.eigenvectors.adjoint() * vb * sys.eigenvectors;
            for (Eigen::Index k = 0; k < sys.eigenvalues.size(); ++k)
                sum += f.evaluate(sys.eigenvalues(k), 0) * vu(k, k).real();
        }
        return sum;
    };
    return integrate(integrand, 0.0, 1.0, tol);
}

double part_additivity_residual(const LabeledOperator& h0, const LabeledOperator& v1,
                                const LabeledOperator& v2, PartLabel label,
                                const TestFunction& f, double tol) {
    if (!h0.conformal_with(v1) || !h0.conformal_with(v2))
        raise(ErrorCode::LabelStructureViolation, "part_additivity_residual",
              "h0, v1, v2 must share one block structure");
    const LabeledOperator h1 = h0.add_scaled(v1, 1.0);
    const double full = ssf_part(LabeledPath(h0, v2), label, f, tol);
    const double upper = ssf_part(LabeledPath(h1, v2.add_scaled(v1, -1.0)), label, f, tol);
    const double lower = ssf_part(LabeledPath(h0, v1), label, f, tol);
    return std::abs(full - upper - lower);
}

std::vector<std::pair<double, double>> weak_continuity_table(
    const LabeledOperator& h0, const LabeledOperator& v,
    const std::vector<LabeledOperator>& vseq, const TestFunction& f, double tol) {
    const double base = ssf_part(LabeledPath(h0, v), PartLabel::AC, f, tol);

    std::vector<std::pair<double, double>> table;
    table.reserve(vseq.size());
    for (const LabeledOperator& vn : vseq) {
        if (!h0.conformal_with(vn))
            raise(ErrorCode::LabelStructureViolation, "weak_continuity_table",
                  "sequence element not conformal with h0");
        const LabeledOperator diff = v.add_scaled(vn, -1.0);
        double gap_norm = 0.0;
        for (const LabeledBlock& b : diff.blocks()) gap_norm += trace_norm(b.op);
        const double ssf_gap =
            std::abs(ssf_part(LabeledPath(h0, vn), PartLabel::AC, f, tol) - base);
        table.emplace_back(gap_norm, ssf_gap);
    }
    return table;
}

} // namespace specshift
