#include "hermitian.hpp"

#include "errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace specshift {

namespace {

constexpr double kSymmetrizeTol = 1e-12;

} // namespace

HermitianOperator::HermitianOperator(const Matrix& entries)
    : cache_(std::make_shared<CacheBox>()) {
    if (entries.rows() < 1 || entries.rows() != entries.cols())
        raise(ErrorCode::InvalidArgument, "HermitianOperator",
              "matrix must be square with dim >= 1, got " +
                  std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));

    const double scale = std::max(1.0, entries.norm());
    const double asym = (entries - entries.adjoint()).norm();
    if (asym > kSymmetrizeTol * scale)
        raise(ErrorCode::NonHermitianInput, "HermitianOperator",
              "||H - H*||_F = " + std::to_string(asym) + " exceeds tolerance " +
                  std::to_string(kSymmetrizeTol * scale));

    entries_ = 0.5 * (entries + entries.adjoint().eval());
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& diag) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(diag.size()),
                            static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
    return HermitianOperator(m);
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
    return HermitianOperator(Matrix::Zero(static_cast<Eigen::Index>(dim),
                                          static_cast<Eigen::Index>(dim)));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    return HermitianOperator(Matrix::Identity(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim)));
}

const EigenSystem& HermitianOperator::eigensystem() const& {
    std::call_once(cache_->once, [this] {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
        if (solver.info() != Eigen::Success)
            raise(ErrorCode::InvalidArgument, "eigensystem",
                  "eigendecomposition did not converge");
        auto sys = std::make_unique<EigenSystem>();
        sys->eigenvalues = solver.eigenvalues();
        sys->eigenvectors = solver.eigenvectors();
        cache_->value = std::move(sys);
    });
    return *cache_->value;
}

HermitianOperator HermitianOperator::add_scaled(const HermitianOperator& other,
                                                double scale) const {
    if (other.dim() != dim())
        raise(ErrorCode::DimensionMismatch, "add_scaled",
              "dims " + std::to_string(dim()) + " and " + std::to_string(other.dim()));
    return HermitianOperator(entries_ + scale * other.entries_);
}

HermitianOperator HermitianOperator::scaled(double scale) const {
    return HermitianOperator(scale * entries_);
}

HermitianOperator HermitianOperator::conjugated_by(const Matrix& unitary) const {
    return HermitianOperator(unitary * entries_ * unitary.adjoint());
}

PerturbationPath::PerturbationPath(HermitianOperator h0, HermitianOperator v)
    : h0_(std::move(h0)), v_(std::move(v)), h1_(h0_.add_scaled(v_, 1.0)) {
    if (h0_.dim() != v_.dim())
        raise(ErrorCode::DimensionMismatch, "PerturbationPath",
              "h0 dim " + std::to_string(h0_.dim()) + ", v dim " + std::to_string(v_.dim()));
}

HermitianOperator PerturbationPath::at(double r) const {
    if (r == 0.0) return h0_;
    if (r == 1.0) return h1_;
    return h0_.add_scaled(v_, r);
}

HermitianOperator apply_function(const HermitianOperator& h,
                                 const std::function<double(double)>& f) {
    const EigenSystem& sys = h.eigensystem();
    Eigen::VectorXd mapped(sys.eigenvalues.size());
    for (Eigen::Index i = 0; i < sys.eigenvalues.size(); ++i)
        mapped(i) = f(sys.eigenvalues(i));
    Matrix result = sys.eigenvectors * mapped.asDiagonal() * sys.eigenvectors.adjoint();
    return HermitianOperator(result);
}

double trace(const HermitianOperator& a) {
    return a.entries().diagonal().real().sum();
}

double trace_norm(const HermitianOperator& a) {
    return a.eigensystem().eigenvalues.cwiseAbs().sum();
}

double operator_norm(const HermitianOperator& a) {
    const Eigen::VectorXd& ev = a.eigensystem().eigenvalues;
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

std::size_t counting_function(const HermitianOperator& h, double lambda) {
    const Eigen::VectorXd& ev = h.eigensystem().eigenvalues;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) <= lambda) ++count;
    return count;
}

} // namespace specshift
