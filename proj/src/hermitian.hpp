#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

namespace specshift {

using Matrix = Eigen::MatrixXcd;

// Spectral resolution of a Hermitian operator: ascending eigenvalues and an
// orthonormal column family U with H = U diag(eigenvalues) U^*.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;
};

// Finite self-adjoint operator with a write-once cached eigensystem.
//
// Construction symmetrizes (H + H^*)/2 when the asymmetry is within
// 1e-12 * max(1, ||H||_F) and rejects the input otherwise; silently fixing a
// large asymmetry would hide data errors. Values are immutable afterwards,
// so copies may share the cache box. The first eigensystem() call wins the
// write; concurrent first calls are serialized by std::call_once.
class HermitianOperator {
public:
    // Throws NonHermitianInput when the symmetrization tolerance is exceeded.
    explicit HermitianOperator(const Matrix& entries);

    static HermitianOperator diagonal(const std::vector<double>& diag);
    static HermitianOperator zero(std::size_t dim);
    static HermitianOperator identity(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

    // The reference lives as long as any operator sharing this value (copies
    // share the cache box). Calling on a temporary is a compile error;
    // materialize the operator first.
    const EigenSystem& eigensystem() const&;
    const EigenSystem& eigensystem() const&& = delete;

    HermitianOperator add_scaled(const HermitianOperator& other, double scale) const;
    HermitianOperator scaled(double scale) const;
    HermitianOperator conjugated_by(const Matrix& unitary) const;

    double frobenius_norm() const { return entries_.norm(); }

private:
    struct CacheBox {
        std::once_flag once;
        std::unique_ptr<const EigenSystem> value;
    };

    Matrix entries_;
    std::shared_ptr<CacheBox> cache_;
};

// Pair (H0, V) defining the linear segment H_r = H0 + r V, r in [0, 1].
class PerturbationPath {
public:
    PerturbationPath(HermitianOperator h0, HermitianOperator v);

    const HermitianOperator& h0() const { return h0_; }
    const HermitianOperator& v() const { return v_; }
    std::size_t dim() const { return h0_.dim(); }

    // Exact at the endpoints: at(0) and at(1) return shared values so the
    // cached eigensystems of H0 and H1 are reused across calls.
    HermitianOperator at(double r) const;

private:
    HermitianOperator h0_;
    HermitianOperator v_;
    HermitianOperator h1_;
};

// phi(H) = U phi(Lambda) U^* for an arbitrary real function of the spectrum.
HermitianOperator apply_function(const HermitianOperator& h,
                                 const std::function<double(double)>& f);

// Sum of diagonal entries (real; the diagonal is exactly real after
// symmetrization).
double trace(const HermitianOperator& a);

// Trace norm ||A||_1 = sum of |eigenvalues| in the Hermitian case.
double trace_norm(const HermitianOperator& a);

// Largest |eigenvalue|.
double operator_norm(const HermitianOperator& a);

// N_H(lambda) = #{ i : lambda_i <= lambda }, closed at lambda.
std::size_t counting_function(const HermitianOperator& h, double lambda);

} // namespace specshift
