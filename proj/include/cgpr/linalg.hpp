#pragma once

#include "cgpr/types.hpp"

namespace cgpr {

/// Cholesky factor L of a Hermitian positive definite matrix, L lower
/// triangular with a strictly positive real diagonal so that L * L^H
/// reconstructs the factored matrix.
class HermitianFactor {
  public:
    explicit HermitianFactor(CMatrix lower) : lower_(std::move(lower)) {}

    Eigen::Index size() const { return lower_.rows(); }
    const CMatrix& lower() const { return lower_; }

    /// Solve L x = b.
    CVector forward_solve(const CVector& b) const;
    /// Solve L^H x = b.
    CVector adjoint_solve(const CVector& b) const;

  private:
    CMatrix lower_;
};

/// Factor a + jitter * I = L L^H. Throws NotHermitian if a is not Hermitian
/// within 1e-10 * max|a|, NotPositiveDefinite if a pivot is not positive.
HermitianFactor cholesky(const CMatrix& a, double jitter = 0.0);

/// Jitter escalation: try jitter 0, then 1e-10 * mean(diag) growing by 10x,
/// at most three retries.
HermitianFactor cholesky_with_retry(const CMatrix& a);

/// Solve (L L^H) x = b columnwise.
CMatrix solve(const HermitianFactor& f, const CMatrix& b);
CVector solve(const HermitianFactor& f, const CVector& b);

/// log det(L L^H) = 2 sum log diag(L).
double log_det(const HermitianFactor& f);

/// Factor of the (n+1)x(n+1) matrix [[A, r^H], [r, d]] given the factor of A,
/// where r is the appended bottom row and d the new diagonal entry. Throws
/// NotPositiveDefinite when the Schur complement d - |w|^2 is not positive.
HermitianFactor extend_factor(const HermitianFactor& f, const CVector& new_row,
                              double new_diag);

}  // namespace cgpr
