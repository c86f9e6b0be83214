#include "cgpr/linalg.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace cgpr {

CVector HermitianFactor::forward_solve(const CVector& b) const {
    if (b.size() != size()) throw DimensionMismatch("forward_solve: size mismatch");
    return lower_.triangularView<Eigen::Lower>().solve(b);
}

CVector HermitianFactor::adjoint_solve(const CVector& b) const {
    if (b.size() != size()) throw DimensionMismatch("adjoint_solve: size mismatch");
    return lower_.adjoint().triangularView<Eigen::Upper>().solve(b);
}

HermitianFactor cholesky(const CMatrix& a, double jitter) {
    if (a.rows() != a.cols()) throw DimensionMismatch("cholesky: matrix not square");
    const double scale = a.cwiseAbs().maxCoeff();
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300))
        throw NotHermitian("cholesky: matrix not Hermitian within tolerance");

    CMatrix work = a;
    if (jitter != 0.0) work.diagonal().array() += jitter;

    Eigen::LLT<CMatrix> llt(work);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("cholesky: non-positive pivot");
    CMatrix lower = llt.matrixL();
    // LLT leaves the strictly upper part untouched; keep the factor clean.
    lower.triangularView<Eigen::StrictlyUpper>().setZero();
    for (Eigen::Index i = 0; i < lower.rows(); ++i) {
        if (!(lower(i, i).real() > 0.0))
            throw NotPositiveDefinite("cholesky: non-positive diagonal");
    }
    return HermitianFactor(std::move(lower));
}

HermitianFactor cholesky_with_retry(const CMatrix& a) {
    try {
        return cholesky(a, 0.0);
    } catch (const NotPositiveDefinite&) {
    }
    double jitter = 1e-10 * a.diagonal().real().mean();
    if (!(jitter > 0.0)) jitter = 1e-10;
    for (int attempt = 0; attempt < 3; ++attempt, jitter *= 10.0) {
        try {
            return cholesky(a, jitter);
        } catch (const NotPositiveDefinite&) {
        }
    }
    throw NotPositiveDefinite("cholesky_with_retry: matrix not PD after jitter escalation");
}

CMatrix solve(const HermitianFactor& f, const CMatrix& b) {
    if (b.rows() != f.size()) throw DimensionMismatch("solve: row count mismatch");
    CMatrix x = f.lower().triangularView<Eigen::Lower>().solve(b);
    return f.lower().adjoint().triangularView<Eigen::Upper>().solve(x);
}

CVector solve(const HermitianFactor& f, const CVector& b) {
    if (b.size() != f.size()) throw DimensionMismatch("solve: size mismatch");
    return f.adjoint_solve(f.forward_solve(b));
}

double log_det(const HermitianFactor& f) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) s += std::log(f.lower()(i, i).real());
    return 2.0 * s;
}

HermitianFactor extend_factor(const HermitianFactor& f, const CVector& new_row,
                              double new_diag) {
    const Eigen::Index n = f.size();
    if (new_row.size() != n) throw DimensionMismatch("extend_factor: row size mismatch");

    // Bottom row of the extended matrix is (new_row, new_diag); the appended
    // column is new_row^H. Solve L w = new_row^H, then the new factor row is
    // (w^H, sqrt(new_diag - w^H w)).
    CVector w = n > 0 ? f.forward_solve(new_row.conjugate()) : CVector(0);
    const double schur = new_diag - w.squaredNorm();
    if (!(schur > 0.0))
        throw NotPositiveDefinite("extend_factor: non-positive Schur complement");

    CMatrix lower = CMatrix::Zero(n + 1, n + 1);
    lower.topLeftCorner(n, n) = f.lower();
    lower.row(n).head(n) = w.adjoint();
    lower(n, n) = std::sqrt(schur);
    return HermitianFactor(std::move(lower));
}

}  // namespace cgpr
