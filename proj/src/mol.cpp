#include "cgpr/mol.hpp"

#include <Eigen/Cholesky>

namespace cgpr {

CompositeRealSystem build_composite(KernelKind kind, const KernelParams& params,
                                    std::span<const CVector> xs, const CVector& ys) {
    if (static_cast<Eigen::Index>(xs.size()) != ys.size())
        throw DimensionMismatch("build_composite: inputs/outputs length mismatch");
    const CMatrix k = gram(kind, params, xs);
    const Eigen::Index n = k.rows();
    if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * k.cwiseAbs().maxCoeff())
        throw NotHermitian("build_composite: Gram matrix not Hermitian");

    CompositeRealSystem sys;
    sys.kernel.resize(2 * n, 2 * n);
    sys.kernel.topLeftCorner(n, n) = 0.5 * k.real();
    sys.kernel.bottomRightCorner(n, n) = 0.5 * k.real();
    sys.kernel.topRightCorner(n, n) = -0.5 * k.imag();
    sys.kernel.bottomLeftCorner(n, n) = (-0.5 * k.imag()).transpose();
    sys.outputs.resize(2 * n);
    sys.outputs.head(n) = ys.real();
    sys.outputs.tail(n) = ys.imag();
    return sys;
}

std::pair<double, double> predict_composite(const CompositeRealSystem& system,
                                            double noise_var, KernelKind kind,
                                            const KernelParams& params,
                                            std::span<const CVector> xs,
                                            const CVector& test_input) {
    const Eigen::Index n = system.kernel.rows() / 2;
    if (static_cast<Eigen::Index>(xs.size()) != n)
        throw DimensionMismatch("predict_composite: training set size mismatch");

    RMatrix c = system.kernel;
    c.diagonal().array() += 0.5 * noise_var;
    const RVector sol = Eigen::LLT<RMatrix>(c).solve(system.outputs);

    // Cross blocks for a single test point, row (i) = k(x*, x(i)).
    RVector krr(n), krj(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex kv = eval_kernel(kind, params, test_input, xs[i]);
        krr(i) = 0.5 * kv.real();
        krj(i) = -0.5 * kv.imag();
    }
    const double yr = krr.dot(sol.head(n)) + krj.dot(sol.tail(n));
    const double yj = -krj.dot(sol.head(n)) + krr.dot(sol.tail(n));
    return {yr, yj};
}

}  // namespace cgpr
