#pragma once

#include <span>
#include <utility>

#include "cgpr/kernels.hpp"

namespace cgpr {

/// Stacked-real formulation of the proper complex GPR problem. Oracle grade:
/// dense 2n x 2n solves, no caching, no incremental updates.
struct CompositeRealSystem {
    RMatrix kernel;   // 2n x 2n, [[K_rr, K_rj], [K_jr, K_jj]]
    RVector outputs;  // [y_r; y_j]
};

/// Blocks K_rr = Re(K)/2, K_rj = -Im(K)/2, K_jr = K_rj^T, K_jj = K_rr.
CompositeRealSystem build_composite(KernelKind kind, const KernelParams& params,
                                    std::span<const CVector> xs, const CVector& ys);

/// Stacked-real posterior mean (y_r, y_j) at one test input. The complex
/// noise variance maps to noise_var / 2 per real component.
std::pair<double, double> predict_composite(const CompositeRealSystem& system,
                                            double noise_var, KernelKind kind,
                                            const KernelParams& params,
                                            std::span<const CVector> xs,
                                            const CVector& test_input);

}  // namespace cgpr
