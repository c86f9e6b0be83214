#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgpr/gpr.hpp"

namespace cgpr {

enum class HyperDomain { LogPositive, Real };

struct HyperParam {
    std::string id;  // gram_gradient id, or "noise_var"
    HyperDomain domain = HyperDomain::Real;
    double initial = 0.0;  // natural-domain initial value
};

using HyperSpec = std::vector<HyperParam>;

/// Spec covering every hyperparameter the kind reads, plus the noise
/// variance, initialized from `params` and `noise_var`.
HyperSpec default_hyper_spec(KernelKind kind, const KernelParams& params, double noise_var);

struct OptimizeOptions {
    int max_iter = 200;
    double grad_tol = 1e-6;
    std::uint64_t seed = 0;
    int restarts = 4;
};

struct OptimizeReport {
    int iterations = 0;
    double final_log_likelihood = 0.0;
    double gradient_norm = 0.0;
    bool converged = false;
    std::vector<std::pair<int, double>> trace;  // (iteration, L), nondecreasing
};

struct OptimizeResult {
    KernelParams params;
    double noise_var = 0.0;
    OptimizeReport report;
};

/// Gradient of the log marginal likelihood with respect to the spec'd
/// hyperparameters, component i = Tr((alpha alpha^H - C^{-1}) dC/dtheta_i).
/// Log-positive components are differentiated in the log domain. The trace
/// is real for Hermitian dC/dtheta; a larger imaginary residue throws.
RVector likelihood_gradient(const GprModel& model, const HyperSpec& spec);

/// Gradient-ascent maximization of the log marginal likelihood with Armijo
/// backtracking and multi-start over gamma.
OptimizeResult maximize(const ComplexDataset& data, KernelKind kind, const HyperSpec& spec,
                        const OptimizeOptions& options);

/// Median squared distance between inputs, the gamma initialization scale.
double median_squared_distance(std::span<const CVector> xs);

}  // namespace cgpr
