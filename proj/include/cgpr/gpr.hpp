#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cgpr/kernels.hpp"
#include "cgpr/linalg.hpp"

namespace cgpr {

struct ComplexDataset {
    std::vector<CVector> inputs;
    CVector outputs;

    Eigen::Index n() const { return static_cast<Eigen::Index>(inputs.size()); }
    Eigen::Index dim() const { return inputs.empty() ? 0 : inputs.front().size(); }
    void validate() const;
};

/// CSV schema: header x_re_0..x_re_{d-1}, x_im_0..x_im_{d-1}, y_re, y_im.
void write_dataset_csv(std::ostream& out, const ComplexDataset& data);
ComplexDataset read_dataset_csv(std::istream& in);

struct PosteriorPredictive {
    CVector mean;
    CMatrix covariance;  // Hermitian, real nonnegative diagonal
};

/// Trained proper complex GPR model: dataset, kernel, noise variance and the
/// cached Cholesky factor of C = K + noise_var * I together with
/// alpha = C^{-1} y. Immutable after construction.
class GprModel {
  public:
    GprModel(ComplexDataset data, KernelKind kind, KernelParams params, double noise_var);

    const ComplexDataset& dataset() const { return data_; }
    KernelKind kind() const { return kind_; }
    const KernelParams& params() const { return params_; }
    double noise_var() const { return noise_var_; }
    const HermitianFactor& factor() const { return factor_; }
    const CVector& alpha() const { return alpha_; }
    /// y^H C^{-1} y, via the cached forward solve.
    double whitened_quadratic() const { return whitened_.squaredNorm(); }

    /// Model extended with one observation, reusing the cached factor.
    GprModel appended(const CVector& x, Complex y) const;

  private:
    GprModel(ComplexDataset data, KernelKind kind, KernelParams params, double noise_var,
             HermitianFactor factor, CVector whitened, CVector alpha);

    ComplexDataset data_;
    KernelKind kind_;
    KernelParams params_;
    double noise_var_;
    HermitianFactor factor_;
    CVector whitened_;  // L^{-1} y, kept for O(n) growth of the solve chain
    CVector alpha_;
};

GprModel fit(ComplexDataset data, KernelKind kind, KernelParams params, double noise_var);

GprModel append_observation(const GprModel& model, const CVector& x, Complex y);

PosteriorPredictive predict(const GprModel& model, std::span<const CVector> test_inputs);

/// Posterior mean only; avoids the m x m covariance.
CVector predict_mean(const GprModel& model, std::span<const CVector> test_inputs);

double log_marginal_likelihood(const GprModel& model);

/// Draws from the zero-mean proper complex prior with Gram K: the stacked
/// real vector [f_r; f_j] is sampled from 0.5 * [[K_r, -K_j], [K_j, K_r]].
std::vector<CVector> sample_prior(KernelKind kind, const KernelParams& params,
                                  std::span<const CVector> xs, int count,
                                  std::uint64_t seed);

/// Draws from the posterior predictive at the test inputs, same composite
/// real construction applied to the posterior covariance.
std::vector<CVector> sample_posterior(const GprModel& model,
                                      std::span<const CVector> test_inputs, int count,
                                      std::uint64_t seed);

/// Proper complex draws for a given mean and Hermitian covariance.
std::vector<CVector> sample_proper_gaussian(const CVector& mean, const CMatrix& cov,
                                            int count, std::uint64_t seed);

}  // namespace cgpr
