#pragma once

#include <span>
#include <string>
#include <vector>

#include "cgpr/types.hpp"

#include <nlohmann/json_fwd.hpp>

namespace cgpr {

enum class KernelKind {
    ComplexMetricGaussian,
    ConvolutionProper,
    PriorArtComplexGaussian,
    IndependentKernel,
};

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// Kernel hyperparameters. Each kind reads a subset:
///   ComplexMetricGaussian    gamma
///   ConvolutionProper        gamma, mu, v_r, v_rj
///   PriorArtComplexGaussian  gamma
///   IndependentKernel        gamma, v_r (amplitude of the inner real kernel)
/// gamma is strictly positive; v_r and v_rj may take either sign (the
/// convolution kernel only involves v_r^2, v_rj^2 and v_r*v_rj, so jointly
/// flipping the signs of v_rj and mu leaves the kernel unchanged).
struct KernelParams {
    double gamma = 1.0;
    CVector mu;  // lag, one complex entry per input dimension
    double v_r = 1.0;
    double v_rj = 0.0;
};

void to_json(nlohmann::json& j, const KernelParams& p);
void from_json(const nlohmann::json& j, KernelParams& p);

struct KernelConfig {
    KernelKind kind = KernelKind::ComplexMetricGaussian;
    KernelParams params;
};

void to_json(nlohmann::json& j, const KernelConfig& c);
void from_json(const nlohmann::json& j, KernelConfig& c);

/// Stationary isotropic Gaussian kernel on the Hermitian metric
/// exp(-(x-x2)^H (x-x2) / gamma). Always real.
Complex eval_complex_metric_gaussian(const CVector& x, const CVector& x2, double gamma);

/// Convolution-constructed proper kernel with lag mu, d = x2 - x:
///   (v_r^2 + v_rj^2) exp(-d^H d / 2g)
///   + j v_r v_rj (exp(-(d-mu)^H (d-mu) / 2g) - exp(-(d+mu)^H (d+mu) / 2g))
Complex eval_convolution_proper(const CVector& x, const CVector& x2, const KernelParams& p);

/// exp(-(x - conj(x2))^T (x - conj(x2)) / gamma). Not stationary; its real
/// exponent can grow without bound, `overflow` (when given) is set once the
/// exponent exceeds 700.
Complex eval_prior_art_complex_gaussian(const CVector& x, const CVector& x2, double gamma,
                                        bool* overflow = nullptr);

/// Split-input kernel built from a real Gaussian kernel kappa of scale
/// `amplitude`: kappa(xr,x2r) + kappa(xj,x2j) + j(kappa(xr,x2j) - kappa(xj,x2r)).
Complex eval_independent(const CVector& x, const CVector& x2, double gamma,
                         double amplitude);

Complex eval_kernel(KernelKind kind, const KernelParams& p, const CVector& x,
                    const CVector& x2);

/// Gram matrix K(il) = k(x_i, x_l).
CMatrix gram(KernelKind kind, const KernelParams& p, std::span<const CVector> xs);

/// Cross matrix K(il) = k(a_i, b_l).
CMatrix cross_gram(KernelKind kind, const KernelParams& p, std::span<const CVector> a,
                   std::span<const CVector> b);

/// Hyperparameter ids accepted by gram_gradient for a kind at input
/// dimension d. Positive parameters are differentiated in the log domain,
/// so the gamma id is "log_gamma".
std::vector<std::string> kernel_hyperparameter_ids(KernelKind kind, Eigen::Index dim);

/// Entrywise derivative of the Gram matrix with respect to one
/// hyperparameter: "log_gamma", "mu_re_<k>", "mu_im_<k>", "v_r", "v_rj".
CMatrix gram_gradient(KernelKind kind, const KernelParams& p, std::span<const CVector> xs,
                      const std::string& which);

}  // namespace cgpr
