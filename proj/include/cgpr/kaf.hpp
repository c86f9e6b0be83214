#pragma once

#include <string>
#include <vector>

#include "cgpr/kernels.hpp"

namespace cgpr {

/// Online complex kernel-LMS variants used as equalization baselines.
/// Reconstructions of the published algorithms, not bit-level ports:
/// admission coefficient is step * error on the stored kernel section, and
/// ACKLMS runs the same rule on the real part of the kernel (doubled), the
/// augmented pairing collapsing the conjugate branch.
enum class KafVariant {
    Ncklms2,   // prior-art complex Gaussian kernel
    Ncklms2I,  // independent (split real/imaginary) kernel
    Ncklms2G,  // complex-metric Gaussian kernel
    Acklms,    // augmented rule, real part of the prior-art kernel
};

std::string to_string(KafVariant v);
KafVariant kaf_variant_from_string(const std::string& name);

struct KafConfig {
    KafVariant variant = KafVariant::Ncklms2G;
    double gamma = 25.0;
    double step = 0.25;
    double delta1 = 0.15;  // novelty distance threshold
    double delta2 = 0.2;   // novelty error threshold
};

/// Dictionary state of one filter stream. Grows only when the novelty
/// criterion admits a sample; coefficients of admitted atoms are fixed
/// afterwards (pure novelty-criterion variant).
class KafFilter {
  public:
    explicit KafFilter(KafConfig config) : config_(std::move(config)) {}

    const KafConfig& config() const { return config_; }
    size_t dictionary_size() const { return dictionary_.size(); }

    /// Sum over dictionary atoms of coeff_m * k(x_m, x); 0 when empty.
    Complex predict(const CVector& x) const;

    /// One online update; returns the prior error y - predict(x).
    Complex step(const CVector& x, Complex y);

  private:
    Complex kernel(const CVector& a, const CVector& b) const;

    KafConfig config_;
    std::vector<CVector> dictionary_;
    std::vector<Complex> coefficients_;
};

}  // namespace cgpr
