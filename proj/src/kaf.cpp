#include "cgpr/kaf.hpp"

#include <cmath>
#include <limits>

namespace cgpr {

std::string to_string(KafVariant v) {
    switch (v) {
        case KafVariant::Ncklms2: return "NCKLMS2";
        case KafVariant::Ncklms2I: return "NCKLMS2-i";
        case KafVariant::Ncklms2G: return "NCKLMS2-G";
        case KafVariant::Acklms: return "ACKLMS";
    }
    throw ConfigError("unknown KAF variant");
}

KafVariant kaf_variant_from_string(const std::string& name) {
    if (name == "NCKLMS2") return KafVariant::Ncklms2;
    if (name == "NCKLMS2-i") return KafVariant::Ncklms2I;
    if (name == "NCKLMS2-G") return KafVariant::Ncklms2G;
    if (name == "ACKLMS") return KafVariant::Acklms;
    throw ConfigError("unknown KAF variant: " + name);
}

Complex KafFilter::kernel(const CVector& a, const CVector& b) const {
    switch (config_.variant) {
        case KafVariant::Ncklms2:
            return eval_prior_art_complex_gaussian(a, b, config_.gamma);
        case KafVariant::Ncklms2I:
            return eval_independent(a, b, config_.gamma, 1.0);
        case KafVariant::Ncklms2G:
            return eval_complex_metric_gaussian(a, b, config_.gamma);
        case KafVariant::Acklms:
            return 2.0 * eval_prior_art_complex_gaussian(a, b, config_.gamma).real();
    }
    throw ConfigError("unknown KAF variant");
}

Complex KafFilter::predict(const CVector& x) const {
    Complex y = 0.0;
    for (size_t m = 0; m < dictionary_.size(); ++m)
        y += coefficients_[m] * kernel(dictionary_[m], x);
    return y;
}

Complex KafFilter::step(const CVector& x, Complex y) {
    const Complex error = y - predict(x);

    double min_dist = std::numeric_limits<double>::infinity();
    for (const auto& atom : dictionary_)
        min_dist = std::min(min_dist, (x - atom).norm());

    if (min_dist > config_.delta1 && std::abs(error) > config_.delta2) {
        dictionary_.push_back(x);
        coefficients_.push_back(config_.step * error);
    }
    return error;
}

}  // namespace cgpr
