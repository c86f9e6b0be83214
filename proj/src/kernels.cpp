#include "cgpr/kernels.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace cgpr {
namespace {

void check_dims(const CVector& x, const CVector& x2) {
    if (x.size() != x2.size()) throw DimensionMismatch("kernel: input dimension mismatch");
}

double sq_norm(const CVector& v) { return v.squaredNorm(); }

struct ConvExp {
    double e0, em, ep;  // exp(-|d|^2/2g), exp(-|d-mu|^2/2g), exp(-|d+mu|^2/2g)
};

ConvExp conv_exponentials(const CVector& d, const KernelParams& p) {
    const double tg = 2.0 * p.gamma;
    return {std::exp(-sq_norm(d) / tg), std::exp(-sq_norm(d - p.mu) / tg),
            std::exp(-sq_norm(d + p.mu) / tg)};
}

}  // namespace

std::string to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::ComplexMetricGaussian: return "complex_metric_gaussian";
        case KernelKind::ConvolutionProper: return "convolution_proper";
        case KernelKind::PriorArtComplexGaussian: return "prior_art_complex_gaussian";
        case KernelKind::IndependentKernel: return "independent";
    }
    throw ConfigError("unknown kernel kind");
}

KernelKind kernel_kind_from_string(const std::string& name) {
    if (name == "complex_metric_gaussian") return KernelKind::ComplexMetricGaussian;
    if (name == "convolution_proper") return KernelKind::ConvolutionProper;
    if (name == "prior_art_complex_gaussian") return KernelKind::PriorArtComplexGaussian;
    if (name == "independent") return KernelKind::IndependentKernel;
    throw ConfigError("unknown kernel kind: " + name);
}

void to_json(nlohmann::json& j, const KernelParams& p) {
    std::vector<double> mu_re(p.mu.size()), mu_im(p.mu.size());
    for (Eigen::Index i = 0; i < p.mu.size(); ++i) {
        mu_re[i] = p.mu(i).real();
        mu_im[i] = p.mu(i).imag();
    }
    j = nlohmann::json{{"gamma", p.gamma},
                       {"mu_re", mu_re},
                       {"mu_im", mu_im},
                       {"v_r", p.v_r},
                       {"v_rj", p.v_rj}};
}

void from_json(const nlohmann::json& j, KernelParams& p) {
    p.gamma = j.value("gamma", 1.0);
    if (!(p.gamma > 0.0)) throw ConfigError("kernel config: gamma must be positive");
    const auto mu_re = j.value("mu_re", std::vector<double>{});
    const auto mu_im = j.value("mu_im", std::vector<double>{});
    if (mu_re.size() != mu_im.size())
        throw ConfigError("kernel config: mu_re and mu_im length mismatch");
    p.mu.resize(static_cast<Eigen::Index>(mu_re.size()));
    for (size_t i = 0; i < mu_re.size(); ++i)
        p.mu(static_cast<Eigen::Index>(i)) = Complex(mu_re[i], mu_im[i]);
    p.v_r = j.value("v_r", 1.0);
    p.v_rj = j.value("v_rj", 0.0);
}

void to_json(nlohmann::json& j, const KernelConfig& c) {
    to_json(j, c.params);
    j["kind"] = to_string(c.kind);
}

void from_json(const nlohmann::json& j, KernelConfig& c) {
    c.kind = kernel_kind_from_string(j.value("kind", std::string("complex_metric_gaussian")));
    from_json(j, c.params);
}

Complex eval_complex_metric_gaussian(const CVector& x, const CVector& x2, double gamma) {
    check_dims(x, x2);
    return {std::exp(-sq_norm(x - x2) / gamma), 0.0};
}

Complex eval_convolution_proper(const CVector& x, const CVector& x2, const KernelParams& p) {
    check_dims(x, x2);
    CVector d = x2 - x;
    if (p.mu.size() != d.size())
        throw DimensionMismatch("convolution kernel: mu dimension mismatch");
    const ConvExp e = conv_exponentials(d, p);
    return {(p.v_r * p.v_r + p.v_rj * p.v_rj) * e.e0, p.v_r * p.v_rj * (e.em - e.ep)};
}

Complex eval_prior_art_complex_gaussian(const CVector& x, const CVector& x2, double gamma,
                                        bool* overflow) {
    check_dims(x, x2);
    CVector diff = x - x2.conjugate();
    Complex z = 0.0;
    for (Eigen::Index i = 0; i < diff.size(); ++i) z += diff(i) * diff(i);
    const Complex expo = -z / gamma;
    if (overflow && expo.real() > 700.0) *overflow = true;
    return std::exp(expo);
}

Complex eval_independent(const CVector& x, const CVector& x2, double gamma,
                         double amplitude) {
    check_dims(x, x2);
    const RVector xr = x.real(), xj = x.imag(), yr = x2.real(), yj = x2.imag();
    auto kappa = [&](const RVector& a, const RVector& b) {
        return amplitude * std::exp(-(a - b).squaredNorm() / gamma);
    };
    return {kappa(xr, yr) + kappa(xj, yj), kappa(xr, yj) - kappa(xj, yr)};
}

Complex eval_kernel(KernelKind kind, const KernelParams& p, const CVector& x,
                    const CVector& x2) {
    switch (kind) {
        case KernelKind::ComplexMetricGaussian:
            return eval_complex_metric_gaussian(x, x2, p.gamma);
        case KernelKind::ConvolutionProper:
            return eval_convolution_proper(x, x2, p);
        case KernelKind::PriorArtComplexGaussian:
            return eval_prior_art_complex_gaussian(x, x2, p.gamma);
        case KernelKind::IndependentKernel:
            return eval_independent(x, x2, p.gamma, p.v_r);
    }
    throw ConfigError("unknown kernel kind");
}

CMatrix gram(KernelKind kind, const KernelParams& p, std::span<const CVector> xs) {
    const auto n = static_cast<Eigen::Index>(xs.size());
    if (n == 0) throw DimensionMismatch("gram: empty input set");
    CMatrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index l = 0; l <= i; ++l) {
            k(i, l) = eval_kernel(kind, p, xs[i], xs[l]);
            if (l != i) k(l, i) = std::conj(k(i, l));
        }
    }
    return k;
}

CMatrix cross_gram(KernelKind kind, const KernelParams& p, std::span<const CVector> a,
                   std::span<const CVector> b) {
    CMatrix k(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
    for (Eigen::Index i = 0; i < k.rows(); ++i)
        for (Eigen::Index l = 0; l < k.cols(); ++l)
            k(i, l) = eval_kernel(kind, p, a[i], b[l]);
    return k;
}

std::vector<std::string> kernel_hyperparameter_ids(KernelKind kind, Eigen::Index dim) {
    std::vector<std::string> ids{"log_gamma"};
    if (kind == KernelKind::ConvolutionProper) {
        for (Eigen::Index k = 0; k < dim; ++k) ids.push_back("mu_re_" + std::to_string(k));
        for (Eigen::Index k = 0; k < dim; ++k) ids.push_back("mu_im_" + std::to_string(k));
        ids.push_back("v_r");
        ids.push_back("v_rj");
    } else if (kind == KernelKind::IndependentKernel) {
        ids.push_back("v_r");
    }
    return ids;
}

namespace {

Complex kernel_derivative(KernelKind kind, const KernelParams& p, const CVector& x,
                          const CVector& x2, const std::string& which) {
    if (which == "log_gamma") {
        switch (kind) {
            case KernelKind::ComplexMetricGaussian: {
                const double q = sq_norm(x - x2) / p.gamma;
                return {std::exp(-q) * q, 0.0};
            }
            case KernelKind::PriorArtComplexGaussian: {
                CVector diff = x - x2.conjugate();
                Complex z = 0.0;
                for (Eigen::Index i = 0; i < diff.size(); ++i) z += diff(i) * diff(i);
                return std::exp(-z / p.gamma) * (z / p.gamma);
            }
            case KernelKind::IndependentKernel: {
                const RVector xr = x.real(), xj = x.imag(), yr = x2.real(), yj = x2.imag();
                auto dk = [&](const RVector& a, const RVector& b) {
                    const double q = (a - b).squaredNorm() / p.gamma;
                    return p.v_r * std::exp(-q) * q;
                };
                return {dk(xr, yr) + dk(xj, yj), dk(xr, yj) - dk(xj, yr)};
            }
            case KernelKind::ConvolutionProper: {
                const CVector d = x2 - x;
                const ConvExp e = conv_exponentials(d, p);
                const double tg = 2.0 * p.gamma;
                const double q0 = sq_norm(d) / tg;
                const double qm = sq_norm(d - p.mu) / tg;
                const double qp = sq_norm(d + p.mu) / tg;
                return {(p.v_r * p.v_r + p.v_rj * p.v_rj) * e.e0 * q0,
                        p.v_r * p.v_rj * (e.em * qm - e.ep * qp)};
            }
        }
    }
    if (kind == KernelKind::ConvolutionProper) {
        const CVector d = x2 - x;
        const ConvExp e = conv_exponentials(d, p);
        if (which == "v_r") return {2.0 * p.v_r * e.e0, p.v_rj * (e.em - e.ep)};
        if (which == "v_rj") return {2.0 * p.v_rj * e.e0, p.v_r * (e.em - e.ep)};
        if (which.starts_with("mu_re_") || which.starts_with("mu_im_")) {
            const auto k = static_cast<Eigen::Index>(std::stol(which.substr(6)));
            if (k < 0 || k >= p.mu.size())
                throw UnknownHyperparameter("gram_gradient: mu index out of range: " + which);
            const bool re = which.starts_with("mu_re_");
            const double dk = re ? d(k).real() : d(k).imag();
            const double mk = re ? p.mu(k).real() : p.mu(k).imag();
            // d/d mu of the two shifted exponentials; the zero-lag term is
            // mu-free, so this derivative is purely imaginary.
            const double g = p.gamma;
            return {0.0, p.v_r * p.v_rj * (e.em * (dk - mk) / g + e.ep * (dk + mk) / g)};
        }
    }
    if (kind == KernelKind::IndependentKernel && which == "v_r") {
        const RVector xr = x.real(), xj = x.imag(), yr = x2.real(), yj = x2.imag();
        auto kap = [&](const RVector& a, const RVector& b) {
            return std::exp(-(a - b).squaredNorm() / p.gamma);
        };
        return {kap(xr, yr) + kap(xj, yj), kap(xr, yj) - kap(xj, yr)};
    }
    throw UnknownHyperparameter("gram_gradient: kind " + to_string(kind) +
                                " has no hyperparameter " + which);
}

}  // namespace

CMatrix gram_gradient(KernelKind kind, const KernelParams& p, std::span<const CVector> xs,
                      const std::string& which) {
    const auto n = static_cast<Eigen::Index>(xs.size());
    if (n == 0) throw DimensionMismatch("gram_gradient: empty input set");
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index l = 0; l <= i; ++l) {
            g(i, l) = kernel_derivative(kind, p, xs[i], xs[l], which);
            if (l != i) g(l, i) = std::conj(g(i, l));
        }
    }
    return g;
}

}  // namespace cgpr
