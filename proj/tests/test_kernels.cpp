#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cgpr/kernels.hpp"
#include "oracles.hpp"

using namespace cgpr;

namespace {

CVector scalar(Complex z) { return CVector::Constant(1, z); }

KernelParams conv_params(double gamma, Complex mu, double v_r, double v_rj) {
    KernelParams p;
    p.gamma = gamma;
    p.mu = scalar(mu);
    p.v_r = v_r;
    p.v_rj = v_rj;
    return p;
}

const std::vector<KernelKind> kAllKinds{
    KernelKind::ComplexMetricGaussian, KernelKind::ConvolutionProper,
    KernelKind::PriorArtComplexGaussian, KernelKind::IndependentKernel};

KernelParams params_for(KernelKind kind, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    KernelParams p = conv_params(unif(rng), Complex(unif(rng), -unif(rng)), unif(rng),
                                 0.5 * unif(rng));
    if (kind == KernelKind::IndependentKernel) p.v_r = unif(rng);
    return p;
}

}  // namespace

TEST_CASE("complex-metric Gaussian closed form") {
    CHECK(eval_complex_metric_gaussian(scalar({1.0, 1.0}), scalar({1.0, 1.0}), 3.0) ==
          Complex(1.0, 0.0));
    const Complex v = eval_complex_metric_gaussian(scalar({1.0, 1.0}), scalar(0.0), 2.0);
    CHECK(v.real() == doctest::Approx(std::exp(-1.0)));
    CHECK(v.imag() == 0.0);
    CHECK(eval_complex_metric_gaussian(scalar(0.0), scalar({1.0, 1.0}), 2.0) == v);
    CHECK_THROWS_AS(eval_complex_metric_gaussian(scalar(0.0), CVector::Zero(2), 1.0),
                    DimensionMismatch);
}

TEST_CASE("convolution kernel closed forms") {
    const KernelParams p = conv_params(1.5, {2.0, 2.0}, 1.0, 1.0);

    SUBCASE("zero lag cancels the imaginary part") {
        const Complex v = eval_convolution_proper(scalar({0.3, -0.7}), scalar({0.3, -0.7}), p);
        CHECK(v.real() == doctest::Approx(2.0));
        CHECK(v.imag() == 0.0);
    }
    SUBCASE("difference equal to mu") {
        // d = mu: 2 exp(-|mu|^2 2g... substituting d = mu into the closed form.
        const double m2 = std::norm(Complex(2.0, 2.0));
        const Complex v = eval_convolution_proper(scalar(0.0), scalar({2.0, 2.0}), p);
        CHECK(v.real() == doctest::Approx(2.0 * std::exp(-m2 / (2.0 * p.gamma))));
        CHECK(v.imag() == doctest::Approx(1.0 - std::exp(-2.0 * m2 / p.gamma)));
    }
    SUBCASE("v_rj = 0 reduces to the metric Gaussian at doubled length") {
        KernelParams q = conv_params(1.5, {2.0, 2.0}, 0.7, 0.0);
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 10; ++rep) {
            const CVector a = oracles::random_cvector(rng, 1);
            const CVector b = oracles::random_cvector(rng, 1);
            const Complex lhs = eval_convolution_proper(a, b, q);
            const Complex rhs =
                q.v_r * q.v_r * eval_complex_metric_gaussian(a, b, 2.0 * q.gamma);
            CHECK(std::abs(lhs - rhs) < 1e-13);
        }
    }
}

TEST_CASE("prior-art complex Gaussian kernel") {
    CHECK(eval_prior_art_complex_gaussian(scalar(0.5), scalar(0.5), 1.0) ==
          Complex(1.0, 0.0));

    // Purely imaginary equal inputs: exponent -(2ja)^2/g = +4a^2/g.
    const double a = 1.3;
    const Complex v =
        eval_prior_art_complex_gaussian(scalar({0.0, a}), scalar({0.0, a}), 1.0);
    CHECK(v.real() == doctest::Approx(std::exp(4.0 * a * a)));

    std::mt19937_64 rng(5);
    const CVector x = oracles::random_cvector(rng, 2);
    const CVector y = oracles::random_cvector(rng, 2);
    CHECK(std::abs(eval_prior_art_complex_gaussian(x, y, 2.0) -
                   std::conj(eval_prior_art_complex_gaussian(y, x, 2.0))) < 1e-13);

    bool overflow = false;
    eval_prior_art_complex_gaussian(scalar({0.0, 30.0}), scalar({0.0, 30.0}), 1.0, &overflow);
    CHECK(overflow);
}

TEST_CASE("independent kernel") {
    std::mt19937_64 rng(9);
    const CVector x = oracles::random_cvector(rng, 1);
    const Complex same = eval_independent(x, x, 1.0, 0.8);
    CHECK(same.real() == doctest::Approx(1.6));
    CHECK(same.imag() == doctest::Approx(0.0));

    // Distant real parts, equal imaginary parts: the imag-imag match persists.
    const CVector a = scalar({100.0, 0.4});
    const CVector b = scalar({0.0, 0.4});
    const Complex far = eval_independent(a, b, 1.0, 0.8);
    CHECK(far.real() == doctest::Approx(0.8).epsilon(1e-9));

    const CVector y = oracles::random_cvector(rng, 1);
    CHECK(std::abs(eval_independent(x, y, 1.0, 0.8) -
                   std::conj(eval_independent(y, x, 1.0, 0.8))) < 1e-13);
}

TEST_CASE("gram structure") {
    std::mt19937_64 rng(13);
    const KernelParams p = conv_params(1.0, {1.0, -0.5}, 1.0, 0.6);

    SUBCASE("single input gives a real 1x1 matrix") {
        const auto xs = oracles::random_inputs(rng, 1, 1);
        const CMatrix k = gram(KernelKind::ConvolutionProper, p, xs);
        CHECK(k.rows() == 1);
        CHECK(k(0, 0).imag() == 0.0);
    }
    SUBCASE("two inputs are conjugate across the diagonal") {
        const auto xs = oracles::random_inputs(rng, 2, 2);
        KernelParams p2 = p;
        p2.mu = oracles::random_cvector(rng, 2);
        const CMatrix k = gram(KernelKind::ConvolutionProper, p2, xs);
        CHECK(std::abs(k(0, 1) - std::conj(k(1, 0))) < 1e-15);
    }
    SUBCASE("20 random inputs give a PSD matrix") {
        const auto xs = oracles::random_inputs(rng, 20, 1);
        const CMatrix k = gram(KernelKind::ConvolutionProper, p, xs);
        const auto eig = oracles::hermitian_eigenvalues(k);
        const double maxdiag = k.diagonal().real().maxCoeff();
        CHECK(eig.front() >= -1e-10 * 20 * maxdiag);
    }
}

TEST_CASE("property: Hermitian symmetry for every kind") {
    std::mt19937_64 rng(17);
    for (KernelKind kind : kAllKinds) {
        const KernelParams p = params_for(kind, rng);
        for (int rep = 0; rep < 20; ++rep) {
            const CVector x = oracles::random_cvector(rng, 1);
            const CVector y = oracles::random_cvector(rng, 1);
            CHECK(std::abs(eval_kernel(kind, p, x, y) -
                           std::conj(eval_kernel(kind, p, y, x))) < 1e-13);
        }
    }
}

TEST_CASE("property: stationarity holds for the proposed kernels and fails for the prior art") {
    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 20; ++rep) {
        const KernelParams p = params_for(KernelKind::ConvolutionProper, rng);
        const CVector x = oracles::random_cvector(rng, 1);
        const CVector y = oracles::random_cvector(rng, 1);
        const CVector c = oracles::random_cvector(rng, 1);
        for (KernelKind kind :
             {KernelKind::ComplexMetricGaussian, KernelKind::ConvolutionProper}) {
            CHECK(std::abs(eval_kernel(kind, p, x, y) -
                           eval_kernel(kind, p, CVector(x + c), CVector(y + c))) < 1e-13);
        }
    }
    // Documented negative: shifting both arguments changes the prior-art value.
    const KernelParams p = conv_params(1.0, 0.0, 1.0, 0.0);
    const CVector x = scalar({0.2, 0.1});
    const CVector y = scalar({-0.3, 0.4});
    const CVector c = scalar({0.0, 0.5});
    const Complex before = eval_kernel(KernelKind::PriorArtComplexGaussian, p, x, y);
    const Complex after = eval_kernel(KernelKind::PriorArtComplexGaussian, p, CVector(x + c),
                                      CVector(y + c));
    CHECK(std::abs(before - after) > 1e-3);
}

TEST_CASE("property: the metric Gaussian is isotropic under global phase rotation") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ang(0.0, 6.28318);
    for (int rep = 0; rep < 20; ++rep) {
        const CVector x = oracles::random_cvector(rng, 2);
        const CVector y = oracles::random_cvector(rng, 2);
        const Complex rot = std::polar(1.0, ang(rng));
        CHECK(std::abs(eval_complex_metric_gaussian(x, y, 1.3) -
                       eval_complex_metric_gaussian(CVector(rot * x), CVector(rot * y), 1.3)) <
              1e-13);
    }
}

TEST_CASE("property: PSD Gram over random sets") {
    std::mt19937_64 rng(37);
    for (KernelKind kind :
         {KernelKind::ComplexMetricGaussian, KernelKind::ConvolutionProper}) {
        for (int rep = 0; rep < 3; ++rep) {
            const KernelParams p = params_for(kind, rng);
            const size_t n = 10 + rng() % 41;
            const auto xs = oracles::random_inputs(rng, n, 1);
            const CMatrix k = gram(kind, p, xs);
            const double maxdiag = k.diagonal().real().maxCoeff();
            CHECK(oracles::hermitian_eigenvalues(k).front() >=
                  -1e-10 * static_cast<double>(n) * maxdiag);
        }
    }
}

TEST_CASE("property: proper structure of the Gram matrix") {
    std::mt19937_64 rng(43);
    for (KernelKind kind : kAllKinds) {
        const KernelParams p = params_for(kind, rng);
        const auto xs = oracles::random_inputs(rng, 12, 1);
        const CMatrix k = gram(kind, p, xs);
        const RMatrix kr = k.real();
        const RMatrix kj = k.imag();
        CHECK((kr - kr.transpose()).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((kj + kj.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("gram_gradient matches central finite differences") {
    std::mt19937_64 rng(47);
    for (KernelKind kind : kAllKinds) {
        KernelParams p = params_for(kind, rng);
        const auto xs = oracles::random_inputs(rng, 5, 1);
        for (const auto& id : kernel_hyperparameter_ids(kind, 1)) {
            const CMatrix g = gram_gradient(kind, p, xs, id);
            // Central differences in the differentiation domain (log for gamma).
            auto with = [&](double delta) {
                KernelParams q = p;
                if (id == "log_gamma")
                    q.gamma = std::exp(std::log(p.gamma) + delta);
                else if (id == "v_r")
                    q.v_r += delta;
                else if (id == "v_rj")
                    q.v_rj += delta;
                else if (id == "mu_re_0")
                    q.mu(0) += delta;
                else if (id == "mu_im_0")
                    q.mu(0) += Complex(0.0, delta);
                return gram(kind, q, xs);
            };
            const double h = 1e-6;
            const CMatrix fd = (with(h) - with(-h)) / (2.0 * h);
            CHECK((g - fd).cwiseAbs().maxCoeff() <
                  1e-5 * std::max(1.0, fd.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("gram_gradient special values") {
    // v_rj = 0: the diagonal is the constant v_r^2, so d/dlog gamma vanishes.
    KernelParams p = conv_params(2.0, {1.0, 1.0}, 1.3, 0.0);
    std::mt19937_64 rng(53);
    const auto xs = oracles::random_inputs(rng, 4, 1);
    const CMatrix g = gram_gradient(KernelKind::ConvolutionProper, p, xs, "log_gamma");
    for (Eigen::Index i = 0; i < g.rows(); ++i) CHECK(std::abs(g(i, i)) < 1e-15);

    // The real kernel part is mu-free: d/dRe(mu) is purely imaginary.
    p.v_rj = 0.8;
    const CMatrix gm = gram_gradient(KernelKind::ConvolutionProper, p, xs, "mu_re_0");
    CHECK(gm.real().cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(gram_gradient(KernelKind::ComplexMetricGaussian, p, xs, "v_rj"),
                    UnknownHyperparameter);
}

TEST_CASE("kernel config JSON round trip") {
    KernelConfig c;
    c.kind = KernelKind::ConvolutionProper;
    c.params = conv_params(1.125, {2.0, 2.0}, 1.0, 1.0);
    nlohmann::json j = c;
    const auto back = j.get<KernelConfig>();
    CHECK(back.kind == c.kind);
    CHECK(back.params.gamma == c.params.gamma);
    CHECK(back.params.mu(0) == c.params.mu(0));
    CHECK(back.params.v_r == c.params.v_r);
    CHECK(back.params.v_rj == c.params.v_rj);

    const nlohmann::json bad{{"kind", "nope"}};
    CHECK_THROWS_AS(bad.get<KernelConfig>(), ConfigError);
}
