#include "cgpr/gpr.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>

namespace cgpr {

void ComplexDataset::validate() const {
    if (outputs.size() != n())
        throw DimensionMismatch("dataset: inputs and outputs length mismatch");
    for (const auto& x : inputs)
        if (x.size() != dim()) throw DimensionMismatch("dataset: inconsistent input dimension");
}

void write_dataset_csv(std::ostream& out, const ComplexDataset& data) {
    data.validate();
    const Eigen::Index d = data.dim();
    for (Eigen::Index k = 0; k < d; ++k) out << "x_re_" << k << ",";
    for (Eigen::Index k = 0; k < d; ++k) out << "x_im_" << k << ",";
    out << "y_re,y_im\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index k = 0; k < d; ++k) out << data.inputs[i](k).real() << ",";
        for (Eigen::Index k = 0; k < d; ++k) out << data.inputs[i](k).imag() << ",";
        out << data.outputs(i).real() << "," << data.outputs(i).imag() << "\n";
    }
}

ComplexDataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("dataset csv: missing header");
    Eigen::Index cols = 1;
    for (char c : line)
        if (c == ',') ++cols;
    if (cols < 4 || cols % 2 != 0) throw ConfigError("dataset csv: bad column count");
    const Eigen::Index d = (cols - 2) / 2;
    if (!line.starts_with("x_re_0")) throw ConfigError("dataset csv: header row required");

    ComplexDataset data;
    std::vector<Complex> ys;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<double> vals;
        std::string cell;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<Eigen::Index>(vals.size()) != cols)
            throw ConfigError("dataset csv: ragged row");
        CVector x(d);
        for (Eigen::Index k = 0; k < d; ++k) x(k) = Complex(vals[k], vals[d + k]);
        data.inputs.push_back(std::move(x));
        ys.emplace_back(vals[2 * d], vals[2 * d + 1]);
    }
    data.outputs = Eigen::Map<const CVector>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    data.validate();
    return data;
}

GprModel::GprModel(ComplexDataset data, KernelKind kind, KernelParams params,
                   double noise_var, HermitianFactor factor, CVector whitened,
                   CVector alpha)
    : data_(std::move(data)),
      kind_(kind),
      params_(std::move(params)),
      noise_var_(noise_var),
      factor_(std::move(factor)),
      whitened_(std::move(whitened)),
      alpha_(std::move(alpha)) {}

GprModel::GprModel(ComplexDataset data, KernelKind kind, KernelParams params,
                   double noise_var)
    : data_(std::move(data)),
      kind_(kind),
      params_(std::move(params)),
      noise_var_(noise_var),
      factor_(CMatrix{}) {
    data_.validate();
    if (data_.n() < 1) throw DimensionMismatch("fit: empty dataset");
    if (!(noise_var_ > 0.0)) throw ConfigError("fit: noise_var must be strictly positive");
    CMatrix c = gram(kind_, params_, data_.inputs);
    c.diagonal().array() += noise_var_;
    factor_ = cholesky_with_retry(c);
    whitened_ = factor_.forward_solve(data_.outputs);
    alpha_ = factor_.adjoint_solve(whitened_);
}

GprModel fit(ComplexDataset data, KernelKind kind, KernelParams params, double noise_var) {
    return GprModel(std::move(data), kind, std::move(params), noise_var);
}

GprModel GprModel::appended(const CVector& x, Complex y) const {
    if (x.size() != data_.dim()) throw DimensionMismatch("append: input dimension mismatch");
    const Eigen::Index n = data_.n();
    CVector row(n);
    for (Eigen::Index i = 0; i < n; ++i) row(i) = eval_kernel(kind_, params_, x, data_.inputs[i]);
    const double diag = eval_kernel(kind_, params_, x, x).real() + noise_var_;

    HermitianFactor factor = extend_factor(factor_, row, diag);
    // Forward substitution extends by one entry; back substitution is redone.
    CVector whitened(n + 1);
    whitened.head(n) = whitened_;
    whitened(n) =
        (y - (factor.lower().row(n).head(n) * whitened_).value()) / factor.lower()(n, n);

    ComplexDataset data = data_;
    data.inputs.push_back(x);
    data.outputs.conservativeResize(n + 1);
    data.outputs(n) = y;

    CVector alpha = factor.adjoint_solve(whitened);
    return GprModel(std::move(data), kind_, params_, noise_var_, std::move(factor),
                    std::move(whitened), std::move(alpha));
}

GprModel append_observation(const GprModel& model, const CVector& x, Complex y) {
    return model.appended(x, y);
}

CVector predict_mean(const GprModel& model, std::span<const CVector> test_inputs) {
    CMatrix kx = cross_gram(model.kind(), model.params(), test_inputs,
                            model.dataset().inputs);
    return kx * model.alpha();
}

PosteriorPredictive predict(const GprModel& model, std::span<const CVector> test_inputs) {
    CMatrix kx = cross_gram(model.kind(), model.params(), test_inputs,
                            model.dataset().inputs);
    CMatrix kss = gram(model.kind(), model.params(), test_inputs);
    CMatrix v = solve(model.factor(), CMatrix(kx.adjoint()));
    CMatrix cov = kss - kx * v;
    cov = 0.5 * (cov + cov.adjoint()).eval();
    return {kx * model.alpha(), std::move(cov)};
}

double log_marginal_likelihood(const GprModel& model) {
    const double quad = model.whitened_quadratic();
    return -quad - log_det(model.factor()) -
           static_cast<double>(model.dataset().n()) * std::log(std::numbers::pi);
}

namespace {

/// Lower Cholesky factor of a real symmetric PSD matrix, with the same
/// jitter escalation as the complex path. Factors in place (the 2n x 2n
/// composite can run to gigabytes) and restores the matrix between retries.
RMatrix real_cholesky_with_retry(RMatrix m) {
    double jitter = 0.0;
    double base = 1e-10 * m.diagonal().mean();
    if (!(base > 0.0)) base = 1e-12;
    const RMatrix upper_backup = m.triangularView<Eigen::StrictlyUpper>();
    const RVector diag_backup = m.diagonal();
    for (int attempt = 0; attempt < 4; ++attempt) {
        if (attempt > 0) {
            m.triangularView<Eigen::StrictlyLower>() =
                upper_backup.triangularView<Eigen::StrictlyUpper>().transpose();
            m.diagonal() = diag_backup;
        }
        m.diagonal().array() += jitter;
        Eigen::LLT<Eigen::Ref<RMatrix>> llt(m);
        if (llt.info() == Eigen::Success) {
            m.triangularView<Eigen::StrictlyUpper>().setZero();
            return m;
        }
        jitter = (jitter == 0.0) ? base : jitter * 10.0;
    }
    throw NotPositiveDefinite("composite covariance not positive definite");
}

std::vector<CVector> sample_composite(const CVector& mean, const CMatrix& cov, int count,
                                      std::uint64_t seed) {
    const Eigen::Index n = cov.rows();
    RMatrix big(2 * n, 2 * n);
    big.topLeftCorner(n, n) = 0.5 * cov.real();
    big.bottomRightCorner(n, n) = 0.5 * cov.real();
    big.topRightCorner(n, n) = -0.5 * cov.imag();
    big.bottomLeftCorner(n, n) = 0.5 * cov.imag();
    const RMatrix lower = real_cholesky_with_retry(std::move(big));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<CVector> draws;
    draws.reserve(static_cast<size_t>(count));
    RVector z(2 * n);
    for (int c = 0; c < count; ++c) {
        for (Eigen::Index i = 0; i < 2 * n; ++i) z(i) = gauss(rng);
        const RVector s = lower * z;
        CVector f(n);
        for (Eigen::Index i = 0; i < n; ++i) f(i) = mean(i) + Complex(s(i), s(n + i));
        draws.push_back(std::move(f));
    }
    return draws;
}

}  // namespace

std::vector<CVector> sample_proper_gaussian(const CVector& mean, const CMatrix& cov,
                                            int count, std::uint64_t seed) {
    if (cov.rows() != cov.cols() || cov.rows() != mean.size())
        throw DimensionMismatch("sample_proper_gaussian: shape mismatch");
    return sample_composite(mean, cov, count, seed);
}

std::vector<CVector> sample_prior(KernelKind kind, const KernelParams& params,
                                  std::span<const CVector> xs, int count,
                                  std::uint64_t seed) {
    const CMatrix k = gram(kind, params, xs);
    return sample_composite(CVector::Zero(k.rows()), k, count, seed);
}

std::vector<CVector> sample_posterior(const GprModel& model,
                                      std::span<const CVector> test_inputs, int count,
                                      std::uint64_t seed) {
    PosteriorPredictive post = predict(model, test_inputs);
    return sample_composite(post.mean, post.covariance, count, seed);
}

}  // namespace cgpr
