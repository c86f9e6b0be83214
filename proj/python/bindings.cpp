// Python bindings for the proper complex GPR core. Inputs cross the
// boundary as (n, d) complex matrices, one training point per row.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cgpr/experiments.hpp"
#include "cgpr/mol.hpp"

namespace py = pybind11;
using namespace cgpr;

namespace {

std::vector<CVector> to_points(const Eigen::Ref<const CMatrix>& rows) {
    std::vector<CVector> xs;
    xs.reserve(static_cast<size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
        xs.push_back(rows.row(i).transpose());
    return xs;
}

KernelParams make_params(double gamma, const CVector& mu, double v_r, double v_rj) {
    KernelParams p;
    p.gamma = gamma;
    p.mu = mu;
    p.v_r = v_r;
    p.v_rj = v_rj;
    return p;
}

GprModel make_model(const Eigen::Ref<const CMatrix>& inputs, const CVector& outputs,
                    const std::string& kind, const KernelParams& params,
                    double noise_var) {
    ComplexDataset data;
    data.inputs = to_points(inputs);
    data.outputs = outputs;
    return fit(std::move(data), kernel_kind_from_string(kind), params, noise_var);
}

}  // namespace

PYBIND11_MODULE(_cgpr, m) {
    m.doc() = "Proper complex Gaussian-process regression";

    py::class_<KernelParams>(m, "KernelParams")
        .def(py::init(&make_params), py::arg("gamma") = 1.0,
             py::arg("mu") = CVector(), py::arg("v_r") = 1.0, py::arg("v_rj") = 0.0)
        .def_readwrite("gamma", &KernelParams::gamma)
        .def_readwrite("mu", &KernelParams::mu)
        .def_readwrite("v_r", &KernelParams::v_r)
        .def_readwrite("v_rj", &KernelParams::v_rj)
        .def("__repr__", [](const KernelParams& p) {
            return "KernelParams(gamma=" + std::to_string(p.gamma) +
                   ", v_r=" + std::to_string(p.v_r) +
                   ", v_rj=" + std::to_string(p.v_rj) + ")";
        });

    m.def(
        "gram",
        [](const std::string& kind, const KernelParams& p,
           const Eigen::Ref<const CMatrix>& xs) {
            return gram(kernel_kind_from_string(kind), p, to_points(xs));
        },
        py::arg("kind"), py::arg("params"), py::arg("inputs"),
        "Gram matrix of a kernel over row-stacked inputs.");

    m.def("kernel_kinds", [] {
        return std::vector<std::string>{
            to_string(KernelKind::ComplexMetricGaussian),
            to_string(KernelKind::ConvolutionProper),
            to_string(KernelKind::PriorArtComplexGaussian),
            to_string(KernelKind::IndependentKernel)};
    });

    py::class_<GprModel>(m, "Model")
        .def(py::init(&make_model), py::arg("inputs"), py::arg("outputs"),
             py::arg("kind"), py::arg("params"), py::arg("noise_var"))
        .def_property_readonly("n",
                               [](const GprModel& g) { return g.dataset().n(); })
        .def_property_readonly("noise_var", &GprModel::noise_var)
        .def_property_readonly("params", &GprModel::params)
        .def_property_readonly("kind",
                               [](const GprModel& g) { return to_string(g.kind()); })
        .def(
            "predict_mean",
            [](const GprModel& g, const Eigen::Ref<const CMatrix>& xt) {
                return predict_mean(g, to_points(xt));
            },
            py::arg("inputs"))
        .def(
            "predict",
            [](const GprModel& g, const Eigen::Ref<const CMatrix>& xt) {
                const PosteriorPredictive p = predict(g, to_points(xt));
                return py::make_tuple(p.mean, p.covariance);
            },
            py::arg("inputs"), "Posterior mean and Hermitian covariance.")
        .def("log_marginal_likelihood",
             [](const GprModel& g) { return log_marginal_likelihood(g); })
        .def(
            "append",
            [](const GprModel& g, const CVector& x, Complex y) {
                return append_observation(g, x, y);
            },
            py::arg("x"), py::arg("y"),
            "New model with one more observation, reusing the cached factor.")
        .def(
            "sample_posterior",
            [](const GprModel& g, const Eigen::Ref<const CMatrix>& xt, int count,
               std::uint64_t seed) {
                return sample_posterior(g, to_points(xt), count, seed);
            },
            py::arg("inputs"), py::arg("count"), py::arg("seed"));

    m.def(
        "sample_prior",
        [](const std::string& kind, const KernelParams& p,
           const Eigen::Ref<const CMatrix>& xs, int count, std::uint64_t seed) {
            return sample_prior(kernel_kind_from_string(kind), p, to_points(xs), count,
                                seed);
        },
        py::arg("kind"), py::arg("params"), py::arg("inputs"), py::arg("count"),
        py::arg("seed"));

    m.def(
        "maximize_likelihood",
        [](const Eigen::Ref<const CMatrix>& inputs, const CVector& outputs,
           const std::string& kind, const KernelParams& init, double noise_var,
           int max_iter, int restarts, std::uint64_t seed) {
            ComplexDataset data;
            data.inputs = to_points(inputs);
            data.outputs = outputs;
            const KernelKind k = kernel_kind_from_string(kind);
            OptimizeOptions opt;
            opt.max_iter = max_iter;
            opt.restarts = restarts;
            opt.seed = seed;
            const OptimizeResult r =
                maximize(data, k, default_hyper_spec(k, init, noise_var), opt);
            py::dict out;
            out["params"] = r.params;
            out["noise_var"] = r.noise_var;
            out["log_likelihood"] = r.report.final_log_likelihood;
            out["iterations"] = r.report.iterations;
            out["converged"] = r.report.converged;
            return out;
        },
        py::arg("inputs"), py::arg("outputs"), py::arg("kind"), py::arg("init"),
        py::arg("noise_var"), py::arg("max_iter") = 200, py::arg("restarts") = 4,
        py::arg("seed") = 0,
        "Gradient-ascent maximization of the log marginal likelihood.");

    m.def(
        "composite_real_mean",
        [](const Eigen::Ref<const CMatrix>& inputs, const CVector& outputs,
           const std::string& kind, const KernelParams& p, double noise_var,
           const CVector& test_input) {
            const KernelKind k = kernel_kind_from_string(kind);
            const auto xs = to_points(inputs);
            const CompositeRealSystem sys = build_composite(k, p, xs, outputs);
            const auto [re, im] =
                predict_composite(sys, noise_var, k, p, xs, test_input);
            return Complex(re, im);
        },
        py::arg("inputs"), py::arg("outputs"), py::arg("kind"), py::arg("params"),
        py::arg("noise_var"), py::arg("test_input"),
        "Stacked-real posterior mean, the oracle for the complex path.");
}
