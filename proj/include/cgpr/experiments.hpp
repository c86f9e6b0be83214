#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cgpr/channel.hpp"
#include "cgpr/gpr.hpp"
#include "cgpr/hyperlearn.hpp"
#include "cgpr/kaf.hpp"

#include <nlohmann/json_fwd.hpp>

namespace cgpr {

/// Per-sample MSE trace in dB: entry i is the mean squared error over the
/// trailing `window` samples ending at sample i + window, averaged over
/// trials. Length = n_samples - window.
struct LearningCurve {
    std::string label;
    RVector mse_db;
    int trials = 0;
    int clamped_trials = 0;  // trials where a non-finite error was clamped
};

// ---------------------------------------------------------------------------
// Experiment 1: learning a sampled proper GP with non-null cross-covariance.

struct Exp1Config {
    double gamma = 1.125;
    Complex mu{2.0, 2.0};
    double v_r = 1.0;
    double v_rj = 1.0;
    double sigma_eps = 0.1;
    int n_train = 200;
    int grid_size = 80;  // grid_size^2 evaluation points
    double grid_lo = -6.0;
    double grid_hi = 5.0;
    int seeds = 10;
    std::uint64_t master_seed = 1;
    OptimizeOptions optimize{};
    // Grid rows used for the 1-D slice outputs (imaginary coordinate index).
    int slice_rows[2] = {75, 39};
    int posterior_draws = 4;
};

void to_json(nlohmann::json& j, const Exp1Config& c);
void from_json(const nlohmann::json& j, Exp1Config& c);

struct Exp1SeedResult {
    std::uint64_t seed = 0;
    double mse_db = 0.0;
    KernelParams recovered;        // sign-canonicalized: v_r, v_rj >= 0
    double recovered_noise_var = 0.0;
    double final_log_likelihood = 0.0;
    double wall_seconds = 0.0;
};

struct SliceData {
    double im_value = 0.0;
    RVector re_grid;
    CVector truth;
    CVector mean;
    RVector stddev;
    std::vector<CVector> posterior_draws;
};

struct Exp1Report {
    Exp1Config config;
    std::vector<Exp1SeedResult> per_seed;
    double median_mse_db = 0.0;
    double median_gamma = 0.0;
    Complex median_mu{};
    double median_sigma_eps = 0.0;
    SliceData slices[2];  // from the first seed
};

Exp1Report run_experiment_1(const Exp1Config& config);

// ---------------------------------------------------------------------------
// Experiment 2: nonlinear channel equalization benchmark.

struct EqualizationConfig {
    ChannelConfig channel;
    bool strong_channel = false;  // selects the published KLMS settings
    std::vector<std::string> algorithms{"NCKLMS2",   "NCKLMS2-i", "NCKLMS2-G",
                                        "ACKLMS",    "CGPR",      "opt-CGPR"};
    int n_samples = 3000;
    int trials = 100;
    std::uint64_t seed = 1;
    int window = 100;        // trailing MSE window
    int train_cap = 0;       // GPR training-set cap, 0 = uncapped
    int hyper_train = 250;   // CGPR: samples used for likelihood maximization
    int tune_samples = 1000; // opt-CGPR: held samples for the gamma grid search
    int hyper_max_iter = 60;
    int hyper_restarts = 2;
    double mse_clamp = 1e6;  // +60 dB clamp for diverged baselines
};

void to_json(nlohmann::json& j, const EqualizationConfig& c);
void from_json(const nlohmann::json& j, EqualizationConfig& c);

/// Published parameter settings for the KLMS baselines on the two channels.
KafConfig default_kaf_config(KafVariant variant, bool strong_channel);

/// Squared-error stream of the growing-training-set GPR equalizer with the
/// ComplexMetricGaussian kernel. The error at sample n is evaluated at the
/// training input with the pair (x(n), s(n)) already absorbed into the
/// model, so it equals noise_var * |alpha_n| with C alpha = y over the first
/// n+1 pairs. Past train_cap (when positive) the model freezes and the
/// errors switch to out-of-sample posterior-mean prediction.
RVector gpr_equalizer_errors(std::span<const CVector> inputs, const CVector& targets,
                             double gamma, double noise_var, Eigen::Index train_cap = 0);

std::vector<LearningCurve> run_equalization(const EqualizationConfig& config);

// ---------------------------------------------------------------------------
// Result emission.

/// Columns: sample_index, then one mse_db column per curve label.
void write_curves_csv(std::ostream& out, const std::vector<LearningCurve>& curves);
std::vector<LearningCurve> read_curves_csv(std::istream& in);

void write_slice_csv(std::ostream& out, const SliceData& slice);

/// Writes <stem>.csv (or .json) plus <stem>_manifest.json under `dir`.
void emit_results(const std::vector<LearningCurve>& curves, const nlohmann::json& manifest,
                  const std::string& dir, const std::string& stem,
                  const std::string& format);

}  // namespace cgpr
