#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "cgpr/types.hpp"

#include <nlohmann/json_fwd.hpp>

namespace cgpr {

/// Nonlinear channel: linear taps h0, h1, memoryless cubic nonlinearity
/// (a2, a3), additive circular Gaussian noise at snr_db relative to the
/// empirical power of the noiseless output. Inputs
/// s(n) = amplitude * (sqrt(1 - rho^2) X(n) + j rho Y(n)) with X, Y
/// standard normal; circular at rho = 1/sqrt(2).
struct ChannelConfig {
    Complex h0{-0.9, 0.8};
    Complex h1{0.6, -0.7};
    Complex a2{0.1, 0.15};
    Complex a3{0.06, 0.05};
    double snr_db = 16.0;
    double rho = 1.0 / std::numbers::sqrt2;
    double amplitude = 0.70;
    int filter_len = 5;  // L
    int delay = 2;       // D

    static ChannelConfig soft();
    static ChannelConfig strong();
};

void to_json(nlohmann::json& j, const ChannelConfig& c);
void from_json(const nlohmann::json& j, ChannelConfig& c);

struct ChannelRealization {
    CVector sent;      // s(n), the equalization target
    CVector received;  // r(n) = q(n) + noise
    double noise_var;  // complex variance of the added noise
};

ChannelRealization simulate_channel(const ChannelConfig& config, int n_samples,
                                    std::uint64_t seed);

/// Noiseless channel output q(n) for a given input sequence.
CVector channel_output(const ChannelConfig& config, const CVector& s);

/// Equalizer input x(n) = [r(n+D), ..., r(n+D-L+1)]^T; out-of-range taps are
/// zero. `received` must hold at least n_outputs + D samples.
std::vector<CVector> equalizer_inputs(const CVector& received, int filter_len, int delay,
                                      int n_outputs);

}  // namespace cgpr
