#include "cgpr/channel.hpp"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

namespace cgpr {

ChannelConfig ChannelConfig::soft() { return {}; }

ChannelConfig ChannelConfig::strong() {
    ChannelConfig c;
    c.a2 = {0.2, 0.25};
    c.a3 = {0.12, 0.09};
    return c;
}

namespace {

Complex json_complex(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

nlohmann::json complex_json(Complex c) { return {c.real(), c.imag()}; }

}  // namespace

void to_json(nlohmann::json& j, const ChannelConfig& c) {
    j = nlohmann::json{{"h0", complex_json(c.h0)},   {"h1", complex_json(c.h1)},
                       {"a2", complex_json(c.a2)},   {"a3", complex_json(c.a3)},
                       {"snr_db", c.snr_db},         {"rho", c.rho},
                       {"amplitude", c.amplitude},   {"filter_len", c.filter_len},
                       {"delay", c.delay}};
}

void from_json(const nlohmann::json& j, ChannelConfig& c) {
    if (j.contains("h0")) c.h0 = json_complex(j["h0"]);
    if (j.contains("h1")) c.h1 = json_complex(j["h1"]);
    if (j.contains("a2")) c.a2 = json_complex(j["a2"]);
    if (j.contains("a3")) c.a3 = json_complex(j["a3"]);
    c.snr_db = j.value("snr_db", c.snr_db);
    c.rho = j.value("rho", c.rho);
    c.amplitude = j.value("amplitude", c.amplitude);
    c.filter_len = j.value("filter_len", c.filter_len);
    c.delay = j.value("delay", c.delay);
    if (c.rho < 0.0 || c.rho > 1.0) throw ConfigError("channel: rho must be in [0, 1]");
    if (c.filter_len <= 0 || c.delay < 0) throw ConfigError("channel: bad filter geometry");
}

ChannelRealization simulate_channel(const ChannelConfig& config, int n_samples,
                                    std::uint64_t seed) {
    if (n_samples < config.filter_len + config.delay)
        throw ConfigError("simulate_channel: too few samples for the filter geometry");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double cr = config.amplitude * std::sqrt(1.0 - config.rho * config.rho);
    const double cj = config.amplitude * config.rho;
    CVector s(n_samples);
    for (int n = 0; n < n_samples; ++n) s(n) = Complex(cr * gauss(rng), cj * gauss(rng));

    const CVector q = channel_output(config, s);
    const double q_power = q.squaredNorm() / n_samples;

    const double noise_var = q_power * std::pow(10.0, -config.snr_db / 10.0);
    const double per_part = std::sqrt(noise_var / 2.0);
    CVector r(n_samples);
    for (int n = 0; n < n_samples; ++n)
        r(n) = q(n) + Complex(per_part * gauss(rng), per_part * gauss(rng));

    return {std::move(s), std::move(r), noise_var};
}

CVector channel_output(const ChannelConfig& config, const CVector& s) {
    CVector q(s.size());
    for (Eigen::Index n = 0; n < s.size(); ++n) {
        const Complex t = config.h0 * s(n) + config.h1 * (n > 0 ? s(n - 1) : Complex{});
        q(n) = t + config.a2 * t * t + config.a3 * t * t * t;
    }
    return q;
}

std::vector<CVector> equalizer_inputs(const CVector& received, int filter_len, int delay,
                                      int n_outputs) {
    if (received.size() < n_outputs + delay)
        throw DimensionMismatch("equalizer_inputs: received sequence too short");
    std::vector<CVector> xs;
    xs.reserve(static_cast<size_t>(n_outputs));
    for (int n = 0; n < n_outputs; ++n) {
        CVector x(filter_len);
        for (int k = 0; k < filter_len; ++k) {
            const int idx = n + delay - k;
            x(k) = (idx >= 0 && idx < received.size()) ? received(idx) : Complex{};
        }
        xs.push_back(std::move(x));
    }
    return xs;
}

}  // namespace cgpr
