#include "lrwpan/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lrwpan/waveform.hpp"

namespace lrwpan::channel {

namespace {

/// Box-Muller Gaussian source over mt19937_64, deterministic across
/// standard library implementations.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform_open() {
        // (0, 1]: keeps log() finite
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

IqBuffer awgn(const IqBuffer& samples, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0)
        return samples;

    const double signal_power = mean_power(samples, /*active_only=*/true);
    if (signal_power <= 0.0)
        throw std::domain_error("ZeroSignal: cannot set finite SNR on an all-zero buffer");

    const double noise_power = signal_power / db_to_lin(snr_db);
    const double sigma = std::sqrt(noise_power / 2.0);

    GaussianRng gauss(seed);
    IqBuffer out(samples.sample_rate);
    out.samples.resize(samples.size());
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const double ni = sigma * gauss();
        const double nq = sigma * gauss();
        out.samples[n] = samples[n] + cplx{ni, nq};
    }
    return out;
}

IqBuffer fractional_delay(const IqBuffer& samples, double delay_samples) {
    if (delay_samples < 0.0)
        throw std::invalid_argument("delay_samples must be non-negative");
    if (delay_samples == 0.0)
        return samples;

    const auto d_int = static_cast<std::size_t>(std::floor(delay_samples));
    const double frac = delay_samples - static_cast<double>(d_int);

    IqBuffer out(samples.sample_rate);
    out.samples.assign(samples.size() + d_int + (frac > 0.0 ? 1 : 0), cplx{0.0, 0.0});
    for (std::size_t n = 0; n < out.size(); ++n) {
        // out[n] = (1-frac)*x[n - d_int] + frac*x[n - d_int - 1]
        const auto at = [&](std::ptrdiff_t i) -> cplx {
            return (i >= 0 && i < static_cast<std::ptrdiff_t>(samples.size())) ? samples[static_cast<std::size_t>(i)]
                                                                               : cplx{0.0, 0.0};
        };
        const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(d_int);
        out.samples[n] = at(base) * (1.0 - frac) + at(base - 1) * frac;
    }
    return out;
}

IqBuffer apply_channel(const IqBuffer& samples, const ChannelConfig& config) {
    if (config.amplitude < 0 || config.amplitude > 32767)
        throw std::invalid_argument("amplitude must be in 0..32767");

    const double gain = static_cast<double>(config.amplitude) / 32767.0;
    IqBuffer x(samples.sample_rate);
    x.samples.resize(samples.size());
    for (std::size_t n = 0; n < samples.size(); ++n)
        x.samples[n] = samples[n] * gain;

    if (config.delay_samples > 0.0)
        x = fractional_delay(x, config.delay_samples);
    if (config.cfo_hz != 0.0 || config.phase_rad != 0.0)
        x = waveform::mix(x, config.cfo_hz, config.phase_rad);
    if (!(std::isinf(config.snr_db) && config.snr_db > 0))
        x = awgn(x, config.snr_db, config.seed);
    return x;
}

} // namespace lrwpan::channel
