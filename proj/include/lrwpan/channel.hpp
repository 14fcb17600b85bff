#ifndef LRWPAN_CHANNEL_HPP
#define LRWPAN_CHANNEL_HPP

#include <cstdint>
#include <limits>

#include "lrwpan/iq.hpp"

namespace lrwpan::channel {

/// Software stand-in for the RF path: gain, carrier offset, delay, AWGN.
struct ChannelConfig {
    double snr_db = std::numeric_limits<double>::infinity();
    int amplitude = 32767;     // linear gain amplitude/32767
    double cfo_hz = 0.0;
    double phase_rad = 0.0;
    double delay_samples = 0.0; // non-negative, integer + fractional
    std::uint64_t seed = 1;
};

/// Adds circularly-symmetric complex Gaussian noise with total variance
/// P_signal / 10^(snr_db/10), split equally across I and Q. Signal power is
/// measured over non-zero (active) samples. Reproducible from the seed.
/// Throws std::domain_error ("ZeroSignal") when input power is 0 and snr_db
/// is finite.
IqBuffer awgn(const IqBuffer& samples, double snr_db, std::uint64_t seed);

/// Delays by delay_samples (integer part plus linear-interpolated fraction),
/// extending the buffer so no samples are lost.
IqBuffer fractional_delay(const IqBuffer& samples, double delay_samples);

/// awgn(mix(delay(scale(x, gain)), cfo, phase), snr_db); deterministic
/// under a fixed seed. Throws std::invalid_argument for amplitude outside
/// 0..32767.
IqBuffer apply_channel(const IqBuffer& samples, const ChannelConfig& config);

/// splitmix64 mix of a master seed and a stream index, for deriving
/// independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace lrwpan::channel

#endif
