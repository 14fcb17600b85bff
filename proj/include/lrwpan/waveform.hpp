#ifndef LRWPAN_WAVEFORM_HPP
#define LRWPAN_WAVEFORM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lrwpan/iq.hpp"

namespace lrwpan::waveform {

/// Root-raised-cosine filter parameters. sps is samples per chip.
struct RrcSpec {
    double rolloff = 0.35;
    int span = 11; // chips covered by the filter
    int sps = 8;
};

/// Unit-energy RRC impulse response, symmetric, odd tap count
/// (span*sps + 1 when span*sps is even; rounded up to stay odd otherwise).
/// Throws std::invalid_argument ("InvalidSpec") for rolloff outside (0,1].
std::vector<double> rrc_taps(const RrcSpec& spec);

std::size_t rrc_tap_count(const RrcSpec& spec);

/// Antipodal BPSK mapping at one sample per chip: 1 -> +1, 0 -> -1.
IqBuffer chips_to_symbols(std::span<const std::uint8_t> chips, double chip_rate = 1.0);

/// Hard slicing by the sign of the real part (inverse of chips_to_symbols).
std::vector<std::uint8_t> symbols_to_chips(const IqBuffer& symbols);

/// Zero-stuff by sps and filter with rrc_taps. Output length is
/// input*sps + (taps-1); sample rate is multiplied by sps.
IqBuffer pulse_shape(const IqBuffer& symbols, const RrcSpec& spec);

/// FIR with the same RRC taps (real symmetric, hence matched); the combined
/// TX+RX response is a raised cosine.
IqBuffer matched_filter(const IqBuffer& samples, const RrcSpec& spec);

/// Full convolution with real taps.
IqBuffer fir_filter(const IqBuffer& in, std::span<const double> taps);

/// Multiplies sample n by exp(i*(2*pi*frequency*n/sample_rate + phase)).
/// Throws std::domain_error ("AliasRisk") if |frequency| >= sample_rate/2.
IqBuffer mix(const IqBuffer& samples, double frequency_hz, double phase_rad = 0.0);

} // namespace lrwpan::waveform

#endif
