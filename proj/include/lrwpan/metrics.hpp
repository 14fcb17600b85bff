#ifndef LRWPAN_METRICS_HPP
#define LRWPAN_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lrwpan/iq.hpp"

namespace lrwpan::metrics {

/// Bit mismatch count over aligned equal-length sequences.
/// Throws std::invalid_argument ("LengthMismatch") if lengths differ.
std::size_t count_bit_errors(std::span<const std::uint8_t> sent,
                             std::span<const std::uint8_t> received);

double ber(std::span<const std::uint8_t> sent, std::span<const std::uint8_t> received);

/// Noncoherent D-BPSK matched-filter bound, 0.5*exp(-Eb/N0).
double dbpsk_mfb(double ebn0_db);

/// Gaussian tail Q(x) = 0.5*erfc(x/sqrt(2)).
double q_function(double x);

/// Moment-based (M2/M4) blind SNR estimate for constant-modulus signals,
/// clamped to [-10, 30] dB. Throws std::invalid_argument ("TooFewSamples")
/// below 1e4 samples.
double estimate_snr_db(const IqBuffer& samples);

struct MetricRow {
    double snr_db = 0.0;
    double ebn0_db = 0.0;
    double ber = 0.0;
    double per = 0.0;
    std::uint64_t frames_sent = 0;
    std::uint64_t frames_ok = 0;
    std::uint64_t bits_compared = 0;
};

/// CSV with `#` comment lines (SNR/EbN0 conversion note) followed by the
/// header row `snr_db,ebn0_db,ber,per,frames_sent,frames_ok,bits_compared`.
std::string metrics_csv(std::span<const MetricRow> rows,
                        std::span<const std::string> comments);

void write_metrics_csv(const std::string& path, std::span<const MetricRow> rows,
                       std::span<const std::string> comments);

} // namespace lrwpan::metrics

#endif
