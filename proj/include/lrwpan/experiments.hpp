#ifndef LRWPAN_EXPERIMENTS_HPP
#define LRWPAN_EXPERIMENTS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lrwpan/framing.hpp"
#include "lrwpan/metrics.hpp"
#include "lrwpan/rateplan.hpp"

namespace lrwpan::experiments {

/// Outcome of matching receiver frame events against the sent payloads.
/// Events are matched by the 16-bit sequence number in the first two
/// payload octets; only crc_ok events of the right size count, once each.
struct FrameTally {
    std::uint64_t frames_sent = 0;
    std::uint64_t frames_ok = 0;
    std::uint64_t payload_bit_errors = 0;
    std::uint64_t payload_bits = 0;
};

FrameTally tally_frames(std::span<const std::vector<std::uint8_t>> sent_payloads,
                        std::span<const framing::FrameEvent> events);

/// Fraction of sent frames not received with crc_ok.
double per(std::span<const std::vector<std::uint8_t>> sent_payloads,
           std::span<const framing::FrameEvent> events);

/// Loopback measurement configuration. snr_db values are per-sample SNR at
/// the channel output over the full simulated bandwidth; rows report
/// ebn0_db = snr_db + 10*log10(sample_rate / bit_rate).
struct ExperimentConfig {
    rateplan::Band band = rateplan::Band::B868;
    int sps = 8;                    // samples per chip in the simulation
    std::vector<double> snr_points; // dB; +inf means noise-free
    std::size_t payload_size = 122; // octets; 122 yields 130-octet frames
    std::size_t frames_per_point = 100;
    std::size_t bits_per_point = 100000; // compared bits target for BER runs
    bool genie_sync = false;
    bool chip_level = false; // with genie_sync: unspread BPSK chips
    std::uint64_t seed = 1;
    int amplitude = 32767;
    double cfo_hz = 0.0;
    bool random_phase = true; // per-point phase drawn from the seed
    double phase_rad = 0.0;   // used when random_phase is false
    double delay_samples = 0.0;
    std::size_t idle_gap_samples = 2000;
    std::size_t warmup_chips = 1500;
    double rolloff = 0.35;
    int rrc_span = 11;
    bool parallel = true;
};

/// Streams continuous spread (or raw chip) data with no framing through the
/// channel and receiver, accumulating at least bits_per_point compared bits
/// per SNR point. Rows are ordered by ascending SNR.
std::vector<metrics::MetricRow> run_ber_experiment(const ExperimentConfig& cfg);

/// Transmits frames_per_point sequence-numbered frames per SNR point
/// through the full chain and records the packet error rate.
std::vector<metrics::MetricRow> run_per_experiment(const ExperimentConfig& cfg);

/// Conversion used in the CSV output.
double ebn0_db_from_snr(double snr_db, double sample_rate, double bit_rate);

/// Deterministic pseudo-random payload with the 16-bit sequence number in
/// the first two octets (little-endian).
std::vector<std::uint8_t> make_payload(std::uint16_t sequence, std::size_t size,
                                       std::uint64_t seed);

} // namespace lrwpan::experiments

#endif
