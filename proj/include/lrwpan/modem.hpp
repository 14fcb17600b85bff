#ifndef LRWPAN_MODEM_HPP
#define LRWPAN_MODEM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lrwpan/channel.hpp"
#include "lrwpan/framing.hpp"
#include "lrwpan/iq.hpp"
#include "lrwpan/sync.hpp"
#include "lrwpan/waveform.hpp"

namespace lrwpan::modem {

struct TxConfig {
    double chip_rate = 300000.0;
    waveform::RrcSpec rrc{0.35, 11, 8};
    // Spread zero bits sent ahead of the first data chip so the receiver
    // loops are converged when the payload (or first preamble) arrives.
    std::size_t warmup_chips = 1500; // multiple of 15
    // Idle (zero-symbol) gap between frames, in output samples.
    std::size_t idle_gap_samples = 2000;
    double if_hz = 0.0; // optional intermediate-frequency upmix
};

struct TxStream {
    IqBuffer iq;
    int sps = 8;
    std::size_t data_chip0 = 0; // chip index of the first data chip
    std::size_t n_chips = 0;    // total chips including warmup and gaps
};

/// Spread-spectrum transmitter for a raw bit stream (no framing):
/// diff encode, spread, BPSK map, RRC shape.
TxStream tx_bits(std::span<const std::uint8_t> bits, const TxConfig& cfg);

/// Unspread BPSK transmitter for a raw chip stream.
TxStream tx_chips(std::span<const std::uint8_t> chips, const TxConfig& cfg);

/// Frame transmitter: builds PHY frames from the payloads, inserts idle
/// gaps between frames, and prepends the warmup run.
TxStream tx_frames(std::span<const std::vector<std::uint8_t>> payloads,
                   std::size_t byte_modulus, const TxConfig& cfg);

/// Chip-spaced sampling instants known exactly from transmitter metadata
/// and channel configuration (filter group delays plus channel delay).
/// Derotates by the known carrier offset and phase, matched-filters, and
/// interpolates one sample per chip starting at first_chip.
IqBuffer genie_chip_samples(const IqBuffer& rx, const TxConfig& cfg,
                            const channel::ChannelConfig& ch,
                            std::size_t first_chip, std::size_t n_chips);

struct RxOutput {
    std::vector<std::uint8_t> chips;        // hard decisions, one per chip
    std::vector<framing::FrameEvent> events;
    IqBuffer soft;                          // one complex sample per chip
    double costas_frequency = 0.0;          // rad/sample at end of stream
    double timing_omega = 0.0;              // samples/chip at end of stream
};

/// Full receiver chain: squelch -> AGC -> matched filter -> Costas ->
/// Mueller-Müller -> slicer -> packet sink.
class FullReceiver {
public:
    FullReceiver(const sync::SyncConfig& sync_cfg, const waveform::RrcSpec& rrc,
                 const framing::SinkConfig& sink_cfg = {});

    RxOutput process(const IqBuffer& in);

private:
    sync::SyncConfig sync_cfg_;
    waveform::RrcSpec rrc_;
    framing::SinkConfig sink_cfg_;
};

} // namespace lrwpan::modem

#endif
