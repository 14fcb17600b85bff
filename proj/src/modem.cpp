#include "lrwpan/modem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrwpan::modem {

namespace {

IqBuffer shape_symbols(const IqBuffer& symbols, const TxConfig& cfg) {
    IqBuffer iq = waveform::pulse_shape(symbols, cfg.rrc);
    if (cfg.if_hz != 0.0)
        iq = waveform::mix(iq, cfg.if_hz);
    return iq;
}

std::vector<std::uint8_t> warmup_bits(const TxConfig& cfg) {
    return std::vector<std::uint8_t>(cfg.warmup_chips / spreading::kChipsPerBit, 0);
}

} // namespace

TxStream tx_chips(std::span<const std::uint8_t> chips, const TxConfig& cfg) {
    TxStream out;
    out.sps = cfg.rrc.sps;
    out.data_chip0 = 0;
    out.n_chips = chips.size();
    IqBuffer symbols = waveform::chips_to_symbols(chips, cfg.chip_rate);
    out.iq = shape_symbols(symbols, cfg);
    return out;
}

TxStream tx_bits(std::span<const std::uint8_t> bits, const TxConfig& cfg) {
    std::vector<std::uint8_t> all_bits = warmup_bits(cfg);
    const std::size_t warmup = all_bits.size() * spreading::kChipsPerBit;
    all_bits.insert(all_bits.end(), bits.begin(), bits.end());

    spreading::DiffState diff;
    const std::vector<std::uint8_t> encoded = spreading::diff_encode(all_bits, diff);
    const std::vector<std::uint8_t> chips = spreading::spread_bits(encoded);

    TxStream out;
    out.sps = cfg.rrc.sps;
    out.data_chip0 = warmup;
    out.n_chips = chips.size();
    IqBuffer symbols = waveform::chips_to_symbols(chips, cfg.chip_rate);
    out.iq = shape_symbols(symbols, cfg);
    return out;
}

TxStream tx_frames(std::span<const std::vector<std::uint8_t>> payloads,
                   std::size_t byte_modulus, const TxConfig& cfg) {
    const std::size_t gap_chips = cfg.idle_gap_samples / static_cast<std::size_t>(cfg.rrc.sps);

    // One continuous symbol stream; idle gaps are zero symbols so the
    // transmitter is silent between frames.
    IqBuffer symbols(cfg.chip_rate);
    spreading::DiffState diff;

    const std::vector<std::uint8_t> warmup = warmup_bits(cfg);
    const std::vector<std::uint8_t> warmup_chip_stream =
        spreading::spread_bits(spreading::diff_encode(warmup, diff));
    for (std::uint8_t c : warmup_chip_stream)
        symbols.samples.emplace_back(c ? 1.0 : -1.0, 0.0);

    TxStream out;
    out.sps = cfg.rrc.sps;
    out.data_chip0 = symbols.size();

    for (std::size_t i = 0; i < payloads.size(); ++i) {
        const framing::BuiltFrame frame = framing::build_frame(payloads[i], byte_modulus);
        const std::vector<std::uint8_t> bits = octets_to_bits(frame.octets);
        const std::vector<std::uint8_t> chips =
            spreading::spread_bits(spreading::diff_encode(bits, diff));
        for (std::uint8_t c : chips)
            symbols.samples.emplace_back(c ? 1.0 : -1.0, 0.0);
        if (i + 1 < payloads.size())
            symbols.samples.insert(symbols.samples.end(), gap_chips, cplx{0.0, 0.0});
    }
    // trailing run-out so the last frame clears the receiver filters
    symbols.samples.insert(symbols.samples.end(), gap_chips, cplx{0.0, 0.0});

    out.n_chips = symbols.size();
    out.iq = shape_symbols(symbols, cfg);
    return out;
}

IqBuffer genie_chip_samples(const IqBuffer& rx, const TxConfig& cfg,
                            const channel::ChannelConfig& ch,
                            std::size_t first_chip, std::size_t n_chips) {
    IqBuffer x = rx;
    if (ch.cfo_hz != 0.0 || ch.phase_rad != 0.0)
        x = waveform::mix(x, -ch.cfo_hz, -ch.phase_rad);
    if (cfg.if_hz != 0.0)
        x = waveform::mix(x, -cfg.if_hz);
    x = waveform::matched_filter(x, cfg.rrc);

    const double group_delay = static_cast<double>(waveform::rrc_tap_count(cfg.rrc) - 1);
    IqBuffer out(cfg.chip_rate);
    out.samples.reserve(n_chips);
    for (std::size_t k = 0; k < n_chips; ++k) {
        const double t = static_cast<double>(first_chip + k) * cfg.rrc.sps + group_delay +
                         ch.delay_samples;
        const auto i0 = static_cast<std::size_t>(std::floor(t));
        const double frac = t - std::floor(t);
        if (i0 + 1 >= x.size())
            break;
        out.samples.push_back(x[i0] * (1.0 - frac) + x[i0 + 1] * frac);
    }
    return out;
}

FullReceiver::FullReceiver(const sync::SyncConfig& sync_cfg, const waveform::RrcSpec& rrc,
                           const framing::SinkConfig& sink_cfg)
    : sync_cfg_(sync_cfg), rrc_(rrc), sink_cfg_(sink_cfg) {
    if (sync_cfg_.timing_omega < 2.0)
        throw std::invalid_argument("timing_omega must be at least 2 samples per chip");
}

RxOutput FullReceiver::process(const IqBuffer& in) {
    sync::PowerSquelch squelch(sync_cfg_.squelch_threshold_db);
    sync::Agc agc(sync_cfg_.agc_reference, sync_cfg_.agc_rate);
    sync::CostasLoop costas(sync_cfg_.costas_bandwidth);
    sync::ClockRecoveryMM timing(sync_cfg_.timing_omega, sync_cfg_.timing_gain_omega,
                                 sync_cfg_.timing_gain_mu);

    IqBuffer x = squelch.process(in);
    x = agc.process(x);
    x = waveform::matched_filter(x, rrc_);
    x = costas.process(x);
    IqBuffer soft = timing.process(x);

    RxOutput out;
    out.chips = waveform::symbols_to_chips(soft);
    framing::PacketSink sink(sink_cfg_);
    out.events = sink.run(out.chips);
    out.soft = std::move(soft);
    out.costas_frequency = costas.frequency();
    out.timing_omega = timing.omega();
    return out;
}

} // namespace lrwpan::modem
