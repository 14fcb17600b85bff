#include "lrwpan/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <thread>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lrwpan/channel.hpp"
#include "lrwpan/modem.hpp"
#include "lrwpan/spreading.hpp"

namespace lrwpan::experiments {

namespace {

using metrics::MetricRow;

double uniform_phase(std::mt19937_64& rng) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * std::numbers::pi * u;
}

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i)
        bits[i] = static_cast<std::uint8_t>(rng() & 1);
    return bits;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.snr_points.empty())
        throw std::invalid_argument("snr_points must be nonempty");
    if (cfg.frames_per_point < 1)
        throw std::invalid_argument("frames_per_point must be at least 1");
    if (cfg.payload_size < 2 || cfg.payload_size > framing::kMaxPayload)
        throw std::invalid_argument("payload_size must be in 2..125");
    if (cfg.sps < 2)
        throw std::invalid_argument("sps must be at least 2");
    if (cfg.warmup_chips % spreading::kChipsPerBit != 0)
        throw std::invalid_argument("warmup_chips must be a multiple of 15");
    if (!cfg.genie_sync && !cfg.chip_level && cfg.bits_per_point < 1000)
        throw std::invalid_argument(
            "bits_per_point below 1000 cannot anchor the full-sync alignment search");
}

modem::TxConfig make_tx_config(const ExperimentConfig& cfg, bool with_warmup) {
    modem::TxConfig tx;
    tx.chip_rate = static_cast<double>(rateplan::chip_rate_for(cfg.band));
    tx.rrc = waveform::RrcSpec{cfg.rolloff, cfg.rrc_span, cfg.sps};
    tx.warmup_chips = with_warmup ? cfg.warmup_chips : 0;
    tx.idle_gap_samples = cfg.idle_gap_samples;
    return tx;
}

channel::ChannelConfig make_channel_config(const ExperimentConfig& cfg, double snr_db,
                                           std::mt19937_64& rng, std::uint64_t point_seed) {
    channel::ChannelConfig ch;
    ch.snr_db = snr_db;
    ch.amplitude = cfg.amplitude;
    ch.cfo_hz = cfg.cfo_hz;
    ch.phase_rad = cfg.random_phase ? uniform_phase(rng) : cfg.phase_rad;
    ch.delay_samples = cfg.delay_samples;
    ch.seed = channel::derive_seed(point_seed, 0xC0FFEE);
    return ch;
}

// Operating profile for the measurement chain: narrower loops than the
// acquisition-oriented defaults so chip slips stay negligible at the low
// chip SNRs the BER/PER sweeps visit. The warmup run absorbs the slower
// convergence.
sync::SyncConfig make_sync_config(const ExperimentConfig& cfg) {
    sync::SyncConfig sc;
    sc.timing_omega = static_cast<double>(cfg.sps);
    sc.costas_bandwidth = 2e-3;
    sc.agc_rate = 2e-3;
    sc.timing_gain_mu = 5e-3;
    sc.timing_gain_omega = 1e-6;
    return sc;
}

struct Comparison {
    std::size_t errors = 0;
    std::size_t compared = 0;
};

/// Locates the sent sequence inside the decoded stream by exhaustive search
/// over the 15 chip phases and a bit offset, then counts mismatches block by
/// block. A block that falls below the agreement gate re-searches nearby
/// alignments, so an occasional timing-loop chip slip costs one garbled
/// block instead of scrambling the rest of the comparison (the packet sink
/// re-acquires alignment on every preamble in the same way). The decoded
/// head (warmup, filter and loop transients) is skipped by the offset.
Comparison align_and_count(const std::vector<std::uint8_t>& sent,
                           const std::vector<std::uint8_t>& rx_chips,
                           std::size_t max_offset_bits) {
    std::vector<std::vector<std::uint8_t>> decoded(spreading::kChipsPerBit);
    for (int phase = 0; phase < spreading::kChipsPerBit; ++phase) {
        if (rx_chips.size() < static_cast<std::size_t>(phase) + 2 * spreading::kChipsPerBit)
            continue;
        const auto [encoded, dist] = spreading::despread_chips(
            std::span<const std::uint8_t>(rx_chips).subspan(static_cast<std::size_t>(phase)));
        spreading::DiffState st;
        decoded[static_cast<std::size_t>(phase)] = spreading::diff_decode(encoded, st);
    }

    // initial lock
    int phase = -1;
    std::size_t offset = 0;
    double best_score = -1.0;
    const std::size_t window = std::min<std::size_t>(2000, sent.size());
    for (int p = 0; p < spreading::kChipsPerBit; ++p) {
        const auto& dec = decoded[static_cast<std::size_t>(p)];
        const std::size_t offset_cap = std::min(max_offset_bits, dec.size());
        for (std::size_t off = 0; off < offset_cap; ++off) {
            const std::size_t w = std::min({window, dec.size() - off, sent.size()});
            if (w < 64)
                break;
            std::size_t agree = 0;
            for (std::size_t j = 0; j < w; ++j)
                agree += (dec[off + j] == sent[j]);
            const double score = static_cast<double>(agree) / static_cast<double>(w);
            if (score > best_score) {
                best_score = score;
                phase = p;
                offset = off;
            }
        }
    }
    if (phase < 0)
        return {};

    constexpr std::size_t kBlock = 500;
    constexpr double kAgreementGate = 0.65;
    Comparison total;
    std::size_t pos = 0; // index into sent
    while (pos < sent.size()) {
        const auto& dec = decoded[static_cast<std::size_t>(phase)];
        if (offset + pos >= dec.size())
            break;
        const std::size_t n = std::min(kBlock, std::min(sent.size() - pos, dec.size() - offset - pos));
        if (n == 0)
            break;
        std::size_t errors = 0;
        for (std::size_t j = 0; j < n; ++j)
            errors += (dec[offset + pos + j] != sent[pos + j]);
        const double agreement = 1.0 - static_cast<double>(errors) / static_cast<double>(n);

        if (agreement < kAgreementGate && n == kBlock) {
            // Probable chip slip. Re-search neighbouring alignments; when a
            // valid new lock exists, adopt it and leave the transition block
            // out of the statistic, mirroring the per-preamble re-lock of
            // the packet sink (a slipped frame fails its CRC and shows up in
            // PER, not as half a frame of bit errors).
            int best_p = phase;
            std::size_t best_off = offset;
            std::size_t best_err = errors;
            for (int p = 0; p < spreading::kChipsPerBit; ++p) {
                const auto& d2 = decoded[static_cast<std::size_t>(p)];
                for (int doff = -3; doff <= 3; ++doff) {
                    const auto off2 = static_cast<std::ptrdiff_t>(offset) + doff;
                    if (off2 < 0)
                        continue;
                    const auto o2 = static_cast<std::size_t>(off2);
                    if (o2 + pos + n > d2.size())
                        continue;
                    std::size_t e2 = 0;
                    for (std::size_t j = 0; j < n; ++j)
                        e2 += (d2[o2 + pos + j] != sent[pos + j]);
                    if (e2 < best_err) {
                        best_err = e2;
                        best_p = p;
                        best_off = o2;
                    }
                }
            }
            phase = best_p;
            offset = best_off;
            const double best_agreement =
                1.0 - static_cast<double>(best_err) / static_cast<double>(n);
            if (best_agreement >= kAgreementGate) {
                pos += n; // transition block: resynchronized, not compared
                continue;
            }
            errors = best_err; // nothing aligns: saturated, count as-is
        }

        total.errors += errors;
        total.compared += n;
        pos += n;
    }
    return total;
}

MetricRow run_ber_point(const ExperimentConfig& cfg, double snr_db, std::size_t point_index) {
    const std::uint64_t point_seed = channel::derive_seed(cfg.seed, point_index);
    std::mt19937_64 rng(point_seed);

    const bool genie = cfg.genie_sync || cfg.chip_level;
    const modem::TxConfig txc = make_tx_config(cfg, /*with_warmup=*/!genie);
    const channel::ChannelConfig ch = make_channel_config(cfg, snr_db, rng, point_seed);

    const double sample_rate = txc.chip_rate * cfg.sps;
    const double bit_rate = static_cast<double>(rateplan::bit_rate_for(cfg.band));

    MetricRow row;
    row.snr_db = snr_db;

    if (cfg.chip_level) {
        // Coherent unspread BPSK chips; the reference rate is the chip rate.
        row.ebn0_db = ebn0_db_from_snr(snr_db, sample_rate, txc.chip_rate);
        const std::vector<std::uint8_t> chips = random_bits(rng, cfg.bits_per_point);
        const modem::TxStream tx = modem::tx_chips(chips, txc);
        const IqBuffer rx = channel::apply_channel(tx.iq, ch);
        const IqBuffer soft = modem::genie_chip_samples(rx, txc, ch, 0, tx.n_chips);
        const std::vector<std::uint8_t> got = waveform::symbols_to_chips(soft);
        const std::size_t n = std::min(chips.size(), got.size());
        std::size_t errors = 0;
        for (std::size_t i = 0; i < n; ++i)
            errors += (chips[i] != got[i]);
        row.ber = n ? static_cast<double>(errors) / static_cast<double>(n) : 0.0;
        row.bits_compared = n;
        return row;
    }

    row.ebn0_db = ebn0_db_from_snr(snr_db, sample_rate, bit_rate);

    if (cfg.genie_sync) {
        const std::vector<std::uint8_t> bits = random_bits(rng, cfg.bits_per_point);
        const modem::TxStream tx = modem::tx_bits(bits, txc);
        const IqBuffer rx = channel::apply_channel(tx.iq, ch);
        const IqBuffer soft = modem::genie_chip_samples(rx, txc, ch, 0, tx.n_chips);
        const std::vector<std::uint8_t> chips = waveform::symbols_to_chips(soft);
        const auto [encoded, dist] = spreading::despread_chips(chips);
        spreading::DiffState st;
        const std::vector<std::uint8_t> decoded = spreading::diff_decode(encoded, st);

        const std::size_t first = tx.data_chip0 / spreading::kChipsPerBit;
        const std::size_t n = std::min(bits.size(),
                                       decoded.size() > first ? decoded.size() - first : 0);
        std::size_t errors = 0;
        for (std::size_t i = 0; i < n; ++i)
            errors += (bits[i] != decoded[first + i]);
        row.ber = n ? static_cast<double>(errors) / static_cast<double>(n) : 0.0;
        row.bits_compared = n;
        return row;
    }

    // Full synchronization chain.
    const std::vector<std::uint8_t> bits = random_bits(rng, cfg.bits_per_point + 600);
    const modem::TxStream tx = modem::tx_bits(bits, txc);
    const IqBuffer rx = channel::apply_channel(tx.iq, ch);
    modem::FullReceiver receiver(make_sync_config(cfg), txc.rrc);
    const modem::RxOutput out = receiver.process(rx);

    const std::size_t warmup_bits_n = cfg.warmup_chips / spreading::kChipsPerBit;
    const Comparison cmp = align_and_count(bits, out.chips, warmup_bits_n + 200);
    row.ber = cmp.compared ? static_cast<double>(cmp.errors) / static_cast<double>(cmp.compared)
                           : 1.0;
    row.bits_compared = cmp.compared;
    return row;
}

MetricRow run_per_point(const ExperimentConfig& cfg, double snr_db, std::size_t point_index) {
    const std::uint64_t point_seed = channel::derive_seed(cfg.seed, point_index);
    std::mt19937_64 rng(point_seed);

    const modem::TxConfig txc = make_tx_config(cfg, /*with_warmup=*/true);
    const channel::ChannelConfig ch = make_channel_config(cfg, snr_db, rng, point_seed);

    const double sample_rate = txc.chip_rate * cfg.sps;
    const double bit_rate = static_cast<double>(rateplan::bit_rate_for(cfg.band));

    std::vector<std::vector<std::uint8_t>> payloads;
    payloads.reserve(cfg.frames_per_point);
    for (std::size_t i = 0; i < cfg.frames_per_point; ++i)
        payloads.push_back(make_payload(static_cast<std::uint16_t>(i), cfg.payload_size,
                                        channel::derive_seed(point_seed, 100 + i)));

    // Byte_Modulus at the band's published samples-per-symbol: 1 for 868
    // (sps 16), 2 for 915 (sps 8). Both leave 130-octet frames unpadded.
    const auto bm = rateplan::byte_modulus(cfg.band == rateplan::Band::B868 ? 16 : 8, 1);
    const modem::TxStream tx =
        modem::tx_frames(payloads, static_cast<std::size_t>(bm.num), txc);
    const IqBuffer rx = channel::apply_channel(tx.iq, ch);

    modem::FullReceiver receiver(make_sync_config(cfg), txc.rrc);
    const modem::RxOutput out = receiver.process(rx);

    const FrameTally tally = tally_frames(payloads, out.events);

    MetricRow row;
    row.snr_db = snr_db;
    row.ebn0_db = ebn0_db_from_snr(snr_db, sample_rate, bit_rate);
    row.frames_sent = tally.frames_sent;
    row.frames_ok = tally.frames_ok;
    row.per = per(payloads, out.events);
    row.ber = tally.payload_bits ? static_cast<double>(tally.payload_bit_errors) /
                                       static_cast<double>(tally.payload_bits)
                                 : 0.0;
    row.bits_compared = tally.payload_bits;
    return row;
}

template <typename PointFn>
std::vector<MetricRow> run_points(const ExperimentConfig& cfg, PointFn&& fn) {
    validate(cfg);
    std::vector<MetricRow> rows(cfg.snr_points.size());
    // bounded fan-out: each in-flight point holds full sample buffers
    const std::size_t batch =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 4);
    if (cfg.parallel && cfg.snr_points.size() > 1 && batch > 1) {
        for (std::size_t base = 0; base < cfg.snr_points.size(); base += batch) {
            const std::size_t end = std::min(base + batch, cfg.snr_points.size());
            std::vector<std::future<MetricRow>> futures;
            futures.reserve(end - base);
            for (std::size_t i = base; i < end; ++i)
                futures.push_back(std::async(std::launch::async, fn, cfg.snr_points[i], i));
            for (std::size_t i = base; i < end; ++i)
                rows[i] = futures[i - base].get();
        }
    } else {
        for (std::size_t i = 0; i < cfg.snr_points.size(); ++i)
            rows[i] = fn(cfg.snr_points[i], i);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const MetricRow& a, const MetricRow& b) { return a.snr_db < b.snr_db; });
    return rows;
}

} // namespace

double ebn0_db_from_snr(double snr_db, double sample_rate, double bit_rate) {
    return snr_db + lin_to_db(sample_rate / bit_rate);
}

FrameTally tally_frames(std::span<const std::vector<std::uint8_t>> sent_payloads,
                        std::span<const framing::FrameEvent> events) {
    FrameTally tally;
    tally.frames_sent = sent_payloads.size();
    std::vector<bool> seen(sent_payloads.size(), false);
    for (const framing::FrameEvent& ev : events) {
        if (!ev.crc_ok || ev.psdu.size() < framing::kFcsOctets + 2)
            continue;
        const std::uint16_t seq = static_cast<std::uint16_t>(ev.psdu[0] | (ev.psdu[1] << 8));
        if (seq >= sent_payloads.size() || seen[seq])
            continue;
        const std::vector<std::uint8_t>& sent = sent_payloads[seq];
        if (ev.psdu.size() != sent.size() + framing::kFcsOctets)
            continue;
        seen[seq] = true;
        ++tally.frames_ok;
        for (std::size_t i = 0; i < sent.size(); ++i) {
            const auto diff = static_cast<std::uint8_t>(sent[i] ^ ev.psdu[i]);
            tally.payload_bit_errors +=
                static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(diff)));
        }
        tally.payload_bits += sent.size() * 8;
    }
    return tally;
}

double per(std::span<const std::vector<std::uint8_t>> sent_payloads,
           std::span<const framing::FrameEvent> events) {
    if (sent_payloads.empty())
        throw std::invalid_argument("per: no frames sent");
    const FrameTally tally = tally_frames(sent_payloads, events);
    return 1.0 - static_cast<double>(tally.frames_ok) /
                     static_cast<double>(tally.frames_sent);
}

std::vector<std::uint8_t> make_payload(std::uint16_t sequence, std::size_t size,
                                       std::uint64_t seed) {
    if (size < 2)
        throw std::invalid_argument("payload must hold the 2-octet sequence number");
    std::vector<std::uint8_t> payload(size);
    payload[0] = static_cast<std::uint8_t>(sequence & 0xFF);
    payload[1] = static_cast<std::uint8_t>(sequence >> 8);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 2; i < size; ++i)
        payload[i] = static_cast<std::uint8_t>(rng() & 0xFF);
    return payload;
}

std::vector<metrics::MetricRow> run_ber_experiment(const ExperimentConfig& cfg) {
    return run_points(cfg, [&cfg](double snr, std::size_t i) { return run_ber_point(cfg, snr, i); });
}

std::vector<metrics::MetricRow> run_per_experiment(const ExperimentConfig& cfg) {
    return run_points(cfg, [&cfg](double snr, std::size_t i) { return run_per_point(cfg, snr, i); });
}

} // namespace lrwpan::experiments
