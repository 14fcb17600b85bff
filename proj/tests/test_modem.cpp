#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lrwpan/channel.hpp"
#include "lrwpan/experiments.hpp"
#include "lrwpan/modem.hpp"
#include "lrwpan/spreading.hpp"

using namespace lrwpan;

namespace {

modem::TxConfig tx_config_868(int sps = 8) {
    modem::TxConfig cfg;
    cfg.chip_rate = 300000.0;
    cfg.rrc = waveform::RrcSpec{0.35, 11, sps};
    return cfg;
}

sync::SyncConfig rx_config(int sps = 8) {
    sync::SyncConfig sc;
    sc.timing_omega = sps;
    return sc;
}

std::vector<std::uint8_t> random_payload(std::mt19937& rng, std::size_t n) {
    std::vector<std::uint8_t> p(n);
    for (auto& b : p)
        b = static_cast<std::uint8_t>(rng() & 0xFF);
    return p;
}

} // namespace

TEST_CASE("full receiver recovers frames across random channel draws") {
    // noise-free channel with random phase, CFO up to 0.5% of the chip
    // rate, and a fractional delay; at least 99 of 100 frames must decode
    // with no bit errors (all 100 do in practice).
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> ucfo(-1500.0, 1500.0);
    std::uniform_real_distribution<double> udelay(0.0, 10.0);

    const modem::TxConfig txc = tx_config_868();
    int recovered = 0;
    const int trials = 25;
    const int frames_per_trial = 4;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::vector<std::uint8_t>> payloads;
        for (int i = 0; i < frames_per_trial; ++i)
            payloads.push_back(random_payload(rng, 40));

        const modem::TxStream tx = modem::tx_frames(payloads, 1, txc);
        channel::ChannelConfig ch;
        ch.phase_rad = uphase(rng);
        ch.cfo_hz = ucfo(rng);
        ch.delay_samples = udelay(rng);
        const IqBuffer rx = channel::apply_channel(tx.iq, ch);

        modem::FullReceiver receiver(rx_config(), txc.rrc);
        const auto out = receiver.process(rx);

        std::size_t next = 0;
        for (const auto& ev : out.events) {
            if (!ev.crc_ok || next >= payloads.size())
                continue;
            const auto& sent = payloads[next];
            if (ev.psdu.size() == sent.size() + 2 &&
                std::equal(sent.begin(), sent.end(), ev.psdu.begin()))
                ++recovered;
            ++next;
        }
    }
    CHECK(recovered >= trials * frames_per_trial - 1);
}

TEST_CASE("an extra pi phase flip leaves decoded payloads identical") {
    std::mt19937 rng(73);
    const auto payload = random_payload(rng, 60);
    const modem::TxConfig txc = tx_config_868();
    const std::vector<std::vector<std::uint8_t>> payloads{payload};
    const modem::TxStream tx = modem::tx_frames(payloads, 1, txc);

    channel::ChannelConfig ch;
    ch.phase_rad = 0.4;
    const IqBuffer a = channel::apply_channel(tx.iq, ch);
    ch.phase_rad = 0.4 + std::numbers::pi;
    const IqBuffer b = channel::apply_channel(tx.iq, ch);

    modem::FullReceiver ra(rx_config(), txc.rrc);
    modem::FullReceiver rb(rx_config(), txc.rrc);
    const auto ea = ra.process(a);
    const auto eb = rb.process(b);
    REQUIRE(ea.events.size() == 1);
    REQUIRE(eb.events.size() == 1);
    CHECK(ea.events[0].crc_ok);
    CHECK(eb.events[0].crc_ok);
    CHECK(ea.events[0].psdu == eb.events[0].psdu);

    // the chip decisions themselves are complemented
    std::size_t flipped = 0;
    const std::size_t n = std::min(ea.chips.size(), eb.chips.size());
    for (std::size_t i = 0; i < n; ++i)
        flipped += (ea.chips[i] != eb.chips[i]);
    CHECK(flipped > n * 9 / 10);
}

TEST_CASE("genie receiver matches the transmitted chips") {
    std::mt19937 rng(79);
    std::vector<std::uint8_t> chips(2000);
    for (auto& c : chips)
        c = static_cast<std::uint8_t>(rng() & 1);
    const modem::TxConfig txc = tx_config_868();
    const modem::TxStream tx = modem::tx_chips(chips, txc);

    channel::ChannelConfig ch;
    ch.phase_rad = 1.2;
    ch.cfo_hz = 800.0;
    ch.delay_samples = 5.6;
    const IqBuffer rx = channel::apply_channel(tx.iq, ch);
    const IqBuffer soft = modem::genie_chip_samples(rx, txc, ch, 0, tx.n_chips);
    const auto got = waveform::symbols_to_chips(soft);
    REQUIRE(got.size() >= chips.size() - 1);
    for (std::size_t i = 0; i < got.size() && i < chips.size(); ++i)
        CHECK(got[i] == chips[i]);
}

TEST_CASE("noise-free ber experiment measures zero errors") {
    experiments::ExperimentConfig cfg;
    cfg.band = rateplan::Band::B868;
    cfg.snr_points = {std::numeric_limits<double>::infinity()};
    cfg.bits_per_point = 4000;
    cfg.seed = 5;
    for (bool genie : {true, false}) {
        cfg.genie_sync = genie;
        const auto rows = experiments::run_ber_experiment(cfg);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].ber == 0.0);
        CHECK(rows[0].bits_compared >= 3000);
    }
}

TEST_CASE("genie chip-level ber tracks the coherent BPSK formula") {
    experiments::ExperimentConfig cfg;
    cfg.band = rateplan::Band::B868;
    cfg.sps = 4;
    cfg.chip_level = true;
    cfg.genie_sync = true;
    cfg.random_phase = false;
    cfg.bits_per_point = 200000;
    cfg.seed = 12;
    // chip Eb/N0 of 4 dB
    const double ebn0_db = 4.0;
    cfg.snr_points = {ebn0_db - lin_to_db(cfg.sps)};
    const auto rows = experiments::run_ber_experiment(cfg);
    REQUIRE(rows.size() == 1);
    const double expected = metrics::q_function(std::sqrt(2.0 * db_to_lin(ebn0_db)));
    CHECK(rows[0].ber == doctest::Approx(expected).epsilon(0.12));
    CHECK(rows[0].ebn0_db == doctest::Approx(ebn0_db).epsilon(1e-9));
}

TEST_CASE("noise-free per experiment loses nothing") {
    experiments::ExperimentConfig cfg;
    cfg.band = rateplan::Band::B868;
    cfg.snr_points = {std::numeric_limits<double>::infinity()};
    cfg.frames_per_point = 20;
    cfg.seed = 31;
    cfg.cfo_hz = 900.0;
    cfg.delay_samples = 2.3;
    const auto rows = experiments::run_per_experiment(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].per == 0.0);
    CHECK(rows[0].frames_ok == 20);
    CHECK(rows[0].ber == 0.0);
}

TEST_CASE("experiment rows are deterministic and ordered by SNR") {
    experiments::ExperimentConfig cfg;
    cfg.band = rateplan::Band::B868;
    cfg.snr_points = {-8.0, -12.0, -10.0};
    cfg.frames_per_point = 5;
    cfg.payload_size = 20;
    cfg.seed = 77;
    const auto a = experiments::run_per_experiment(cfg);
    const auto b = experiments::run_per_experiment(cfg);
    REQUIRE(a.size() == 3);
    CHECK(a[0].snr_db == -12.0);
    CHECK(a[1].snr_db == -10.0);
    CHECK(a[2].snr_db == -8.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].per == b[i].per);
        CHECK(a[i].ber == b[i].ber);
        CHECK(a[i].frames_ok == b[i].frames_ok);
    }

    const std::vector<std::string> no_comments;
    CHECK(metrics::metrics_csv(a, no_comments) == metrics::metrics_csv(b, no_comments));
}

TEST_CASE("metric rows satisfy their range invariants") {
    experiments::ExperimentConfig cfg;
    cfg.band = rateplan::Band::B915;
    cfg.snr_points = {-14.0, -10.0};
    cfg.frames_per_point = 10;
    cfg.payload_size = 30;
    cfg.seed = 41;
    for (const auto& row : experiments::run_per_experiment(cfg)) {
        CHECK(row.ber >= 0.0);
        CHECK(row.ber <= 1.0);
        CHECK(row.per >= 0.0);
        CHECK(row.per <= 1.0);
        CHECK(row.frames_ok <= row.frames_sent);
    }
}

TEST_CASE("per counts unmatched frames") {
    std::vector<std::vector<std::uint8_t>> sent;
    for (std::uint16_t i = 0; i < 100; ++i)
        sent.push_back(experiments::make_payload(i, 10, 7));

    const auto event_for = [&](std::uint16_t seq, bool crc_ok) {
        framing::FrameEvent ev;
        ev.psdu = sent[seq];
        const std::uint16_t fcs = framing::crc16(ev.psdu);
        ev.psdu.push_back(static_cast<std::uint8_t>(fcs & 0xFF));
        ev.psdu.push_back(static_cast<std::uint8_t>(fcs >> 8));
        ev.crc_ok = crc_ok;
        return ev;
    };

    std::vector<framing::FrameEvent> events;
    for (std::uint16_t i = 0; i < 100; ++i)
        events.push_back(event_for(i, true));
    CHECK(experiments::per(sent, events) == 0.0);

    CHECK(experiments::per(sent, {}) == 1.0);

    events.clear();
    for (std::uint16_t i = 0; i < 97; ++i)
        events.push_back(event_for(i, true));
    events.push_back(event_for(97, false)); // crc failure does not count
    events.push_back(event_for(96, true));  // duplicate does not count twice
    CHECK(experiments::per(sent, events) == doctest::Approx(0.03));

    const auto tally = experiments::tally_frames(sent, events);
    CHECK(tally.frames_ok == 97);
    CHECK(tally.payload_bit_errors == 0);
    CHECK(tally.payload_bits == 97 * 80);
}

TEST_CASE("experiment configuration is validated") {
    experiments::ExperimentConfig cfg;
    cfg.snr_points = {};
    CHECK_THROWS_AS(experiments::run_ber_experiment(cfg), std::invalid_argument);
    cfg.snr_points = {0.0};
    cfg.frames_per_point = 0;
    CHECK_THROWS_AS(experiments::run_per_experiment(cfg), std::invalid_argument);
    cfg.frames_per_point = 1;
    cfg.payload_size = 1;
    CHECK_THROWS_AS(experiments::run_per_experiment(cfg), std::invalid_argument);
}

TEST_CASE("full-sync ber runs need enough bits to anchor alignment") {
    experiments::ExperimentConfig cfg;
    cfg.band = rateplan::Band::B868;
    cfg.snr_points = {0.0};
    cfg.bits_per_point = 100;
    CHECK_THROWS_AS(experiments::run_ber_experiment(cfg), std::invalid_argument);
    cfg.genie_sync = true; // genie comparison is index-exact, small runs are fine
    CHECK_NOTHROW(experiments::run_ber_experiment(cfg));
}
