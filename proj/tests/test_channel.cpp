#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <vector>

#include "lrwpan/channel.hpp"

using namespace lrwpan;
using channel::ChannelConfig;

namespace {

IqBuffer unit_tone(std::size_t n) {
    IqBuffer buf(1.0);
    buf.samples.assign(n, cplx{1.0, 0.0});
    return buf;
}

IqBuffer random_signal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    IqBuffer buf(1.0);
    buf.samples.resize(n);
    for (auto& s : buf.samples)
        s = cplx{uni(rng), uni(rng)};
    return buf;
}

} // namespace

TEST_CASE("awgn at infinite SNR is the identity") {
    const auto sig = random_signal(1000, 1);
    const auto out = channel::awgn(sig, std::numeric_limits<double>::infinity(), 9);
    for (std::size_t i = 0; i < sig.size(); ++i)
        CHECK(out[i] == sig[i]);
}

TEST_CASE("awgn injects the requested noise power") {
    const auto sig = unit_tone(100000);
    const auto out = channel::awgn(sig, 0.0, 77);
    double noise_power = 0.0;
    for (std::size_t i = 0; i < sig.size(); ++i)
        noise_power += std::norm(out[i] - sig[i]);
    noise_power /= static_cast<double>(sig.size());
    CHECK(noise_power == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("awgn is reproducible and rejects silent input") {
    const auto sig = random_signal(500, 2);
    const auto a = channel::awgn(sig, 10.0, 123);
    const auto b = channel::awgn(sig, 10.0, 123);
    for (std::size_t i = 0; i < sig.size(); ++i)
        CHECK(a[i] == b[i]);

    IqBuffer silent(1.0);
    silent.samples.assign(100, cplx{0.0, 0.0});
    CHECK_THROWS_WITH_AS(channel::awgn(silent, 10.0, 1), doctest::Contains("ZeroSignal"),
                         std::domain_error);
}

TEST_CASE("awgn noise is zero-mean with uncorrelated I/Q") {
    const std::size_t n = 200000;
    const auto sig = unit_tone(n);
    const auto out = channel::awgn(sig, 0.0, 31);
    double mean_i = 0.0, mean_q = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx noise = out[i] - sig[i];
        mean_i += noise.real();
        mean_q += noise.imag();
        cross += noise.real() * noise.imag();
    }
    mean_i /= n;
    mean_q /= n;
    cross /= n;
    // per-dimension variance 0.5; 3 standard errors
    const double se_mean = 3.0 * std::sqrt(0.5 / n);
    const double se_cross = 3.0 * std::sqrt(0.25 / n);
    CHECK(std::abs(mean_i) <= se_mean);
    CHECK(std::abs(mean_q) <= se_mean);
    CHECK(std::abs(cross) <= se_cross);
}

TEST_CASE("fractional delay shifts by the exact amount") {
    // a ramp makes linear interpolation exact: x[n] = n
    IqBuffer ramp(1.0);
    for (int i = 0; i < 100; ++i)
        ramp.samples.emplace_back(static_cast<double>(i), 0.0);
    const auto out = channel::fractional_delay(ramp, 2.5);
    for (std::size_t n = 4; n < 100; ++n)
        CHECK(out[n].real() == doctest::Approx(static_cast<double>(n) - 2.5).epsilon(1e-12));
}

TEST_CASE("apply_channel identity configuration") {
    const auto sig = random_signal(2000, 3);
    ChannelConfig cfg; // defaults: inf SNR, amplitude 32767, no offsets
    const auto out = channel::apply_channel(sig, cfg);
    REQUIRE(out.size() == sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i) {
        CHECK(out[i].real() == doctest::Approx(sig[i].real()).epsilon(1e-12));
        CHECK(out[i].imag() == doctest::Approx(sig[i].imag()).epsilon(1e-12));
    }
}

TEST_CASE("half amplitude quarters the power") {
    const auto sig = random_signal(5000, 4);
    ChannelConfig cfg;
    cfg.amplitude = 16384; // 16384/32767 = 0.500015...
    const auto out = channel::apply_channel(sig, cfg);
    const double ratio = mean_power(out) / mean_power(sig);
    CHECK(ratio == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("amplitude bounds are enforced") {
    const auto sig = random_signal(100, 5);
    ChannelConfig cfg;
    cfg.amplitude = 40000;
    CHECK_THROWS_AS(channel::apply_channel(sig, cfg), std::invalid_argument);
}

TEST_CASE("realized SNR matches the request within 0.1 dB") {
    const auto sig = random_signal(100000, 6);
    ChannelConfig cfg;
    cfg.snr_db = 10.0;
    cfg.seed = 99;
    const auto out = channel::apply_channel(sig, cfg);

    double noise_power = 0.0;
    for (std::size_t i = 0; i < sig.size(); ++i)
        noise_power += std::norm(out[i] - sig[i]);
    noise_power /= static_cast<double>(sig.size());
    const double realized_db = lin_to_db(mean_power(sig) / noise_power);
    CHECK(realized_db == doctest::Approx(10.0).epsilon(0.012)); // +-0.1 dB
}

TEST_CASE("apply_channel is deterministic under a fixed config") {
    const auto sig = random_signal(3000, 7);
    ChannelConfig cfg;
    cfg.snr_db = 5.0;
    cfg.cfo_hz = 0.001;
    cfg.phase_rad = 1.1;
    cfg.delay_samples = 3.25;
    cfg.seed = 2024;
    const auto a = channel::apply_channel(sig, cfg);
    const auto b = channel::apply_channel(sig, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i] == b[i]);
}

TEST_CASE("noise power calibration ignores idle gaps") {
    // half the buffer is silence; SNR must be set against the active power
    IqBuffer buf(1.0);
    buf.samples.assign(50000, cplx{1.0, 0.0});
    buf.samples.resize(100000, cplx{0.0, 0.0});
    const auto out = channel::awgn(buf, 0.0, 55);
    double noise_power = 0.0;
    for (std::size_t i = 0; i < buf.size(); ++i)
        noise_power += std::norm(out[i] - buf[i]);
    noise_power /= static_cast<double>(buf.size());
    CHECK(noise_power == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("derive_seed spreads indices") {
    const auto a = channel::derive_seed(1, 0);
    const auto b = channel::derive_seed(1, 1);
    const auto c = channel::derive_seed(2, 0);
    CHECK(a != b);
    CHECK(a != c);
    CHECK(channel::derive_seed(1, 0) == a);
}
