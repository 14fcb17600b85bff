#include "lrwpan/waveform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrwpan::waveform {

namespace {

void validate(const RrcSpec& spec) {
    if (!(spec.rolloff > 0.0) || spec.rolloff > 1.0)
        throw std::invalid_argument("InvalidSpec: rolloff must be in (0, 1]");
    if (spec.span < 1 || spec.sps < 1)
        throw std::invalid_argument("InvalidSpec: span and sps must be positive");
}

} // namespace

std::size_t rrc_tap_count(const RrcSpec& spec) {
    validate(spec);
    const int half = (spec.span * spec.sps + 1) / 2;
    return static_cast<std::size_t>(2 * half + 1);
}

std::vector<double> rrc_taps(const RrcSpec& spec) {
    validate(spec);
    using std::numbers::pi;
    const double beta = spec.rolloff;
    const int half = (spec.span * spec.sps + 1) / 2;
    std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));

    for (int k = -half; k <= half; ++k) {
        const double t = static_cast<double>(k) / spec.sps; // chip periods
        double h;
        if (k == 0) {
            h = 1.0 - beta + 4.0 * beta / pi;
        } else if (std::abs(std::abs(4.0 * beta * t) - 1.0) < 1e-9) {
            h = (beta / std::numbers::sqrt2) *
                ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * beta)) +
                 (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * beta)));
        } else {
            const double num = std::sin(pi * t * (1.0 - beta)) +
                               4.0 * beta * t * std::cos(pi * t * (1.0 + beta));
            const double den = pi * t * (1.0 - 16.0 * beta * beta * t * t);
            h = num / den;
        }
        taps[static_cast<std::size_t>(k + half)] = h;
    }

    double energy = 0.0;
    for (double h : taps)
        energy += h * h;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& h : taps)
        h *= scale;
    return taps;
}

IqBuffer chips_to_symbols(std::span<const std::uint8_t> chips, double chip_rate) {
    IqBuffer out(chip_rate);
    out.samples.reserve(chips.size());
    for (std::uint8_t c : chips)
        out.samples.emplace_back((c & 1) ? 1.0 : -1.0, 0.0);
    return out;
}

std::vector<std::uint8_t> symbols_to_chips(const IqBuffer& symbols) {
    std::vector<std::uint8_t> chips;
    chips.reserve(symbols.size());
    for (const cplx& s : symbols.samples)
        chips.push_back(s.real() >= 0.0 ? 1 : 0);
    return chips;
}

IqBuffer pulse_shape(const IqBuffer& symbols, const RrcSpec& spec) {
    const std::vector<double> taps = rrc_taps(spec);
    IqBuffer out(symbols.sample_rate * spec.sps);
    if (symbols.empty())
        return out;
    out.samples.assign(symbols.size() * static_cast<std::size_t>(spec.sps) + taps.size() - 1,
                       cplx{0.0, 0.0});
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const cplx s = symbols[i];
        if (s == cplx{0.0, 0.0})
            continue; // idle gaps stay silent
        const std::size_t base = i * static_cast<std::size_t>(spec.sps);
        for (std::size_t k = 0; k < taps.size(); ++k)
            out.samples[base + k] += s * taps[k];
    }
    return out;
}

IqBuffer fir_filter(const IqBuffer& in, std::span<const double> taps) {
    IqBuffer out(in.sample_rate);
    if (in.empty() || taps.empty())
        return out;
    const std::size_t n = in.size();
    const std::size_t t = taps.size();
    out.samples.assign(n + t - 1, cplx{0.0, 0.0});

    for (std::size_t i = 0; i < n; ++i) {
        const cplx x = in[i];
        if (x == cplx{0.0, 0.0})
            continue;
        const double re = x.real();
        const double im = x.imag();
        cplx* dst = out.samples.data() + i;
        for (std::size_t k = 0; k < t; ++k)
            dst[k] += cplx{re * taps[k], im * taps[k]};
    }
    return out;
}

IqBuffer matched_filter(const IqBuffer& samples, const RrcSpec& spec) {
    return fir_filter(samples, rrc_taps(spec));
}

IqBuffer mix(const IqBuffer& samples, double frequency_hz, double phase_rad) {
    const double fs = samples.sample_rate;
    if (!(std::abs(frequency_hz) < fs / 2.0))
        throw std::domain_error("AliasRisk: |frequency| must be below sample_rate/2");

    IqBuffer out(fs);
    out.samples.resize(samples.size());
    if (frequency_hz == 0.0 && phase_rad == 0.0) {
        out.samples = samples.samples;
        return out;
    }
    const double cycles_per_sample = frequency_hz / fs;
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const double turns = std::fmod(cycles_per_sample * static_cast<double>(n), 1.0);
        const double theta = 2.0 * std::numbers::pi * turns + phase_rad;
        out.samples[n] = samples[n] * cplx{std::cos(theta), std::sin(theta)};
    }
    return out;
}

} // namespace lrwpan::waveform
