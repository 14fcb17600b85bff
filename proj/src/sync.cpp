#include "lrwpan/sync.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrwpan::sync {

namespace {

double clip(double v, double limit) { return std::clamp(v, -limit, limit); }

double wrap_phase(double phase) {
    using std::numbers::pi;
    while (phase > pi)
        phase -= 2.0 * pi;
    while (phase <= -pi)
        phase += 2.0 * pi;
    return phase;
}

constexpr double kPowerAlpha = 1e-3; // loop power-normalization smoothing

} // namespace

IqBuffer PowerSquelch::process(const IqBuffer& in) {
    IqBuffer out(in.sample_rate);
    out.samples.resize(in.size());
    const double threshold = db_to_lin(threshold_db_);
    for (std::size_t n = 0; n < in.size(); ++n) {
        avg_power_ += kSquelchAlpha * (std::norm(in[n]) - avg_power_);
        out.samples[n] = (avg_power_ >= threshold) ? in[n] : cplx{0.0, 0.0};
    }
    return out;
}

Agc::Agc(double reference, double rate) : reference_(reference), rate_(rate) {
    if (!(reference > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("agc reference and rate must be positive");
}

IqBuffer Agc::process(const IqBuffer& in) {
    IqBuffer out(in.sample_rate);
    out.samples.resize(in.size());
    for (std::size_t n = 0; n < in.size(); ++n) {
        const cplx x = in[n];
        if (x == cplx{0.0, 0.0}) {
            out.samples[n] = x; // no information, hold the gain
            continue;
        }
        const cplx y = x * gain_;
        gain_ += rate_ * (reference_ - std::abs(y));
        gain_ = std::clamp(gain_, 0.0, kAgcMaxGain);
        out.samples[n] = y;
    }
    return out;
}

CostasLoop::CostasLoop(double loop_bandwidth) {
    if (!(loop_bandwidth > 0.0) || loop_bandwidth >= 0.5)
        throw std::invalid_argument("costas loop bandwidth must be in (0, 0.5)");
    const double zeta = std::numbers::sqrt2 / 2.0;
    const double bw = loop_bandwidth;
    const double denom = 1.0 + 2.0 * zeta * bw + bw * bw;
    alpha_ = 4.0 * zeta * bw / denom;
    beta_ = 4.0 * bw * bw / denom;
}

void CostasLoop::reset() {
    phase_ = 0.0;
    frequency_ = 0.0;
    power_ = 1.0;
}

IqBuffer CostasLoop::process(const IqBuffer& in) {
    IqBuffer out(in.sample_rate);
    out.samples.resize(in.size());
    for (std::size_t n = 0; n < in.size(); ++n) {
        const cplx y = in[n] * cplx{std::cos(-phase_), std::sin(-phase_)};
        out.samples[n] = y;

        power_ += kPowerAlpha * (std::norm(y) - power_);
        const double error = clip(y.real() * y.imag() / std::max(power_, 1e-12), 1.0);

        frequency_ += beta_ * error;
        frequency_ = clip(frequency_, 1.0);
        phase_ = wrap_phase(phase_ + frequency_ + alpha_ * error);
    }
    return out;
}

ClockRecoveryMM::ClockRecoveryMM(double omega, double gain_omega, double gain_mu)
    : omega_nominal_(omega), omega_(omega), gain_omega_(gain_omega), gain_mu_(gain_mu) {
    if (omega < 2.0)
        throw std::invalid_argument("timing omega must be at least 2 samples per chip");
    if (gain_omega < 0.0 || gain_mu < 0.0)
        throw std::invalid_argument("timing gains must be non-negative");
}

void ClockRecoveryMM::reset() {
    omega_ = omega_nominal_;
    mu_ = 0.0;
    power_ = 1.0;
    last_ = 0.0;
    last_decision_ = 1.0;
}

IqBuffer ClockRecoveryMM::process(const IqBuffer& in) {
    IqBuffer out(in.sample_rate / omega_nominal_);
    if (in.size() < 2)
        return out;
    out.samples.reserve(static_cast<std::size_t>(static_cast<double>(in.size()) / omega_nominal_) + 2);

    const double omega_min = omega_nominal_ * (1.0 - kOmegaRelativeLimit);
    const double omega_max = omega_nominal_ * (1.0 + kOmegaRelativeLimit);

    std::size_t ii = 0;
    double mu = mu_;
    while (ii + 1 < in.size()) {
        const cplx y = in[ii] * (1.0 - mu) + in[ii + 1] * mu;
        out.samples.push_back(y);

        const double decision = (y.real() >= 0.0) ? 1.0 : -1.0;
        power_ += kPowerAlpha * (std::norm(y) - power_);
        const double raw = last_decision_ * y.real() - decision * last_.real();
        const double error = clip(raw / std::max(std::sqrt(power_), 1e-9), 1.0);
        last_ = y;
        last_decision_ = decision;

        omega_ = std::clamp(omega_ + gain_omega_ * error, omega_min, omega_max);
        mu += omega_ + gain_mu_ * error;
        const double adv = std::floor(mu);
        mu -= adv;
        ii += static_cast<std::size_t>(adv);
    }
    mu_ = mu;
    return out;
}

} // namespace lrwpan::sync
