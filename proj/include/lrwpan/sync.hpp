#ifndef LRWPAN_SYNC_HPP
#define LRWPAN_SYNC_HPP

#include "lrwpan/iq.hpp"

namespace lrwpan::sync {

struct SyncConfig {
    double squelch_threshold_db = -50.0;
    double agc_reference = 1.0;
    double agc_rate = 1e-2;
    double costas_bandwidth = 5e-3; // normalized loop bandwidth, rad/sample
    double timing_omega = 8.0;      // nominal samples per chip
    double timing_gain_mu = 0.05;
    double timing_gain_omega = 2.5e-4;
};

inline constexpr double kSquelchAlpha = 1e-3;  // single-pole power smoothing
inline constexpr double kAgcMaxGain = 65536.0;
inline constexpr double kOmegaRelativeLimit = 0.1;

/// Zeroes the stream while the smoothed input power is below threshold.
class PowerSquelch {
public:
    explicit PowerSquelch(double threshold_db) : threshold_db_(threshold_db) {}

    IqBuffer process(const IqBuffer& in);
    double average_power() const { return avg_power_; }
    void reset() { avg_power_ = 0.0; }

private:
    double threshold_db_;
    double avg_power_ = 0.0;
};

/// Per-sample gain adaptation driving mean output magnitude to the
/// reference. Exactly-zero samples pass through without adapting.
class Agc {
public:
    Agc(double reference, double rate);

    IqBuffer process(const IqBuffer& in);
    double gain() const { return gain_; }
    void reset() { gain_ = 1.0; }

private:
    double reference_;
    double rate_;
    double gain_ = 1.0;
};

/// Second-order BPSK Costas loop; phase detector Re(y)*Im(y) on the
/// derotated sample, normalized by a running power estimate so the loop
/// bandwidth is amplitude-independent. Residual phase settles modulo pi;
/// the ambiguity is resolved downstream by differential decoding.
class CostasLoop {
public:
    explicit CostasLoop(double loop_bandwidth);

    IqBuffer process(const IqBuffer& in);
    double phase() const { return phase_; }          // rad, wrapped to (-pi, pi]
    double frequency() const { return frequency_; }  // rad/sample
    void reset();

private:
    double alpha_;
    double beta_;
    double phase_ = 0.0;
    double frequency_ = 0.0;
    double power_ = 1.0;
};

/// Mueller-Müller decision-directed timing recovery with linear
/// interpolation; emits one sample per chip. Decisions and the timing error
/// detector act on the real part. omega stays within +-10% of nominal.
class ClockRecoveryMM {
public:
    ClockRecoveryMM(double omega, double gain_omega, double gain_mu);

    IqBuffer process(const IqBuffer& in);
    double omega() const { return omega_; }
    double mu() const { return mu_; }
    void reset();

private:
    double omega_nominal_;
    double omega_;
    double gain_omega_;
    double gain_mu_;
    double mu_ = 0.0;
    double power_ = 1.0;
    cplx last_ = 0.0;
    double last_decision_ = 1.0;
};

} // namespace lrwpan::sync

#endif
