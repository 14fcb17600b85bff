#ifndef LRWPAN_IQ_HPP
#define LRWPAN_IQ_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lrwpan {

using cplx = std::complex<double>;

/// Complex baseband sample buffer tagged with its sample rate.
struct IqBuffer {
    std::vector<cplx> samples;
    double sample_rate = 1.0;

    IqBuffer() = default;
    explicit IqBuffer(double rate) : sample_rate(rate) {}
    IqBuffer(std::vector<cplx> s, double rate) : samples(std::move(s)), sample_rate(rate) {}

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    cplx& operator[](std::size_t i) { return samples[i]; }
    const cplx& operator[](std::size_t i) const { return samples[i]; }
};

/// Mean |x|^2. With active_only, samples that are exactly zero (e.g. idle
/// gaps that have not passed through a noise source) are excluded.
double mean_power(const IqBuffer& buf, bool active_only = false);

double db_to_lin(double db);
double lin_to_db(double lin);

/// Octet <-> bit expansion, least significant bit of each octet first.
std::vector<std::uint8_t> octets_to_bits(std::span<const std::uint8_t> octets);
std::vector<std::uint8_t> bits_to_octets(std::span<const std::uint8_t> bits);

} // namespace lrwpan

#endif
