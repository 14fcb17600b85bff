#include "lrwpan/iq.hpp"

#include <cmath>

namespace lrwpan {

double mean_power(const IqBuffer& buf, bool active_only) {
    double acc = 0.0;
    std::size_t n = 0;
    for (const cplx& x : buf.samples) {
        const double p = std::norm(x);
        if (active_only && p == 0.0)
            continue;
        acc += p;
        ++n;
    }
    return n ? acc / static_cast<double>(n) : 0.0;
}

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

std::vector<std::uint8_t> octets_to_bits(std::span<const std::uint8_t> octets) {
    std::vector<std::uint8_t> bits;
    bits.reserve(octets.size() * 8);
    for (std::uint8_t o : octets)
        for (int b = 0; b < 8; ++b)
            bits.push_back((o >> b) & 1);
    return bits;
}

std::vector<std::uint8_t> bits_to_octets(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> octets(bits.size() / 8, 0);
    for (std::size_t i = 0; i < octets.size() * 8; ++i)
        octets[i / 8] |= static_cast<std::uint8_t>((bits[i] & 1) << (i % 8));
    return octets;
}

} // namespace lrwpan
