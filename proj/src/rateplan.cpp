#include "lrwpan/rateplan.hpp"

#include <numeric>
#include <stdexcept>

namespace lrwpan::rateplan {

const char* to_string(Band band) {
    return band == Band::B868 ? "868" : "915";
}

Band band_from_string(const std::string& name) {
    if (name == "868")
        return Band::B868;
    if (name == "915")
        return Band::B915;
    throw std::invalid_argument("unknown band '" + name + "' (expected 868 or 915)");
}

std::int64_t bit_rate_for(Band band) {
    return band == Band::B868 ? 20000 : 40000;
}

std::int64_t chip_rate_for(Band band) {
    return 15 * bit_rate_for(band);
}

ByteModulus byte_modulus(std::int64_t sps, std::int64_t bps) {
    if (sps < 1 || bps < 1)
        throw std::invalid_argument("sps and bps must be positive");
    const std::int64_t lcm = std::lcm(kUsbPackingFactor, sps);
    // lcm * bps / sps as a reduced rational
    std::int64_t num = lcm * bps;
    std::int64_t den = sps;
    const std::int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    return ByteModulus{num, den, den == 1};
}

bool legal_interpolation(std::int64_t i) {
    return i >= 16 && i <= 512 && i % 4 == 0;
}

bool legal_decimation(std::int64_t d) {
    return d >= 8 && d <= 256 && d % 2 == 0;
}

void validate_factors(std::int64_t interpolation, std::int64_t decimation) {
    std::string msg;
    if (!legal_interpolation(interpolation))
        msg += "IllegalInterpolation: I=" + std::to_string(interpolation) +
               " not in {16,20,...,512}";
    if (!legal_decimation(decimation)) {
        if (!msg.empty())
            msg += "; ";
        msg += "IllegalDecimation: D=" + std::to_string(decimation) + " not in {8,10,...,256}";
    }
    if (!msg.empty())
        throw std::domain_error(msg);
}

RateConfig plan(Band band, int sps) {
    if (sps < 1)
        throw std::invalid_argument("sps must be positive");

    RateConfig cfg;
    cfg.band = band;
    cfg.bit_rate = bit_rate_for(band);
    cfg.chip_rate = chip_rate_for(band);
    cfg.sps_symbol = sps;
    cfg.sps_chip = sps;

    const std::int64_t denom = cfg.bit_rate * sps; // r = bit rate
    const auto dac = static_cast<std::int64_t>(kDacRate);
    const auto adc = static_cast<std::int64_t>(kAdcRate);
    if (dac % denom != 0)
        throw std::domain_error("IllegalInterpolation: dac_rate/(r*sps) = " +
                                std::to_string(kDacRate / static_cast<double>(denom)) +
                                " is not an integer");
    if (adc % denom != 0)
        throw std::domain_error("IllegalDecimation: adc_rate/(r*sps) = " +
                                std::to_string(kAdcRate / static_cast<double>(denom)) +
                                " is not an integer");
    cfg.interpolation = dac / denom;
    cfg.decimation = adc / denom;
    validate_factors(cfg.interpolation, cfg.decimation);
    return cfg;
}

} // namespace lrwpan::rateplan
