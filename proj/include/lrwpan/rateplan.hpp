#ifndef LRWPAN_RATEPLAN_HPP
#define LRWPAN_RATEPLAN_HPP

#include <cstdint>
#include <string>

namespace lrwpan::rateplan {

enum class Band { B868, B915 };

inline constexpr double kDacRate = 128e6;
inline constexpr double kAdcRate = 64e6;
// DAC rate (128 MSPS) over the USB tunnel rate (8 MSPS).
inline constexpr std::int64_t kUsbPackingFactor = 16;

const char* to_string(Band band);
Band band_from_string(const std::string& name); // "868" or "915"

std::int64_t bit_rate_for(Band band);  // 20000 or 40000
std::int64_t chip_rate_for(Band band); // 15 * bit_rate

struct RateConfig {
    Band band = Band::B868;
    std::int64_t bit_rate = 20000;
    std::int64_t chip_rate = 300000;
    int sps_symbol = 16; // samples per symbol, bit-referenced convention
    int sps_chip = 16;   // samples per chip as used by the waveform chain
    std::int64_t interpolation = 0;
    std::int64_t decimation = 0;
    double dac_rate = kDacRate;
    double adc_rate = kAdcRate;
};

/// LCM(16, sps) * bps / sps evaluated exactly as a reduced rational.
struct ByteModulus {
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool integral = false;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

ByteModulus byte_modulus(std::int64_t sps, std::int64_t bps);

bool legal_interpolation(std::int64_t i); // integer in 16..512 step 4
bool legal_decimation(std::int64_t d);    // integer in 8..256 step 2

/// Throws std::domain_error naming every offending factor
/// ("IllegalInterpolation" / "IllegalDecimation").
void validate_factors(std::int64_t interpolation, std::int64_t decimation);

/// I = dac_rate/(r*sps), D = adc_rate/(r*sps) with r = bit rate; validated
/// against the legal factor sets. Non-integer results are rejected, not
/// rounded. Throws std::domain_error as in validate_factors.
RateConfig plan(Band band, int sps);

} // namespace lrwpan::rateplan

#endif
