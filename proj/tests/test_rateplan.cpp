#include <doctest.h>

#include <stdexcept>

#include <string>

#include "lrwpan/rateplan.hpp"

using namespace lrwpan;
using rateplan::Band;

namespace {

// Smallest positive byte count whose host-side sample count is a multiple
// of 128, with 8*B*sps/bps samples per B bytes.
std::int64_t byte_modulus_search(std::int64_t sps, std::int64_t bps) {
    for (std::int64_t b = 1;; ++b) {
        const std::int64_t samples_times_bps = 8 * b * sps;
        if (samples_times_bps % (128 * bps) == 0)
            return b;
    }
}

} // namespace

TEST_CASE("byte_modulus published values") {
    CHECK(rateplan::byte_modulus(16, 1).num == 1);
    CHECK(rateplan::byte_modulus(16, 1).integral);
    CHECK(rateplan::byte_modulus(8, 1).num == 2);
    CHECK(rateplan::byte_modulus(35, 1).num == 16);
    CHECK(rateplan::byte_modulus(35, 1).den == 1);
}

TEST_CASE("byte_modulus agrees with the brute-force multiple search") {
    for (std::int64_t sps = 1; sps <= 64; ++sps) {
        const auto bm = rateplan::byte_modulus(sps, 1);
        REQUIRE(bm.integral);
        CHECK(bm.num == byte_modulus_search(sps, 1));
    }
}

TEST_CASE("plan reproduces the published factors") {
    const auto p868 = rateplan::plan(Band::B868, 16);
    CHECK(p868.interpolation == 400);
    CHECK(p868.decimation == 200);
    CHECK(p868.bit_rate == 20000);
    CHECK(p868.chip_rate == 300000);

    const auto p915 = rateplan::plan(Band::B915, 8);
    CHECK(p915.interpolation == 400);
    CHECK(p915.decimation == 200);
    CHECK(p915.bit_rate == 40000);
    CHECK(p915.chip_rate == 600000);
}

TEST_CASE("chip rate is 15 times the bit rate") {
    CHECK(rateplan::chip_rate_for(Band::B868) == 15 * rateplan::bit_rate_for(Band::B868));
    CHECK(rateplan::chip_rate_for(Band::B915) == 15 * rateplan::bit_rate_for(Band::B915));
}

TEST_CASE("non-integer factors are rejected, not rounded") {
    CHECK_THROWS_WITH_AS(rateplan::plan(Band::B868, 13),
                         doctest::Contains("IllegalInterpolation"), std::domain_error);
}

TEST_CASE("validate_factors endpoints and off-step values") {
    CHECK_NOTHROW(rateplan::validate_factors(400, 200));
    CHECK_NOTHROW(rateplan::validate_factors(16, 8));
    CHECK_NOTHROW(rateplan::validate_factors(512, 256));

    // both offenders are named
    try {
        rateplan::validate_factors(18, 9);
        FAIL("expected a domain_error");
    } catch (const std::domain_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("IllegalInterpolation") != std::string::npos);
        CHECK(msg.find("IllegalDecimation") != std::string::npos);
    }

    CHECK_THROWS_AS(rateplan::validate_factors(12, 8), std::domain_error);
    CHECK_THROWS_AS(rateplan::validate_factors(516, 8), std::domain_error);
    CHECK_THROWS_AS(rateplan::validate_factors(16, 6), std::domain_error);
    CHECK_THROWS_AS(rateplan::validate_factors(16, 258), std::domain_error);
}

TEST_CASE("interpolation is twice the decimation for every legal pair") {
    for (Band band : {Band::B868, Band::B915}) {
        for (int sps = 1; sps <= 64; ++sps) {
            try {
                const auto cfg = rateplan::plan(band, sps);
                CHECK(cfg.interpolation == 2 * cfg.decimation);
            } catch (const std::domain_error&) {
                // non-integer or out-of-range factors; nothing to check
            }
        }
    }
}

TEST_CASE("band parsing") {
    CHECK(rateplan::band_from_string("868") == Band::B868);
    CHECK(rateplan::band_from_string("915") == Band::B915);
    CHECK_THROWS_AS(rateplan::band_from_string("2450"), std::invalid_argument);
    CHECK(std::string(rateplan::to_string(Band::B868)) == "868");
}
