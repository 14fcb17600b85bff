#include "lrwpan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lrwpan::metrics {

std::size_t count_bit_errors(std::span<const std::uint8_t> sent,
                             std::span<const std::uint8_t> received) {
    if (sent.size() != received.size())
        throw std::invalid_argument("LengthMismatch: sequences are not aligned");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < sent.size(); ++i)
        errors += static_cast<std::size_t>((sent[i] ^ received[i]) & 1);
    return errors;
}

double ber(std::span<const std::uint8_t> sent, std::span<const std::uint8_t> received) {
    if (sent.empty())
        throw std::invalid_argument("LengthMismatch: empty comparison");
    return static_cast<double>(count_bit_errors(sent, received)) /
           static_cast<double>(sent.size());
}

double dbpsk_mfb(double ebn0_db) {
    return 0.5 * std::exp(-db_to_lin(ebn0_db));
}

double q_function(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double estimate_snr_db(const IqBuffer& samples) {
    if (samples.size() < 10000)
        throw std::invalid_argument("TooFewSamples: need at least 1e4 samples");

    double m2 = 0.0;
    double m4 = 0.0;
    for (const cplx& x : samples.samples) {
        const double p = std::norm(x);
        m2 += p;
        m4 += p * p;
    }
    const double n = static_cast<double>(samples.size());
    m2 /= n;
    m4 /= n;

    // For constant-modulus signal S plus complex Gaussian noise N:
    // M2 = S + N, M4 = S^2 + 4SN + 2N^2, so S = sqrt(2*M2^2 - M4).
    const double s2 = 2.0 * m2 * m2 - m4;
    const double s = s2 > 0.0 ? std::sqrt(s2) : 0.0;
    const double noise = m2 - s;
    double snr_db;
    if (s <= 0.0)
        snr_db = -10.0;
    else if (noise <= 0.0)
        snr_db = 30.0;
    else
        snr_db = lin_to_db(s / noise);
    return std::clamp(snr_db, -10.0, 30.0);
}

std::string metrics_csv(std::span<const MetricRow> rows, std::span<const std::string> comments) {
    std::string out;
    for (const std::string& c : comments)
        out += "# " + c + "\n";
    out += "snr_db,ebn0_db,ber,per,frames_sent,frames_ok,bits_compared\n";
    char line[256];
    for (const MetricRow& r : rows) {
        std::snprintf(line, sizeof(line), "%.6g,%.6g,%.8g,%.8g,%llu,%llu,%llu\n",
                      r.snr_db, r.ebn0_db, r.ber, r.per,
                      static_cast<unsigned long long>(r.frames_sent),
                      static_cast<unsigned long long>(r.frames_ok),
                      static_cast<unsigned long long>(r.bits_compared));
        out += line;
    }
    return out;
}

void write_metrics_csv(const std::string& path, std::span<const MetricRow> rows,
                       std::span<const std::string> comments) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    f << metrics_csv(rows, comments);
    if (!f)
        throw std::runtime_error("write failed: " + path);
}

} // namespace lrwpan::metrics
