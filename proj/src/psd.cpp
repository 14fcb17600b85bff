#include "lrwpan/psd.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lrwpan::psd {

void fft(std::vector<cplx>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wlen{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = x[i + k];
                const cplx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

PsdResult welch(const IqBuffer& samples, std::size_t fft_size) {
    if (fft_size == 0 || (fft_size & (fft_size - 1)) != 0)
        throw std::invalid_argument("fft_size must be a power of two");
    if (fft_size > samples.size())
        throw std::invalid_argument("fft_size exceeds buffer length");

    std::vector<double> window(fft_size);
    double window_power = 0.0;
    for (std::size_t i = 0; i < fft_size; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(fft_size - 1)));
        window_power += window[i] * window[i];
    }

    const std::size_t hop = fft_size / 2;
    std::vector<double> acc(fft_size, 0.0);
    std::vector<cplx> seg(fft_size);
    std::size_t n_segments = 0;
    for (std::size_t start = 0; start + fft_size <= samples.size(); start += hop) {
        for (std::size_t i = 0; i < fft_size; ++i)
            seg[i] = samples[start + i] * window[i];
        fft(seg);
        for (std::size_t i = 0; i < fft_size; ++i)
            acc[i] += std::norm(seg[i]);
        ++n_segments;
    }

    const double fs = samples.sample_rate;
    const double scale = 1.0 / (static_cast<double>(n_segments) * window_power * fs);

    PsdResult out;
    out.bin_width_hz = fs / static_cast<double>(fft_size);
    out.freq_hz.resize(fft_size);
    out.power_db.resize(fft_size);
    const auto half = static_cast<std::ptrdiff_t>(fft_size / 2);
    for (std::size_t i = 0; i < fft_size; ++i) {
        // fftshift: output bin i corresponds to FFT bin (i + N/2) mod N
        const std::size_t src = (i + fft_size / 2) % fft_size;
        const auto k = static_cast<std::ptrdiff_t>(i) - half;
        out.freq_hz[i] = static_cast<double>(k) * out.bin_width_hz;
        out.power_db[i] = 10.0 * std::log10(acc[src] * scale + 1e-300);
    }
    return out;
}

} // namespace lrwpan::psd
