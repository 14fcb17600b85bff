#ifndef LRWPAN_PSD_HPP
#define LRWPAN_PSD_HPP

#include <cstddef>
#include <vector>

#include "lrwpan/iq.hpp"

namespace lrwpan::psd {

struct PsdResult {
    std::vector<double> freq_hz;   // ascending, -fs/2 .. fs/2
    std::vector<double> power_db;
    double bin_width_hz = 0.0;
};

/// Welch-averaged periodogram: Hann window, 50% overlap, dB scale.
/// fft_size must be a power of two and no larger than the buffer.
PsdResult welch(const IqBuffer& samples, std::size_t fft_size);

/// In-place radix-2 FFT (size must be a power of two).
void fft(std::vector<cplx>& x);

} // namespace lrwpan::psd

#endif
