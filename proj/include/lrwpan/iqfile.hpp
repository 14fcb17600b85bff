#ifndef LRWPAN_IQFILE_HPP
#define LRWPAN_IQFILE_HPP

#include <string>

#include "lrwpan/iq.hpp"

namespace lrwpan::iqfile {

/// Raw interleaved 32-bit little-endian float I,Q pairs, no header. The
/// sample rate travels out-of-band (CLI flag / caller argument).
void iq_write(const IqBuffer& buf, const std::string& path);

/// Throws std::runtime_error ("OddFloatCount") for files whose byte count
/// is not a multiple of 8, and on I/O failure.
IqBuffer iq_read(const std::string& path, double sample_rate);

} // namespace lrwpan::iqfile

#endif
