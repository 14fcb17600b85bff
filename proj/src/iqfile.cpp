#include "lrwpan/iqfile.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace lrwpan::iqfile {

namespace {

void put_f32le(std::vector<std::uint8_t>& out, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    out.push_back(static_cast<std::uint8_t>(bits & 0xFF));
    out.push_back(static_cast<std::uint8_t>((bits >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((bits >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((bits >> 24) & 0xFF));
}

float get_f32le(const std::uint8_t* p) {
    const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                               (static_cast<std::uint32_t>(p[1]) << 8) |
                               (static_cast<std::uint32_t>(p[2]) << 16) |
                               (static_cast<std::uint32_t>(p[3]) << 24);
    return std::bit_cast<float>(bits);
}

} // namespace

void iq_write(const IqBuffer& buf, const std::string& path) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(buf.size() * 8);
    for (const cplx& s : buf.samples) {
        put_f32le(bytes, static_cast<float>(s.real()));
        put_f32le(bytes, static_cast<float>(s.imag()));
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f)
        throw std::runtime_error("write failed: " + path);
}

IqBuffer iq_read(const std::string& path, double sample_rate) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    if (!f)
        throw std::runtime_error("cannot open for reading: " + path);
    const std::streamsize size = f.tellg();
    f.seekg(0);
    if (size % 8 != 0)
        throw std::runtime_error("OddFloatCount: " + path + " does not hold whole I,Q pairs");

    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    if (size > 0) {
        f.read(reinterpret_cast<char*>(bytes.data()), size);
        if (!f)
            throw std::runtime_error("read failed: " + path);
    }

    IqBuffer out(sample_rate);
    out.samples.resize(bytes.size() / 8);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const float re = get_f32le(bytes.data() + i * 8);
        const float im = get_f32le(bytes.data() + i * 8 + 4);
        out.samples[i] = cplx{static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

} // namespace lrwpan::iqfile
