#include "lrwpan/spreading.hpp"

#include <bit>
#include <stdexcept>

namespace lrwpan::spreading {

std::array<std::uint8_t, kChipsPerBit> ChipWord::chips() const {
    std::array<std::uint8_t, kChipsPerBit> out{};
    for (int i = 0; i < kChipsPerBit; ++i)
        out[i] = chip(i);
    return out;
}

ChipWord ChipWord::from_chips(std::span<const std::uint8_t> chips) {
    if (chips.size() != kChipsPerBit)
        throw std::invalid_argument("ChipWord::from_chips: expected 15 chips");
    std::uint16_t packed = 0;
    for (std::uint8_t c : chips)
        packed = static_cast<std::uint16_t>((packed << 1) | (c & 1));
    return ChipWord{packed};
}

std::vector<std::uint8_t> diff_encode(std::span<const std::uint8_t> bits, DiffState& state) {
    std::vector<std::uint8_t> out;
    out.reserve(bits.size());
    std::uint8_t prev = state.last & 1;
    for (std::uint8_t b : bits) {
        prev = static_cast<std::uint8_t>((b ^ prev) & 1);
        out.push_back(prev);
    }
    state.last = prev;
    return out;
}

std::vector<std::uint8_t> diff_decode(std::span<const std::uint8_t> bits, DiffState& state) {
    std::vector<std::uint8_t> out;
    out.reserve(bits.size());
    std::uint8_t prev = state.last & 1;
    for (std::uint8_t e : bits) {
        out.push_back(static_cast<std::uint8_t>((e ^ prev) & 1));
        prev = e & 1;
    }
    state.last = prev;
    return out;
}

ChipWord spread_bit(std::uint8_t bit) {
    return ChipWord{(bit & 1) ? kOneCodeword : kZeroCodeword};
}

std::vector<std::uint8_t> spread_bits(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> chips;
    chips.reserve(bits.size() * kChipsPerBit);
    for (std::uint8_t b : bits) {
        const ChipWord w = spread_bit(b);
        for (int i = 0; i < kChipsPerBit; ++i)
            chips.push_back(w.chip(i));
    }
    return chips;
}

DespreadResult despread(ChipWord word) {
    const int d0 = std::popcount(static_cast<unsigned>((word.packed ^ kZeroCodeword) & kChipMask));
    const int d1 = kChipsPerBit - d0;
    if (d0 <= d1)
        return DespreadResult{0, d0};
    return DespreadResult{1, d1};
}

std::pair<std::vector<std::uint8_t>, std::vector<int>>
despread_chips(std::span<const std::uint8_t> chips) {
    const std::size_t n_bits = chips.size() / kChipsPerBit;
    std::vector<std::uint8_t> bits;
    std::vector<int> distances;
    bits.reserve(n_bits);
    distances.reserve(n_bits);
    for (std::size_t i = 0; i < n_bits; ++i) {
        const auto r = despread(ChipWord::from_chips(chips.subspan(i * kChipsPerBit, kChipsPerBit)));
        bits.push_back(r.bit);
        distances.push_back(r.distance);
    }
    return {std::move(bits), std::move(distances)};
}

} // namespace lrwpan::spreading
