#ifndef LRWPAN_SPREADING_HPP
#define LRWPAN_SPREADING_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace lrwpan::spreading {

inline constexpr int kChipsPerBit = 15;
inline constexpr std::uint16_t kChipMask = 0x7FFF;

// 15-chip PN codewords, c0 in the most significant used bit of the carrier.
// Bit 0 maps to 1 1 1 1 0 1 0 1 1 0 0 1 0 0 0, bit 1 to its complement.
inline constexpr std::uint16_t kZeroCodeword = 0x7AC8;
inline constexpr std::uint16_t kOneCodeword = kZeroCodeword ^ kChipMask; // 0x0537

/// 15 chips packed in a 16-bit carrier; the top carrier bit is unused and 0.
struct ChipWord {
    std::uint16_t packed = 0;

    std::uint8_t chip(int i) const { return (packed >> (14 - i)) & 1; }
    std::array<std::uint8_t, kChipsPerBit> chips() const;
    static ChipWord from_chips(std::span<const std::uint8_t> chips);
    ChipWord complemented() const { return ChipWord{static_cast<std::uint16_t>((packed ^ kChipMask) & kChipMask)}; }
    bool operator==(const ChipWord&) const = default;
};

/// Differential coder state: the previously *encoded* bit (initially 0).
struct DiffState {
    std::uint8_t last = 0;
};

/// e_n = b_n xor e_{n-1}; the state is advanced past the last output.
std::vector<std::uint8_t> diff_encode(std::span<const std::uint8_t> bits, DiffState& state);

/// b_n = e_n xor e_{n-1}; inverse of diff_encode for matching initial state.
std::vector<std::uint8_t> diff_decode(std::span<const std::uint8_t> bits, DiffState& state);

ChipWord spread_bit(std::uint8_t bit);

/// Concatenated chip stream for a bit sequence (15 chips per bit).
std::vector<std::uint8_t> spread_bits(std::span<const std::uint8_t> bits);

struct DespreadResult {
    std::uint8_t bit = 0;
    int distance = 0; // Hamming distance to the winning codeword, 0..7
};

/// Hard-decision minimum-distance despreading. Ties cannot occur: the two
/// codewords are complements at distance 15.
DespreadResult despread(ChipWord word);

/// Despread an aligned chip stream; floor(n/15) bits, distances alongside.
std::pair<std::vector<std::uint8_t>, std::vector<int>>
despread_chips(std::span<const std::uint8_t> chips);

} // namespace lrwpan::spreading

#endif
