#ifndef LRWPAN_FRAMING_HPP
#define LRWPAN_FRAMING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lrwpan/spreading.hpp"

namespace lrwpan::framing {

inline constexpr std::uint8_t kSfd = 0xA7;
inline constexpr std::size_t kPreambleOctets = 4;
inline constexpr std::size_t kMaxPsdu = 127;    // length field is 7 bits
inline constexpr std::size_t kMaxPayload = 125; // psdu minus 2-octet FCS
inline constexpr std::size_t kFcsOctets = 2;
inline constexpr std::size_t kHeaderOctets = kPreambleOctets + 1 + 1; // preamble, SFD, length

/// ITU CRC-16 (x^16 + x^12 + x^5 + 1), init 0x0000, LSB-first — the
/// 802.15.4 FCS. Returned value is appended low octet first.
std::uint16_t crc16(std::span<const std::uint8_t> data);

struct PhyFrame {
    std::uint8_t sfd = kSfd;
    std::vector<std::uint8_t> psdu; // payload followed by 2-octet FCS
    std::size_t pad = 0;            // trailing 0x00 octets after the FCS

    std::size_t length() const { return psdu.size(); }
    std::span<const std::uint8_t> payload() const {
        return std::span<const std::uint8_t>(psdu).first(psdu.size() - kFcsOctets);
    }
};

struct BuiltFrame {
    std::vector<std::uint8_t> octets; // preamble | sfd | length | payload | fcs | pad
    std::size_t pad = 0;
};

/// Serializes a frame and appends the minimum number of 0x00 octets so the
/// total octet count is a multiple of byte_modulus.
/// Throws std::length_error ("PayloadTooLong") for payloads over 125 octets.
BuiltFrame build_frame(std::span<const std::uint8_t> payload, std::size_t byte_modulus = 1);

enum class FrameError {
    None,
    NoPreamble,
    BadSfd,
    BadLength,
    Truncated,
    CrcMismatch,
};

const char* to_string(FrameError err);

/// Parses a frame from a bit sequence starting at the preamble boundary
/// (LSB-first octets). Detection only; no correction is attempted.
std::optional<PhyFrame> parse_frame(std::span<const std::uint8_t> bits, FrameError& err);

struct FrameEvent {
    std::vector<std::uint8_t> psdu;
    bool crc_ok = false;
};

enum class SinkState {
    SearchPreamble,
    SyncSfd,
    DecodeLength,
    DecodePayload,
    CheckCrc,
};

struct SinkConfig {
    // Max mismatching chips per 15-chip window accepted while acquiring
    // alignment in SearchPreamble; elsewhere words are decoded by minimum
    // distance and the SFD bit pattern must match exactly.
    int chip_error_budget = 2;
    // Consecutive decoded zero bits required before SFD search is armed.
    // Four 0x00 preamble octets provide up to 32; one octet's worth is
    // required by default so acquisition survives late lock and chip noise.
    int preamble_zero_bits = 8;
};

struct SinkStep {
    std::optional<std::uint8_t> bit;
    std::optional<FrameEvent> event;
};

/// Receiver-side packet sink: consumes hard chip decisions, despreads and
/// differentially decodes internally, and emits completed frame events.
/// Any failure falls back to SearchPreamble; identical chip streams produce
/// identical event sequences.
class PacketSink {
public:
    explicit PacketSink(SinkConfig cfg = {});

    SinkStep push_chip(std::uint8_t chip);
    SinkStep step_word(spreading::ChipWord word);
    std::vector<FrameEvent> run(std::span<const std::uint8_t> chips);

    SinkState state() const { return state_; }
    std::uint64_t chip_errors() const { return chip_errors_; }
    void reset();

private:
    void enter_search();

    SinkConfig cfg_;
    SinkState state_ = SinkState::SearchPreamble;
    std::uint16_t shift_reg_ = 0;
    int reg_fill_ = 0;
    bool locked_ = false;
    int chips_since_word_ = 0;
    std::uint8_t prev_encoded_ = 0;
    int zero_run_ = 0;
    int sfd_pos_ = 0;
    std::uint8_t octet_acc_ = 0;
    int bits_in_octet_ = 0;
    std::size_t psdu_len_ = 0;
    std::vector<std::uint8_t> psdu_;
    std::uint64_t chip_errors_ = 0;
};

} // namespace lrwpan::framing

#endif
