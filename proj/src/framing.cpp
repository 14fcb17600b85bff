#include "lrwpan/framing.hpp"

#include <array>
#include <stdexcept>

#include "lrwpan/iq.hpp"

namespace lrwpan::framing {

namespace {

// Reflected form of x^16 + x^12 + x^5 + 1 for LSB-first processing.
constexpr std::uint16_t kCrcPolyReflected = 0x8408;

constexpr std::array<std::uint16_t, 256> make_crc_table() {
    std::array<std::uint16_t, 256> table{};
    for (int b = 0; b < 256; ++b) {
        std::uint16_t crc = static_cast<std::uint16_t>(b);
        for (int i = 0; i < 8; ++i)
            crc = (crc & 1) ? static_cast<std::uint16_t>((crc >> 1) ^ kCrcPolyReflected)
                            : static_cast<std::uint16_t>(crc >> 1);
        table[static_cast<std::size_t>(b)] = crc;
    }
    return table;
}

constexpr auto kCrcTable = make_crc_table();

// SFD transmitted LSB-first.
constexpr std::array<std::uint8_t, 8> kSfdBits = {1, 1, 1, 0, 0, 1, 0, 1};

} // namespace

std::uint16_t crc16(std::span<const std::uint8_t> data) {
    std::uint16_t crc = 0x0000;
    for (std::uint8_t b : data)
        crc = static_cast<std::uint16_t>((crc >> 8) ^ kCrcTable[(crc ^ b) & 0xFF]);
    return crc;
}

BuiltFrame build_frame(std::span<const std::uint8_t> payload, std::size_t byte_modulus) {
    if (payload.size() > kMaxPayload)
        throw std::length_error("PayloadTooLong: payload exceeds 125 octets");
    if (byte_modulus == 0)
        throw std::invalid_argument("byte_modulus must be positive");

    BuiltFrame out;
    out.octets.reserve(kHeaderOctets + payload.size() + kFcsOctets + byte_modulus);
    out.octets.insert(out.octets.end(), kPreambleOctets, 0x00);
    out.octets.push_back(kSfd);
    out.octets.push_back(static_cast<std::uint8_t>(payload.size() + kFcsOctets));
    out.octets.insert(out.octets.end(), payload.begin(), payload.end());

    std::vector<std::uint8_t> psdu(payload.begin(), payload.end());
    const std::uint16_t fcs = crc16(psdu);
    out.octets.push_back(static_cast<std::uint8_t>(fcs & 0xFF));
    out.octets.push_back(static_cast<std::uint8_t>(fcs >> 8));

    out.pad = (byte_modulus - out.octets.size() % byte_modulus) % byte_modulus;
    out.octets.insert(out.octets.end(), out.pad, 0x00);
    return out;
}

const char* to_string(FrameError err) {
    switch (err) {
    case FrameError::None: return "None";
    case FrameError::NoPreamble: return "NoPreamble";
    case FrameError::BadSfd: return "BadSfd";
    case FrameError::BadLength: return "BadLength";
    case FrameError::Truncated: return "Truncated";
    case FrameError::CrcMismatch: return "CrcMismatch";
    }
    return "Unknown";
}

std::optional<PhyFrame> parse_frame(std::span<const std::uint8_t> bits, FrameError& err) {
    const std::size_t preamble_bits = kPreambleOctets * 8;
    if (bits.size() < preamble_bits) {
        err = FrameError::NoPreamble;
        return std::nullopt;
    }
    for (std::size_t i = 0; i < preamble_bits; ++i) {
        if (bits[i] & 1) {
            err = FrameError::NoPreamble;
            return std::nullopt;
        }
    }

    if (bits.size() < preamble_bits + 8) {
        err = FrameError::BadSfd;
        return std::nullopt;
    }
    std::uint8_t sfd = 0;
    for (int b = 0; b < 8; ++b)
        sfd |= static_cast<std::uint8_t>((bits[preamble_bits + static_cast<std::size_t>(b)] & 1) << b);
    if (sfd != kSfd) {
        err = FrameError::BadSfd;
        return std::nullopt;
    }

    if (bits.size() < preamble_bits + 16) {
        err = FrameError::Truncated;
        return std::nullopt;
    }
    std::uint8_t length = 0;
    for (int b = 0; b < 8; ++b)
        length |= static_cast<std::uint8_t>((bits[preamble_bits + 8 + static_cast<std::size_t>(b)] & 1) << b);
    if (length > kMaxPsdu || length < kFcsOctets) {
        err = FrameError::BadLength;
        return std::nullopt;
    }

    const std::size_t psdu_bits = static_cast<std::size_t>(length) * 8;
    const std::size_t body_start = preamble_bits + 16;
    if (bits.size() < body_start + psdu_bits) {
        err = FrameError::Truncated;
        return std::nullopt;
    }
    std::vector<std::uint8_t> psdu = bits_to_octets(bits.subspan(body_start, psdu_bits));

    const std::uint16_t fcs = static_cast<std::uint16_t>(psdu[psdu.size() - 2] |
                                                         (psdu[psdu.size() - 1] << 8));
    if (crc16(std::span<const std::uint8_t>(psdu).first(psdu.size() - kFcsOctets)) != fcs) {
        err = FrameError::CrcMismatch;
        return std::nullopt;
    }

    PhyFrame frame;
    frame.sfd = sfd;
    frame.psdu = std::move(psdu);
    frame.pad = (bits.size() - body_start - psdu_bits) / 8;
    err = FrameError::None;
    return frame;
}

PacketSink::PacketSink(SinkConfig cfg) : cfg_(cfg) {
    if (cfg_.chip_error_budget < 0 || cfg_.chip_error_budget > 7)
        throw std::invalid_argument("chip_error_budget must be in 0..7");
    if (cfg_.preamble_zero_bits < 1 || cfg_.preamble_zero_bits > 32)
        throw std::invalid_argument("preamble_zero_bits must be in 1..32");
    reset();
}

void PacketSink::reset() {
    state_ = SinkState::SearchPreamble;
    shift_reg_ = 0;
    reg_fill_ = 0;
    locked_ = false;
    chips_since_word_ = 0;
    prev_encoded_ = 0;
    zero_run_ = 0;
    sfd_pos_ = 0;
    octet_acc_ = 0;
    bits_in_octet_ = 0;
    psdu_len_ = 0;
    psdu_.clear();
    chip_errors_ = 0;
}

void PacketSink::enter_search() {
    state_ = SinkState::SearchPreamble;
    locked_ = false;
    chips_since_word_ = 0;
    zero_run_ = 0;
    sfd_pos_ = 0;
    octet_acc_ = 0;
    bits_in_octet_ = 0;
    psdu_len_ = 0;
    psdu_.clear();
}

SinkStep PacketSink::push_chip(std::uint8_t chip) {
    SinkStep out;
    shift_reg_ = static_cast<std::uint16_t>(((shift_reg_ << 1) | (chip & 1)) & spreading::kChipMask);
    if (reg_fill_ < spreading::kChipsPerBit) {
        if (++reg_fill_ < spreading::kChipsPerBit)
            return out;
        // window just filled; fall through to the search test below
    }

    if (!locked_) {
        // Sliding correlation against the nearest codeword; either polarity
        // locks and the differential decode cancels an inverted stream.
        const auto r = spreading::despread(spreading::ChipWord{shift_reg_});
        if (r.distance <= cfg_.chip_error_budget) {
            locked_ = true;
            chips_since_word_ = 0;
            prev_encoded_ = r.bit;
            chip_errors_ += static_cast<std::uint64_t>(r.distance);
            // The first locked window has no differential reference; the
            // preamble is all zeros, so count it as the first zero bit.
            zero_run_ = 1;
            out.bit = 0;
            if (zero_run_ >= cfg_.preamble_zero_bits) {
                state_ = SinkState::SyncSfd;
                sfd_pos_ = 0;
            }
        }
        return out;
    }

    if (++chips_since_word_ < spreading::kChipsPerBit)
        return out;
    chips_since_word_ = 0;

    const auto r = spreading::despread(spreading::ChipWord{shift_reg_});
    const std::uint8_t decoded = static_cast<std::uint8_t>((r.bit ^ prev_encoded_) & 1);
    prev_encoded_ = r.bit;
    chip_errors_ += static_cast<std::uint64_t>(r.distance);
    out.bit = decoded;

    switch (state_) {
    case SinkState::SearchPreamble:
        if (decoded == 0) {
            if (++zero_run_ >= cfg_.preamble_zero_bits) {
                state_ = SinkState::SyncSfd;
                sfd_pos_ = 0;
            }
        } else {
            enter_search();
        }
        break;

    case SinkState::SyncSfd:
        if (sfd_pos_ == 0) {
            // Extra zeros are still preamble; the first one bit must begin
            // an exact SFD.
            if (decoded == kSfdBits[0])
                sfd_pos_ = 1;
        } else if (decoded == kSfdBits[static_cast<std::size_t>(sfd_pos_)]) {
            if (++sfd_pos_ == 8) {
                state_ = SinkState::DecodeLength;
                octet_acc_ = 0;
                bits_in_octet_ = 0;
            }
        } else {
            enter_search();
        }
        break;

    case SinkState::DecodeLength:
        octet_acc_ |= static_cast<std::uint8_t>(decoded << bits_in_octet_);
        if (++bits_in_octet_ == 8) {
            if (octet_acc_ > kMaxPsdu || octet_acc_ < kFcsOctets) {
                enter_search();
                break;
            }
            psdu_len_ = octet_acc_;
            psdu_.clear();
            psdu_.reserve(psdu_len_);
            octet_acc_ = 0;
            bits_in_octet_ = 0;
            state_ = SinkState::DecodePayload;
        }
        break;

    case SinkState::DecodePayload:
        octet_acc_ |= static_cast<std::uint8_t>(decoded << bits_in_octet_);
        if (++bits_in_octet_ == 8) {
            psdu_.push_back(octet_acc_);
            octet_acc_ = 0;
            bits_in_octet_ = 0;
            if (psdu_.size() == psdu_len_) {
                state_ = SinkState::CheckCrc;
                FrameEvent ev;
                ev.psdu = std::move(psdu_);
                psdu_ = {};
                const std::uint16_t fcs = static_cast<std::uint16_t>(
                    ev.psdu[psdu_len_ - 2] | (ev.psdu[psdu_len_ - 1] << 8));
                ev.crc_ok = crc16(std::span<const std::uint8_t>(ev.psdu).first(psdu_len_ - kFcsOctets)) == fcs;
                out.event = std::move(ev);
                enter_search();
            }
        }
        break;

    case SinkState::CheckCrc:
        // CheckCrc resolves within the step that completes the payload.
        enter_search();
        break;
    }
    return out;
}

SinkStep PacketSink::step_word(spreading::ChipWord word) {
    SinkStep out;
    for (int i = 0; i < spreading::kChipsPerBit; ++i) {
        SinkStep s = push_chip(word.chip(i));
        if (s.bit)
            out.bit = s.bit;
        if (s.event)
            out.event = std::move(s.event);
    }
    return out;
}

std::vector<FrameEvent> PacketSink::run(std::span<const std::uint8_t> chips) {
    std::vector<FrameEvent> events;
    for (std::uint8_t c : chips) {
        SinkStep s = push_chip(c);
        if (s.event)
            events.push_back(std::move(*s.event));
    }
    return events;
}

} // namespace lrwpan::framing
