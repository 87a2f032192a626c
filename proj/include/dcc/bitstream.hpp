#ifndef DCC_BITSTREAM_HPP
#define DCC_BITSTREAM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "dcc/error.hpp"

namespace dcc {

// MSB-first bit writer. Frames are byte-aligned; align_byte() pads with
// zero bits.
class BitWriter {
public:
    void put_bit(unsigned bit) {
        if (shift_ == 0) {
            bytes_.push_back(0);
            shift_ = 8;
        }
        --shift_;
        if (bit & 1u) bytes_.back() |= static_cast<std::uint8_t>(1u << shift_);
    }

    void put_bits(std::uint64_t value, unsigned count) {
        if (count > 64) throw InvalidArgument("put_bits: count > 64");
        while (count--) put_bit(static_cast<unsigned>((value >> count) & 1u));
    }

    // Unsigned Exp-Golomb: value+1 written with leading zeros.
    void put_ue(std::uint64_t value) {
        std::uint64_t code = value + 1;
        unsigned len = 0;
        for (std::uint64_t v = code; v > 1; v >>= 1) ++len;
        put_bits(0, len);
        put_bits(code, len + 1);
    }

    // Signed Exp-Golomb, H.264 mapping: 0,1,-1,2,-2,...
    void put_se(std::int64_t value) {
        std::uint64_t code =
            value > 0 ? 2 * static_cast<std::uint64_t>(value) - 1
                      : 2 * static_cast<std::uint64_t>(-value);
        put_ue(code);
    }

    void put_u8(std::uint8_t v) { put_bits(v, 8); }
    // Multi-byte scalars are little-endian on the wire.
    void put_u16le(std::uint16_t v) {
        put_u8(static_cast<std::uint8_t>(v & 0xff));
        put_u8(static_cast<std::uint8_t>(v >> 8));
    }
    void put_u32le(std::uint32_t v) {
        put_u16le(static_cast<std::uint16_t>(v & 0xffff));
        put_u16le(static_cast<std::uint16_t>(v >> 16));
    }

    void align_byte() { shift_ = 0; }

    std::size_t bit_count() const { return bytes_.size() * 8 - shift_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::vector<std::uint8_t> take() {
        shift_ = 0;
        return std::move(bytes_);
    }

private:
    std::vector<std::uint8_t> bytes_;
    unsigned shift_ = 0; // free bits in the last byte
};

// MSB-first reader over a borrowed buffer. All reads throw CorruptBitstream
// past the end, so arbitrary inputs always terminate with a typed error.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

    unsigned get_bit() {
        if (pos_ >= data_.size() * 8)
            throw CorruptBitstream("bitstream exhausted", data_.size());
        unsigned bit = (data_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
        ++pos_;
        return bit;
    }

    std::uint64_t get_bits(unsigned count) {
        if (count > 64) throw CorruptBitstream("get_bits: count > 64", byte_offset());
        std::uint64_t v = 0;
        while (count--) v = (v << 1) | get_bit();
        return v;
    }

    std::uint64_t get_ue() {
        unsigned zeros = 0;
        while (get_bit() == 0) {
            if (++zeros > 48) throw CorruptBitstream("exp-golomb prefix too long", byte_offset());
        }
        std::uint64_t suffix = get_bits(zeros);
        return ((1ull << zeros) | suffix) - 1;
    }

    std::int64_t get_se() {
        std::uint64_t code = get_ue();
        if (code & 1) return static_cast<std::int64_t>((code + 1) / 2);
        return -static_cast<std::int64_t>(code / 2);
    }

    std::uint8_t get_u8() { return static_cast<std::uint8_t>(get_bits(8)); }
    std::uint16_t get_u16le() {
        std::uint16_t lo = get_u8(), hi = get_u8();
        return static_cast<std::uint16_t>(lo | (hi << 8));
    }
    std::uint32_t get_u32le() {
        std::uint32_t lo = get_u16le(), hi = get_u16le();
        return lo | (hi << 16);
    }

    void align_byte() { pos_ = (pos_ + 7) & ~std::size_t{7}; }

    std::size_t bit_pos() const { return pos_; }
    std::uint64_t byte_offset() const { return pos_ / 8; }
    std::size_t bits_left() const { return data_.size() * 8 - pos_; }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace dcc

#endif // DCC_BITSTREAM_HPP
