#pragma once

#include "dpoq/bitops.hpp"
#include "dpoq/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpoq {

// Packed bit vector, LSB-first within each 64-bit word.  Bit i of the vector
// lives in words_[i/64] at position i%64.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(size_t nbits) : size_(nbits), words_((nbits + 63) / 64, 0) {}

    static BitVec from_u64(uint64_t value, size_t nbits) {
        BitVec v(nbits);
        for (size_t i = 0; i < nbits && i < 64; ++i)
            v.set(i, (value >> i) & 1);
        return v;
    }

    static BitVec random(size_t nbits, Rng &rng) {
        BitVec v(nbits);
        for (auto &w : v.words_)
            w = rng.word();
        v.mask_tail();
        return v;
    }

    size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool b) {
        uint64_t m = 1ull << (i & 63);
        if (b)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }
    void flip(size_t i) { words_[i >> 6] ^= 1ull << (i & 63); }

    void append(bool b) {
        if (size_ % 64 == 0)
            words_.push_back(0);
        ++size_;
        set(size_ - 1, b);
    }
    void append(const BitVec &other) {
        for (size_t i = 0; i < other.size_; ++i)
            append(other.get(i));
    }

    BitVec slice(size_t begin, size_t len) const {
        BitVec out(len);
        for (size_t i = 0; i < len; ++i)
            out.set(i, get(begin + i));
        return out;
    }

    uint64_t to_u64() const {
        if (size_ > 64)
            throw std::logic_error("BitVec::to_u64: too wide");
        return words_.empty() ? 0 : words_[0];
    }

    void operator^=(const BitVec &other) {
        if (other.size_ != size_)
            throw std::invalid_argument("BitVec xor: length mismatch");
        bitops::xor_words(words_.data(), other.words_.data(), words_.size());
    }

    bool dot(const BitVec &other) const {
        if (other.size_ != size_)
            throw std::invalid_argument("BitVec dot: length mismatch");
        return bitops::dot_parity(words_.data(), other.words_.data(), words_.size());
    }

    bool parity() const { return bitops::parity(words_.data(), words_.size()); }
    size_t count() const { return bitops::popcount(words_.data(), words_.size()); }
    bool any() const { return count() != 0; }

    bool operator==(const BitVec &o) const { return size_ == o.size_ && words_ == o.words_; }
    bool operator!=(const BitVec &o) const { return !(*this == o); }

    const std::vector<uint64_t> &words() const { return words_; }
    std::vector<uint64_t> &words() { return words_; }

    std::string to_string01() const {
        std::string s;
        s.reserve(size_);
        for (size_t i = 0; i < size_; ++i)
            s.push_back(get(i) ? '1' : '0');
        return s;
    }

    // Hex codec for wire payloads: lowercase hex of the little-endian byte
    // stream; the bit length travels separately so ragged widths round-trip
    // exactly.
    std::string to_hex() const {
        static const char digits[] = "0123456789abcdef";
        std::string s;
        size_t nbytes = (size_ + 7) / 8;
        s.reserve(nbytes * 2);
        for (size_t b = 0; b < nbytes; ++b) {
            uint8_t byte = static_cast<uint8_t>(words_[b >> 3] >> ((b & 7) * 8));
            s.push_back(digits[byte >> 4]);
            s.push_back(digits[byte & 15]);
        }
        return s;
    }

    static BitVec from_hex(const std::string &hex, size_t nbits) {
        size_t nbytes = (nbits + 7) / 8;
        if (hex.size() != nbytes * 2)
            throw std::invalid_argument("BitVec::from_hex: length mismatch");
        BitVec v(nbits);
        for (size_t b = 0; b < nbytes; ++b) {
            auto nib = [&](char c) -> uint64_t {
                if (c >= '0' && c <= '9')
                    return static_cast<uint64_t>(c - '0');
                if (c >= 'a' && c <= 'f')
                    return static_cast<uint64_t>(c - 'a' + 10);
                if (c >= 'A' && c <= 'F')
                    return static_cast<uint64_t>(c - 'A' + 10);
                throw std::invalid_argument("BitVec::from_hex: bad hex digit");
            };
            uint64_t byte = (nib(hex[2 * b]) << 4) | nib(hex[2 * b + 1]);
            v.words_[b >> 3] |= byte << ((b & 7) * 8);
        }
        // reject set bits beyond the declared width
        BitVec check = v;
        check.mask_tail();
        if (check.words_ != v.words_)
            throw std::invalid_argument("BitVec::from_hex: bits beyond declared length");
        return v;
    }

  private:
    void mask_tail() {
        if (size_ % 64 != 0 && !words_.empty())
            words_.back() &= (1ull << (size_ % 64)) - 1;
    }

    size_t size_ = 0;
    std::vector<uint64_t> words_;
};

inline BitVec operator^(BitVec a, const BitVec &b) {
    a ^= b;
    return a;
}

} // namespace dpoq
