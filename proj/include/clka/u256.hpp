// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_U256_HPP
#define CLKA_U256_HPP

#include <array>
#include <cstdint>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "clka/errors.hpp"

namespace clka {

using u128 = unsigned __int128;

// Fixed-width 256-bit unsigned integer, little-endian 64-bit limbs.
// All arithmetic helpers below have operand-independent control flow;
// they are the building blocks for the constant-time field layer.
struct U256 {
    std::array<uint64_t, 4> w{};

    static U256 from_u64(uint64_t v) {
        U256 r;
        r.w[0] = v;
        return r;
    }

    // Big-endian bytes, at most 32 of them.
    static U256 from_be_bytes(std::span<const uint8_t> bytes) {
        if (bytes.size() > 32)
            throw Error(Errc::malformed_encoding, "integer wider than 256 bits");
        U256 r;
        for (size_t i = 0; i < bytes.size(); ++i) {
            const size_t bit = 8 * (bytes.size() - 1 - i);
            r.w[bit / 64] |= static_cast<uint64_t>(bytes[i]) << (bit % 64);
        }
        return r;
    }

    // Fixed-width big-endian output; value must fit (checked).
    void to_be_bytes(std::span<uint8_t> out) const {
        if (out.size() < 32 && bit_length() > 8 * out.size())
            throw Error(Errc::malformed_encoding, "value does not fit requested width");
        for (size_t i = 0; i < out.size(); ++i) {
            const size_t bit = 8 * (out.size() - 1 - i);
            out[i] = static_cast<uint8_t>(w[bit / 64] >> (bit % 64));
        }
    }

    static U256 from_hex(std::string_view hex) {
        U256 r;
        if (hex.size() > 64)
            throw Error(Errc::malformed_encoding, "hex wider than 256 bits");
        for (char c : hex) {
            uint64_t nib;
            if (c >= '0' && c <= '9')
                nib = static_cast<uint64_t>(c - '0');
            else if (c >= 'a' && c <= 'f')
                nib = static_cast<uint64_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                nib = static_cast<uint64_t>(c - 'A' + 10);
            else
                throw Error(Errc::malformed_encoding, "bad hex digit");
            uint64_t carry = nib;
            for (int i = 0; i < 4; ++i) {
                const uint64_t hi = r.w[i] >> 60;
                r.w[i] = (r.w[i] << 4) | carry;
                carry = hi;
            }
        }
        return r;
    }

    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        s.reserve(64);
        for (int i = 3; i >= 0; --i)
            for (int nib = 15; nib >= 0; --nib)
                s.push_back(digits[(w[i] >> (4 * nib)) & 0xF]);
        // trim leading zeros, keep at least one digit
        const size_t pos = s.find_first_not_of('0');
        return pos == std::string::npos ? "0" : s.substr(pos);
    }

    bool is_zero() const { return (w[0] | w[1] | w[2] | w[3]) == 0; }

    unsigned bit(unsigned i) const { return static_cast<unsigned>((w[i / 64] >> (i % 64)) & 1); }

    unsigned bit_length() const {
        for (int i = 3; i >= 0; --i)
            if (w[i] != 0)
                return static_cast<unsigned>(64 * i + 64 - __builtin_clzll(w[i]));
        return 0;
    }

    friend bool operator==(const U256& a, const U256& b) { return a.w == b.w; }
};

// out = a + b, returns carry.
inline uint64_t add_carry(const U256& a, const U256& b, U256& out) {
    uint64_t carry = 0;
    for (int i = 0; i < 4; ++i) {
        const u128 cur = static_cast<u128>(a.w[i]) + b.w[i] + carry;
        out.w[i] = static_cast<uint64_t>(cur);
        carry = static_cast<uint64_t>(cur >> 64);
    }
    return carry;
}

// out = a - b, returns borrow.
inline uint64_t sub_borrow(const U256& a, const U256& b, U256& out) {
    uint64_t borrow = 0;
    for (int i = 0; i < 4; ++i) {
        const u128 cur = static_cast<u128>(a.w[i]) - b.w[i] - borrow;
        out.w[i] = static_cast<uint64_t>(cur);
        borrow = static_cast<uint64_t>(cur >> 64) & 1;
    }
    return borrow;
}

// Schoolbook 256x256 -> 512, out is 8 little-endian limbs.
inline void mul_wide(const U256& a, const U256& b, uint64_t out[8]) {
    uint64_t t[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        uint64_t carry = 0;
        for (int j = 0; j < 4; ++j) {
            const u128 cur = static_cast<u128>(a.w[i]) * b.w[j] + t[i + j] + carry;
            t[i + j] = static_cast<uint64_t>(cur);
            carry = static_cast<uint64_t>(cur >> 64);
        }
        t[i + 4] = carry;
    }
    for (int i = 0; i < 8; ++i)
        out[i] = t[i];
}

// -1 / 0 / +1 comparison.
inline int cmp(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
        if (a.w[i] < b.w[i]) return -1;
        if (a.w[i] > b.w[i]) return 1;
    }
    return 0;
}

// ---- constant-time selection helpers (mask is all-ones or all-zeros) ----

inline uint64_t ct_mask_u64(bool b) { return 0 - static_cast<uint64_t>(b); }

inline uint64_t ct_is_zero_mask(const U256& a) {
    const uint64_t acc = a.w[0] | a.w[1] | a.w[2] | a.w[3];
    // (acc | -acc) has the sign bit set iff acc != 0
    return ~(0 - ((acc | (0 - acc)) >> 63));
}

// mask all-ones -> a, all-zeros -> b.
inline U256 ct_select(uint64_t mask, const U256& a, const U256& b) {
    U256 r;
    for (int i = 0; i < 4; ++i)
        r.w[i] = (a.w[i] & mask) | (b.w[i] & ~mask);
    return r;
}

inline void ct_swap(uint64_t mask, U256& a, U256& b) {
    for (int i = 0; i < 4; ++i) {
        const uint64_t d = (a.w[i] ^ b.w[i]) & mask;
        a.w[i] ^= d;
        b.w[i] ^= d;
    }
}

}  // namespace clka

#endif
