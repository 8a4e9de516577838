// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_FIELD_HPP
#define CLKA_FIELD_HPP

#include <optional>

#include "clka/u256.hpp"

namespace clka {

// Arithmetic modulo an odd prime up to 256 bits, Montgomery representation.
// Values passed to mul/add/sub/pow/inv/sqrt are in the Montgomery domain
// unless the method name says otherwise. Every operation runs a fixed
// sequence of limb operations regardless of operand values.
class FieldCtx {
  public:
    FieldCtx() = default;

    static FieldCtx create(const U256& modulus) {
        FieldCtx f;
        f.m_mod = modulus;
        f.m_bits = modulus.bit_length();
        // n0 = -modulus^{-1} mod 2^64, Newton iteration (modulus odd)
        uint64_t inv = 1;
        for (int i = 0; i < 6; ++i)
            inv *= 2 - modulus.w[0] * inv;
        f.m_n0 = ~inv + 1;
        // one_m = 2^256 mod n via 256 modular doublings of 1,
        // r2 = 2^512 mod n via 256 more
        U256 r = U256::from_u64(1);
        for (int i = 0; i < 256; ++i)
            r = f.add(r, r);
        f.m_one = r;
        for (int i = 0; i < 256; ++i)
            r = f.add(r, r);
        f.m_r2 = r;
        return f;
    }

    const U256& modulus() const { return m_mod; }
    unsigned bits() const { return m_bits; }
    const U256& one_mont() const { return m_one; }

    U256 add(const U256& a, const U256& b) const {
        U256 s;
        const uint64_t carry = add_carry(a, b, s);
        U256 d;
        const uint64_t borrow = sub_borrow(s, m_mod, d);
        const uint64_t take = ct_mask_u64(carry != 0 || borrow == 0);
        return ct_select(take, d, s);
    }

    U256 sub(const U256& a, const U256& b) const {
        U256 d;
        const uint64_t borrow = sub_borrow(a, b, d);
        U256 f;
        add_carry(d, m_mod, f);
        return ct_select(ct_mask_u64(borrow != 0), f, d);
    }

    U256 neg(const U256& a) const {
        U256 d;
        sub_borrow(m_mod, a, d);
        return ct_select(ct_is_zero_mask(a), a, d);
    }

    // REDC of a 512-bit product; requires T < modulus * 2^256.
    U256 redc(const uint64_t T[8]) const {
        uint64_t t[9];
        for (int i = 0; i < 8; ++i)
            t[i] = T[i];
        t[8] = 0;
        for (int i = 0; i < 4; ++i) {
            const uint64_t m = t[i] * m_n0;
            uint64_t carry = 0;
            for (int j = 0; j < 4; ++j) {
                const u128 cur = static_cast<u128>(m) * m_mod.w[j] + t[i + j] + carry;
                t[i + j] = static_cast<uint64_t>(cur);
                carry = static_cast<uint64_t>(cur >> 64);
            }
            for (int k = i + 4; k < 9; ++k) {
                const u128 cur = static_cast<u128>(t[k]) + carry;
                t[k] = static_cast<uint64_t>(cur);
                carry = static_cast<uint64_t>(cur >> 64);
            }
        }
        U256 r{{t[4], t[5], t[6], t[7]}};
        U256 d;
        const uint64_t borrow = sub_borrow(r, m_mod, d);
        const uint64_t take = ct_mask_u64(t[8] != 0 || borrow == 0);
        return ct_select(take, d, r);
    }

    U256 mul(const U256& a, const U256& b) const {
        uint64_t wide[8];
        mul_wide(a, b, wide);
        return redc(wide);
    }

    U256 sqr(const U256& a) const { return mul(a, a); }

    // any 256-bit value -> Montgomery domain
    U256 to_mont(const U256& plain) const { return mul(plain, m_r2); }

    U256 from_mont(const U256& m) const {
        uint64_t wide[8] = {m.w[0], m.w[1], m.w[2], m.w[3], 0, 0, 0, 0};
        return redc(wide);
    }

    // canonical residue of an arbitrary 256-bit value
    U256 reduce(const U256& plain) const { return from_mont(to_mont(plain)); }

    // exponent is public; square-and-multiply over its bit length
    U256 pow(const U256& base_m, const U256& exp) const {
        U256 acc = m_one;
        const unsigned nbits = exp.bit_length();
        for (int i = static_cast<int>(nbits) - 1; i >= 0; --i) {
            acc = sqr(acc);
            if (exp.bit(static_cast<unsigned>(i)))
                acc = mul(acc, base_m);
        }
        return acc;
    }

    U256 inv(const U256& a_m) const {
        U256 e;
        sub_borrow(m_mod, U256::from_u64(2), e);
        return pow(a_m, e);
    }

    // modulus must be 3 mod 4 (true for both registry curves)
    std::optional<U256> sqrt(const U256& a_m) const {
        // exponent (modulus + 1) / 4
        U256 e;
        add_carry(m_mod, U256::from_u64(1), e);
        for (int s = 0; s < 2; ++s) {
            e.w[0] = (e.w[0] >> 1) | (e.w[1] << 63);
            e.w[1] = (e.w[1] >> 1) | (e.w[2] << 63);
            e.w[2] = (e.w[2] >> 1) | (e.w[3] << 63);
            e.w[3] >>= 1;
        }
        const U256 r = pow(a_m, e);
        if (!(sqr(r) == a_m))
            return std::nullopt;
        return r;
    }

  private:
    U256 m_mod;
    U256 m_r2;
    U256 m_one;
    uint64_t m_n0 = 0;
    unsigned m_bits = 0;
};

}  // namespace clka

#endif
