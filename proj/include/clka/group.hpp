// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_GROUP_HPP
#define CLKA_GROUP_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "clka/field.hpp"
#include "clka/rng.hpp"
#include "clka/u256.hpp"

namespace clka {

enum class CurveId : uint8_t {
    p256 = 0x01,  // secp256r1, production
    toy = 0x02,   // 17-bit-order curve, brute-forceable oracles
};

// Affine point; the identity carries no coordinates. All Points crossing a
// module boundary are affine and canonical, so equality is memberwise.
struct Point {
    bool at_infinity = true;
    U256 x;
    U256 y;

    static Point infinity() { return Point{}; }
    static Point affine(const U256& x, const U256& y) { return Point{false, x, y}; }

    friend bool operator==(const Point& a, const Point& b) {
        if (a.at_infinity || b.at_infinity)
            return a.at_infinity == b.at_infinity;
        return a.x == b.x && a.y == b.y;
    }
};

// Element of Z_q, canonical in [0, q-1]. Secret scalars drawn for keys are
// never 0; 0 can occur in intermediate sums.
struct Scalar {
    U256 v;

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.v == b.v; }
};

struct GroupParams {
    CurveId id;
    const char* name;
    FieldCtx fp;   // coordinate field F_p
    FieldCtx fq;   // scalar field Z_q
    U256 coeff_a;  // canonical
    U256 coeff_b;
    U256 a_mont;   // cached Montgomery forms
    U256 b_mont;
    Point generator;
    U256 order;
    unsigned order_bits;
    unsigned cofactor;
    size_t coord_bytes;   // fixed x width on the wire
    size_t scalar_bytes;  // fixed scalar width on the wire
    bool brute_forceable;  // order small enough for the toy oracles
};

const GroupParams& curve(CurveId id);                    // throws unknown_curve
const GroupParams* curve_by_name(std::string_view name); // nullptr when absent

// Per-thread operation counters. scalar_muls/point_adds/modular_inversions
// count calls to the public group API; hash_calls is incremented by the
// hash layer. Internal field arithmetic (including the inversion that
// normalizes projective coordinates) is not a counted event.
struct OpCounters {
    uint64_t scalar_muls = 0;
    uint64_t point_adds = 0;
    uint64_t hash_calls = 0;
    uint64_t modular_inversions = 0;
};

OpCounters& op_counters();

// Group law; total on valid points, identity is the neutral element.
Point point_add(const GroupParams& g, const Point& p1, const Point& p2);
Point point_negate(const GroupParams& g, const Point& p);

// k*P via a fixed-length Montgomery ladder (bit count = order_bits of the
// curve, conditional swaps by masks). Requires k in [0, q].
Point scalar_mul(const GroupParams& g, const Scalar& k, const Point& p);

bool on_curve(const GroupParams& g, const Point& p);

// Compressed encoding: 1 tag byte (0x02 even y / 0x03 odd y) followed by x
// as fixed-width big-endian. The identity has no encoding.
std::vector<uint8_t> encode_point(const GroupParams& g, const Point& p);
Point decode_point(const GroupParams& g, std::span<const uint8_t> bytes);

std::vector<uint8_t> encode_scalar(const GroupParams& g, const Scalar& s);
Scalar decode_scalar(const GroupParams& g, std::span<const uint8_t> bytes);

// Z_q arithmetic for the protocol formulas. Scalar additions are not
// counted operations; scalar_inv is (the Table-1 T_inv column).
Scalar scalar_add(const GroupParams& g, const Scalar& a, const Scalar& b);
Scalar scalar_mul_mod(const GroupParams& g, const Scalar& a, const Scalar& b);
Scalar scalar_inv(const GroupParams& g, const Scalar& a);

// Uniform in [1, q-1] by rejection sampling.
Scalar random_scalar(const GroupParams& g, RandomSource& rng);

// Brute-force discrete log, baby-step giant-step; toy curve only.
Scalar toy_dlp(const GroupParams& g, const Point& base, const Point& target);

// Decision oracle: true iff target == ab*P, decided via toy_dlp.
bool toy_ddh(const GroupParams& g, const Point& a_p, const Point& b_p, const Point& c_p);

}  // namespace clka

#endif
