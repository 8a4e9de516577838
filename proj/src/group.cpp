// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include "clka/group.hpp"

#include <cmath>
#include <unordered_map>

#include "clka/errors.hpp"

namespace clka {

namespace {

GroupParams make_p256() {
    GroupParams g;
    g.id = CurveId::p256;
    g.name = "p256";
    const U256 p = U256::from_hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff");
    g.fp = FieldCtx::create(p);
    g.coeff_a = U256::from_hex("ffffffff00000001000000000000000000000000fffffffffffffffffffffffc");
    g.coeff_b = U256::from_hex("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b");
    g.generator = Point::affine(
        U256::from_hex("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"),
        U256::from_hex("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"));
    g.order = U256::from_hex("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551");
    g.fq = FieldCtx::create(g.order);
    g.a_mont = g.fp.to_mont(g.coeff_a);
    g.b_mont = g.fp.to_mont(g.coeff_b);
    g.order_bits = 256;
    g.cofactor = 1;
    g.coord_bytes = 32;
    g.scalar_bytes = 32;
    g.brute_forceable = false;
    return g;
}

// y^2 = x^3 - 3x + 5 over F_131111; group order 131707 (prime), verified by
// exhaustive point counting. Small enough that the discrete-log and DDH
// oracles are exact searches.
GroupParams make_toy() {
    GroupParams g;
    g.id = CurveId::toy;
    g.name = "toy";
    const U256 p = U256::from_u64(131111);
    g.fp = FieldCtx::create(p);
    g.coeff_a = U256::from_u64(131108);
    g.coeff_b = U256::from_u64(5);
    g.generator = Point::affine(U256::from_u64(1), U256::from_u64(85964));
    g.order = U256::from_u64(131707);
    g.fq = FieldCtx::create(g.order);
    g.a_mont = g.fp.to_mont(g.coeff_a);
    g.b_mont = g.fp.to_mont(g.coeff_b);
    g.order_bits = 18;
    g.cofactor = 1;
    g.coord_bytes = 3;
    g.scalar_bytes = 3;
    g.brute_forceable = true;
    return g;
}

// Jacobian coordinates in the Montgomery domain; identity is Z == 0.
struct Jac {
    U256 X, Y, Z;
};

Jac jac_identity(const FieldCtx& f) { return {f.one_mont(), f.one_mont(), U256{}}; }

Jac jac_from_affine(const GroupParams& g, const Point& p) {
    if (p.at_infinity)
        return jac_identity(g.fp);
    return {g.fp.to_mont(p.x), g.fp.to_mont(p.y), g.fp.one_mont()};
}

Point jac_to_affine(const GroupParams& g, const Jac& j) {
    if (j.Z.is_zero())
        return Point::infinity();
    const FieldCtx& f = g.fp;
    const U256 zi = f.inv(j.Z);
    const U256 zi2 = f.sqr(zi);
    const U256 x = f.mul(j.X, zi2);
    const U256 y = f.mul(j.Y, f.mul(zi2, zi));
    return Point::affine(f.from_mont(x), f.from_mont(y));
}

// dbl-2007-bl, generic a. Total: doubling the identity or a 2-torsion
// point yields Z3 = 0.
Jac jac_dbl(const GroupParams& g, const Jac& p) {
    const FieldCtx& f = g.fp;
    const U256 xx = f.sqr(p.X);
    const U256 yy = f.sqr(p.Y);
    const U256 yyyy = f.sqr(yy);
    const U256 zz = f.sqr(p.Z);
    U256 s = f.add(p.X, yy);
    s = f.sqr(s);
    s = f.sub(s, xx);
    s = f.sub(s, yyyy);
    s = f.add(s, s);
    U256 m = f.add(f.add(xx, xx), xx);
    m = f.add(m, f.mul(g.a_mont, f.sqr(zz)));
    const U256 x3 = f.sub(f.sqr(m), f.add(s, s));
    U256 y8 = f.add(yyyy, yyyy);
    y8 = f.add(y8, y8);
    y8 = f.add(y8, y8);
    const U256 y3 = f.sub(f.mul(m, f.sub(s, x3)), y8);
    U256 z3 = f.add(p.Y, p.Z);
    z3 = f.sub(f.sub(f.sqr(z3), yy), zz);
    return {x3, y3, z3};
}

struct AddParts {
    Jac general;           // add-1998-cmo result, garbage in the special cases
    uint64_t p_inf;        // masks, all-ones when the condition holds
    uint64_t q_inf;
    uint64_t same_x;
    uint64_t same_y;
};

AddParts jac_add_core(const GroupParams& g, const Jac& p, const Jac& q) {
    const FieldCtx& f = g.fp;
    const U256 z1z1 = f.sqr(p.Z);
    const U256 z2z2 = f.sqr(q.Z);
    const U256 u1 = f.mul(p.X, z2z2);
    const U256 u2 = f.mul(q.X, z1z1);
    const U256 s1 = f.mul(p.Y, f.mul(q.Z, z2z2));
    const U256 s2 = f.mul(q.Y, f.mul(p.Z, z1z1));
    const U256 h = f.sub(u2, u1);
    const U256 r = f.sub(s2, s1);
    const U256 h2 = f.sqr(h);
    const U256 h3 = f.mul(h, h2);
    const U256 u1h2 = f.mul(u1, h2);
    U256 x3 = f.sqr(r);
    x3 = f.sub(x3, h3);
    x3 = f.sub(x3, f.add(u1h2, u1h2));
    const U256 y3 = f.sub(f.mul(r, f.sub(u1h2, x3)), f.mul(s1, h3));
    const U256 z3 = f.mul(f.mul(p.Z, q.Z), h);
    AddParts out;
    out.general = {x3, y3, z3};
    out.p_inf = ct_is_zero_mask(p.Z);
    out.q_inf = ct_is_zero_mask(q.Z);
    out.same_x = ct_is_zero_mask(h);
    out.same_y = ct_is_zero_mask(r);
    return out;
}

Jac jac_select(uint64_t mask, const Jac& a, const Jac& b) {
    return {ct_select(mask, a.X, b.X), ct_select(mask, a.Y, b.Y), ct_select(mask, a.Z, b.Z)};
}

// Complete addition: fixed operation trace, all four special cases folded
// in by masked selects (identity operands, doubling, inverse pair).
Jac jac_add_complete(const GroupParams& g, const Jac& p, const Jac& q) {
    const AddParts parts = jac_add_core(g, p, q);
    const Jac dbl = jac_dbl(g, p);
    const uint64_t finite = ~parts.p_inf & ~parts.q_inf;
    Jac r = parts.general;
    r = jac_select(finite & parts.same_x & parts.same_y, dbl, r);
    r = jac_select(finite & parts.same_x & ~parts.same_y, jac_identity(g.fp), r);
    r = jac_select(parts.q_inf, p, r);
    r = jac_select(parts.p_inf, q, r);
    return r;
}

// Ladder step addition: the two operands always differ by the ladder base,
// so the doubling case cannot occur and its formula is skipped.
Jac jac_add_ladder(const GroupParams& g, const Jac& p, const Jac& q) {
    const AddParts parts = jac_add_core(g, p, q);
    const uint64_t finite = ~parts.p_inf & ~parts.q_inf;
    Jac r = parts.general;
    r = jac_select(finite & parts.same_x & ~parts.same_y, jac_identity(g.fp), r);
    r = jac_select(parts.q_inf, p, r);
    r = jac_select(parts.p_inf, q, r);
    return r;
}

void jac_cswap(uint64_t mask, Jac& a, Jac& b) {
    ct_swap(mask, a.X, b.X);
    ct_swap(mask, a.Y, b.Y);
    ct_swap(mask, a.Z, b.Z);
}

uint32_t low_u32(const U256& v) { return static_cast<uint32_t>(v.w[0]); }

}  // namespace

const GroupParams& curve(CurveId id) {
    static const GroupParams p256 = make_p256();
    static const GroupParams toy = make_toy();
    switch (id) {
        case CurveId::p256:
            return p256;
        case CurveId::toy:
            return toy;
    }
    throw Error(Errc::unknown_curve, "unregistered curve id");
}

const GroupParams* curve_by_name(std::string_view name) {
    if (name == "p256")
        return &curve(CurveId::p256);
    if (name == "toy")
        return &curve(CurveId::toy);
    return nullptr;
}

OpCounters& op_counters() {
    thread_local OpCounters counters;
    return counters;
}

bool on_curve(const GroupParams& g, const Point& p) {
    if (p.at_infinity)
        return true;
    if (cmp(p.x, g.fp.modulus()) >= 0 || cmp(p.y, g.fp.modulus()) >= 0)
        return false;
    const FieldCtx& f = g.fp;
    const U256 x = f.to_mont(p.x);
    const U256 y = f.to_mont(p.y);
    const U256 lhs = f.sqr(y);
    U256 rhs = f.mul(f.sqr(x), x);
    rhs = f.add(rhs, f.mul(g.a_mont, x));
    rhs = f.add(rhs, g.b_mont);
    return lhs == rhs;
}

Point point_add(const GroupParams& g, const Point& p1, const Point& p2) {
    op_counters().point_adds++;
    return jac_to_affine(g, jac_add_complete(g, jac_from_affine(g, p1), jac_from_affine(g, p2)));
}

Point point_negate(const GroupParams& g, const Point& p) {
    if (p.at_infinity)
        return p;
    U256 ny;
    sub_borrow(g.fp.modulus(), p.y, ny);
    if (p.y.is_zero())
        ny = U256{};
    return Point::affine(p.x, ny);
}

Point scalar_mul(const GroupParams& g, const Scalar& k, const Point& p) {
    op_counters().scalar_muls++;
    Jac r0 = jac_identity(g.fp);
    Jac r1 = jac_from_affine(g, p);
    uint64_t swap = 0;
    for (int i = static_cast<int>(g.order_bits) - 1; i >= 0; --i) {
        const uint64_t bit = ct_mask_u64(k.v.bit(static_cast<unsigned>(i)) != 0);
        jac_cswap(swap ^ bit, r0, r1);
        swap = bit;
        r1 = jac_add_ladder(g, r0, r1);
        r0 = jac_dbl(g, r0);
    }
    jac_cswap(swap, r0, r1);
    return jac_to_affine(g, r0);
}

std::vector<uint8_t> encode_point(const GroupParams& g, const Point& p) {
    if (p.at_infinity)
        throw Error(Errc::identity_rejected, "identity has no wire encoding");
    std::vector<uint8_t> out(1 + g.coord_bytes);
    out[0] = (p.y.bit(0) == 0) ? 0x02 : 0x03;
    p.x.to_be_bytes(std::span<uint8_t>(out).subspan(1));
    return out;
}

Point decode_point(const GroupParams& g, std::span<const uint8_t> bytes) {
    if (bytes.size() != 1 + g.coord_bytes)
        throw Error(Errc::malformed_encoding, "wrong point length");
    const uint8_t tag = bytes[0];
    if (tag != 0x02 && tag != 0x03)
        throw Error(Errc::malformed_encoding, "bad compression tag");
    const U256 x = U256::from_be_bytes(bytes.subspan(1));
    if (cmp(x, g.fp.modulus()) >= 0)
        throw Error(Errc::malformed_encoding, "x out of field range");
    const FieldCtx& f = g.fp;
    const U256 xm = f.to_mont(x);
    U256 rhs = f.mul(f.sqr(xm), xm);
    rhs = f.add(rhs, f.mul(g.a_mont, xm));
    rhs = f.add(rhs, g.b_mont);
    const auto ym = f.sqrt(rhs);
    if (!ym)
        throw Error(Errc::not_on_curve, "x has no curve point");
    U256 y = f.from_mont(*ym);
    if (y.is_zero() && tag == 0x03)
        throw Error(Errc::not_on_curve, "no odd square root of zero");
    const bool want_odd = (tag == 0x03);
    if ((y.bit(0) != 0) != want_odd) {
        U256 flipped;
        sub_borrow(f.modulus(), y, flipped);
        y = flipped;
    }
    const Point p = Point::affine(x, y);
    if (g.cofactor != 1) {
        if (!(scalar_mul(g, Scalar{g.order}, p) == Point::infinity()))
            throw Error(Errc::not_in_subgroup, "point not in prime-order subgroup");
    }
    return p;
}

std::vector<uint8_t> encode_scalar(const GroupParams& g, const Scalar& s) {
    std::vector<uint8_t> out(g.scalar_bytes);
    s.v.to_be_bytes(out);
    return out;
}

Scalar decode_scalar(const GroupParams& g, std::span<const uint8_t> bytes) {
    if (bytes.size() != g.scalar_bytes)
        throw Error(Errc::malformed_encoding, "wrong scalar length");
    const U256 v = U256::from_be_bytes(bytes);
    if (cmp(v, g.order) >= 0)
        throw Error(Errc::malformed_encoding, "scalar not below group order");
    return Scalar{v};
}

Scalar scalar_add(const GroupParams& g, const Scalar& a, const Scalar& b) {
    return Scalar{g.fq.add(a.v, b.v)};
}

Scalar scalar_mul_mod(const GroupParams& g, const Scalar& a, const Scalar& b) {
    const FieldCtx& f = g.fq;
    return Scalar{f.from_mont(f.mul(f.to_mont(a.v), f.to_mont(b.v)))};
}

Scalar scalar_inv(const GroupParams& g, const Scalar& a) {
    if (a.v.is_zero())
        throw Error(Errc::no_solution, "zero has no inverse");
    op_counters().modular_inversions++;
    const FieldCtx& f = g.fq;
    return Scalar{f.from_mont(f.inv(f.to_mont(a.v)))};
}

Scalar random_scalar(const GroupParams& g, RandomSource& rng) {
    std::vector<uint8_t> buf(g.scalar_bytes);
    const unsigned excess = static_cast<unsigned>(8 * g.scalar_bytes) - g.order_bits;
    for (;;) {
        rng.fill(buf);
        buf[0] &= static_cast<uint8_t>(0xFF >> excess);
        const U256 v = U256::from_be_bytes(buf);
        if (!v.is_zero() && cmp(v, g.order) < 0)
            return Scalar{v};
    }
}

namespace {

// Batch-normalize Jacobian points sharing one inversion (Montgomery's trick).
std::vector<Point> batch_to_affine(const GroupParams& g, const std::vector<Jac>& pts) {
    const FieldCtx& f = g.fp;
    const size_t n = pts.size();
    std::vector<Point> out(n);
    std::vector<U256> prefix(n);
    U256 acc = f.one_mont();
    for (size_t i = 0; i < n; ++i) {
        prefix[i] = acc;
        if (!pts[i].Z.is_zero())
            acc = f.mul(acc, pts[i].Z);
    }
    U256 inv_acc = f.inv(acc);
    for (size_t i = n; i-- > 0;) {
        if (pts[i].Z.is_zero()) {
            out[i] = Point::infinity();
            continue;
        }
        const U256 zi = f.mul(inv_acc, prefix[i]);
        inv_acc = f.mul(inv_acc, pts[i].Z);
        const U256 zi2 = f.sqr(zi);
        out[i] = Point::affine(f.from_mont(f.mul(pts[i].X, zi2)),
                               f.from_mont(f.mul(pts[i].Y, f.mul(zi2, zi))));
    }
    return out;
}

uint64_t point_key(const Point& p) {
    // On-curve points are uniquely keyed by (x, parity of y).
    return (static_cast<uint64_t>(low_u32(p.x)) << 1) | p.y.bit(0);
}

}  // namespace

Scalar toy_dlp(const GroupParams& g, const Point& base, const Point& target) {
    if (!g.brute_forceable)
        throw Error(Errc::oracle_unavailable, "discrete-log oracle needs a brute-forceable curve");
    if (target.at_infinity)
        return Scalar{U256{}};
    if (base.at_infinity)
        throw Error(Errc::no_solution, "target not a multiple of the identity");

    const uint64_t q = g.order.w[0];
    const uint64_t m = static_cast<uint64_t>(std::ceil(std::sqrt(static_cast<double>(q))));

    // baby steps: j*base for j in [0, m)
    std::vector<Jac> baby(m);
    Jac acc = jac_identity(g.fp);
    const Jac base_j = jac_from_affine(g, base);
    for (uint64_t j = 0; j < m; ++j) {
        baby[j] = acc;
        acc = jac_add_complete(g, acc, base_j);
    }
    const std::vector<Point> baby_affine = batch_to_affine(g, baby);
    std::unordered_map<uint64_t, uint64_t> table;
    table.reserve(m);
    for (uint64_t j = 0; j < m; ++j)
        if (!baby_affine[j].at_infinity)
            table.emplace(point_key(baby_affine[j]), j);

    // giant steps: target - i*(m*base)
    const Point stride = scalar_mul(g, Scalar{U256::from_u64(m)}, base);
    const Jac neg_stride = jac_from_affine(g, point_negate(g, stride));
    Jac giant = jac_from_affine(g, target);
    std::vector<Jac> giants;
    giants.reserve(m + 1);
    for (uint64_t i = 0; i <= m; ++i) {
        giants.push_back(giant);
        giant = jac_add_complete(g, giant, neg_stride);
    }
    const std::vector<Point> giants_affine = batch_to_affine(g, giants);
    for (uint64_t i = 0; i <= m; ++i) {
        const Point& cand = giants_affine[i];
        uint64_t k = 0;
        if (cand.at_infinity) {
            k = (i * m) % q;
        } else {
            const auto it = table.find(point_key(cand));
            if (it == table.end())
                continue;
            k = (i * m + it->second) % q;
        }
        const Scalar result{U256::from_u64(k)};
        // guards against key collisions from off-curve inputs
        if (scalar_mul(g, result, base) == target)
            return result;
    }
    throw Error(Errc::no_solution, "target not in the group generated by base");
}

bool toy_ddh(const GroupParams& g, const Point& a_p, const Point& b_p, const Point& c_p) {
    if (!g.brute_forceable)
        throw Error(Errc::oracle_unavailable, "DDH oracle needs a brute-forceable curve");
    const Scalar a = toy_dlp(g, g.generator, a_p);
    const Scalar b = toy_dlp(g, g.generator, b_p);
    const Scalar c = toy_dlp(g, g.generator, c_p);
    return scalar_mul_mod(g, a, b) == c;
}

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::malformed_encoding: return "MalformedEncoding";
        case Errc::not_on_curve: return "NotOnCurve";
        case Errc::not_in_subgroup: return "NotInSubgroup";
        case Errc::identity_rejected: return "IdentityRejected";
        case Errc::unknown_curve: return "UnknownCurve";
        case Errc::oracle_unavailable: return "OracleUnavailable";
        case Errc::no_solution: return "NoSolution";
        case Errc::invalid_partial_key: return "InvalidPartialKey";
        case Errc::invalid_key_file: return "InvalidKeyFile";
        case Errc::self_session: return "SelfSession";
        case Errc::malformed_message: return "MalformedMessage";
        case Errc::unknown_peer: return "UnknownPeer";
        case Errc::degenerate_point: return "DegeneratePoint";
        case Errc::peer_mismatch: return "PeerMismatch";
        case Errc::invalid_state: return "InvalidState";
        case Errc::identity_too_long: return "IdentityTooLong";
        case Errc::bad_version: return "BadVersion";
        case Errc::bad_type: return "BadType";
        case Errc::truncated_frame: return "TruncatedFrame";
        case Errc::trailing_bytes: return "TrailingBytes";
        case Errc::duplicate_identity: return "DuplicateIdentity";
        case Errc::unknown_party: return "UnknownParty";
        case Errc::unknown_session: return "UnknownSession";
        case Errc::not_fresh: return "NotFresh";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

}  // namespace clka
