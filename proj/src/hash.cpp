// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include "clka/hash.hpp"

#include <stdexcept>

#include "clka/errors.hpp"

namespace clka {

Identity::Identity(std::string bytes) : m_bytes(std::move(bytes)) {
    if (m_bytes.empty())
        throw Error(Errc::malformed_encoding, "identity must be nonempty");
    if (m_bytes.size() > 255)
        throw Error(Errc::identity_too_long, "identity longer than 255 bytes");
}

Identity Identity::from_hex(std::string_view hex) {
    const auto raw = clka::from_hex(hex);
    return Identity(std::string(raw.begin(), raw.end()));
}

std::string Identity::to_hex() const {
    return clka::to_hex(std::span<const uint8_t>(
        reinterpret_cast<const uint8_t*>(m_bytes.data()), m_bytes.size()));
}

std::string SessionKey::to_hex() const { return clka::to_hex(bytes); }

namespace {

void append_identity(std::vector<uint8_t>& pre, const Identity& id) {
    pre.push_back(static_cast<uint8_t>(id.size()));
    pre.insert(pre.end(), id.bytes().begin(), id.bytes().end());
}

void append_point(std::vector<uint8_t>& pre, const GroupParams& g, const Point& p) {
    const auto enc = encode_point(g, p);
    pre.insert(pre.end(), enc.begin(), enc.end());
}

}  // namespace

Scalar h1(const GroupParams& g, const Identity& id, const Point& r_point) {
    op_counters().hash_calls++;
    std::vector<uint8_t> pre;
    pre.reserve(2 + id.size() + 1 + g.coord_bytes + 1);
    pre.push_back(kDs1);
    append_identity(pre, id);
    append_point(pre, g, r_point);
    for (unsigned counter = 0; counter < 256; ++counter) {
        std::vector<uint8_t> attempt = pre;
        attempt.push_back(static_cast<uint8_t>(counter));
        const auto digest = sha256(attempt);
        const U256 reduced = g.fq.reduce(U256::from_be_bytes(digest));
        if (!reduced.is_zero())
            return Scalar{reduced};
    }
    // chance per counter is 1/q; unreachable in practice
    throw std::logic_error("h1: counter space exhausted");
}

SessionKey h2(const GroupParams& g, const Identity& id_a, const Identity& id_b, const Point& t_a,
              const Point& t_b, const Point& k1, const Point& k2) {
    op_counters().hash_calls++;
    std::vector<uint8_t> pre;
    pre.reserve(3 + id_a.size() + id_b.size() + 4 * (1 + g.coord_bytes));
    pre.push_back(kDs2);
    append_identity(pre, id_a);
    append_identity(pre, id_b);
    append_point(pre, g, t_a);
    append_point(pre, g, t_b);
    append_point(pre, g, k1);
    append_point(pre, g, k2);
    SessionKey sk;
    sk.bytes = sha256(pre);
    return sk;
}

std::string to_hex(std::span<const uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(2 * bytes.size());
    for (uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

std::vector<uint8_t> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw Error(Errc::malformed_encoding, "odd-length hex string");
    auto nibble = [](char c) -> uint8_t {
        if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<uint8_t>(c - 'A' + 10);
        throw Error(Errc::malformed_encoding, "bad hex digit");
    };
    std::vector<uint8_t> out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    return out;
}

}  // namespace clka
