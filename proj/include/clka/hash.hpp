// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_HASH_HPP
#define CLKA_HASH_HPP

#include <array>
#include <string>
#include <string_view>

#include "clka/group.hpp"
#include "clka/sha256.hpp"

namespace clka {

inline constexpr unsigned kSessionKeyBits = 256;

// Domain-separation bytes; every h1 preimage starts with kDs1, every h2
// preimage with kDs2, so the two oracles can never collide on inputs.
inline constexpr uint8_t kDs1 = 0x01;
inline constexpr uint8_t kDs2 = 0x02;

// Party identity: raw bytes, 1..=255 of them, compared exactly.
class Identity {
  public:
    explicit Identity(std::string bytes);
    static Identity from_hex(std::string_view hex);

    const std::string& bytes() const { return m_bytes; }
    size_t size() const { return m_bytes.size(); }
    std::string to_hex() const;

    friend bool operator==(const Identity& a, const Identity& b) { return a.m_bytes == b.m_bytes; }
    friend bool operator!=(const Identity& a, const Identity& b) { return !(a == b); }
    friend bool operator<(const Identity& a, const Identity& b) { return a.m_bytes < b.m_bytes; }

  private:
    std::string m_bytes;
};

struct SessionKey {
    std::array<uint8_t, kSessionKeyBits / 8> bytes{};

    std::string to_hex() const;

    friend bool operator==(const SessionKey& a, const SessionKey& b) { return a.bytes == b.bytes; }
    friend bool operator!=(const SessionKey& a, const SessionKey& b) { return !(a == b); }
};

// H1: (identity, point) -> scalar in [1, q-1].
// Preimage: DS1 || u8(len(id)) || id || point(R) || u8(counter), counter
// starting at 0 and bumped only while the digest reduces to 0 mod q.
Scalar h1(const GroupParams& g, const Identity& id, const Point& r_point);

// H2: the session-key derivation, a straight k-bit digest of
// DS2 || u8(len(idA)) || idA || u8(len(idB)) || idB || T_A || T_B || K1 || K2.
SessionKey h2(const GroupParams& g, const Identity& id_a, const Identity& id_b, const Point& t_a,
              const Point& t_b, const Point& k1, const Point& k2);

// hex helpers shared by the directory format and the CLI
std::string to_hex(std::span<const uint8_t> bytes);
std::vector<uint8_t> from_hex(std::string_view hex);

}  // namespace clka

#endif
