// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_SHA256_HPP
#define CLKA_SHA256_HPP

#include <array>
#include <cstdint>
#include <span>

namespace clka {

// The one hash function of the build. Both random oracles and the DRBG
// are instantiated from it.
inline constexpr const char* kHashFunctionName = "SHA-256";

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data);

}  // namespace clka

#endif
