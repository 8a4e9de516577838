// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include "clka/rng.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "clka/errors.hpp"
#include "clka/sha256.hpp"

namespace clka {

std::array<uint8_t, 32> sha256(std::span<const uint8_t> data) {
    std::array<uint8_t, 32> out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != 32)
        throw std::runtime_error("SHA-256 failed");
    return out;
}

void SystemRandom::fill(std::span<uint8_t> out) {
    static thread_local FILE* urandom = nullptr;
    if (urandom == nullptr) {
        urandom = std::fopen("/dev/urandom", "rb");
        if (urandom == nullptr)
            throw Error(Errc::io_error, "cannot open /dev/urandom");
    }
    if (std::fread(out.data(), 1, out.size(), urandom) != out.size())
        throw Error(Errc::io_error, "short read from /dev/urandom");
}

Drbg::Drbg(uint64_t seed) {
    uint8_t buf[8];
    for (int i = 0; i < 8; ++i)
        buf[i] = static_cast<uint8_t>(seed >> (56 - 8 * i));
    *this = Drbg(std::span<const uint8_t>(buf, 8));
}

Drbg::Drbg(std::span<const uint8_t> seed) {
    std::vector<uint8_t> pre;
    const char* label = "clka-drbg-v1";
    pre.insert(pre.end(), label, label + std::strlen(label));
    pre.insert(pre.end(), seed.begin(), seed.end());
    m_key = sha256(pre);
    m_counter = 0;
}

void Drbg::fill(std::span<uint8_t> out) {
    size_t off = 0;
    while (off < out.size()) {
        uint8_t block_in[40];
        std::memcpy(block_in, m_key.data(), 32);
        for (int i = 0; i < 8; ++i)
            block_in[32 + i] = static_cast<uint8_t>(m_counter >> (56 - 8 * i));
        ++m_counter;
        const auto block = sha256(std::span<const uint8_t>(block_in, sizeof block_in));
        const size_t n = std::min<size_t>(32, out.size() - off);
        std::memcpy(out.data() + off, block.data(), n);
        off += n;
    }
}

std::unique_ptr<RandomSource> make_default_rng() {
    if (const char* seed = std::getenv("CLKA_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(seed, &end, 10);
        if (end != nullptr && *end == '\0')
            return std::make_unique<Drbg>(static_cast<uint64_t>(v));
        throw Error(Errc::io_error, "CLKA_SEED must be a decimal integer");
    }
    return std::make_unique<SystemRandom>();
}

}  // namespace clka
