// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_RNG_HPP
#define CLKA_RNG_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <span>

namespace clka {

class RandomSource {
  public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<uint8_t> out) = 0;
};

// OS entropy (/dev/urandom).
class SystemRandom final : public RandomSource {
  public:
    void fill(std::span<uint8_t> out) override;
};

// Deterministic SHA-256 counter DRBG. Output depends only on the seed,
// so fixed-seed runs reproduce bit-for-bit across platforms.
class Drbg final : public RandomSource {
  public:
    explicit Drbg(uint64_t seed);
    explicit Drbg(std::span<const uint8_t> seed);

    void fill(std::span<uint8_t> out) override;

  private:
    std::array<uint8_t, 32> m_key{};
    uint64_t m_counter = 0;
};

// Honors CLKA_SEED (decimal u64) when set, otherwise system entropy.
std::unique_ptr<RandomSource> make_default_rng();

}  // namespace clka

#endif
