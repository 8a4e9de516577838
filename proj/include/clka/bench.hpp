// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_BENCH_HPP
#define CLKA_BENCH_HPP

#include <chrono>
#include <cstdint>

#include "clka/handshake.hpp"

namespace clka {

// Per-party cost of one key-agreement execution. Counts cover the
// handshake phase only (the ephemeral T = t*P included, one-time key setup
// and partial-key validation excluded). Scalar additions are free; the
// inversion counter tracks Z_q inversions, which this protocol never uses.
struct OpCounts {
    uint64_t scalar_muls = 0;
    uint64_t point_adds = 0;
    uint64_t hash_calls = 0;
    uint64_t modular_inversions = 0;
    std::chrono::nanoseconds wall_time{0};
};

// The expected per-party profile: 4 multiplications, 3 additions, 2 hashes.
inline constexpr uint64_t kExpectedScalarMuls = 4;
inline constexpr uint64_t kExpectedPointAdds = 3;
inline constexpr uint64_t kExpectedHashCalls = 2;
inline constexpr uint64_t kExpectedInversions = 0;

struct CountedHandshake {
    SessionKey key;
    OpCounts initiator;
    OpCounts responder;
};

// Full honest run through the counting instrumentation. Throws on any
// protocol failure or if the two sides disagree on the key.
CountedHandshake counted_handshake(const SystemParams& params, const PartyKeys& a,
                                   const PartyKeys& b, const PeerDirectory& directory,
                                   RandomSource& rng);

struct BenchReport {
    size_t iterations = 0;
    double initiator_mean_us = 0;
    double initiator_median_us = 0;
    double responder_mean_us = 0;
    double responder_median_us = 0;
    double handshake_mean_us = 0;
    double handshake_median_us = 0;
    bool counts_stable = false;  // every iteration matched the expected profile
};

BenchReport bench(const SystemParams& params, size_t iterations, RandomSource& rng);

}  // namespace clka

#endif
