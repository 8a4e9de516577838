// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include "clka/bench.hpp"

#include <algorithm>

#include "clka/errors.hpp"

namespace clka {

namespace {

OpCounts diff(const OpCounters& after, const OpCounters& before) {
    OpCounts d;
    d.scalar_muls = after.scalar_muls - before.scalar_muls;
    d.point_adds = after.point_adds - before.point_adds;
    d.hash_calls = after.hash_calls - before.hash_calls;
    d.modular_inversions = after.modular_inversions - before.modular_inversions;
    return d;
}

OpCounts combine(const OpCounts& a, const OpCounts& b) {
    OpCounts c;
    c.scalar_muls = a.scalar_muls + b.scalar_muls;
    c.point_adds = a.point_adds + b.point_adds;
    c.hash_calls = a.hash_calls + b.hash_calls;
    c.modular_inversions = a.modular_inversions + b.modular_inversions;
    c.wall_time = a.wall_time + b.wall_time;
    return c;
}

bool matches_expected(const OpCounts& c) {
    return c.scalar_muls == kExpectedScalarMuls && c.point_adds == kExpectedPointAdds &&
           c.hash_calls == kExpectedHashCalls && c.modular_inversions == kExpectedInversions;
}

double median_us(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n == 0 ? 0.0 : (n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]));
}

}  // namespace

CountedHandshake counted_handshake(const SystemParams& params, const PartyKeys& a,
                                   const PartyKeys& b, const PeerDirectory& directory,
                                   RandomSource& rng) {
    using clock = std::chrono::steady_clock;
    OpCounters& counters = op_counters();

    const OpCounters at_start = counters;
    const auto t0 = clock::now();
    auto [session_a, m1] = initiate(a, b.id, params, rng);
    const auto t1 = clock::now();
    const OpCounters after_initiate = counters;

    auto [session_b, m2, sk_b] = respond(b, m1, params, directory, rng);
    const auto t2 = clock::now();
    const OpCounters after_respond = counters;

    const SessionKey sk_a = finalize(session_a, m2, params, directory);
    const auto t3 = clock::now();
    const OpCounters at_end = counters;

    if (sk_a != sk_b)
        throw Error(Errc::invalid_state, "handshake key disagreement");

    OpCounts initiator = combine(diff(after_initiate, at_start), diff(at_end, after_respond));
    initiator.wall_time = (t1 - t0) + (t3 - t2);
    OpCounts responder = diff(after_respond, after_initiate);
    responder.wall_time = t2 - t1;
    return {sk_a, initiator, responder};
}

BenchReport bench(const SystemParams& params, size_t iterations, RandomSource& rng) {
    const GroupParams& g = params.group();

    // fixed honest pair; the per-iteration randomness is the ephemerals
    MasterKey master{random_scalar(g, rng)};
    SystemParams local_params{params.curve_id,
                              scalar_mul(g, master.s, g.generator), kSessionKeyBits};
    const Identity id_a("bench-initiator");
    const Identity id_b("bench-responder");
    const PartyKeys a = assemble_party(id_a, extract_partial(local_params, master, id_a, rng),
                                       set_secret_value(local_params, rng), local_params);
    const PartyKeys b = assemble_party(id_b, extract_partial(local_params, master, id_b, rng),
                                       set_secret_value(local_params, rng), local_params);
    PeerDirectory dir;
    dir.add(id_a, a.public_key);
    dir.add(id_b, b.public_key);

    BenchReport report;
    report.iterations = iterations;
    report.counts_stable = true;
    std::vector<double> init_us, resp_us, total_us;
    init_us.reserve(iterations);
    resp_us.reserve(iterations);
    total_us.reserve(iterations);

    for (size_t i = 0; i < iterations; ++i) {
        const CountedHandshake run = counted_handshake(local_params, a, b, dir, rng);
        if (!matches_expected(run.initiator) || !matches_expected(run.responder)) {
            // a count deviation is a regression, not a statistic
            report.counts_stable = false;
            throw Error(Errc::invalid_state,
                        "operation counts deviated from 4 mul / 3 add / 2 hash");
        }
        const double iu = std::chrono::duration<double, std::micro>(run.initiator.wall_time).count();
        const double ru = std::chrono::duration<double, std::micro>(run.responder.wall_time).count();
        init_us.push_back(iu);
        resp_us.push_back(ru);
        total_us.push_back(iu + ru);
    }

    auto mean = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v)
            s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    report.initiator_mean_us = mean(init_us);
    report.responder_mean_us = mean(resp_us);
    report.handshake_mean_us = mean(total_us);
    report.initiator_median_us = median_us(init_us);
    report.responder_median_us = median_us(resp_us);
    report.handshake_median_us = median_us(total_us);
    return report;
}

}  // namespace clka
