// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <doctest.h>

#include "clka/bench.hpp"
#include "clka/errors.hpp"
#include "clka/rng.hpp"

using namespace clka;

namespace {

struct Pair {
    SystemParams params;
    PartyKeys a;
    PartyKeys b;
    PeerDirectory dir;
};

Pair make_pair(CurveId id, RandomSource& rng) {
    auto [params, master] = setup(id, rng);
    const Identity ia("alice"), ib("bob");
    PartyKeys a = assemble_party(ia, extract_partial(params, master, ia, rng),
                                 set_secret_value(params, rng), params);
    PartyKeys b = assemble_party(ib, extract_partial(params, master, ib, rng),
                                 set_secret_value(params, rng), params);
    PeerDirectory dir;
    dir.add(ia, a.public_key);
    dir.add(ib, b.public_key);
    return {params, std::move(a), std::move(b), std::move(dir)};
}

}  // namespace

TEST_CASE("counted handshake reports 4 mul / 3 add / 2 hash / 0 inv per party") {
    for (const CurveId id : {CurveId::toy, CurveId::p256}) {
        Drbg rng(600);
        Pair p = make_pair(id, rng);
        const CountedHandshake run = counted_handshake(p.params, p.a, p.b, p.dir, rng);

        CHECK(run.initiator.scalar_muls == 4);
        CHECK(run.initiator.point_adds == 3);
        CHECK(run.initiator.hash_calls == 2);
        CHECK(run.initiator.modular_inversions == 0);

        CHECK(run.responder.scalar_muls == 4);
        CHECK(run.responder.point_adds == 3);
        CHECK(run.responder.hash_calls == 2);
        CHECK(run.responder.modular_inversions == 0);

        CHECK(run.initiator.wall_time.count() > 0);
        CHECK(run.responder.wall_time.count() > 0);
    }
}

TEST_CASE("instrumentation changes no computed value") {
    Drbg rng1(601), rng2(601);
    Pair p = make_pair(CurveId::toy, rng1);
    Pair q = make_pair(CurveId::toy, rng2);

    // same seeds: the uncounted run and the counted run must agree
    Drbg hs1(77), hs2(77);
    auto [sa, m1] = initiate(p.a, p.b.id, p.params, hs1);
    auto [sb, m2, sk_b] = respond(p.b, m1, p.params, p.dir, hs1);
    const SessionKey plain = finalize(sa, m2, p.params, p.dir);
    CHECK(plain == sk_b);

    const CountedHandshake counted = counted_handshake(q.params, q.a, q.b, q.dir, hs2);
    CHECK(counted.key == plain);
}

TEST_CASE("counts hold over repeated runs") {
    Drbg rng(602);
    Pair p = make_pair(CurveId::toy, rng);
    for (int i = 0; i < 1000; ++i) {
        const CountedHandshake run = counted_handshake(p.params, p.a, p.b, p.dir, rng);
        REQUIRE(run.initiator.scalar_muls == 4);
        REQUIRE(run.responder.scalar_muls == 4);
        REQUIRE(run.initiator.point_adds == 3);
        REQUIRE(run.responder.point_adds == 3);
        REQUIRE(run.initiator.hash_calls == 2);
        REQUIRE(run.responder.hash_calls == 2);
        REQUIRE(run.initiator.modular_inversions == 0);
        REQUIRE(run.responder.modular_inversions == 0);
    }
}

TEST_CASE("bench report covers both roles and asserts stable counts") {
    Drbg rng(603);
    const SystemParams params{CurveId::toy, curve(CurveId::toy).generator, 256};
    const BenchReport rep = bench(params, 50, rng);
    CHECK(rep.iterations == 50);
    CHECK(rep.counts_stable);
    CHECK(rep.initiator_mean_us > 0);
    CHECK(rep.initiator_median_us > 0);
    CHECK(rep.responder_mean_us > 0);
    CHECK(rep.responder_median_us > 0);
    CHECK(rep.handshake_mean_us >= rep.initiator_mean_us);
}

TEST_CASE("toy bench runs at least 10x faster than production") {
    Drbg rng(604);
    const SystemParams toy_params{CurveId::toy, curve(CurveId::toy).generator, 256};
    const SystemParams prod_params{CurveId::p256, curve(CurveId::p256).generator, 256};
    const BenchReport toy_rep = bench(toy_params, 40, rng);
    const BenchReport prod_rep = bench(prod_params, 40, rng);
    CHECK(prod_rep.handshake_median_us >= 10.0 * toy_rep.handshake_median_us);
}
