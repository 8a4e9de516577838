// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <set>
#include <vector>

#include "clka/errors.hpp"
#include "clka/handshake.hpp"
#include "clka/rng.hpp"

using namespace clka;

namespace {

struct Fixture {
    SystemParams params;
    MasterKey master;
    PeerDirectory dir;
    PartyKeys alice;
    PartyKeys bob;

    explicit Fixture(RandomSource& rng, CurveId id = CurveId::toy)
        : params{id, Point::infinity(), 256},
          master{Scalar{}},
          alice(make(id, rng, "alice")),
          bob(make(id, rng, "bob")) {}

    // two-phase init so members can be built in order
    PartyKeys make(CurveId id, RandomSource& rng, const char* name) {
        if (params.kgc_public.at_infinity) {
            auto [p, m] = setup(id, rng);
            params = p;
            master = m;
        }
        const Identity who(name);
        PartyKeys k = assemble_party(who, extract_partial(params, master, who, rng),
                                     set_secret_value(params, rng), params);
        dir.add(who, k.public_key);
        return k;
    }
};

}  // namespace

TEST_CASE("honest run agrees bit-for-bit on both curves") {
    for (const CurveId id : {CurveId::toy, CurveId::p256}) {
        Drbg rng(200);
        Fixture f(rng, id);
        auto [session_a, m1] = initiate(f.alice, f.bob.id, f.params, rng);
        CHECK(session_a.state == SessionState::created);
        CHECK(!session_a.session_key.has_value());
        CHECK(m1.t_point == scalar_mul(f.params.group(), session_a.ephemeral,
                                       f.params.group().generator));

        auto [session_b, m2, sk_b] = respond(f.bob, m1, f.params, f.dir, rng);
        CHECK(session_b.state == SessionState::accepted);
        CHECK(session_b.session_key.has_value());

        const SessionKey sk_a = finalize(session_a, m2, f.params, f.dir);
        CHECK(session_a.state == SessionState::accepted);
        CHECK(sk_a == sk_b);
        CHECK(session_a.sid == session_b.sid);
        CHECK(session_a.pid == session_b.pid);
        CHECK(session_a.pid.first == f.alice.id);
    }
}

TEST_CASE("derive_shared role formulas meet in the middle") {
    Drbg rng(201);
    Fixture f(rng);
    const GroupParams& g = f.params.group();
    for (int i = 0; i < 1000; ++i) {
        const Scalar ta = random_scalar(g, rng);
        const Scalar tb = random_scalar(g, rng);
        const Point Ta = scalar_mul(g, ta, g.generator);
        const Point Tb = scalar_mul(g, tb, g.generator);
        const auto [k1_a, k2_a] =
            derive_shared(Role::initiator, f.alice, ta, f.bob.id, f.bob.public_key,
                          f.bob.partial.r_point, Tb, f.params);
        const auto [k1_b, k2_b] =
            derive_shared(Role::responder, f.bob, tb, f.alice.id, f.alice.public_key,
                          f.alice.partial.r_point, Ta, f.params);
        CHECK(k1_a == k1_b);
        CHECK(k2_a == k2_b);
    }
}

TEST_CASE("shared points match the scalar identities via the DLP oracle") {
    Drbg rng(202);
    Fixture f(rng);
    const GroupParams& g = f.params.group();
    for (int i = 0; i < 20; ++i) {
        const Scalar ta = random_scalar(g, rng);
        const Scalar tb = random_scalar(g, rng);
        const Point Tb = scalar_mul(g, tb, g.generator);
        const auto [k1, k2] =
            derive_shared(Role::initiator, f.alice, ta, f.bob.id, f.bob.public_key,
                          f.bob.partial.r_point, Tb, f.params);
        // recover every secret through the oracle and recompute
        const Scalar xa = toy_dlp(g, g.generator, f.alice.public_key);
        const Scalar xb = toy_dlp(g, g.generator, f.bob.public_key);
        const Scalar sa = f.alice.partial.s_i;
        const Scalar sb = f.bob.partial.s_i;
        const Scalar u = scalar_add(g, scalar_add(g, xa, sa), ta);
        CHECK(k1 == scalar_mul(g, scalar_mul_mod(g, u, scalar_add(g, xb, sb)), g.generator));
        CHECK(k2 == scalar_mul(g, scalar_mul_mod(g, u, scalar_add(g, tb, sb)), g.generator));
    }
}

TEST_CASE("self-session refused") {
    Drbg rng(203);
    Fixture f(rng);
    CHECK_THROWS_WITH_AS(initiate(f.alice, f.alice.id, f.params, rng),
                         doctest::Contains("SelfSession"), Error);
    auto [session_a, m1] = initiate(f.alice, f.bob.id, f.params, rng);
    CHECK_THROWS_WITH_AS(respond(f.alice, m1, f.params, f.dir, rng),
                         doctest::Contains("SelfSession"), Error);
}

TEST_CASE("two initiations never share an ephemeral") {
    Drbg rng(204);
    Fixture f(rng);
    auto [s1, m1a] = initiate(f.alice, f.bob.id, f.params, rng);
    auto [s2, m1b] = initiate(f.alice, f.bob.id, f.params, rng);
    CHECK(!(m1a.t_point == m1b.t_point));
    CHECK(!(s1.ephemeral == s2.ephemeral));
}

TEST_CASE("responder rejects malformed and unknown-peer messages") {
    Drbg rng(205);
    Fixture f(rng);
    auto [session_a, m1] = initiate(f.alice, f.bob.id, f.params, rng);

    HandshakeMessage off = m1;
    off.t_point = Point::affine(U256::from_u64(17), U256::from_u64(29));
    CHECK_THROWS_WITH_AS(respond(f.bob, off, f.params, f.dir, rng),
                         doctest::Contains("MalformedMessage"), Error);

    HandshakeMessage ident = m1;
    ident.r_point = Point::infinity();
    CHECK_THROWS_WITH_AS(respond(f.bob, ident, f.params, f.dir, rng),
                         doctest::Contains("MalformedMessage"), Error);

    HandshakeMessage stranger = m1;
    stranger.sender_id = Identity("mallory");
    CHECK_THROWS_WITH_AS(respond(f.bob, stranger, f.params, f.dir, rng),
                         doctest::Contains("UnknownPeer"), Error);
}

TEST_CASE("finalize state machine rules") {
    Drbg rng(206);
    Fixture f(rng);
    auto [session_a, m1] = initiate(f.alice, f.bob.id, f.params, rng);
    auto [session_b, m2, sk_b] = respond(f.bob, m1, f.params, f.dir, rng);

    // wrong peer identity
    {
        auto s = session_a;
        HandshakeMessage other = m2;
        other.sender_id = Identity("mallory");
        CHECK_THROWS_WITH_AS(finalize(s, other, f.params, f.dir),
                             doctest::Contains("PeerMismatch"), Error);
        CHECK(s.state == SessionState::rejected);
        // a rejected session cannot be finalized again
        CHECK_THROWS_WITH_AS(finalize(s, m2, f.params, f.dir),
                             doctest::Contains("InvalidState"), Error);
    }

    // finalize on responder session
    {
        auto s = session_b;
        CHECK_THROWS_WITH_AS(finalize(s, m2, f.params, f.dir),
                             doctest::Contains("InvalidState"), Error);
    }

    // accepted sessions are immutable: a second finalize is invalid
    {
        auto s = session_a;
        const SessionKey sk = finalize(s, m2, f.params, f.dir);
        CHECK(sk == sk_b);
        CHECK_THROWS_WITH_AS(finalize(s, m2, f.params, f.dir),
                             doctest::Contains("InvalidState"), Error);
        CHECK(s.state == SessionState::accepted);
        CHECK(*s.session_key == sk);
    }
}

TEST_CASE("session key is sensitive to every secret") {
    Drbg rng(207);
    const GroupParams& g = curve(CurveId::toy);

    // baseline world
    Drbg fixed(999);
    Fixture f(fixed);
    const Scalar ta = random_scalar(g, rng);
    const Scalar tb = random_scalar(g, rng);

    auto key_for = [&](const PartyKeys& a, const PartyKeys& b, const Scalar& eta,
                       const Scalar& etb) {
        const Point Ta = scalar_mul(g, eta, g.generator);
        const Point Tb = scalar_mul(g, etb, g.generator);
        const auto [k1, k2] = derive_shared(Role::initiator, a, eta, b.id, b.public_key,
                                            b.partial.r_point, Tb, f.params);
        return h2(g, a.id, b.id, Ta, Tb, k1, k2);
    };

    const SessionKey base = key_for(f.alice, f.bob, ta, tb);

    int collisions = 0;
    for (int i = 0; i < 1000; ++i) {
        // vary one secret at a time
        PartyKeys a2 = f.alice;
        a2.secret_value = random_scalar(g, rng);
        a2.public_key = set_public_key(f.params, a2.secret_value);
        if (key_for(a2, f.bob, ta, tb) == base)
            ++collisions;

        PartyKeys b2 = f.bob;
        b2.secret_value = random_scalar(g, rng);
        b2.public_key = set_public_key(f.params, b2.secret_value);
        if (key_for(f.alice, b2, ta, tb) == base)
            ++collisions;

        if (key_for(f.alice, f.bob, random_scalar(g, rng), tb) == base)
            ++collisions;
        if (key_for(f.alice, f.bob, ta, random_scalar(g, rng)) == base)
            ++collisions;
    }
    CHECK(collisions == 0);
}

TEST_CASE("transcript binding: same pid, different ephemerals, different sid and key") {
    Drbg rng(208);
    Fixture f(rng);
    auto [sa1, m1a] = initiate(f.alice, f.bob.id, f.params, rng);
    auto [sb1, m2a, k1] = respond(f.bob, m1a, f.params, f.dir, rng);
    finalize(sa1, m2a, f.params, f.dir);

    auto [sa2, m1b] = initiate(f.alice, f.bob.id, f.params, rng);
    auto [sb2, m2b, k2] = respond(f.bob, m1b, f.params, f.dir, rng);
    finalize(sa2, m2b, f.params, f.dir);

    CHECK(sa1.pid == sa2.pid);
    CHECK(sa1.sid != sa2.sid);
    CHECK(k1 != k2);
}

TEST_CASE("peer directory round-trips through its file format") {
    Drbg rng(209);
    Fixture f(rng);
    const GroupParams& g = f.params.group();
    const auto path = std::filesystem::temp_directory_path() /
                      ("clka-dir-" + std::to_string(::getpid()));
    f.dir.save(path, g);
    const PeerDirectory loaded = PeerDirectory::load(path, g);
    CHECK(loaded.size() == f.dir.size());
    CHECK(*loaded.find(f.alice.id) == f.alice.public_key);
    CHECK(*loaded.find(f.bob.id) == f.bob.public_key);
    CHECK(!loaded.find(Identity("nobody")).has_value());
    std::filesystem::remove(path);
}

TEST_CASE("replayed M1 yields a fresh session with a fresh key") {
    Drbg rng(211);
    Fixture f(rng);
    auto [sa, m1] = initiate(f.alice, f.bob.id, f.params, rng);
    auto [sb1, m2a, k1] = respond(f.bob, m1, f.params, f.dir, rng);
    auto [sb2, m2b, k2] = respond(f.bob, m1, f.params, f.dir, rng);
    CHECK(!(sb1.ephemeral == sb2.ephemeral));
    CHECK(k1 != k2);
    CHECK(sb1.sid != sb2.sid);
}

TEST_CASE("degenerate shared points are rejected") {
    Drbg rng(210);
    Fixture f(rng);
    const GroupParams& g = f.params.group();
    // craft peer data so P_j + W_j == O: choose P_j = -(R_j + h_j*P_KGC).
    // the crafted "peer" cannot know its own private key, which is the point
    const Point r_j = f.bob.partial.r_point;
    const Point w_j = point_add(g, r_j, scalar_mul(g, h1(g, f.bob.id, r_j), f.params.kgc_public));
    const Point p_j = point_negate(g, w_j);
    const Scalar t = random_scalar(g, rng);
    CHECK_THROWS_WITH_AS(derive_shared(Role::initiator, f.alice, t, f.bob.id, p_j, r_j,
                                       scalar_mul(g, t, g.generator), f.params),
                         doctest::Contains("DegeneratePoint"), Error);
}
