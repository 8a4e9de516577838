// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include "clka/eck.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "clka/errors.hpp"

namespace clka {

World::World(CurveId id, RandomSource& rng) : m_rng(rng) {
    auto [params, master] = setup(id, rng);
    m_params = params;
    m_master = master;
}

World::PartyRecord& World::find_party(const Identity& id) {
    const auto it = m_parties.find(id.bytes());
    if (it == m_parties.end())
        throw Error(Errc::unknown_party, id.to_hex());
    return it->second;
}

const World::PartyRecord& World::find_party(const Identity& id) const {
    const auto it = m_parties.find(id.bytes());
    if (it == m_parties.end())
        throw Error(Errc::unknown_party, id.to_hex());
    return it->second;
}

World::SessionSlot& World::slot(SessionHandle h) {
    if (h >= m_sessions.size())
        throw Error(Errc::unknown_session, std::to_string(h));
    return m_sessions[h];
}

const World::SessionSlot& World::slot(SessionHandle h) const {
    if (h >= m_sessions.size())
        throw Error(Errc::unknown_session, std::to_string(h));
    return m_sessions[h];
}

void World::create(const Identity& id) {
    if (m_parties.count(id.bytes()))
        throw Error(Errc::duplicate_identity, id.to_hex());
    const PartialPrivateKey d = extract_partial(m_params, m_master, id, m_rng);
    const Scalar x = set_secret_value(m_params, m_rng);
    PartyKeys keys = assemble_party(id, d, x, m_params);
    m_directory.add(id, keys.public_key);
    m_parties.emplace(id.bytes(), PartyRecord{std::move(keys), false});
    m_log.push_back({QueryEvent::Kind::create, id.bytes(), ~0ull, true});
}

PartialPrivateKey World::reveal_partial_private_key(const Identity& id) {
    const PartyRecord& p = find_party(id);
    m_log.push_back({QueryEvent::Kind::reveal_partial, id.bytes(), ~0ull, true});
    return p.keys.partial;
}

std::optional<Scalar> World::reveal_secret_value(const Identity& id) {
    const PartyRecord& p = find_party(id);
    if (p.replaced) {
        m_log.push_back({QueryEvent::Kind::reveal_secret, id.bytes(), ~0ull, false});
        return std::nullopt;
    }
    m_log.push_back({QueryEvent::Kind::reveal_secret, id.bytes(), ~0ull, true});
    return p.keys.secret_value;
}

void World::replace_public_key(const Identity& id, const Point& pk) {
    if (pk.at_infinity || !on_curve(m_params.group(), pk))
        throw Error(Errc::malformed_encoding, "replacement public key not a valid point");
    PartyRecord& p = find_party(id);
    p.replaced = true;
    m_directory.add(id, pk);
    m_log.push_back({QueryEvent::Kind::replace_pk, id.bytes(), ~0ull, true});
}

Scalar World::reveal_ephemeral_key(SessionHandle session) {
    const SessionSlot& s = slot(session);
    if (!s.record)
        throw Error(Errc::invalid_state, "session rejected before an ephemeral existed");
    m_log.push_back({QueryEvent::Kind::reveal_ephemeral, s.owner.bytes(), session, true});
    return s.record->ephemeral;
}

MasterKey World::reveal_master_key() {
    m_master_revealed = true;
    m_log.push_back({QueryEvent::Kind::reveal_master, {}, ~0ull, true});
    return m_master;
}

std::optional<SessionKey> World::reveal_session_key(SessionHandle session) {
    const SessionSlot& s = slot(session);
    if (!s.record || s.record->state != SessionState::accepted) {
        m_log.push_back({QueryEvent::Kind::reveal_session, s.owner.bytes(), session, false});
        return std::nullopt;
    }
    m_log.push_back({QueryEvent::Kind::reveal_session, s.owner.bytes(), session, true});
    return s.record->session_key;
}

SendResult World::send(const SendSpec& spec, const std::optional<std::vector<uint8_t>>& message) {
    const GroupParams& g = m_params.group();
    const PartyRecord& at = find_party(spec.at);
    m_log.push_back({QueryEvent::Kind::send, spec.at.bytes(), spec.session.value_or(~0ull), true});

    if (!message) {
        // λ activation: new initiator session at spec.at
        find_party(spec.intended_peer);
        auto [rec, m1] = initiate(at.keys, spec.intended_peer, m_params, m_rng);
        m_sessions.push_back(
            {std::move(rec), spec.at, spec.intended_peer, Decision::awaiting});
        return {m_sessions.size() - 1, encode_msg(g, m1, MsgType::m1), Decision::awaiting};
    }

    if (spec.session) {
        // M2 delivery into an existing initiator session
        SessionSlot& s = slot(*spec.session);
        if (!s.record || !(s.owner == spec.at))
            throw Error(Errc::unknown_session, "no such session at that party");
        try {
            auto [m, type] = decode_msg(g, *message);
            if (type != MsgType::m2)
                throw Error(Errc::bad_type, "initiator expected an M2 frame");
            finalize(*s.record, m, m_params, m_directory);
            s.decision = Decision::accept;
        } catch (const Error&) {
            if (s.record)
                s.record->state = SessionState::rejected;
            s.decision = Decision::reject;
        }
        return {*spec.session, std::nullopt, s.decision};
    }

    // M1 delivery: new responder session at spec.at
    try {
        auto [m, type] = decode_msg(g, *message);
        if (type != MsgType::m1)
            throw Error(Errc::bad_type, "responder expected an M1 frame");
        auto [rec, m2, sk] = respond(at.keys, m, m_params, m_directory, m_rng);
        (void)sk;
        const Identity peer = rec.peer_id;
        m_sessions.push_back({std::move(rec), spec.at, peer, Decision::accept});
        return {m_sessions.size() - 1, encode_msg(g, m2, MsgType::m2), Decision::accept};
    } catch (const Error&) {
        m_sessions.push_back({std::nullopt, spec.at, spec.intended_peer, Decision::reject});
        return {m_sessions.size() - 1, std::nullopt, Decision::reject};
    }
}

bool World::matching(SessionHandle a, SessionHandle b) const {
    const SessionSlot& sa = slot(a);
    const SessionSlot& sb = slot(b);
    if (!sa.record || !sb.record)
        return false;
    return sa.record->pid == sb.record->pid && sa.record->sid == sb.record->sid;
}

std::optional<SessionHandle> World::matching_session_at(const Identity& owner,
                                                        SessionHandle h) const {
    for (SessionHandle i = 0; i < m_sessions.size(); ++i) {
        if (i == h)
            continue;
        if (m_sessions[i].owner == owner && matching(h, i))
            return i;
    }
    return std::nullopt;
}

bool World::session_key_revealed(SessionHandle h) const {
    return std::any_of(m_log.begin(), m_log.end(), [&](const QueryEvent& e) {
        return e.kind == QueryEvent::Kind::reveal_session && e.session == h && e.answered;
    });
}

// Two-out-of-three rule over {x, s, t}: the party side is fully corrupted
// only when the adversary holds all three. Master-key reveal exposes every
// party's s component; a replaced public key exposes the x component; with
// no honest matching session the peer's ephemeral counts as adversary-known.
bool World::fully_corrupted(const Identity& party,
                            std::optional<SessionHandle> session_at_party) const {
    const PartyRecord& rec = find_party(party);
    bool x_exposed = rec.replaced;
    bool s_exposed = m_master_revealed;
    bool t_exposed = !session_at_party.has_value();
    for (const QueryEvent& e : m_log) {
        if (e.kind == QueryEvent::Kind::reveal_secret && e.party == party.bytes() && e.answered)
            x_exposed = true;
        if (e.kind == QueryEvent::Kind::reveal_partial && e.party == party.bytes())
            s_exposed = true;
        if (e.kind == QueryEvent::Kind::reveal_ephemeral && session_at_party &&
            e.session == *session_at_party)
            t_exposed = true;
    }
    return x_exposed && s_exposed && t_exposed;
}

FreshnessVerdict World::freshness(SessionHandle session) const {
    const SessionSlot& s = slot(session);
    FreshnessVerdict v;

    // clause 1: the session has accepted
    if (!s.record || s.record->state != SessionState::accepted)
        v.violated_clauses.push_back(1);

    // clause 2: unopened
    if (session_key_revealed(session))
        v.violated_clauses.push_back(2);

    // clause 3: neither participant's session state fully corrupted
    if (s.record) {
        const std::optional<SessionHandle> peer_session =
            matching_session_at(s.record->peer_id, session);
        if (fully_corrupted(s.record->own.id, session) ||
            fully_corrupted(s.record->peer_id, peer_session))
            v.violated_clauses.push_back(3);
    }

    // clause 4: no opened session with a matching conversation
    for (SessionHandle i = 0; i < m_sessions.size(); ++i) {
        if (i != session && matching(session, i) && session_key_revealed(i)) {
            v.violated_clauses.push_back(4);
            break;
        }
    }

    v.fresh = v.violated_clauses.empty();
    return v;
}

SessionKey World::test_query(SessionHandle session, int b, RandomSource& rng) {
    const FreshnessVerdict v = freshness(session);
    if (!v.fresh)
        throw Error(Errc::not_fresh, "test target must be a fresh session");
    m_log.push_back({QueryEvent::Kind::test, slot(session).owner.bytes(), session, true});
    if (b == 0)
        return *slot(session).record->session_key;
    SessionKey random_key;
    rng.fill(random_key.bytes);
    return random_key;
}

const SessionRecord* World::session(SessionHandle h) const {
    const SessionSlot& s = slot(h);
    return s.record ? &*s.record : nullptr;
}

Decision World::decision(SessionHandle h) const { return slot(h).decision; }

const PartyKeys& World::party(const Identity& id) const { return find_party(id).keys; }

bool World::public_key_replaced(const Identity& id) const { return find_party(id).replaced; }

SessionKey oracle_session_key(const SystemParams& params, std::span<const uint8_t> transcript,
                              const PeerDirectory& directory) {
    const GroupParams& g = params.group();
    if (!g.brute_forceable)
        throw Error(Errc::oracle_unavailable, "oracle needs the brute-forceable curve");

    const size_t len1 = frame_length(g, transcript);
    if (transcript.size() < len1)
        throw Error(Errc::truncated_frame, "transcript shorter than its first frame");
    auto [m1, type1] = decode_msg(g, transcript.first(len1));
    auto [m2, type2] = decode_msg(g, transcript.subspan(len1));
    if (type1 != MsgType::m1 || type2 != MsgType::m2)
        throw Error(Errc::bad_type, "transcript must be M1 || M2");

    const auto pub_a = directory.find(m1.sender_id);
    const auto pub_b = directory.find(m2.sender_id);
    if (!pub_a || !pub_b)
        throw Error(Errc::unknown_peer, "transcript party missing from directory");

    const Point& gen = g.generator;
    const Scalar master = toy_dlp(g, gen, params.kgc_public);
    const Scalar x_a = toy_dlp(g, gen, *pub_a);
    const Scalar x_b = toy_dlp(g, gen, *pub_b);
    const Scalar r_a = toy_dlp(g, gen, m1.r_point);
    const Scalar r_b = toy_dlp(g, gen, m2.r_point);
    const Scalar t_a = toy_dlp(g, gen, m1.t_point);
    const Scalar t_b = toy_dlp(g, gen, m2.t_point);

    const Scalar s_a =
        scalar_add(g, r_a, scalar_mul_mod(g, h1(g, m1.sender_id, m1.r_point), master));
    const Scalar s_b =
        scalar_add(g, r_b, scalar_mul_mod(g, h1(g, m2.sender_id, m2.r_point), master));

    const Scalar u = scalar_add(g, scalar_add(g, x_a, s_a), t_a);
    const Point k1 = scalar_mul(g, scalar_mul_mod(g, u, scalar_add(g, x_b, s_b)), gen);
    const Point k2 = scalar_mul(g, scalar_mul_mod(g, u, scalar_add(g, t_b, s_b)), gen);
    return h2(g, m1.sender_id, m2.sender_id, m1.t_point, m2.t_point, k1, k2);
}

void write_scenario_summary(const std::filesystem::path& path,
                            const std::vector<ScenarioReport>& reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports)
        out.push_back({{"id", r.id}, {"pass", r.pass}, {"detail", r.detail}});
    std::ofstream f(path, std::ios::trunc);
    if (!f)
        throw Error(Errc::io_error, "cannot open for writing: " + path.string());
    f << out.dump(2) << '\n';
    if (!f)
        throw Error(Errc::io_error, "write failed: " + path.string());
}

}  // namespace clka
