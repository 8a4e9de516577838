// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include "clka/handshake.hpp"

#include <fstream>
#include <sstream>

#include "clka/errors.hpp"
#include "clka/wire.hpp"

namespace clka {

void PeerDirectory::add(const Identity& id, const Point& public_key) {
    m_entries[id.bytes()] = public_key;
}

std::optional<Point> PeerDirectory::find(const Identity& id) const {
    const auto it = m_entries.find(id.bytes());
    if (it == m_entries.end())
        return std::nullopt;
    return it->second;
}

void PeerDirectory::save(const std::filesystem::path& path, const GroupParams& g) const {
    std::ofstream f(path, std::ios::trunc);
    if (!f)
        throw Error(Errc::io_error, "cannot open for writing: " + path.string());
    for (const auto& [id_bytes, point] : m_entries) {
        f << to_hex(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(id_bytes.data()),
                                             id_bytes.size()))
          << ' ' << to_hex(encode_point(g, point)) << '\n';
    }
    if (!f)
        throw Error(Errc::io_error, "write failed: " + path.string());
}

PeerDirectory PeerDirectory::load(const std::filesystem::path& path, const GroupParams& g) {
    std::ifstream f(path);
    if (!f)
        throw Error(Errc::io_error, "cannot open: " + path.string());
    PeerDirectory dir;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string id_hex, point_hex;
        if (!(ls >> id_hex >> point_hex))
            throw Error(Errc::malformed_encoding, "bad directory line");
        const auto id_raw = from_hex(id_hex);
        const auto point_raw = from_hex(point_hex);
        dir.add(Identity(std::string(id_raw.begin(), id_raw.end())),
                decode_point(g, point_raw));
    }
    return dir;
}

namespace {

// Structural validity of a message that may have bypassed the wire codec.
void check_message(const GroupParams& g, const HandshakeMessage& m) {
    if (m.r_point.at_infinity || m.t_point.at_infinity)
        throw Error(Errc::malformed_message, "identity point in message");
    if (!on_curve(g, m.r_point) || !on_curve(g, m.t_point))
        throw Error(Errc::malformed_message, "message point not on curve");
}

}  // namespace

std::pair<Point, Point> derive_shared(Role role, const PartyKeys& own, const Scalar& t,
                                      const Identity& peer_id, const Point& peer_pub,
                                      const Point& peer_r, const Point& peer_t,
                                      const SystemParams& params) {
    const GroupParams& g = params.group();
    const Scalar h_peer = h1(g, peer_id, peer_r);
    const Point h_pkgc = scalar_mul(g, h_peer, params.kgc_public);
    Point k1, k2;
    if (role == Role::initiator) {
        const Scalar u = scalar_add(g, scalar_add(g, own.secret_value, own.partial.s_i), t);
        const Point w = point_add(g, peer_r, h_pkgc);
        k1 = scalar_mul(g, u, point_add(g, peer_pub, w));
        k2 = scalar_mul(g, u, point_add(g, peer_t, w));
    } else {
        const Point w =
            point_add(g, point_add(g, point_add(g, peer_pub, peer_r), h_pkgc), peer_t);
        k1 = scalar_mul(g, scalar_add(g, own.secret_value, own.partial.s_i), w);
        k2 = scalar_mul(g, scalar_add(g, t, own.partial.s_i), w);
    }
    if (k1.at_infinity || k2.at_infinity)
        throw Error(Errc::degenerate_point, "shared point is the identity");
    return {k1, k2};
}

std::pair<SessionRecord, HandshakeMessage> initiate(const PartyKeys& own, const Identity& peer_id,
                                                    const SystemParams& params,
                                                    RandomSource& rng) {
    if (peer_id == own.id)
        throw Error(Errc::self_session, "a party will not run a session with itself");
    const GroupParams& g = params.group();
    const Scalar t = random_scalar(g, rng);
    const Point t_pub = scalar_mul(g, t, g.generator);
    HandshakeMessage m1{own.id, own.partial.r_point, t_pub};
    SessionRecord rec{Role::initiator,
                      own,
                      peer_id,
                      t,
                      t_pub,
                      encode_msg(g, m1, MsgType::m1),
                      {own.id, peer_id},
                      SessionState::created,
                      std::nullopt};
    return {std::move(rec), std::move(m1)};
}

std::tuple<SessionRecord, HandshakeMessage, SessionKey> respond(const PartyKeys& own,
                                                                const HandshakeMessage& m1,
                                                                const SystemParams& params,
                                                                const PeerDirectory& directory,
                                                                RandomSource& rng) {
    const GroupParams& g = params.group();
    check_message(g, m1);
    if (m1.sender_id == own.id)
        throw Error(Errc::self_session, "a party will not run a session with itself");
    const auto peer_pub = directory.find(m1.sender_id);
    if (!peer_pub)
        throw Error(Errc::unknown_peer, "no directory entry for " + m1.sender_id.to_hex());

    const Scalar t = random_scalar(g, rng);
    const Point t_pub = scalar_mul(g, t, g.generator);
    const auto [k1, k2] = derive_shared(Role::responder, own, t, m1.sender_id, *peer_pub,
                                        m1.r_point, m1.t_point, params);
    // initiator-first ordering throughout
    const SessionKey sk = h2(g, m1.sender_id, own.id, m1.t_point, t_pub, k1, k2);

    HandshakeMessage m2{own.id, own.partial.r_point, t_pub};
    std::vector<uint8_t> sid = encode_msg(g, m1, MsgType::m1);
    const auto m2_bytes = encode_msg(g, m2, MsgType::m2);
    sid.insert(sid.end(), m2_bytes.begin(), m2_bytes.end());

    SessionRecord rec{Role::responder,
                      own,
                      m1.sender_id,
                      t,
                      t_pub,
                      std::move(sid),
                      {m1.sender_id, own.id},
                      SessionState::accepted,
                      sk};
    return {std::move(rec), std::move(m2), sk};
}

SessionKey finalize(SessionRecord& session, const HandshakeMessage& m2, const SystemParams& params,
                    const PeerDirectory& directory) {
    if (session.role != Role::initiator || session.state != SessionState::created)
        throw Error(Errc::invalid_state, "finalize needs a created initiator session");
    try {
        const GroupParams& g = params.group();
        check_message(g, m2);
        if (m2.sender_id != session.peer_id)
            throw Error(Errc::peer_mismatch, "M2 from an unexpected identity");
        const auto peer_pub = directory.find(session.peer_id);
        if (!peer_pub)
            throw Error(Errc::unknown_peer, "no directory entry for " + session.peer_id.to_hex());

        const auto [k1, k2] = derive_shared(Role::initiator, session.own, session.ephemeral,
                                            session.peer_id, *peer_pub, m2.r_point, m2.t_point,
                                            params);
        const SessionKey sk =
            h2(g, session.own.id, session.peer_id, session.ephemeral_pub, m2.t_point, k1, k2);

        const auto m2_bytes = encode_msg(g, m2, MsgType::m2);
        session.sid.insert(session.sid.end(), m2_bytes.begin(), m2_bytes.end());
        session.state = SessionState::accepted;
        session.session_key = sk;
        return sk;
    } catch (...) {
        session.state = SessionState::rejected;
        throw;
    }
}

}  // namespace clka
