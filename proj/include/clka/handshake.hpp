// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_HANDSHAKE_HPP
#define CLKA_HANDSHAKE_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "clka/keys.hpp"

namespace clka {

// M1 / M2 payload: (ID, R, T). The sender's public key is deliberately
// absent; peers resolve it through a provisioned directory.
struct HandshakeMessage {
    Identity sender_id;
    Point r_point;  // commitment from the sender's partial key
    Point t_point;  // ephemeral T = t*P

    friend bool operator==(const HandshakeMessage& a, const HandshakeMessage& b) {
        return a.sender_id == b.sender_id && a.r_point == b.r_point && a.t_point == b.t_point;
    }
};

enum class Role { initiator, responder };
enum class SessionState { created, accepted, rejected };

struct SessionRecord {
    Role role;
    PartyKeys own;
    Identity peer_id;
    Scalar ephemeral;       // t
    Point ephemeral_pub;    // T = t*P
    std::vector<uint8_t> sid;  // transcript bytes, M1 || M2 once complete
    std::pair<Identity, Identity> pid;  // initiator first
    SessionState state = SessionState::created;
    std::optional<SessionKey> session_key;  // present iff accepted
};

// Read-only map Identity -> certificateless public key, provisioned out of
// band. File form: one "hex(identity) hex(compressed P)" pair per line.
class PeerDirectory {
  public:
    void add(const Identity& id, const Point& public_key);
    std::optional<Point> find(const Identity& id) const;
    size_t size() const { return m_entries.size(); }

    void save(const std::filesystem::path& path, const GroupParams& g) const;
    static PeerDirectory load(const std::filesystem::path& path, const GroupParams& g);

  private:
    std::map<std::string, Point> m_entries;
};

// Role-correct shared-point pair (K1, K2). Initiator:
//   u = x + s + t,  W_j = R_j + h1(ID_j,R_j)*P_KGC,
//   K1 = u*(P_j + W_j),  K2 = u*(T_j + W_j)
// Responder:
//   W_j = P_j + R_j + h1(ID_j,R_j)*P_KGC + T_j,
//   K1 = (x + s)*W_j,  K2 = (t + s)*W_j
// Throws degenerate_point when either result is the identity.
std::pair<Point, Point> derive_shared(Role role, const PartyKeys& own, const Scalar& t,
                                      const Identity& peer_id, const Point& peer_pub,
                                      const Point& peer_r, const Point& peer_t,
                                      const SystemParams& params);

std::pair<SessionRecord, HandshakeMessage> initiate(const PartyKeys& own, const Identity& peer_id,
                                                    const SystemParams& params, RandomSource& rng);

std::tuple<SessionRecord, HandshakeMessage, SessionKey> respond(const PartyKeys& own,
                                                                const HandshakeMessage& m1,
                                                                const SystemParams& params,
                                                                const PeerDirectory& directory,
                                                                RandomSource& rng);

SessionKey finalize(SessionRecord& session, const HandshakeMessage& m2, const SystemParams& params,
                    const PeerDirectory& directory);

}  // namespace clka

#endif
