// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_ECK_HPP
#define CLKA_ECK_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clka/handshake.hpp"
#include "clka/wire.hpp"

namespace clka {

using SessionHandle = uint64_t;

enum class Decision { accept, reject, awaiting };

struct FreshnessVerdict {
    bool fresh = false;
    std::vector<int> violated_clauses;  // subset of {1,2,3,4}
};

struct ScenarioReport {
    std::string id;
    bool pass = false;
    std::string detail;
};

struct QueryEvent {
    enum class Kind {
        create,
        reveal_partial,
        reveal_secret,
        replace_pk,
        reveal_ephemeral,
        reveal_master,
        reveal_session,
        send,
        test,
    };
    Kind kind;
    std::string party;            // identity bytes, when the query targets a party
    SessionHandle session = ~0ull;  // when the query targets a session
    bool answered = true;         // false when the response was the distinguished ⊥
};

struct SendSpec {
    Identity at;             // party the session runs at
    Identity intended_peer;
    std::optional<SessionHandle> session;  // deliver into an existing session
};

struct SendResult {
    SessionHandle session;
    std::optional<std::vector<uint8_t>> outgoing;
    Decision decision;
};

// One adversary game: a set of parties under a single KGC, sessions driven
// entirely through Send with adversary-controlled delivery, every query
// appended to a replayable log. Single-threaded by contract.
class World {
  public:
    World(CurveId id, RandomSource& rng);

    const SystemParams& params() const { return m_params; }
    const PeerDirectory& directory() const { return m_directory; }

    void create(const Identity& id);

    PartialPrivateKey reveal_partial_private_key(const Identity& id);
    // ⊥ (nullopt) once the party's public key has been replaced
    std::optional<Scalar> reveal_secret_value(const Identity& id);
    void replace_public_key(const Identity& id, const Point& pk);
    Scalar reveal_ephemeral_key(SessionHandle session);
    MasterKey reveal_master_key();
    // ⊥ (nullopt) unless the session has accepted
    std::optional<SessionKey> reveal_session_key(SessionHandle session);

    // message == nullopt is the λ activation (create initiator at spec.at);
    // protocol failures surface as Decision::reject, not exceptions.
    SendResult send(const SendSpec& spec, const std::optional<std::vector<uint8_t>>& message);

    // same pid and same transcript
    bool matching(SessionHandle a, SessionHandle b) const;

    FreshnessVerdict freshness(SessionHandle session) const;

    // b == 0 returns the real key, b == 1 a uniform sample; throws not_fresh
    SessionKey test_query(SessionHandle session, int b, RandomSource& rng);

    // challenger-side introspection (not adversary queries, never logged)
    const SessionRecord* session(SessionHandle h) const;
    Decision decision(SessionHandle h) const;
    const std::vector<QueryEvent>& query_log() const { return m_log; }
    const PartyKeys& party(const Identity& id) const;
    size_t party_count() const { return m_parties.size(); }
    bool public_key_replaced(const Identity& id) const;

  private:
    struct PartyRecord {
        PartyKeys keys;
        bool replaced = false;
    };

    struct SessionSlot {
        std::optional<SessionRecord> record;  // absent when rejected before creation
        Identity owner;
        Identity intended_peer;
        Decision decision = Decision::awaiting;
    };

    PartyRecord& find_party(const Identity& id);
    const PartyRecord& find_party(const Identity& id) const;
    SessionSlot& slot(SessionHandle h);
    const SessionSlot& slot(SessionHandle h) const;
    std::optional<SessionHandle> matching_session_at(const Identity& owner, SessionHandle h) const;
    bool session_key_revealed(SessionHandle h) const;
    bool fully_corrupted(const Identity& party, std::optional<SessionHandle> session_at_party) const;

    SystemParams m_params;
    MasterKey m_master;
    std::map<std::string, PartyRecord> m_parties;
    std::vector<SessionSlot> m_sessions;
    PeerDirectory m_directory;
    std::vector<QueryEvent> m_log;
    RandomSource& m_rng;
    bool m_master_revealed = false;
};

// Independent verifier: recovers every secret scalar in a completed
// transcript by brute-force discrete logs and recomputes the session key
// through the scalar identities
//   K1 = (x_A+s_A+t_A)(x_B+s_B) * P,  K2 = (x_A+s_A+t_A)(t_B+s_B) * P.
// transcript is the sid byte string (M1 frame || M2 frame).
SessionKey oracle_session_key(const SystemParams& params, std::span<const uint8_t> transcript,
                              const PeerDirectory& directory);

// Scripted attack computations for the classic security properties. Each
// scenario runs one concrete attack and asserts that it fails; a pass is a
// smoke check, not a proof.
const std::vector<std::string>& scenario_ids();
ScenarioReport run_scenario(World& world, const std::string& scenario_id);
std::vector<ScenarioReport> run_all_scenarios(World& world);

void write_scenario_summary(const std::filesystem::path& path,
                            const std::vector<ScenarioReport>& reports);

}  // namespace clka

#endif
