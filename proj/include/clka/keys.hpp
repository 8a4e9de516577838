// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_KEYS_HPP
#define CLKA_KEYS_HPP

#include <filesystem>
#include <utility>

#include "clka/group.hpp"
#include "clka/hash.hpp"
#include "clka/rng.hpp"

namespace clka {

struct SystemParams {
    CurveId curve_id;
    Point kgc_public;
    unsigned security_bits = kSessionKeyBits;

    const GroupParams& group() const { return curve(curve_id); }
};

struct MasterKey {
    Scalar s;
};

// KGC-issued component of a private key: s_i plus the commitment R_i = r_i*P.
// Valid iff s_i*P == R_i + h1(id, R_i)*P_KGC.
struct PartialPrivateKey {
    Scalar s_i;
    Point r_point;
};

// Full per-party material. The private key is the pair (secret_value, s_i);
// the certificateless public key is secret_value * P.
struct PartyKeys {
    Identity id;
    PartialPrivateKey partial;
    Scalar secret_value;
    Point public_key;
};

std::pair<SystemParams, MasterKey> setup(CurveId id, RandomSource& rng);

PartialPrivateKey extract_partial(const SystemParams& params, const MasterKey& master,
                                  const Identity& id, RandomSource& rng);

// Total: malformed inputs are simply invalid, never an exception.
bool validate_partial(const SystemParams& params, const Identity& id,
                      const PartialPrivateKey& d);

Scalar set_secret_value(const SystemParams& params, RandomSource& rng);

Point set_public_key(const SystemParams& params, const Scalar& x);

// Validation is mandatory; a partial key that fails the check signals KGC
// or transport corruption and throws invalid_partial_key.
PartyKeys assemble_party(const Identity& id, const PartialPrivateKey& partial, const Scalar& x,
                         const SystemParams& params);

// ---- key files: "CLKA" magic, version, curve id, role tag, fields ----

inline constexpr uint8_t kKeyFileVersion = 0x01;

enum class KeyFileRole : uint8_t {
    master = 0x01,
    params = 0x02,
    partial = 0x03,
    party = 0x04,
};

void write_master_file(const std::filesystem::path& path, CurveId id, const MasterKey& master);
std::pair<CurveId, MasterKey> read_master_file(const std::filesystem::path& path);

void write_params_file(const std::filesystem::path& path, const SystemParams& params);
SystemParams read_params_file(const std::filesystem::path& path);

void write_partial_file(const std::filesystem::path& path, CurveId id, const Identity& who,
                        const PartialPrivateKey& d);
std::pair<Identity, PartialPrivateKey> read_partial_file(const std::filesystem::path& path,
                                                         CurveId expected);

void write_party_file(const std::filesystem::path& path, CurveId id, const PartyKeys& keys);
PartyKeys read_party_file(const std::filesystem::path& path, CurveId expected);

}  // namespace clka

#endif
