// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_ERRORS_HPP
#define CLKA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace clka {

enum class Errc {
    // point/scalar codecs
    malformed_encoding,
    not_on_curve,
    not_in_subgroup,
    identity_rejected,
    // curve registry and toy oracles
    unknown_curve,
    oracle_unavailable,
    no_solution,
    // key management
    invalid_partial_key,
    invalid_key_file,
    // handshake state machine
    self_session,
    malformed_message,
    unknown_peer,
    degenerate_point,
    peer_mismatch,
    invalid_state,
    // wire format
    identity_too_long,
    bad_version,
    bad_type,
    truncated_frame,
    trailing_bytes,
    // adversary-game world
    duplicate_identity,
    unknown_party,
    unknown_session,
    not_fresh,
    // I/O
    io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), m_code(code) {}

    Errc code() const { return m_code; }

  private:
    Errc m_code;
};

}  // namespace clka

#endif
