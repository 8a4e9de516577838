// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef CLKA_WIRE_HPP
#define CLKA_WIRE_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "clka/handshake.hpp"

namespace clka {

inline constexpr uint8_t kWireVersion = 0x01;

enum class MsgType : uint8_t {
    m1 = 0x01,
    m2 = 0x02,
};

// Frame layout (everything big-endian):
//   u8 version | u8 msg_type | u16 id_len | id | R compressed | T compressed
// Total length is exactly 4 + id_len + 2*(1 + coord_bytes).
std::vector<uint8_t> encode_msg(const GroupParams& g, const HandshakeMessage& m, MsgType type);
std::pair<HandshakeMessage, MsgType> decode_msg(const GroupParams& g,
                                                std::span<const uint8_t> bytes);

// Exact frame length implied by a frame's own header; needs at least 4 bytes.
size_t frame_length(const GroupParams& g, std::span<const uint8_t> header);

// Stream framing for the TCP demo: u32 big-endian length prefix per frame.
void send_frame(int fd, std::span<const uint8_t> frame);
std::vector<uint8_t> recv_frame(int fd);

}  // namespace clka

#endif
