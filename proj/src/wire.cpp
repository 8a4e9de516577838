// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include "clka/wire.hpp"

#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "clka/errors.hpp"

namespace clka {

std::vector<uint8_t> encode_msg(const GroupParams& g, const HandshakeMessage& m, MsgType type) {
    // Identity construction already caps the length at 255
    std::vector<uint8_t> out;
    out.reserve(4 + m.sender_id.size() + 2 * (1 + g.coord_bytes));
    out.push_back(kWireVersion);
    out.push_back(static_cast<uint8_t>(type));
    out.push_back(static_cast<uint8_t>(m.sender_id.size() >> 8));
    out.push_back(static_cast<uint8_t>(m.sender_id.size()));
    out.insert(out.end(), m.sender_id.bytes().begin(), m.sender_id.bytes().end());
    const auto r_enc = encode_point(g, m.r_point);
    const auto t_enc = encode_point(g, m.t_point);
    out.insert(out.end(), r_enc.begin(), r_enc.end());
    out.insert(out.end(), t_enc.begin(), t_enc.end());
    return out;
}

size_t frame_length(const GroupParams& g, std::span<const uint8_t> header) {
    if (header.size() < 4)
        throw Error(Errc::truncated_frame, "frame shorter than its fixed header");
    const size_t id_len = static_cast<size_t>(header[2]) << 8 | header[3];
    return 4 + id_len + 2 * (1 + g.coord_bytes);
}

std::pair<HandshakeMessage, MsgType> decode_msg(const GroupParams& g,
                                                std::span<const uint8_t> bytes) {
    if (bytes.size() < 4)
        throw Error(Errc::truncated_frame, "frame shorter than its fixed header");
    if (bytes[0] != kWireVersion)
        throw Error(Errc::bad_version, "unsupported frame version");
    const uint8_t type = bytes[1];
    if (type != static_cast<uint8_t>(MsgType::m1) && type != static_cast<uint8_t>(MsgType::m2))
        throw Error(Errc::bad_type, "unknown message type");
    const size_t id_len = static_cast<size_t>(bytes[2]) << 8 | bytes[3];
    if (id_len == 0 || id_len > 255)
        throw Error(Errc::malformed_encoding, "identity length outside 1..=255");
    const size_t point_len = 1 + g.coord_bytes;
    const size_t expect = 4 + id_len + 2 * point_len;
    if (bytes.size() < expect)
        throw Error(Errc::truncated_frame, "frame body truncated");
    if (bytes.size() > expect)
        throw Error(Errc::trailing_bytes, "bytes after frame end");
    Identity sender(std::string(bytes.begin() + 4, bytes.begin() + 4 + id_len));
    const Point r_point = decode_point(g, bytes.subspan(4 + id_len, point_len));
    const Point t_point = decode_point(g, bytes.subspan(4 + id_len + point_len, point_len));
    return {HandshakeMessage{std::move(sender), r_point, t_point}, static_cast<MsgType>(type)};
}

namespace {

// Largest legal frame: max identity plus two production-width points.
constexpr size_t kMaxFrame = 4 + 255 + 2 * 33;

void write_all(int fd, const uint8_t* data, size_t len) {
    size_t off = 0;
    while (off < len) {
        const ssize_t n = ::write(fd, data + off, len - off);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw Error(Errc::io_error, std::string("write: ") + std::strerror(errno));
        }
        off += static_cast<size_t>(n);
    }
}

void read_all(int fd, uint8_t* data, size_t len) {
    size_t off = 0;
    while (off < len) {
        const ssize_t n = ::read(fd, data + off, len - off);
        if (n == 0)
            throw Error(Errc::io_error, "peer closed the connection");
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw Error(Errc::io_error, std::string("read: ") + std::strerror(errno));
        }
        off += static_cast<size_t>(n);
    }
}

}  // namespace

void send_frame(int fd, std::span<const uint8_t> frame) {
    uint8_t prefix[4] = {static_cast<uint8_t>(frame.size() >> 24),
                         static_cast<uint8_t>(frame.size() >> 16),
                         static_cast<uint8_t>(frame.size() >> 8),
                         static_cast<uint8_t>(frame.size())};
    write_all(fd, prefix, 4);
    write_all(fd, frame.data(), frame.size());
}

std::vector<uint8_t> recv_frame(int fd) {
    uint8_t prefix[4];
    read_all(fd, prefix, 4);
    const size_t len = static_cast<size_t>(prefix[0]) << 24 | static_cast<size_t>(prefix[1]) << 16 |
                       static_cast<size_t>(prefix[2]) << 8 | prefix[3];
    if (len == 0 || len > kMaxFrame)
        throw Error(Errc::truncated_frame, "frame length prefix out of range");
    std::vector<uint8_t> out(len);
    read_all(fd, out.data(), len);
    return out;
}

}  // namespace clka
