// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include "clka/keys.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "clka/errors.hpp"

namespace clka {

std::pair<SystemParams, MasterKey> setup(CurveId id, RandomSource& rng) {
    const GroupParams& g = curve(id);  // throws unknown_curve
    const Scalar s = random_scalar(g, rng);
    const Point kgc_public = scalar_mul(g, s, g.generator);
    return {SystemParams{id, kgc_public, kSessionKeyBits}, MasterKey{s}};
}

PartialPrivateKey extract_partial(const SystemParams& params, const MasterKey& master,
                                  const Identity& id, RandomSource& rng) {
    const GroupParams& g = params.group();
    const Scalar r = random_scalar(g, rng);
    const Point r_point = scalar_mul(g, r, g.generator);
    const Scalar h = h1(g, id, r_point);
    const Scalar s_i = scalar_add(g, r, scalar_mul_mod(g, h, master.s));
    return PartialPrivateKey{s_i, r_point};
}

bool validate_partial(const SystemParams& params, const Identity& id,
                      const PartialPrivateKey& d) {
    const GroupParams& g = params.group();
    if (d.r_point.at_infinity || !on_curve(g, d.r_point))
        return false;
    if (cmp(d.s_i.v, g.order) >= 0)
        return false;
    const Point lhs = scalar_mul(g, d.s_i, g.generator);
    const Scalar h = h1(g, id, d.r_point);
    const Point rhs = point_add(g, d.r_point, scalar_mul(g, h, params.kgc_public));
    return lhs == rhs;
}

Scalar set_secret_value(const SystemParams& params, RandomSource& rng) {
    return random_scalar(params.group(), rng);
}

Point set_public_key(const SystemParams& params, const Scalar& x) {
    return scalar_mul(params.group(), x, params.group().generator);
}

PartyKeys assemble_party(const Identity& id, const PartialPrivateKey& partial, const Scalar& x,
                         const SystemParams& params) {
    if (!validate_partial(params, id, partial))
        throw Error(Errc::invalid_partial_key, "partial key fails the validation equation");
    return PartyKeys{id, partial, x, set_public_key(params, x)};
}

// ---- key files ----

namespace {

constexpr char kMagic[4] = {'C', 'L', 'K', 'A'};

std::vector<uint8_t> header(CurveId id, KeyFileRole role) {
    std::vector<uint8_t> out(kMagic, kMagic + 4);
    out.push_back(kKeyFileVersion);
    out.push_back(static_cast<uint8_t>(id));
    out.push_back(static_cast<uint8_t>(role));
    return out;
}

void write_file(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error(Errc::io_error, "cannot open for writing: " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f)
        throw Error(Errc::io_error, "write failed: " + path.string());
}

std::vector<uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error(Errc::io_error, "cannot open: " + path.string());
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
    return bytes;
}

// Validates magic/version/role and returns (curve, payload).
std::pair<CurveId, std::span<const uint8_t>> parse_header(std::span<const uint8_t> bytes,
                                                          KeyFileRole expected_role) {
    if (bytes.size() < 7 || !std::equal(kMagic, kMagic + 4, bytes.begin()))
        throw Error(Errc::invalid_key_file, "bad magic");
    if (bytes[4] != kKeyFileVersion)
        throw Error(Errc::invalid_key_file, "unsupported key file version");
    const uint8_t curve_byte = bytes[5];
    if (curve_byte != static_cast<uint8_t>(CurveId::p256) &&
        curve_byte != static_cast<uint8_t>(CurveId::toy))
        throw Error(Errc::invalid_key_file, "unknown curve id");
    if (bytes[6] != static_cast<uint8_t>(expected_role))
        throw Error(Errc::invalid_key_file, "wrong key file role");
    return {static_cast<CurveId>(curve_byte), bytes.subspan(7)};
}

struct Reader {
    std::span<const uint8_t> data;

    std::span<const uint8_t> take(size_t n) {
        if (data.size() < n)
            throw Error(Errc::invalid_key_file, "truncated key file");
        auto out = data.first(n);
        data = data.subspan(n);
        return out;
    }

    void done() const {
        if (!data.empty())
            throw Error(Errc::invalid_key_file, "trailing bytes in key file");
    }
};

void append(std::vector<uint8_t>& out, std::span<const uint8_t> bytes) {
    out.insert(out.end(), bytes.begin(), bytes.end());
}

void append_identity_field(std::vector<uint8_t>& out, const Identity& id) {
    out.push_back(static_cast<uint8_t>(id.size()));
    out.insert(out.end(), id.bytes().begin(), id.bytes().end());
}

Identity read_identity_field(Reader& r) {
    const uint8_t len = r.take(1)[0];
    if (len == 0)
        throw Error(Errc::invalid_key_file, "empty identity");
    const auto raw = r.take(len);
    return Identity(std::string(raw.begin(), raw.end()));
}

}  // namespace

void write_master_file(const std::filesystem::path& path, CurveId id, const MasterKey& master) {
    const GroupParams& g = curve(id);
    auto out = header(id, KeyFileRole::master);
    append(out, encode_scalar(g, master.s));
    write_file(path, out);
}

std::pair<CurveId, MasterKey> read_master_file(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    auto [id, payload] = parse_header(bytes, KeyFileRole::master);
    const GroupParams& g = curve(id);
    Reader r{payload};
    const MasterKey master{decode_scalar(g, r.take(g.scalar_bytes))};
    r.done();
    return {id, master};
}

void write_params_file(const std::filesystem::path& path, const SystemParams& params) {
    const GroupParams& g = params.group();
    auto out = header(params.curve_id, KeyFileRole::params);
    append(out, encode_point(g, params.kgc_public));
    out.push_back(static_cast<uint8_t>(params.security_bits >> 8));
    out.push_back(static_cast<uint8_t>(params.security_bits));
    write_file(path, out);
}

SystemParams read_params_file(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    auto [id, payload] = parse_header(bytes, KeyFileRole::params);
    const GroupParams& g = curve(id);
    Reader r{payload};
    const Point kgc_public = decode_point(g, r.take(1 + g.coord_bytes));
    const auto kb = r.take(2);
    const unsigned bits = static_cast<unsigned>(kb[0]) << 8 | kb[1];
    r.done();
    return SystemParams{id, kgc_public, bits};
}

void write_partial_file(const std::filesystem::path& path, CurveId id, const Identity& who,
                        const PartialPrivateKey& d) {
    const GroupParams& g = curve(id);
    auto out = header(id, KeyFileRole::partial);
    append_identity_field(out, who);
    append(out, encode_scalar(g, d.s_i));
    append(out, encode_point(g, d.r_point));
    write_file(path, out);
}

std::pair<Identity, PartialPrivateKey> read_partial_file(const std::filesystem::path& path,
                                                         CurveId expected) {
    const auto bytes = read_file(path);
    auto [id, payload] = parse_header(bytes, KeyFileRole::partial);
    if (id != expected)
        throw Error(Errc::invalid_key_file, "partial key for a different curve");
    const GroupParams& g = curve(id);
    Reader r{payload};
    Identity who = read_identity_field(r);
    const Scalar s_i = decode_scalar(g, r.take(g.scalar_bytes));
    const Point r_point = decode_point(g, r.take(1 + g.coord_bytes));
    r.done();
    return {std::move(who), PartialPrivateKey{s_i, r_point}};
}

void write_party_file(const std::filesystem::path& path, CurveId id, const PartyKeys& keys) {
    const GroupParams& g = curve(id);
    auto out = header(id, KeyFileRole::party);
    append_identity_field(out, keys.id);
    append(out, encode_scalar(g, keys.secret_value));
    append(out, encode_scalar(g, keys.partial.s_i));
    append(out, encode_point(g, keys.partial.r_point));
    write_file(path, out);
}

PartyKeys read_party_file(const std::filesystem::path& path, CurveId expected) {
    const auto bytes = read_file(path);
    auto [id, payload] = parse_header(bytes, KeyFileRole::party);
    if (id != expected)
        throw Error(Errc::invalid_key_file, "party key for a different curve");
    const GroupParams& g = curve(id);
    Reader r{payload};
    Identity who = read_identity_field(r);
    const Scalar x = decode_scalar(g, r.take(g.scalar_bytes));
    const Scalar s_i = decode_scalar(g, r.take(g.scalar_bytes));
    const Point r_point = decode_point(g, r.take(1 + g.coord_bytes));
    r.done();
    return PartyKeys{std::move(who), PartialPrivateKey{s_i, r_point}, x,
                     scalar_mul(g, x, g.generator)};
}

}  // namespace clka
