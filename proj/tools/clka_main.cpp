// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.
//
// clka: certificateless two-party authenticated key agreement toolkit.
// KGC tooling, party provisioning, a loopback/remote TCP handshake demo,
// operation-count benchmarks and the toy-curve self-test suite.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "clka/bench.hpp"
#include "clka/eck.hpp"
#include "clka/errors.hpp"
#include "clka/sha256.hpp"
#include "clka/wire.hpp"

namespace fs = std::filesystem;
using namespace clka;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitProtocol = 1;
constexpr int kExitUsage = 2;

Identity parse_identity(const std::string& arg) {
    if (arg.rfind("hex:", 0) == 0)
        return Identity::from_hex(arg.substr(4));
    return Identity(arg);
}

CurveId parse_curve(const std::string& name) {
    const GroupParams* g = curve_by_name(name);
    if (g == nullptr)
        throw CLI::ValidationError("--curve", "unknown curve '" + name + "' (p256, toy)");
    return g->id;
}

// host:port, IPv4 dotted quad
std::pair<std::string, uint16_t> parse_addr(const std::string& addr) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("address", "expected host:port");
    const std::string host = addr.substr(0, colon);
    const int port = std::stoi(addr.substr(colon + 1));
    if (port <= 0 || port > 65535)
        throw CLI::ValidationError("address", "port out of range");
    return {host, static_cast<uint16_t>(port)};
}

std::string fingerprint(const SessionKey& sk) {
    return to_hex(sha256(sk.bytes));
}

struct Closer {
    int fd = -1;
    ~Closer() {
        if (fd >= 0)
            ::close(fd);
    }
};

int tcp_listen_accept(const std::string& host, uint16_t port) {
    Closer server{::socket(AF_INET, SOCK_STREAM, 0)};
    if (server.fd < 0)
        throw Error(Errc::io_error, "socket");
    const int one = 1;
    ::setsockopt(server.fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1)
        throw Error(Errc::io_error, "bad listen address " + host);
    if (::bind(server.fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0)
        throw Error(Errc::io_error, "bind failed on " + host + ":" + std::to_string(port));
    if (::listen(server.fd, 1) != 0)
        throw Error(Errc::io_error, "listen failed");
    std::fprintf(stderr, "listening on %s:%u\n", host.c_str(), port);
    const int conn = ::accept(server.fd, nullptr, nullptr);
    if (conn < 0)
        throw Error(Errc::io_error, "accept failed");
    return conn;
}

int tcp_connect(const std::string& host, uint16_t port) {
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1)
        throw Error(Errc::io_error, "bad connect address " + host);
    // the peer may still be starting up; retry briefly
    for (int attempt = 0; attempt < 60; ++attempt) {
        const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0)
            throw Error(Errc::io_error, "socket");
        if (::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) == 0)
            return fd;
        ::close(fd);
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    throw Error(Errc::io_error, "cannot connect to " + host + ":" + std::to_string(port));
}

int cmd_kgc_setup(const std::string& curve_name, const fs::path& out_dir) {
    const CurveId id = parse_curve(curve_name);
    auto rng = make_default_rng();
    auto [params, master] = setup(id, *rng);
    fs::create_directories(out_dir);
    write_master_file(out_dir / "master.clka", id, master);
    write_params_file(out_dir / "params.clka", params);
    std::cout << "curve: " << params.group().name << "\n"
              << "master key: " << (out_dir / "master.clka").string() << "\n"
              << "params:     " << (out_dir / "params.clka").string() << "\n";
    return kExitOk;
}

int cmd_kgc_extract(const std::string& id_arg, const fs::path& master_path,
                    const fs::path& out_path) {
    const Identity who = parse_identity(id_arg);
    auto [curve_id, master] = read_master_file(master_path);
    const GroupParams& g = curve(curve_id);
    const SystemParams params{curve_id, scalar_mul(g, master.s, g.generator), kSessionKeyBits};
    auto rng = make_default_rng();
    const PartialPrivateKey d = extract_partial(params, master, who, *rng);
    write_partial_file(out_path, curve_id, who, d);
    std::cout << "partial key for " << who.to_hex() << ": " << out_path.string() << "\n";
    return kExitOk;
}

int cmd_party_init(const std::string& id_arg, const fs::path& partial_path,
                   const fs::path& params_path, const fs::path& out_dir) {
    const Identity who = parse_identity(id_arg);
    const SystemParams params = read_params_file(params_path);
    auto [file_id, d] = read_partial_file(partial_path, params.curve_id);
    if (file_id != who) {
        std::cerr << "partial key was issued to a different identity\n";
        return kExitProtocol;
    }
    auto rng = make_default_rng();
    const Scalar x = set_secret_value(params, *rng);
    if (!validate_partial(params, who, d)) {
        std::cerr << "partial key validation failed, refusing to provision\n";
        return kExitProtocol;
    }
    const PartyKeys keys = assemble_party(who, d, x, params);
    fs::create_directories(out_dir);
    write_party_file(out_dir / "party.clka", params.curve_id, keys);
    // one ready-to-append peer directory line
    const std::string entry =
        who.to_hex() + " " + to_hex(encode_point(params.group(), keys.public_key));
    std::ofstream entry_file(out_dir / "directory.entry", std::ios::trunc);
    entry_file << entry << "\n";
    std::cout << "party key: " << (out_dir / "party.clka").string() << "\n"
              << "directory entry: " << entry << "\n";
    return kExitOk;
}

int cmd_handshake(const std::string& listen_addr, const std::string& connect_addr,
                  const std::string& peer_arg, const fs::path& party_path,
                  const fs::path& params_path, const fs::path& peers_path) {
    const SystemParams params = read_params_file(params_path);
    const GroupParams& g = params.group();
    const PartyKeys own = read_party_file(party_path, params.curve_id);
    const PeerDirectory directory = PeerDirectory::load(peers_path, g);
    auto rng = make_default_rng();

    if (!listen_addr.empty()) {
        const auto [host, port] = parse_addr(listen_addr);
        Closer conn{tcp_listen_accept(host, port)};
        const auto m1_frame = recv_frame(conn.fd);
        auto [m1, type] = decode_msg(g, m1_frame);
        if (type != MsgType::m1)
            throw Error(Errc::bad_type, "expected M1 from the initiator");
        auto [session, m2, sk] = respond(own, m1, params, directory, *rng);
        send_frame(conn.fd, encode_msg(g, m2, MsgType::m2));
        std::cout << "peer: " << m1.sender_id.to_hex() << "\n"
                  << "SK fingerprint: " << fingerprint(sk) << "\n";
        return kExitOk;
    }

    const Identity peer = parse_identity(peer_arg);
    const auto [host, port] = parse_addr(connect_addr);
    Closer conn{tcp_connect(host, port)};
    auto [session, m1] = initiate(own, peer, params, *rng);
    send_frame(conn.fd, encode_msg(g, m1, MsgType::m1));
    const auto m2_frame = recv_frame(conn.fd);
    auto [m2, type] = decode_msg(g, m2_frame);
    if (type != MsgType::m2)
        throw Error(Errc::bad_type, "expected M2 from the responder");
    const SessionKey sk = finalize(session, m2, params, directory);
    std::cout << "peer: " << peer.to_hex() << "\n"
              << "SK fingerprint: " << fingerprint(sk) << "\n";
    return kExitOk;
}

int cmd_bench(size_t iters, bool toy) {
    const CurveId id = toy ? CurveId::toy : CurveId::p256;
    const GroupParams& g = curve(id);
    auto rng = make_default_rng();
    const SystemParams params{id, g.generator, kSessionKeyBits};
    const BenchReport rep = bench(params, iters, *rng);
    std::printf("curve: %s, %zu handshakes, per-party counts 4 mul / 3 add / 2 hash / 0 inv\n",
                g.name, rep.iterations);
    std::printf("  initiator  mean %8.1f us   median %8.1f us\n", rep.initiator_mean_us,
                rep.initiator_median_us);
    std::printf("  responder  mean %8.1f us   median %8.1f us\n", rep.responder_mean_us,
                rep.responder_median_us);
    std::printf("  handshake  mean %8.1f us   median %8.1f us\n", rep.handshake_mean_us,
                rep.handshake_median_us);
    return rep.counts_stable ? kExitOk : kExitProtocol;
}

int cmd_selftest(const fs::path& summary_path) {
    auto rng = make_default_rng();
    bool all_ok = true;

    // oracle equivalence: brute-force recomputation matches the protocol
    {
        World w(CurveId::toy, *rng);
        const Identity a("selftest-a"), b("selftest-b");
        w.create(a);
        w.create(b);
        int ok = 0;
        const int runs = 100;
        for (int i = 0; i < runs; ++i) {
            auto r1 = w.send({a, b, {}}, std::nullopt);
            auto r2 = w.send({b, a, {}}, r1.outgoing);
            auto r3 = w.send({a, b, r1.session}, r2.outgoing);
            if (r2.decision != Decision::accept || r3.decision != Decision::accept)
                continue;
            const SessionRecord* rec = w.session(r1.session);
            if (oracle_session_key(w.params(), rec->sid, w.directory()) == *rec->session_key)
                ++ok;
        }
        std::printf("[%s] oracle equivalence: %d/%d transcripts recomputed\n",
                    ok == runs ? "PASS" : "FAIL", ok, runs);
        all_ok = all_ok && ok == runs;
    }

    // scenario suite
    {
        World w(CurveId::toy, *rng);
        const auto reports = run_all_scenarios(w);
        for (const auto& r : reports) {
            std::printf("[%s] scenario %-7s %s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(),
                        r.detail.c_str());
            all_ok = all_ok && r.pass;
        }
        write_scenario_summary(summary_path, reports);
        std::printf("scenario summary written to %s\n", summary_path.string().c_str());
    }

    return all_ok ? kExitOk : kExitProtocol;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certificateless two-party authenticated key agreement toolkit"};
    app.require_subcommand(1);

    // kgc-setup
    std::string curve_name = "p256";
    fs::path setup_out;
    auto* setup_cmd = app.add_subcommand("kgc-setup", "generate a KGC master key and params");
    setup_cmd->add_option("--curve", curve_name, "curve id (p256, toy)");
    setup_cmd->add_option("--out", setup_out, "output directory")->required();

    // kgc-extract
    std::string extract_id;
    fs::path extract_master, extract_out;
    auto* extract_cmd =
        app.add_subcommand("kgc-extract", "issue a partial private key for an identity");
    extract_cmd->add_option("--id", extract_id, "identity (utf8, or hex:...)")->required();
    extract_cmd->add_option("--master", extract_master, "master key file")->required();
    extract_cmd->add_option("--out", extract_out, "output partial key file")->required();

    // party-init
    std::string party_id;
    fs::path party_partial, party_params, party_out;
    auto* party_cmd =
        app.add_subcommand("party-init", "provision a party from its partial key (fails closed)");
    party_cmd->add_option("--id", party_id, "identity (utf8, or hex:...)")->required();
    party_cmd->add_option("--partial", party_partial, "partial key file")->required();
    party_cmd->add_option("--params", party_params, "system params file")->required();
    party_cmd->add_option("--out", party_out, "output directory")->required();

    // handshake
    std::string listen_addr, connect_addr, peer_id;
    fs::path hs_party, hs_params, hs_peers;
    auto* hs_cmd = app.add_subcommand("handshake", "run a live handshake over TCP");
    auto* listen_opt = hs_cmd->add_option("--listen", listen_addr, "listen address host:port");
    auto* connect_opt =
        hs_cmd->add_option("--connect", connect_addr, "connect address host:port");
    auto* peer_opt = hs_cmd->add_option("--peer-id", peer_id, "responder identity to contact");
    hs_cmd->add_option("--party", hs_party, "own party key file")->required();
    hs_cmd->add_option("--params", hs_params, "system params file")->required();
    hs_cmd->add_option("--peers", hs_peers, "peer directory file")->required();
    listen_opt->excludes(connect_opt);
    connect_opt->needs(peer_opt);

    // bench
    size_t bench_iters = 1000;
    bool bench_toy = false;
    auto* bench_cmd = app.add_subcommand("bench", "handshake timing and operation counts");
    bench_cmd->add_option("--iters", bench_iters, "iterations");
    bench_cmd->add_flag("--toy", bench_toy, "bench the toy curve instead of p256");

    // selftest
    fs::path summary_path = "clka-selftest.json";
    auto* self_cmd =
        app.add_subcommand("selftest", "toy-curve oracle equivalence and attack scenarios");
    self_cmd->add_option("--summary", summary_path, "machine-readable scenario summary path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (setup_cmd->parsed())
            return cmd_kgc_setup(curve_name, setup_out);
        if (extract_cmd->parsed())
            return cmd_kgc_extract(extract_id, extract_master, extract_out);
        if (party_cmd->parsed())
            return cmd_party_init(party_id, party_partial, party_params, party_out);
        if (hs_cmd->parsed()) {
            if (listen_addr.empty() && connect_addr.empty()) {
                std::cerr << "handshake needs --listen or --connect\n";
                return kExitUsage;
            }
            return cmd_handshake(listen_addr, connect_addr, peer_id, hs_party, hs_params,
                                 hs_peers);
        }
        if (bench_cmd->parsed())
            return cmd_bench(bench_iters, bench_toy);
        if (self_cmd->parsed())
            return cmd_selftest(summary_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProtocol;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProtocol;
    }
    return kExitUsage;
}
