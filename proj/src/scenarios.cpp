// Copyright (c) 2026-present The clka developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.
//
// Scripted attack computations for the security-property smoke tests.
// Each scenario mounts one concrete attack through the adversary query
// surface and asserts that the attacker's best-effort key disagrees with
// the honest one. A pass is evidence, not a proof.

#include "clka/eck.hpp"
#include "clka/errors.hpp"

namespace clka {

namespace {

struct HonestRun {
    SessionHandle at_initiator;
    SessionHandle at_responder;
    SessionKey sk_initiator;
    SessionKey sk_responder;
    std::vector<uint8_t> m1_bytes;
    std::vector<uint8_t> m2_bytes;
};

HonestRun honest_run(World& w, const Identity& a, const Identity& b) {
    auto r1 = w.send({a, b, {}}, std::nullopt);
    auto r2 = w.send({b, a, {}}, r1.outgoing);
    auto r3 = w.send({a, b, r1.session}, r2.outgoing);
    if (r2.decision != Decision::accept || r3.decision != Decision::accept)
        throw Error(Errc::invalid_state, "honest relayed run did not accept");
    return {r1.session,
            r2.session,
            *w.session(r1.session)->session_key,
            *w.session(r2.session)->session_key,
            *r1.outgoing,
            *r2.outgoing};
}

// W of the responder formula: P_i + R_i + h1(ID_i,R_i)*P_KGC + T_i, all public.
Point responder_w(const World& w, const Identity& id, const Point& r_point,
                  const Point& t_point) {
    const GroupParams& g = w.params().group();
    const Point pub = *w.directory().find(id);
    const Point h_pkgc = scalar_mul(g, h1(g, id, r_point), w.params().kgc_public);
    return point_add(g, point_add(g, point_add(g, pub, r_point), h_pkgc), t_point);
}

// W of the initiator formula: R_i + h1(ID_i,R_i)*P_KGC.
Point initiator_w(const World& w, const Identity& id, const Point& r_point) {
    const GroupParams& g = w.params().group();
    return point_add(g, r_point, scalar_mul(g, h1(g, id, r_point), w.params().kgc_public));
}

// s_i*P reconstructed from public data (the partial-key validation identity).
Point s_point(const World& w, const Identity& id, const Point& r_point) {
    return initiator_w(w, id, r_point);
}

ScenarioReport scenario_bis(World& w) {
    const GroupParams& g = w.params().group();
    const Identity a("bis-alice"), b("bis-bob");
    w.create(a);
    w.create(b);

    // observe one M1 from A to learn the public commitment R_A
    auto leak = w.send({a, b, {}}, std::nullopt);
    auto [m1_obs, lt] = decode_msg(g, *leak.outgoing);
    (void)lt;

    // forge M1 claiming A with an adversary-chosen ephemeral
    Drbg adv(0xB150001);
    const Scalar t_adv = random_scalar(g, adv);
    const Point t_adv_pub = scalar_mul(g, t_adv, g.generator);
    const HandshakeMessage forged{a, m1_obs.r_point, t_adv_pub};
    auto r2 = w.send({b, a, {}}, encode_msg(g, forged, MsgType::m1));
    if (r2.decision != Decision::accept)
        return {"BIS", false, "responder rejected the forged M1 outright"};
    const SessionKey sk_b = *w.session(r2.session)->session_key;

    // without (x_A + s_A) the best substitution is u = t_adv
    auto [m2, mt] = decode_msg(g, *r2.outgoing);
    (void)mt;
    const Point pb = *w.directory().find(b);
    const Point wb = initiator_w(w, b, m2.r_point);
    const Point k1_guess = scalar_mul(g, t_adv, point_add(g, pb, wb));
    const Point k2_guess = scalar_mul(g, t_adv, point_add(g, m2.t_point, wb));
    const SessionKey guess = h2(g, a, b, t_adv_pub, m2.t_point, k1_guess, k2_guess);

    const bool pass = guess != sk_b;
    return {"BIS", pass,
            "impersonator without A's private pair cannot compute the key B derived"};
}

ScenarioReport scenario_uks(World& w) {
    const GroupParams& g = w.params().group();
    const Identity a("uks-alice"), b("uks-bob"), c("uks-carol");
    w.create(a);
    w.create(b);
    w.create(c);

    auto r1 = w.send({a, b, {}}, std::nullopt);
    auto [m1, t1] = decode_msg(g, *r1.outgoing);
    (void)t1;
    // learn C's public commitment from an unrelated flow
    auto leak = w.send({c, a, {}}, std::nullopt);
    auto [m1_c, t2] = decode_msg(g, *leak.outgoing);
    (void)t2;

    // rewrite the sender identity to C while keeping A's ephemeral
    const HandshakeMessage rewritten{c, m1_c.r_point, m1.t_point};
    auto r2 = w.send({b, c, {}}, encode_msg(g, rewritten, MsgType::m1));
    auto r3 = w.send({a, b, r1.session}, r2.outgoing);
    if (r2.decision != Decision::accept || r3.decision != Decision::accept)
        return {"UKS", true, "identity rewrite refused outright"};

    const SessionKey sk_a = *w.session(r1.session)->session_key;
    const SessionKey sk_b = *w.session(r2.session)->session_key;
    const bool pass = sk_a != sk_b;
    return {"UKS", pass,
            "identity substitution leaves the two sides without a shared key"};
}

ScenarioReport scenario_kks(World& w) {
    const Identity a("kks-alice"), b("kks-bob");
    w.create(a);
    w.create(b);
    const HonestRun run1 = honest_run(w, a, b);
    const HonestRun run2 = honest_run(w, a, b);
    const bool pass = run1.sk_initiator != run2.sk_initiator;
    return {"KKS", pass, "independent runs between the same parties derive distinct keys"};
}

ScenarioReport scenario_kci(World& w) {
    const GroupParams& g = w.params().group();
    const Identity a("kci-alice"), b("kci-bob");
    w.create(a);
    w.create(b);

    // full long-term compromise of A
    const Scalar x_a = *w.reveal_secret_value(a);
    const PartialPrivateKey d_a = w.reveal_partial_private_key(a);

    // R_B is public; observe one B-initiated flow
    auto leak = w.send({b, a, {}}, std::nullopt);
    auto [m1_b, lt] = decode_msg(g, *leak.outgoing);
    (void)lt;

    // A initiates to B; the adversary answers in B's name
    auto r1 = w.send({a, b, {}}, std::nullopt);
    auto [m1, t1] = decode_msg(g, *r1.outgoing);
    (void)t1;
    Drbg adv(0xCC10001);
    const Scalar t_adv = random_scalar(g, adv);
    const Point t_adv_pub = scalar_mul(g, t_adv, g.generator);
    const HandshakeMessage forged_m2{b, m1_b.r_point, t_adv_pub};
    auto r3 = w.send({a, b, r1.session}, encode_msg(g, forged_m2, MsgType::m2));
    if (r3.decision != Decision::accept)
        return {"KCI", false, "victim rejected the forged M2 outright"};
    const SessionKey sk_a = *w.session(r1.session)->session_key;

    // adversary knows x_A, s_A, t_adv but not t_A; substitute T_A for the
    // missing t_A*(...) products
    const Point pb = *w.directory().find(b);
    const Point wb = initiator_w(w, b, m1_b.r_point);
    const Scalar xs = scalar_add(g, x_a, d_a.s_i);
    const Point k1_guess =
        point_add(g, scalar_mul(g, xs, point_add(g, pb, wb)), m1.t_point);
    const Point k2_guess =
        point_add(g, scalar_mul(g, xs, point_add(g, t_adv_pub, wb)), m1.t_point);
    const SessionKey guess = h2(g, a, b, m1.t_point, t_adv_pub, k1_guess, k2_guess);

    const bool pass = guess != sk_a;
    return {"KCI", pass,
            "holder of A's long-term key still cannot impersonate B to A"};
}

ScenarioReport scenario_wpfs(World& w) {
    const GroupParams& g = w.params().group();
    const Identity a("wpfs-alice"), b("wpfs-bob");
    w.create(a);
    w.create(b);
    const HonestRun run = honest_run(w, a, b);

    // afterwards the adversary learns every long-term secret
    const Scalar x_b = *w.reveal_secret_value(b);
    const PartialPrivateKey d_b = w.reveal_partial_private_key(b);
    (void)w.reveal_secret_value(a);
    (void)w.reveal_partial_private_key(a);
    (void)w.reveal_master_key();

    auto [m1, t1] = decode_msg(g, run.m1_bytes);
    auto [m2, t2] = decode_msg(g, run.m2_bytes);
    (void)t1;
    (void)t2;
    const Point w_a = responder_w(w, a, m1.r_point, m1.t_point);
    // K1 = (x_B+s_B)*W_A is fully recoverable from long-term keys alone
    const Point k1_true = scalar_mul(g, scalar_add(g, x_b, d_b.s_i), w_a);
    // K2 = (t_B+s_B)*W_A still needs t_B; substitute T_B for t_B*W_A
    const Point k2_guess = point_add(g, scalar_mul(g, d_b.s_i, w_a), m2.t_point);
    const SessionKey guess = h2(g, a, b, m1.t_point, m2.t_point, k1_true, k2_guess);

    const bool pass = guess != run.sk_initiator;
    return {"wPFS", pass,
            "passive adversary with all long-term keys recovers K1 but not the session key"};
}

ScenarioReport scenario_des(World& w) {
    const GroupParams& g = w.params().group();
    const Identity a("des-alice"), b("des-bob");
    w.create(a);
    w.create(b);
    const HonestRun run1 = honest_run(w, a, b);

    const Scalar t_b = w.reveal_ephemeral_key(run1.at_responder);
    (void)w.reveal_ephemeral_key(run1.at_initiator);

    auto [m1, ty1] = decode_msg(g, run1.m1_bytes);
    auto [m2, ty2] = decode_msg(g, run1.m2_bytes);
    (void)ty1;
    (void)ty2;
    const Point w_a = responder_w(w, a, m1.r_point, m1.t_point);
    // with ephemerals only, approximate the s_B/x_B products by their
    // public *P counterparts
    const Point sb_pt = s_point(w, b, m2.r_point);
    const Point k1_guess = point_add(g, *w.directory().find(b), sb_pt);
    const Point k2_guess = point_add(g, scalar_mul(g, t_b, w_a), sb_pt);
    const SessionKey guess = h2(g, a, b, m1.t_point, m2.t_point, k1_guess, k2_guess);

    // later sessions are unaffected by the disclosure
    const HonestRun run2 = honest_run(w, a, b);

    const bool pass = guess != run1.sk_initiator && run2.sk_initiator != run1.sk_initiator;
    return {"DES", pass,
            "leaked ephemerals neither recover their own session key nor later ones"};
}

ScenarioReport scenario_kgc_fs(World& w) {
    const GroupParams& g = w.params().group();
    const Identity a("kgcfs-alice"), b("kgcfs-bob");
    w.create(a);
    w.create(b);
    const HonestRun run = honest_run(w, a, b);

    (void)w.reveal_master_key();

    auto [m1, ty1] = decode_msg(g, run.m1_bytes);
    auto [m2, ty2] = decode_msg(g, run.m2_bytes);
    (void)ty1;
    (void)ty2;
    // the KGC sees only scalar*P images; substituting them for the
    // scalar*W_A products is the natural (and failing) attempt
    const Point sb_pt = s_point(w, b, m2.r_point);
    const Point k1_guess = point_add(g, *w.directory().find(b), sb_pt);
    const Point k2_guess = point_add(g, m2.t_point, sb_pt);
    const SessionKey guess = h2(g, a, b, m1.t_point, m2.t_point, k1_guess, k2_guess);

    const bool pass = guess != run.sk_initiator;
    return {"KGC-FS", pass, "master key plus public data does not yield past session keys"};
}

ScenarioReport scenario_kgc_les(World& w) {
    const GroupParams& g = w.params().group();
    const Identity a("kgcles-alice"), b("kgcles-bob");
    w.create(a);
    w.create(b);
    const HonestRun run = honest_run(w, a, b);

    // KGC-grade adversary: master key, both partial keys, both ephemerals —
    // everything except the user-chosen secret values
    (void)w.reveal_master_key();
    const PartialPrivateKey d_a = w.reveal_partial_private_key(a);
    (void)w.reveal_partial_private_key(b);
    const Scalar t_a = w.reveal_ephemeral_key(run.at_initiator);
    (void)w.reveal_ephemeral_key(run.at_responder);

    auto [m1, ty1] = decode_msg(g, run.m1_bytes);
    auto [m2, ty2] = decode_msg(g, run.m2_bytes);
    (void)ty1;
    (void)ty2;
    // initiator formula with x_A dropped: u' = s_A + t_A
    const Scalar u_guess = scalar_add(g, d_a.s_i, t_a);
    const Point wb = initiator_w(w, b, m2.r_point);
    const Point k1_guess = scalar_mul(g, u_guess, point_add(g, *w.directory().find(b), wb));
    const Point k2_guess = scalar_mul(g, u_guess, point_add(g, m2.t_point, wb));
    const SessionKey guess = h2(g, a, b, m1.t_point, m2.t_point, k1_guess, k2_guess);

    // with only {s, t} exposed per party the session even stays fresh
    const bool still_fresh = w.freshness(run.at_initiator).fresh;

    const bool pass = guess != run.sk_initiator && still_fresh;
    return {"KGC-LES", pass,
            "KGC with both ephemerals but no secret values cannot rebuild the key"};
}

}  // namespace

const std::vector<std::string>& scenario_ids() {
    static const std::vector<std::string> ids = {"BIS", "UKS",  "KKS",    "KCI",
                                                 "wPFS", "DES", "KGC-FS", "KGC-LES"};
    return ids;
}

ScenarioReport run_scenario(World& world, const std::string& scenario_id) {
    if (scenario_id == "BIS") return scenario_bis(world);
    if (scenario_id == "UKS") return scenario_uks(world);
    if (scenario_id == "KKS") return scenario_kks(world);
    if (scenario_id == "KCI") return scenario_kci(world);
    if (scenario_id == "wPFS") return scenario_wpfs(world);
    if (scenario_id == "DES") return scenario_des(world);
    if (scenario_id == "KGC-FS") return scenario_kgc_fs(world);
    if (scenario_id == "KGC-LES") return scenario_kgc_les(world);
    throw Error(Errc::unknown_party, "no scenario named " + scenario_id);
}

std::vector<ScenarioReport> run_all_scenarios(World& world) {
    std::vector<ScenarioReport> reports;
    reports.reserve(scenario_ids().size());
    for (const auto& id : scenario_ids())
        reports.push_back(run_scenario(world, id));
    return reports;
}

}  // namespace clka
