#include "braidcsp/basic_rules.hpp"

namespace braidcsp {

namespace {

/// Eliminations forced by one decided value, in atom order.
void ecp_for_value(const CspInstance& inst, KnowledgeState& ks, Atom value, std::vector<BasicEvent>& out) {
    inst.adjacency(value).for_each_set([&](int b) {
        if (!ks.present(b)) return;
        ks.delete_candidate(inst, b);
        out.push_back({BasicEvent::Kind::Ecp, b, value, -1});
    });
}

/// Decided value atoms in ascending atom order (deduplicated across views).
std::vector<Atom> decided_values(const CspInstance& inst, const KnowledgeState& ks) {
    Bitset seen(inst.atom_count());
    for (Var v = 0; v < inst.var_count(); ++v)
        if (ks.is_decided(v)) seen.set(ks.decided_atom(v));
    std::vector<Atom> out;
    seen.for_each_set([&](int a) { out.push_back(a); });
    return out;
}

} // namespace

std::vector<BasicEvent> apply_ecp(const CspInstance& inst, KnowledgeState& ks) {
    std::vector<BasicEvent> out;
    for (Atom value : decided_values(inst, ks)) ecp_for_value(inst, ks, value, out);
    return out;
}

std::optional<BasicEvent> apply_single(const CspInstance& inst, KnowledgeState& ks) {
    for (Var v = 0; v < inst.var_count(); ++v) {
        if (ks.is_decided(v) || ks.candidate_count(v) != 1) continue;
        Atom a = -1;
        for (Atom d : inst.variable(v).domain)
            if (ks.present(d)) { a = d; break; }
        bool blocked = false;
        for (Var w : inst.views_of(a))
            if (ks.is_decided(w)) blocked = true;
        // A single whose atom is seen by a decided variable is unreachable at
        // ECP stability; skip it here and leave the clash to ECP + CD.
        if (blocked) continue;
        ks.assert_value(inst, a);
        return BasicEvent{BasicEvent::Kind::Single, a, -1, v};
    }
    return std::nullopt;
}

std::optional<BasicEvent> detect_contradiction(const CspInstance& inst, KnowledgeState& ks) {
    if (ks.contradiction()) return std::nullopt;
    for (Var v = 0; v < inst.var_count(); ++v) {
        if (ks.is_decided(v) || ks.candidate_count(v) != 0) continue;
        ks.flag_contradiction(v);
        return BasicEvent{BasicEvent::Kind::Contradiction, -1, -1, v};
    }
    return std::nullopt;
}

std::vector<BasicEvent> brt_fixpoint(const CspInstance& inst, KnowledgeState& ks) {
    std::vector<BasicEvent> log;
    if (ks.contradiction()) return log;
    auto ev = apply_ecp(inst, ks);
    log.insert(log.end(), ev.begin(), ev.end());
    for (;;) {
        if (auto cd = detect_contradiction(inst, ks)) {
            log.push_back(*cd);
            break;
        }
        auto s = apply_single(inst, ks);
        if (!s) break;
        log.push_back(*s);
        // Only the fresh value can force new eliminations.
        ecp_for_value(inst, ks, s->subject, log);
    }
    return log;
}

std::vector<BasicEvent> brt_fixpoint_ordered(const CspInstance& inst, KnowledgeState& ks,
                                             std::span<const BasicEvent::Kind> priority) {
    std::vector<BasicEvent> log;
    for (;;) {
        if (ks.contradiction()) break;
        bool applied = false;
        for (auto kind : priority) {
            switch (kind) {
            case BasicEvent::Kind::Ecp: {
                for (Atom value : decided_values(inst, ks)) {
                    int victim = -1;
                    inst.adjacency(value).for_each_set([&](int b) {
                        if (victim < 0 && ks.present(b)) victim = b;
                    });
                    if (victim >= 0) {
                        ks.delete_candidate(inst, victim);
                        log.push_back({BasicEvent::Kind::Ecp, victim, value, -1});
                        applied = true;
                        break;
                    }
                }
                break;
            }
            case BasicEvent::Kind::Single: {
                if (auto s = apply_single(inst, ks)) {
                    log.push_back(*s);
                    applied = true;
                }
                break;
            }
            case BasicEvent::Kind::Contradiction: {
                if (auto cd = detect_contradiction(inst, ks)) {
                    log.push_back(*cd);
                    applied = true;
                }
                break;
            }
            }
            if (applied) break;
        }
        if (!applied) break;
    }
    return log;
}

std::string to_line(const CspInstance& inst, const BasicEvent& ev) {
    switch (ev.kind) {
    case BasicEvent::Kind::Ecp:
        return "ECP " + inst.atom_name(ev.subject) + " caused-by " + inst.atom_name(ev.cause);
    case BasicEvent::Kind::Single:
        return "S " + inst.atom_name(ev.subject);
    case BasicEvent::Kind::Contradiction:
        return "CD " + inst.var_name(ev.var);
    }
    return {};
}

} // namespace braidcsp
