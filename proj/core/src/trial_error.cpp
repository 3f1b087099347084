#include "braidcsp/trial_error.hpp"

#include <algorithm>

namespace braidcsp {

TeTrace te_probe(const CspInstance& inst, const KnowledgeState& ks, const ResolutionTheory& theory, Atom z) {
    inst.check_atom(z);
    TeTrace trace;
    trace.probed = z;

    KnowledgeState copy = ks;
    copy.assert_value(inst, z);
    auto ev = brt_fixpoint(inst, copy);
    trace.events.insert(trace.events.end(), ev.begin(), ev.end());
    if (!theory.is_brt()) {
        while (!copy.contradiction() && !copy.fully_decided()) {
            auto elim = find_elimination(inst, copy, theory.kinds, theory.max_len);
            if (!elim) break;
            copy.delete_candidate(inst, elim->target);
            trace.pattern_steps.push_back(std::move(*elim));
            auto more = brt_fixpoint(inst, copy);
            trace.events.insert(trace.events.end(), more.begin(), more.end());
        }
    }
    trace.outcome = copy.contradiction() ? TeTrace::Outcome::Contradiction : TeTrace::Outcome::Quiescence;
    return trace;
}

TeResult te_solve(const CspInstance& inst, KnowledgeState start, const ResolutionTheory& theory,
                  bool keep_quiescent) {
    TeResult result;
    KnowledgeState ks = std::move(start);

    auto run_theory = [&] {
        brt_fixpoint(inst, ks);
        if (theory.is_brt()) return;
        while (!ks.contradiction() && !ks.fully_decided()) {
            auto elim = find_elimination(inst, ks, theory.kinds, theory.max_len);
            if (!elim) break;
            ks.delete_candidate(inst, elim->target);
            brt_fixpoint(inst, ks);
        }
    };

    for (;;) {
        run_theory();
        if (ks.contradiction() || ks.fully_decided()) break;
        bool eliminated = false;
        for (Atom z = 0; z < inst.atom_count() && !eliminated; ++z) {
            if (!ks.present(z)) continue;
            TeTrace trace = te_probe(inst, ks, theory, z);
            bool hit = trace.outcome == TeTrace::Outcome::Contradiction;
            if (hit || keep_quiescent) result.probes.push_back(std::move(trace));
            if (hit) {
                ks.delete_candidate(inst, z);
                eliminated = true;
            }
        }
        if (!eliminated) break;
    }
    result.solved = ks.fully_decided() && !ks.contradiction();
    result.final = std::move(ks);
    return result;
}

PatternWitness braid_from_trace(const CspInstance& inst, const KnowledgeState& ks, const TeTrace& trace) {
    if (trace.outcome != TeTrace::Outcome::Contradiction)
        throw NoWitness("trace ended in quiescence");
    if (!trace.pattern_steps.empty())
        throw NoWitness("extraction needs a basic-rules trace");

    const Atom z = trace.probed;

    // Per-atom elimination record from the trace: cause and log position.
    std::vector<Atom> elim_cause(inst.atom_count(), -1);
    std::vector<int> elim_pos(inst.atom_count(), -1);

    Bitset is_right(inst.atom_count());
    Bitset used(inst.atom_count());
    std::vector<Atom> rights;
    PatternWitness w;
    w.kind = PatternKind::ZtBraid;
    w.target = z;

    auto qualifies = [&](Atom cause) { return cause == z || is_right.test(cause); };

    int pos = 0;
    bool closed = false;
    for (const auto& ev : trace.events) {
        ++pos;
        switch (ev.kind) {
        case BasicEvent::Kind::Ecp:
            elim_cause[ev.subject] = ev.cause;
            elim_pos[ev.subject] = pos;
            break;
        case BasicEvent::Kind::Single: {
            // Pair the assertion with the earliest qualifying elimination on
            // its variable; skip assertions that were already pending.
            Atom left = -1;
            int best = INT32_MAX;
            for (Atom a : inst.variable(ev.var).domain) {
                if (elim_pos[a] < 0 || used.test(a)) continue;
                if (!qualifies(elim_cause[a])) continue;
                if (elim_pos[a] < best) {
                    best = elim_pos[a];
                    left = a;
                }
            }
            if (left < 0) break;
            PatternStep step;
            step.left = left;
            step.right = ev.subject;
            step.justification = elim_cause[left];
            step.var = ev.var;
            w.steps.push_back(std::move(step));
            used.set(left);
            used.set(ev.subject);
            is_right.set(ev.subject);
            rights.push_back(ev.subject);
            break;
        }
        case BasicEvent::Kind::Contradiction: {
            // Close with the latest eliminated candidate of the empty variable.
            Atom left = -1;
            int best = -1;
            for (Atom a : inst.variable(ev.var).domain) {
                if (elim_pos[a] < 0 || used.test(a)) continue;
                if (!qualifies(elim_cause[a])) continue;
                if (elim_pos[a] > best) {
                    best = elim_pos[a];
                    left = a;
                }
            }
            if (left < 0) throw NoWitness("contradiction not reachable from the probe");
            PatternStep step;
            step.left = left;
            step.right = -1;
            step.justification = elim_cause[left];
            step.var = ev.var;
            w.steps.push_back(std::move(step));
            closed = true;
            break;
        }
        }
        if (closed) break;
    }
    if (!closed) throw NoWitness("trace log carries no contradiction event");

    // Annotate z-/t-candidates per step for explanation output.
    std::vector<Atom> prior;
    for (auto& step : w.steps) {
        for (Atom a : inst.variable(step.var).domain) {
            if (!ks.present(a) || a == step.left || a == step.right) continue;
            if (inst.linked(a, z)) step.z_candidates.push_back(a);
            for (Atom r : prior)
                if (inst.linked(a, r)) {
                    step.t_candidates.push_back(a);
                    break;
                }
        }
        if (step.right >= 0) prior.push_back(step.right);
    }
    return w;
}

std::vector<std::string> trace_lines(const CspInstance& inst, const TeTrace& trace) {
    std::vector<std::string> out;
    out.reserve(trace.events.size());
    std::string prefix = "TE[" + inst.atom_name(trace.probed) + "] ";
    for (const auto& ev : trace.events) out.push_back(prefix + to_line(inst, ev));
    return out;
}

} // namespace braidcsp
