#pragma once

#include <string>
#include <vector>

#include "braidcsp/theories.hpp"

namespace braidcsp {

/// Record of one trial: the probed candidate, the basic-rule event log of the
/// probe copy, and how the copy ended.
struct TeTrace {
    enum class Outcome { Contradiction, Quiescence };

    Atom probed = -1;
    std::vector<BasicEvent> events;       // basic-rule log of the copy's run
    std::vector<Elimination> pattern_steps; // only for non-basic base theories
    Outcome outcome = Outcome::Quiescence;
};

/// Assert z in a copy of ks and run the theory to quiescence or
/// contradiction. The original state is untouched; the caller deletes z
/// exactly when the outcome is a contradiction.
TeTrace te_probe(const CspInstance& inst, const KnowledgeState& ks, const ResolutionTheory& theory, Atom z);

struct TeResult {
    bool solved = false;
    KnowledgeState final;
    std::vector<TeTrace> probes; // contradiction probes always kept; see flag
};

/// Solve with the theory's rules whenever they apply, probing remaining
/// candidates in candidate order whenever they don't. Solutions reached
/// inside probe copies are discarded. `keep_quiescent` also retains the
/// (many) probes that end quietly.
TeResult te_solve(const CspInstance& inst, KnowledgeState start, const ResolutionTheory& theory,
                  bool keep_quiescent = false);

/// Build a zt-braid on target trace.probed out of a contradiction trace, by
/// pairing each asserted value with an elimination on its variable caused by
/// the probe or an earlier assertion. Throws NoWitness when the trace did not
/// end in a contradiction (or extraction degenerates).
PatternWitness braid_from_trace(const CspInstance& inst, const KnowledgeState& ks, const TeTrace& trace);

/// Event-log lines prefixed with `TE[<Z>]`.
std::vector<std::string> trace_lines(const CspInstance& inst, const TeTrace& trace);

} // namespace braidcsp
