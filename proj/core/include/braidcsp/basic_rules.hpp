#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "braidcsp/csp.hpp"

namespace braidcsp {

/// One application of an elementary rule: an ECP elimination, a single
/// assertion, or a contradiction detection.
struct BasicEvent {
    enum class Kind { Ecp, Single, Contradiction };

    Kind kind;
    Atom subject = -1; // eliminated atom (Ecp) or asserted atom (Single)
    Atom cause = -1;   // the decided value that forced an Ecp elimination
    Var var = -1;      // single's variable (Single) or the empty variable (Contradiction)
};

/// Delete every remaining candidate linked to a decided value. The result is
/// stable under re-application; each deletion is recorded with its cause.
std::vector<BasicEvent> apply_ecp(const CspInstance& inst, KnowledgeState& ks);

/// Assert the single candidate of the first open variable (in variable
/// order) that has exactly one left. At most one assertion per call.
std::optional<BasicEvent> apply_single(const CspInstance& inst, KnowledgeState& ks);

/// Flag the first open variable with an empty candidate set, if any.
std::optional<BasicEvent> detect_contradiction(const CspInstance& inst, KnowledgeState& ks);

/// Alternate ECP / single / contradiction detection until nothing applies or
/// a contradiction is flagged. Returns the full ordered event log.
std::vector<BasicEvent> brt_fixpoint(const CspInstance& inst, KnowledgeState& ks);

/// Fixpoint variant that applies one elementary step at a time, trying rule
/// kinds in the given priority order. Used to exercise order independence.
std::vector<BasicEvent> brt_fixpoint_ordered(const CspInstance& inst, KnowledgeState& ks,
                                             std::span<const BasicEvent::Kind> priority);

/// `ECP <cand> caused-by <value>` / `S <cand>` / `CD <variable>`.
std::string to_line(const CspInstance& inst, const BasicEvent& ev);

} // namespace braidcsp
