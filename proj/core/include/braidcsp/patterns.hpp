#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "braidcsp/csp.hpp"

namespace braidcsp {

enum class PatternKind : std::uint8_t {
    BivalueChain = 0,
    TChain = 1,
    ZWhip = 2,
    ZtWhip = 3,
    ZtBraid = 4,
};

inline constexpr int kPatternKindCount = 5;
const char* kind_name(PatternKind k);

/// Small set of pattern kinds.
class KindSet {
public:
    KindSet() = default;
    KindSet(std::initializer_list<PatternKind> kinds) {
        for (auto k : kinds) add(k);
    }
    void add(PatternKind k) { mask_ |= 1u << static_cast<int>(k); }
    bool contains(PatternKind k) const { return mask_ & (1u << static_cast<int>(k)); }
    bool empty() const { return mask_ == 0; }

private:
    std::uint8_t mask_ = 0;
};

/// One step of a chain/whip/braid. The final step of whips and braids has no
/// right candidate. `justification` is the candidate the left one is linked
/// to: the target, or an earlier right-linking candidate (braids may pick any
/// earlier one, chains and whips use the immediately preceding one).
struct PatternStep {
    Atom left = -1;
    Atom right = -1;         // -1 in the final step of whips/braids
    Atom justification = -1; // -1 only for a target-less chain's first step
    Var var = -1;            // step variable hint; -1 lets validation pick one
    std::vector<Atom> z_candidates; // step-variable values linked to the target
    std::vector<Atom> t_candidates; // step-variable values linked to an earlier right
};

/// A recorded pattern occurrence: the kind, the target it was built on, and
/// the step sequence with link justifications.
struct PatternWitness {
    PatternKind kind = PatternKind::ZtWhip;
    Atom target = -1; // -1 only for pure chains used without a target
    std::vector<PatternStep> steps;

    int length() const { return static_cast<int>(steps.size()); }
};

/// An elimination licensed by a validated witness.
struct Elimination {
    Atom target = -1;
    PatternWitness witness;
};

/// Check every defining clause of the witness kind against the state and
/// target: candidate distinctness, same-variable pairing, link structure,
/// the only-compatible-candidate clause, and the final-step emptiness clause.
/// Throws StaleWitness when a named candidate is absent from the state;
/// returns false on any clause failure.
bool validate_pattern(const CspInstance& inst, const KnowledgeState& ks, const PatternWitness& w, Atom z);

/// Search tuning shared by the pattern searches.
struct SearchPrefs {
    std::vector<PatternKind> kind_priority; // empty = default order
    const std::vector<Atom>* scan_order = nullptr; // target scan, null = atom order
    bool shortest_first = true;
    const std::vector<char>* allowed_vars = nullptr; // per-variable filter, null = all
};

/// Complete bounded search for one kind built on target z: returns a witness
/// of length <= max_len (the shortest, searched in deterministic order) or
/// absence, which proves no such pattern of length <= max_len exists.
/// max_len < 0 means unbounded (capped by the variable count).
std::optional<PatternWitness> search_pattern(const CspInstance& inst, const KnowledgeState& ks,
                                             PatternKind kind, Atom z, int max_len,
                                             const SearchPrefs& prefs = {});

std::optional<PatternWitness> search_whip(const CspInstance& inst, const KnowledgeState& ks, Atom z, int max_len);
std::optional<PatternWitness> search_braid(const CspInstance& inst, const KnowledgeState& ks, Atom z, int max_len);

/// Scan present candidates for the first elimination licensed by any allowed
/// kind at length <= max_len, preferring shorter witnesses and, at equal
/// length, the kind-priority order.
std::optional<Elimination> find_elimination(const CspInstance& inst, const KnowledgeState& ks,
                                            KindSet kinds, int max_len,
                                            const SearchPrefs& prefs = {});

/// Rewrite a bivalue-chain witness (with target) as a zt-whip of equal length.
PatternWitness chain_to_whip(const PatternWitness& w);

/// Rewrite a zt-whip witness as a zt-braid of equal length.
PatternWitness whip_to_braid(const PatternWitness& w);

/// One-line rendering: `zt-whip[2]: {L1 R1} - L2 => not Z`, with braid
/// justifications suffixed per left candidate: `{L1(<Z) R1}`.
std::string to_line(const CspInstance& inst, const PatternWitness& w);

} // namespace braidcsp
