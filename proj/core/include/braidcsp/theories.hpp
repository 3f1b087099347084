#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "braidcsp/basic_rules.hpp"
#include "braidcsp/patterns.hpp"

namespace braidcsp {

/// A resolution theory: the basic rules plus a set of pattern rules capped at
/// a maximum length. L_n allows zt-whips of length <= n, M_n zt-braids;
/// max_len < 0 means unbounded.
struct ResolutionTheory {
    KindSet kinds;
    int max_len = 0;

    static ResolutionTheory brt() { return {}; }
    static ResolutionTheory whips(int n) { return {{PatternKind::ZtWhip}, n}; }
    static ResolutionTheory braids(int n) { return {{PatternKind::ZtBraid}, n}; }

    bool is_brt() const { return kinds.empty(); }
    std::string name() const;

    /// Accepts `brt`, `L<n>`, `M<n>` (case-insensitive).
    static std::optional<ResolutionTheory> parse(std::string_view text);
};

/// A deterministic priority scheme superimposed on a theory: pattern-kind
/// priorities, the target scan order (derived from a seed), and whether
/// shorter witnesses are preferred.
struct Strategy {
    std::vector<PatternKind> kind_priority; // empty = engine default
    std::uint64_t scan_seed = 0;            // 0 = dense candidate order
    bool shortest_first = true;

    /// Derive a varied but reproducible strategy from a seed.
    static Strategy seeded(std::uint64_t seed);

    /// `default` or comma-separated tokens: `seed=<n>`, `shortest`,
    /// `first-found`, `kinds=<bc|tc|zw|ztw|ztb>+...`.
    static std::optional<Strategy> parse(std::string_view text);

    /// Materialize search preferences. `scan_storage` backs the permuted
    /// scan order and must outlive the returned prefs.
    SearchPrefs prefs(const CspInstance& inst, std::vector<Atom>& scan_storage) const;
};

enum class SolveStatus { Solved, Stuck, Contradiction };
const char* to_string(SolveStatus s);

/// One recorded rule application and the state digest after it.
struct PathStep {
    std::variant<BasicEvent, Elimination> action;
    std::uint64_t digest_after = 0;
};

/// A full resolution path from a starting state to its final state.
struct ResolutionPath {
    std::vector<PathStep> steps;
    KnowledgeState final;
    SolveStatus status = SolveStatus::Stuck;
};

/// Apply one recorded action to a state (used by replay and perturbations).
void apply_action(const CspInstance& inst, KnowledgeState& ks, const std::variant<BasicEvent, Elimination>& action);

/// Run the theory under the strategy: basic fixpoint, then one pattern
/// elimination at a time, until solved, contradiction or no rule applies.
ResolutionPath solve(const CspInstance& inst, KnowledgeState start, const ResolutionTheory& theory,
                     const Strategy& strategy = {});
ResolutionPath solve(const CspInstance& inst, const ResolutionTheory& theory, const Strategy& strategy = {});

/// Re-run a path from the start state, checking that every digest matches.
bool replay(const CspInstance& inst, KnowledgeState start, const ResolutionPath& path);

/// Text log: one rule application per line.
std::vector<std::string> path_lines(const CspInstance& inst, const ResolutionPath& path);

enum class Ladder { Whip, Braid };

struct Rating {
    int level = 0;
    bool above_cap = false;

    std::string to_string() const { return above_cap ? ">" + std::to_string(level) : std::to_string(level); }
};

/// Smallest n <= cap such that L_n (whip ladder) or M_n (braid ladder) solves
/// the instance under the default strategy; 0 means the basic rules suffice.
/// Throws RatingUndefined when the instance has no unique solution.
Rating rate(const CspInstance& inst, Ladder ladder, int cap);

struct ConfluenceReport {
    bool confluent = false;
    std::vector<std::uint64_t> final_digests; // one per strategy
};

/// Solve under each strategy and compare final state digests (contradiction
/// states all map to one digest). A falsifier, not a prover.
ConfluenceReport check_confluence(const CspInstance& inst, const ResolutionTheory& theory,
                                  const std::vector<Strategy>& strategies);

/// After one valid rule application, either z is gone or some braid of
/// length <= the original witness still eliminates it.
bool check_stability(const CspInstance& inst, const KnowledgeState& ks, const PatternWitness& witness,
                     Atom z, const std::variant<BasicEvent, Elimination>& perturbation);

} // namespace braidcsp
