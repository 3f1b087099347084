#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "braidcsp/bits.hpp"
#include "braidcsp/errors.hpp"

namespace braidcsp {

/// Dense index of a candidate atom. One atom is one (variable, value) pair in
/// the single-family view; instances may expose the same atom through several
/// variables (e.g. the four Sudoku families share one atom per digit/cell).
using Atom = std::int32_t;

/// Dense index of a variable.
using Var = std::int32_t;

/// A (variable, value) reference; `value` indexes the variable's domain.
struct CandidateRef {
    Var variable = -1;
    int value = -1;
};

struct VariableInfo {
    std::string name;
    int family = 0;
    std::array<int, 2> coords{0, 0};
    std::vector<Atom> domain; // value index -> atom
};

class CspInstance;

/// The mutable part of a resolution process: per-variable decided value or
/// open candidate set, plus the contradiction flag. Value semantics; copies
/// are cheap and explicit.
class KnowledgeState {
public:
    KnowledgeState() = default;

    bool present(Atom a) const { return present_.test(a); }
    const Bitset& present_mask() const { return present_; }

    bool is_decided(Var v) const { return decided_[v] >= 0; }
    Atom decided_atom(Var v) const { return decided_[v]; }

    /// Number of remaining candidates of an open variable.
    int candidate_count(Var v) const { return counts_[v]; }

    /// Exactly two candidates remain and the variable is open.
    bool is_bivalue(Var v) const { return decided_[v] < 0 && counts_[v] == 2; }

    std::optional<Var> contradiction() const {
        if (contradiction_ < 0) return std::nullopt;
        return contradiction_;
    }
    void flag_contradiction(Var v) { contradiction_ = v; }

    int open_var_count() const { return open_vars_; }
    bool fully_decided() const { return open_vars_ == 0; }

    /// Decide the atom's variable(s) to its value and remove the atom from
    /// candidate storage. Other candidates of the variable stay present until
    /// constraint propagation removes them.
    void assert_value(const CspInstance& inst, Atom a);

    /// Remove one candidate. Idempotent: returns false when already absent.
    bool delete_candidate(const CspInstance& inst, Atom a);

    /// Remaining candidates of a variable, in domain (value) order.
    std::vector<Atom> candidates_of(const CspInstance& inst, Var v) const;

    /// Canonical 64-bit digest of the state. All contradiction-flagged states
    /// share one distinguished digest.
    std::uint64_t digest() const;

private:
    friend class CspBuilder;
    friend class CspInstance;

    Bitset present_;
    std::vector<Atom> decided_;    // per variable, -1 = open
    std::vector<std::uint16_t> counts_;
    Var contradiction_ = -1;
    int open_vars_ = 0;
};

/// Immutable problem description: variables with finite domains, the dense
/// atom space, and the state-independent link relation. Safe to share across
/// concurrent workers.
class CspInstance {
public:
    int atom_count() const { return atom_count_; }
    int var_count() const { return static_cast<int>(vars_.size()); }

    /// Direct-contradiction test. Symmetric, irreflexive, state-independent.
    bool linked(Atom a, Atom b) const {
        check_atom(a);
        check_atom(b);
        return adj_[a].test(b);
    }
    bool linked(CandidateRef a, CandidateRef b) const { return linked(atom_of(a), atom_of(b)); }

    const Bitset& adjacency(Atom a) const { return adj_[a]; }

    const VariableInfo& variable(Var v) const { return vars_[v]; }
    const Bitset& domain_mask(Var v) const { return domain_mask_[v]; }

    /// Variables whose domain contains the atom.
    std::span<const Var> views_of(Atom a) const {
        return {views_flat_.data() + view_off_[a], static_cast<std::size_t>(view_off_[a + 1] - view_off_[a])};
    }

    Atom atom_of(CandidateRef c) const {
        if (c.variable < 0 || c.variable >= var_count())
            throw MalformedRef("unknown variable " + std::to_string(c.variable));
        const auto& dom = vars_[c.variable].domain;
        if (c.value < 0 || c.value >= static_cast<int>(dom.size()))
            throw MalformedRef("value " + std::to_string(c.value) + " outside domain of " + vars_[c.variable].name);
        return dom[c.value];
    }

    /// Position of the atom in the variable's domain, -1 when not a member.
    int value_of(Var v, Atom a) const {
        const auto& dom = vars_[v].domain;
        for (std::size_t i = 0; i < dom.size(); ++i)
            if (dom[i] == a) return static_cast<int>(i);
        return -1;
    }

    const std::string& atom_name(Atom a) const { return atom_names_[a]; }
    const std::string& var_name(Var v) const { return vars_[v].name; }

    const KnowledgeState& initial_state() const { return initial_; }

    void check_atom(Atom a) const {
        if (a < 0 || a >= atom_count_) throw MalformedRef("unknown atom " + std::to_string(a));
    }

private:
    friend class CspBuilder;

    int atom_count_ = 0;
    std::vector<Bitset> adj_;
    std::vector<VariableInfo> vars_;
    std::vector<Bitset> domain_mask_;
    std::vector<std::int32_t> view_off_;
    std::vector<Var> views_flat_;
    std::vector<std::string> atom_names_;
    KnowledgeState initial_;
};

/// Builds an instance: declare atoms and variables, add constraint links,
/// record givens. The link relation is materialized once at build time from
/// the declared binary constraints plus the mandatory same-variable links,
/// and never changes afterwards.
class CspBuilder {
public:
    explicit CspBuilder(int atom_count);

    void set_atom_name(Atom a, std::string name);

    Var add_variable(std::string name, int family, std::array<int, 2> coords, std::vector<Atom> domain);

    /// Declare a direct contradiction between two distinct atoms.
    void add_link(Atom a, Atom b);

    /// Record a given to be asserted in the initial state. When the assertion
    /// would conflict with an earlier given, the fallback restricts
    /// `primary_view` to this atom instead, so the conflict surfaces through
    /// ordinary contradiction detection.
    void add_given(Atom a, Var primary_view);

    CspInstance build();

private:
    int atom_count_;
    std::vector<std::string> atom_names_;
    std::vector<VariableInfo> vars_;
    std::vector<std::pair<Atom, Atom>> links_;
    std::vector<std::pair<Atom, Var>> givens_;
};

/// Count completions of a state by exhaustive backtracking over the link
/// relation (forward checking only, no resolution rules). Stops at `cap`.
int count_solutions(const CspInstance& inst, const KnowledgeState& start, int cap);

} // namespace braidcsp
