#include "braidcsp/patterns.hpp"

#include <algorithm>

namespace braidcsp {

namespace {

struct KindConfig {
    bool z_in_ref;      // target belongs to the compatibility reference set
    bool rights_in_ref; // earlier right-linking candidates belong to it
    bool is_chain;      // full final step, target linked to both ends
    bool net_links;     // left candidates may link to any earlier right
};

KindConfig config(PatternKind k) {
    switch (k) {
    case PatternKind::BivalueChain: return {false, false, true, false};
    case PatternKind::TChain: return {false, true, true, false};
    case PatternKind::ZWhip: return {true, false, false, false};
    case PatternKind::ZtWhip: return {true, true, false, false};
    case PatternKind::ZtBraid: return {true, true, false, true};
    }
    return {};
}

/// R is the only candidate of v compatible with the reference set, where
/// compatible means linked to none of its elements; L itself is exempt.
bool only_compatible(const CspInstance& inst, const KnowledgeState& ks, Var v, Atom left, Atom right,
                     const Bitset& ref_linked) {
    if (ref_linked.test(right)) return false;
    for (Atom a : inst.variable(v).domain) {
        if (!ks.present(a) || a == left || a == right) continue;
        if (!ref_linked.test(a)) return false;
    }
    return true;
}

/// No candidate of v apart from L is compatible with the reference set.
bool no_compatible(const CspInstance& inst, const KnowledgeState& ks, Var v, Atom left,
                   const Bitset& ref_linked) {
    for (Atom a : inst.variable(v).domain) {
        if (!ks.present(a) || a == left) continue;
        if (!ref_linked.test(a)) return false;
    }
    return true;
}

} // namespace

const char* kind_name(PatternKind k) {
    switch (k) {
    case PatternKind::BivalueChain: return "bivalue-chain";
    case PatternKind::TChain: return "t-chain";
    case PatternKind::ZWhip: return "z-whip";
    case PatternKind::ZtWhip: return "zt-whip";
    case PatternKind::ZtBraid: return "zt-braid";
    }
    return "?";
}

bool validate_pattern(const CspInstance& inst, const KnowledgeState& ks, const PatternWitness& w, Atom z) {
    const KindConfig cfg = config(w.kind);
    const int n = w.length();
    if (n == 0) return false;
    if (z < 0) return false;
    inst.check_atom(z);
    if (!ks.present(z)) throw StaleWitness("target " + inst.atom_name(z) + " is not a candidate");
    if (w.target >= 0 && w.target != z) return false;

    // Shape: chains carry a right in every step; whips and braids end bare.
    for (int k = 0; k < n; ++k) {
        bool last = k == n - 1;
        if (cfg.is_chain || !last) {
            if (w.steps[k].right < 0) return false;
        } else if (w.steps[k].right >= 0) {
            return false;
        }
    }

    // Presence and pairwise distinctness (target included).
    std::vector<Atom> atoms{z};
    for (const auto& s : w.steps) {
        inst.check_atom(s.left);
        if (!ks.present(s.left)) throw StaleWitness("candidate " + inst.atom_name(s.left) + " is gone");
        atoms.push_back(s.left);
        if (s.right >= 0) {
            inst.check_atom(s.right);
            if (!ks.present(s.right)) throw StaleWitness("candidate " + inst.atom_name(s.right) + " is gone");
            atoms.push_back(s.right);
        }
    }
    std::sort(atoms.begin(), atoms.end());
    if (std::adjacent_find(atoms.begin(), atoms.end()) != atoms.end()) return false;

    Bitset ref_linked(inst.atom_count());
    if (cfg.z_in_ref) ref_linked |= inst.adjacency(z);

    std::vector<Atom> rights;
    for (int k = 0; k < n; ++k) {
        const PatternStep& step = w.steps[k];
        const Atom left = step.left;

        if (cfg.net_links) {
            Atom just = step.justification;
            if (just < 0) { // derive: the target first, then rights in order
                if (inst.linked(left, z)) just = z;
                else
                    for (Atom r : rights)
                        if (inst.linked(left, r)) { just = r; break; }
                if (just < 0) return false;
            } else {
                bool admissible = just == z || std::find(rights.begin(), rights.end(), just) != rights.end();
                if (!admissible || !inst.linked(left, just)) return false;
            }
        } else {
            Atom expected = k == 0 ? z : rights.back();
            if (!inst.linked(left, expected)) return false;
            if (step.justification >= 0 && step.justification != expected) return false;
        }

        if (step.right >= 0) {
            // Some variable shared by left and right must satisfy the
            // only-compatible-candidate clause.
            bool ok = false;
            for (Var v : inst.views_of(left)) {
                if (inst.value_of(v, step.right) < 0) continue;
                if (only_compatible(inst, ks, v, left, step.right, ref_linked)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
            if (cfg.rights_in_ref) ref_linked |= inst.adjacency(step.right);
            rights.push_back(step.right);
        } else {
            // Final step: some variable of left has no compatible candidate.
            bool ok = false;
            for (Var v : inst.views_of(left)) {
                if (no_compatible(inst, ks, v, left, ref_linked)) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
    }

    if (cfg.is_chain && !inst.linked(z, w.steps.back().right)) return false;
    return true;
}

namespace {

struct StepRec {
    Atom left, right, just;
    Var var;
};

class Searcher {
public:
    Searcher(const CspInstance& inst, const KnowledgeState& ks, PatternKind kind, Atom z,
             const SearchPrefs& prefs)
        : inst_(inst), ks_(ks), kind_(kind), cfg_(config(kind)), z_(z), prefs_(prefs),
          used_(inst.atom_count()) {}

    std::optional<PatternWitness> run(int max_len) {
        int cap = max_len < 0 ? inst_.var_count() : max_len;
        if (cap <= 0) return std::nullopt;
        if (!ks_.present(z_)) return std::nullopt;
        if (prefs_.shortest_first) {
            for (int budget = 1; budget <= cap; ++budget)
                if (run_budget(budget)) return std::move(found_);
            return std::nullopt;
        }
        if (run_budget(cap)) return std::move(found_);
        return std::nullopt;
    }

    /// Single bounded DFS pass; completions may occur at any depth <= budget.
    bool run_budget(int budget) {
        steps_.clear();
        rights_.clear();
        used_.clear();
        used_.set(z_);
        if (static_cast<int>(ref_stack_.size()) < budget + 1)
            ref_stack_.resize(budget + 1, Bitset(inst_.atom_count()));
        if (static_cast<int>(lefts_stack_.size()) < budget)
            lefts_stack_.resize(budget);
        ref_stack_[0].clear();
        if (cfg_.z_in_ref) ref_stack_[0] |= inst_.adjacency(z_);
        found_.reset();
        return dfs(budget);
    }

    std::optional<PatternWitness> take_found() { return std::move(found_); }

private:
    bool var_allowed(Var v) const {
        return !prefs_.allowed_vars || (*prefs_.allowed_vars)[static_cast<std::size_t>(v)];
    }

    bool dfs(int budget) {
        const int depth = static_cast<int>(steps_.size());
        const Bitset& ref = ref_stack_[depth];

        // Admissible left candidates.
        std::vector<Atom>& lefts = lefts_stack_[depth];
        lefts.clear();
        const Bitset& link_mask = cfg_.net_links
                                      ? ref
                                      : inst_.adjacency(depth == 0 ? z_ : rights_.back());
        link_mask.for_each_set([&](int a) {
            if (ks_.present(a) && !used_.test(a)) lefts.push_back(a);
        });

        for (Atom left : lefts) {
            Atom just;
            if (!cfg_.net_links) {
                just = depth == 0 ? z_ : rights_.back();
            } else if (inst_.linked(left, z_)) {
                just = z_;
            } else {
                just = -1;
                for (Atom r : rights_)
                    if (inst_.linked(left, r)) { just = r; break; }
            }

            for (Var v : inst_.views_of(left)) {
                if (!var_allowed(v)) continue;
                // Candidates of v compatible with the reference set, left exempt.
                int compat = 0;
                Atom only = -1;
                for (Atom a : inst_.variable(v).domain) {
                    if (!ks_.present(a) || a == left || ref.test(a)) continue;
                    only = a;
                    if (++compat > 1) break;
                }
                if (compat == 0) {
                    if (cfg_.is_chain) continue; // chains cannot end bare
                    emit(StepRec{left, -1, just, v});
                    return true;
                }
                if (compat > 1) continue;
                Atom right = only;
                if (used_.test(right)) continue;

                steps_.push_back({left, right, just, v});
                used_.set(left);
                used_.set(right);
                rights_.push_back(right);

                bool done = false;
                if (cfg_.is_chain && inst_.linked(right, z_)) {
                    emit_full();
                    done = true;
                }
                if (!done && depth + 1 < budget) {
                    Bitset& next_ref = ref_stack_[depth + 1];
                    next_ref = ref;
                    if (cfg_.rights_in_ref) next_ref |= inst_.adjacency(right);
                    done = dfs(budget);
                }

                rights_.pop_back();
                used_.reset(right);
                used_.reset(left);
                steps_.pop_back();
                if (done) return true;
            }
        }
        return false;
    }

    void emit(const StepRec& final_step) {
        steps_.push_back(final_step);
        emit_full();
        steps_.pop_back();
    }

    void emit_full() {
        PatternWitness w;
        w.kind = kind_;
        w.target = z_;
        std::vector<Atom> prior;
        for (const auto& s : steps_) {
            PatternStep ps;
            ps.left = s.left;
            ps.right = s.right;
            ps.justification = s.just;
            ps.var = s.var;
            for (Atom a : inst_.variable(s.var).domain) {
                if (!ks_.present(a) || a == s.left || a == s.right) continue;
                if (inst_.linked(a, z_)) ps.z_candidates.push_back(a);
                for (Atom r : prior)
                    if (inst_.linked(a, r)) {
                        ps.t_candidates.push_back(a);
                        break;
                    }
            }
            if (s.right >= 0) prior.push_back(s.right);
            w.steps.push_back(std::move(ps));
        }
        found_ = std::move(w);
    }

    const CspInstance& inst_;
    const KnowledgeState& ks_;
    PatternKind kind_;
    KindConfig cfg_;
    Atom z_;
    SearchPrefs prefs_;
    Bitset used_;
    std::vector<Bitset> ref_stack_;
    std::vector<std::vector<Atom>> lefts_stack_;
    std::vector<StepRec> steps_;
    std::vector<Atom> rights_;
    std::optional<PatternWitness> found_;
};

const std::vector<PatternKind>& default_kind_order() {
    static const std::vector<PatternKind> order{PatternKind::BivalueChain, PatternKind::TChain,
                                                PatternKind::ZWhip, PatternKind::ZtWhip,
                                                PatternKind::ZtBraid};
    return order;
}

} // namespace

std::optional<PatternWitness> search_pattern(const CspInstance& inst, const KnowledgeState& ks,
                                             PatternKind kind, Atom z, int max_len,
                                             const SearchPrefs& prefs) {
    inst.check_atom(z);
    Searcher s(inst, ks, kind, z, prefs);
    return s.run(max_len);
}

std::optional<PatternWitness> search_whip(const CspInstance& inst, const KnowledgeState& ks, Atom z, int max_len) {
    return search_pattern(inst, ks, PatternKind::ZtWhip, z, max_len);
}

std::optional<PatternWitness> search_braid(const CspInstance& inst, const KnowledgeState& ks, Atom z, int max_len) {
    return search_pattern(inst, ks, PatternKind::ZtBraid, z, max_len);
}

std::optional<Elimination> find_elimination(const CspInstance& inst, const KnowledgeState& ks,
                                            KindSet kinds, int max_len, const SearchPrefs& prefs) {
    if (kinds.empty()) return std::nullopt;
    int cap = max_len < 0 ? inst.var_count() : max_len;

    std::vector<PatternKind> order;
    for (PatternKind k : prefs.kind_priority.empty() ? default_kind_order() : prefs.kind_priority)
        if (kinds.contains(k)) order.push_back(k);
    if (order.empty()) return std::nullopt;

    auto scan_targets = [&](auto&& try_one) -> std::optional<Elimination> {
        if (prefs.scan_order) {
            for (Atom z : *prefs.scan_order)
                if (ks.present(z))
                    if (auto e = try_one(z)) return e;
        } else {
            for (Atom z = 0; z < inst.atom_count(); ++z)
                if (ks.present(z))
                    if (auto e = try_one(z)) return e;
        }
        return std::nullopt;
    };

    if (prefs.shortest_first) {
        for (int len = 1; len <= cap; ++len) {
            for (PatternKind kind : order) {
                auto e = scan_targets([&](Atom z) -> std::optional<Elimination> {
                    Searcher s(inst, ks, kind, z, prefs);
                    if (!s.run_budget(len)) return std::nullopt;
                    return Elimination{z, std::move(*s.take_found())};
                });
                if (e) return e;
            }
        }
        return std::nullopt;
    }
    for (PatternKind kind : order) {
        auto e = scan_targets([&](Atom z) -> std::optional<Elimination> {
            if (auto w = search_pattern(inst, ks, kind, z, cap, prefs))
                return Elimination{z, std::move(*w)};
            return std::nullopt;
        });
        if (e) return e;
    }
    return std::nullopt;
}

PatternWitness chain_to_whip(const PatternWitness& w) {
    PatternWitness out;
    out.kind = PatternKind::ZtWhip;
    out.target = w.target;
    const int n = w.length();
    for (int k = 0; k < n - 1; ++k) {
        PatternStep s = w.steps[k];
        s.z_candidates.clear();
        s.t_candidates.clear();
        out.steps.push_back(std::move(s));
    }
    PatternStep last;
    last.left = w.steps[n - 1].left;
    last.right = -1;
    last.justification = w.steps[n - 1].justification;
    last.var = w.steps[n - 1].var;
    out.steps.push_back(std::move(last));
    return out;
}

PatternWitness whip_to_braid(const PatternWitness& w) {
    PatternWitness out = w;
    out.kind = PatternKind::ZtBraid;
    for (auto& s : out.steps) {
        s.z_candidates.clear();
        s.t_candidates.clear();
    }
    return out;
}

std::string to_line(const CspInstance& inst, const PatternWitness& w) {
    std::string s = kind_name(w.kind);
    s += "[" + std::to_string(w.length()) + "]: ";
    const bool braid = w.kind == PatternKind::ZtBraid;
    for (int k = 0; k < w.length(); ++k) {
        if (k) s += " - ";
        const auto& step = w.steps[k];
        auto left_text = [&] {
            std::string t = inst.atom_name(step.left);
            if (braid) {
                t += "(<";
                t += step.justification == w.target ? "Z" : inst.atom_name(step.justification);
                t += ")";
            }
            return t;
        };
        if (step.right >= 0)
            s += "{" + left_text() + " " + inst.atom_name(step.right) + "}";
        else
            s += left_text();
    }
    if (w.target >= 0) s += " => not " + inst.atom_name(w.target);
    return s;
}

} // namespace braidcsp
