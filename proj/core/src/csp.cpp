#include "braidcsp/csp.hpp"

#include <algorithm>

namespace braidcsp {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;
// All explicitly inconsistent states are identified with each other.
constexpr std::uint64_t kInconsistentDigest = 0x1badb002dead5eedull;

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= kFnvPrime;
    }
    return h;
}

} // namespace

void KnowledgeState::assert_value(const CspInstance& inst, Atom a) {
    inst.check_atom(a);
    if (!present_.test(a))
        throw IllegalTransition("cannot assert absent candidate " + inst.atom_name(a));
    for (Var v : inst.views_of(a))
        if (decided_[v] >= 0)
            throw IllegalTransition("variable " + inst.var_name(v) + " already decided");
    present_.reset(a);
    for (Var v : inst.views_of(a)) {
        --counts_[v];
        decided_[v] = a;
        --open_vars_;
    }
}

bool KnowledgeState::delete_candidate(const CspInstance& inst, Atom a) {
    inst.check_atom(a);
    if (!present_.test(a)) return false;
    present_.reset(a);
    for (Var v : inst.views_of(a)) --counts_[v];
    return true;
}

std::vector<Atom> KnowledgeState::candidates_of(const CspInstance& inst, Var v) const {
    std::vector<Atom> out;
    for (Atom a : inst.variable(v).domain)
        if (present_.test(a)) out.push_back(a);
    return out;
}

std::uint64_t KnowledgeState::digest() const {
    if (contradiction_ >= 0) return kInconsistentDigest;
    std::uint64_t h = kFnvOffset;
    for (Atom d : decided_) h = fnv_mix(h, static_cast<std::uint64_t>(d + 1));
    for (std::uint64_t w : present_.words()) h = fnv_mix(h, w);
    return h;
}

CspBuilder::CspBuilder(int atom_count) : atom_count_(atom_count), atom_names_(atom_count) {
    for (int i = 0; i < atom_count; ++i) atom_names_[i] = "a" + std::to_string(i);
}

void CspBuilder::set_atom_name(Atom a, std::string name) { atom_names_.at(a) = std::move(name); }

Var CspBuilder::add_variable(std::string name, int family, std::array<int, 2> coords, std::vector<Atom> domain) {
    for (Atom a : domain)
        if (a < 0 || a >= atom_count_) throw MalformedRef("domain atom out of range in " + name);
    vars_.push_back({std::move(name), family, coords, std::move(domain)});
    return static_cast<Var>(vars_.size() - 1);
}

void CspBuilder::add_link(Atom a, Atom b) {
    if (a < 0 || a >= atom_count_ || b < 0 || b >= atom_count_) throw MalformedRef("link atom out of range");
    if (a == b) throw MalformedRef("link must join distinct atoms");
    links_.emplace_back(a, b);
}

void CspBuilder::add_given(Atom a, Var primary_view) { givens_.emplace_back(a, primary_view); }

CspInstance CspBuilder::build() {
    CspInstance inst;
    inst.atom_count_ = atom_count_;
    inst.atom_names_ = std::move(atom_names_);
    inst.vars_ = std::move(vars_);

    inst.adj_.assign(atom_count_, Bitset(atom_count_));
    // Two different candidates of the same variable are always linked.
    for (const auto& v : inst.vars_) {
        for (std::size_t i = 0; i < v.domain.size(); ++i)
            for (std::size_t j = i + 1; j < v.domain.size(); ++j) {
                inst.adj_[v.domain[i]].set(v.domain[j]);
                inst.adj_[v.domain[j]].set(v.domain[i]);
            }
    }
    for (auto [a, b] : links_) {
        inst.adj_[a].set(b);
        inst.adj_[b].set(a);
    }

    inst.domain_mask_.reserve(inst.vars_.size());
    for (const auto& v : inst.vars_) {
        Bitset m(atom_count_);
        for (Atom a : v.domain) m.set(a);
        inst.domain_mask_.push_back(std::move(m));
    }

    std::vector<std::vector<Var>> views(atom_count_);
    for (Var v = 0; v < static_cast<Var>(inst.vars_.size()); ++v)
        for (Atom a : inst.vars_[v].domain) views[a].push_back(v);
    inst.view_off_.assign(atom_count_ + 1, 0);
    for (int a = 0; a < atom_count_; ++a) inst.view_off_[a + 1] = inst.view_off_[a] + static_cast<int>(views[a].size());
    inst.views_flat_.reserve(inst.view_off_[atom_count_]);
    for (int a = 0; a < atom_count_; ++a)
        inst.views_flat_.insert(inst.views_flat_.end(), views[a].begin(), views[a].end());

    KnowledgeState s;
    s.present_ = Bitset(atom_count_);
    for (int a = 0; a < atom_count_; ++a) s.present_.set(a);
    s.decided_.assign(inst.vars_.size(), -1);
    s.counts_.resize(inst.vars_.size());
    for (Var v = 0; v < static_cast<Var>(inst.vars_.size()); ++v)
        s.counts_[v] = static_cast<std::uint16_t>(inst.vars_[v].domain.size());
    s.open_vars_ = static_cast<int>(inst.vars_.size());

    for (auto [a, primary] : givens_) {
        bool clash = false;
        for (Var v : inst.views_of(a))
            if (s.decided_[v] >= 0) clash = true;
        if (!clash && s.present_.test(a)) {
            s.assert_value(inst, a);
        } else {
            // Conflicting given: pin its primary variable to this atom and
            // let ECP + contradiction detection expose the inconsistency.
            for (Atom other : inst.vars_[primary].domain)
                if (other != a) s.delete_candidate(inst, other);
        }
    }
    inst.initial_ = std::move(s);
    return inst;
}

namespace {

// Forward-checking backtracker used for uniqueness tests on generic
// instances. Deliberately rule-free: it only consumes the link relation.
struct Counter {
    const CspInstance& inst;
    int cap;
    int found = 0;

    bool dfs(KnowledgeState& s) {
        Var best = -1;
        int best_count = INT32_MAX;
        for (Var v = 0; v < inst.var_count(); ++v) {
            if (s.is_decided(v)) continue;
            int c = s.candidate_count(v);
            if (c == 0) return false;
            if (c < best_count) {
                best_count = c;
                best = v;
            }
        }
        if (best < 0) {
            ++found;
            return found >= cap;
        }
        for (Atom a : inst.variable(best).domain) {
            if (!s.present(a)) continue;
            KnowledgeState next = s;
            bool ok = true;
            for (Var v : inst.views_of(a))
                if (next.is_decided(v)) ok = false;
            if (!ok) continue;
            next.assert_value(inst, a);
            inst.adjacency(a).for_each_set([&](int b) {
                if (next.present(b)) next.delete_candidate(inst, b);
            });
            if (dfs(next)) return true;
        }
        return false;
    }
};

} // namespace

int count_solutions(const CspInstance& inst, const KnowledgeState& start, int cap) {
    Counter c{inst, cap};
    KnowledgeState s = start;
    // Clear candidates excluded by already decided values before searching.
    for (Var v = 0; v < inst.var_count(); ++v) {
        if (!s.is_decided(v)) continue;
        inst.adjacency(s.decided_atom(v)).for_each_set([&](int b) {
            if (s.present(b)) s.delete_candidate(inst, b);
        });
    }
    c.dfs(s);
    return c.found;
}

} // namespace braidcsp
