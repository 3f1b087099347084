#include "braidcsp/theories.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <random>

#include "braidcsp/csp.hpp"

namespace braidcsp {

std::string ResolutionTheory::name() const {
    if (is_brt()) return "BRT";
    std::string prefix = kinds.contains(PatternKind::ZtBraid) ? "M" : "L";
    return prefix + (max_len < 0 ? std::string("inf") : std::to_string(max_len));
}

std::optional<ResolutionTheory> ResolutionTheory::parse(std::string_view text) {
    std::string t;
    for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "brt") return brt();
    if (t.size() < 2 || (t[0] != 'l' && t[0] != 'm')) return std::nullopt;
    int n = -1;
    if (t.substr(1) == "inf") {
        n = -1;
    } else {
        auto [p, ec] = std::from_chars(t.data() + 1, t.data() + t.size(), n);
        if (ec != std::errc{} || p != t.data() + t.size() || n < 0) return std::nullopt;
    }
    return t[0] == 'l' ? whips(n) : braids(n);
}

Strategy Strategy::seeded(std::uint64_t seed) {
    Strategy s;
    s.scan_seed = seed;
    s.shortest_first = seed % 2 == 0;
    return s;
}

std::optional<Strategy> Strategy::parse(std::string_view text) {
    Strategy s;
    if (text.empty() || text == "default") return s;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        pos = comma == std::string_view::npos ? text.size() + 1 : comma + 1;
        if (tok.empty()) continue;
        if (tok == "shortest") {
            s.shortest_first = true;
        } else if (tok == "first-found") {
            s.shortest_first = false;
        } else if (tok.rfind("seed=", 0) == 0) {
            std::uint64_t v = 0;
            auto sub = tok.substr(5);
            auto [p, ec] = std::from_chars(sub.data(), sub.data() + sub.size(), v);
            if (ec != std::errc{} || p != sub.data() + sub.size()) return std::nullopt;
            s.scan_seed = v;
        } else if (tok.rfind("kinds=", 0) == 0) {
            s.kind_priority.clear();
            auto rest = tok.substr(6);
            std::size_t kp = 0;
            while (kp <= rest.size()) {
                std::size_t plus = rest.find('+', kp);
                auto k = rest.substr(kp, plus == std::string_view::npos ? std::string_view::npos : plus - kp);
                kp = plus == std::string_view::npos ? rest.size() + 1 : plus + 1;
                if (k == "bc") s.kind_priority.push_back(PatternKind::BivalueChain);
                else if (k == "tc") s.kind_priority.push_back(PatternKind::TChain);
                else if (k == "zw") s.kind_priority.push_back(PatternKind::ZWhip);
                else if (k == "ztw") s.kind_priority.push_back(PatternKind::ZtWhip);
                else if (k == "ztb") s.kind_priority.push_back(PatternKind::ZtBraid);
                else if (!k.empty()) return std::nullopt;
            }
        } else {
            return std::nullopt;
        }
    }
    return s;
}

SearchPrefs Strategy::prefs(const CspInstance& inst, std::vector<Atom>& scan_storage) const {
    SearchPrefs p;
    p.kind_priority = kind_priority;
    p.shortest_first = shortest_first;
    if (scan_seed != 0) {
        scan_storage.resize(inst.atom_count());
        std::iota(scan_storage.begin(), scan_storage.end(), 0);
        std::mt19937_64 rng(scan_seed);
        std::shuffle(scan_storage.begin(), scan_storage.end(), rng);
        p.scan_order = &scan_storage;
    }
    return p;
}

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Stuck: return "stuck";
    case SolveStatus::Contradiction: return "contradiction";
    }
    return "?";
}

void apply_action(const CspInstance& inst, KnowledgeState& ks, const std::variant<BasicEvent, Elimination>& action) {
    if (const auto* ev = std::get_if<BasicEvent>(&action)) {
        switch (ev->kind) {
        case BasicEvent::Kind::Ecp: ks.delete_candidate(inst, ev->subject); break;
        case BasicEvent::Kind::Single: ks.assert_value(inst, ev->subject); break;
        case BasicEvent::Kind::Contradiction: ks.flag_contradiction(ev->var); break;
        }
    } else {
        ks.delete_candidate(inst, std::get<Elimination>(action).target);
    }
}

ResolutionPath solve(const CspInstance& inst, KnowledgeState start, const ResolutionTheory& theory,
                     const Strategy& strategy) {
    ResolutionPath path;
    KnowledgeState ks = std::move(start);
    std::vector<Atom> scan_storage;
    SearchPrefs prefs = strategy.prefs(inst, scan_storage);

    auto run_basic = [&] {
        for (const auto& ev : brt_fixpoint(inst, ks))
            path.steps.push_back({ev, ks.digest()});
    };

    run_basic();
    for (;;) {
        if (ks.contradiction()) {
            path.status = SolveStatus::Contradiction;
            break;
        }
        if (ks.fully_decided()) {
            path.status = SolveStatus::Solved;
            break;
        }
        if (theory.is_brt()) {
            path.status = SolveStatus::Stuck;
            break;
        }
        auto elim = find_elimination(inst, ks, theory.kinds, theory.max_len, prefs);
        if (!elim) {
            path.status = SolveStatus::Stuck;
            break;
        }
        ks.delete_candidate(inst, elim->target);
        path.steps.push_back({std::move(*elim), ks.digest()});
        run_basic();
    }
    path.final = std::move(ks);
    return path;
}

ResolutionPath solve(const CspInstance& inst, const ResolutionTheory& theory, const Strategy& strategy) {
    return solve(inst, inst.initial_state(), theory, strategy);
}

bool replay(const CspInstance& inst, KnowledgeState start, const ResolutionPath& path) {
    KnowledgeState ks = std::move(start);
    for (const auto& step : path.steps) {
        apply_action(inst, ks, step.action);
        if (ks.digest() != step.digest_after) return false;
    }
    return ks.digest() == path.final.digest();
}

std::vector<std::string> path_lines(const CspInstance& inst, const ResolutionPath& path) {
    std::vector<std::string> out;
    out.reserve(path.steps.size() + 1);
    for (const auto& step : path.steps) {
        if (const auto* ev = std::get_if<BasicEvent>(&step.action))
            out.push_back(to_line(inst, *ev));
        else
            out.push_back(to_line(inst, std::get<Elimination>(step.action).witness));
    }
    out.push_back(std::string("result: ") + to_string(path.status));
    return out;
}

Rating rate(const CspInstance& inst, Ladder ladder, int cap) {
    if (count_solutions(inst, inst.initial_state(), 2) != 1)
        throw RatingUndefined("rating requires a unique solution");
    if (solve(inst, ResolutionTheory::brt()).status == SolveStatus::Solved) return {0, false};
    for (int n = 1; n <= cap; ++n) {
        auto theory = ladder == Ladder::Whip ? ResolutionTheory::whips(n) : ResolutionTheory::braids(n);
        if (solve(inst, theory).status == SolveStatus::Solved) return {n, false};
    }
    return {cap, true};
}

ConfluenceReport check_confluence(const CspInstance& inst, const ResolutionTheory& theory,
                                  const std::vector<Strategy>& strategies) {
    ConfluenceReport report;
    for (const auto& s : strategies)
        report.final_digests.push_back(solve(inst, theory, s).final.digest());
    report.confluent = std::adjacent_find(report.final_digests.begin(), report.final_digests.end(),
                                          std::not_equal_to<>()) == report.final_digests.end();
    return report;
}

bool check_stability(const CspInstance& inst, const KnowledgeState& ks, const PatternWitness& witness,
                     Atom z, const std::variant<BasicEvent, Elimination>& perturbation) {
    KnowledgeState next = ks;
    apply_action(inst, next, perturbation);
    if (!next.present(z)) return true;
    return search_braid(inst, next, z, witness.length()).has_value();
}

} // namespace braidcsp
