#include "braidcsp/batch.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "braidcsp/parallel.hpp"
#include "braidcsp/trial_error.hpp"

namespace braidcsp::batch {

using sudoku::Grid;

namespace {

std::string pad(const std::string& s, int width) {
    return s.size() >= static_cast<std::size_t>(width) ? s : std::string(width - s.size(), ' ') + s;
}

/// Atoms of the unique solution; throws when the puzzle is not unique.
Bitset solution_atoms(const Grid& g) {
    Grid sol;
    if (sudoku::solution_count(g, 2, &sol) != 1) throw RatingUndefined("corpus puzzle is not uniquely solvable");
    Bitset atoms(729);
    for (int r = 1; r <= 9; ++r)
        for (int c = 1; c <= 9; ++c) atoms.set(sudoku::atom_index(sol.at(r, c), r, c));
    return atoms;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

} // namespace

std::string BatchReport::render_text() const {
    std::ostringstream out;
    const int w = 9;
    out << pad("", 11);
    out << pad("BRT", w);
    for (int n = 1; n <= max_n; ++n) out << pad("L" + std::to_string(n), w);
    out << pad("unsolved", w + 1) << "\n";
    out << pad("newly", 11);
    for (int n = 0; n <= max_n; ++n) out << pad(std::to_string(newly[n]), w);
    out << pad(std::to_string(unsolved), w + 1) << "\n";
    out << pad("cumulative", 11);
    for (int n = 0; n <= max_n; ++n) out << pad(std::to_string(cumulative[n]), w);
    out << pad("-", w + 1) << "\n";
    out << "total " << total << "\n";
    return out.str();
}

std::string BatchReport::render_csv() const {
    std::ostringstream out;
    out << "level,newly,cumulative\n";
    for (int n = 0; n <= max_n; ++n)
        out << (n == 0 ? std::string("BRT") : "L" + std::to_string(n)) << "," << newly[n] << ","
            << cumulative[n] << "\n";
    out << "unsolved," << unsolved << ",-\n";
    return out.str();
}

BatchReport table1(const std::vector<Grid>& corpus, int max_n, int threads) {
    BatchReport rep;
    rep.total = static_cast<int>(corpus.size());
    rep.max_n = max_n;
    rep.newly.assign(max_n + 1, 0);
    rep.cumulative.assign(max_n + 1, 0);

    std::vector<int> level(corpus.size(), -1); // -1 = unsolved at cap
    parallel_for(static_cast<int>(corpus.size()), threads, [&](int i) {
        auto csp = sudoku::build_csp(corpus[i]);
        Rating r = rate(csp.inst, Ladder::Whip, max_n);
        level[i] = r.above_cap ? -1 : r.level;
    });
    for (int l : level) {
        if (l < 0)
            ++rep.unsolved;
        else
            ++rep.newly[l];
    }
    int acc = 0;
    for (int n = 0; n <= max_n; ++n) {
        acc += rep.newly[n];
        rep.cumulative[n] = acc;
    }
    return rep;
}

std::vector<RateRow> rate_corpus(const std::vector<Grid>& corpus, int cap, int threads) {
    std::vector<RateRow> rows(corpus.size());
    parallel_for(static_cast<int>(corpus.size()), threads, [&](int i) {
        auto csp = sudoku::build_csp(corpus[i]);
        RateRow row;
        row.puzzle = corpus[i].to_string();
        row.whip = rate(csp.inst, Ladder::Whip, cap);
        row.braid = rate(csp.inst, Ladder::Braid, cap);
        if (!row.whip.above_cap && row.whip.level == 0)
            row.solved_by = "BRT";
        else if (!row.whip.above_cap)
            row.solved_by = "L" + std::to_string(row.whip.level);
        else if (!row.braid.above_cap)
            row.solved_by = "M" + std::to_string(row.braid.level);
        else
            row.solved_by = "above-cap";
        rows[i] = std::move(row);
    });
    return rows;
}

std::string rate_csv(const std::vector<RateRow>& rows) {
    std::ostringstream out;
    out << "puzzle,whip_rating,braid_rating,solved_by\n";
    for (const auto& r : rows)
        out << r.puzzle << "," << r.whip.to_string() << "," << r.braid.to_string() << "," << r.solved_by << "\n";
    return out.str();
}

CampaignResult soundness_campaign(const std::vector<Grid>& corpus, int threads) {
    const ResolutionTheory rich{{PatternKind::BivalueChain, PatternKind::ZtWhip, PatternKind::ZtBraid}, 7};

    struct PerPuzzle {
        int solution_violations = 0;
        int conversion_failures = 0;
        bool te_solved = false;
        long events = 0, eliminations = 0, conversions = 0, probes = 0;
        std::vector<std::string> notes;
    };
    std::vector<PerPuzzle> results(corpus.size());

    parallel_for(static_cast<int>(corpus.size()), threads, [&](int i) {
        PerPuzzle& out = results[i];
        auto csp = sudoku::build_csp(corpus[i]);
        const auto& inst = csp.inst;
        Bitset sol = solution_atoms(corpus[i]);
        const std::string id = corpus[i].to_string();

        auto flag = [&](const std::string& what) {
            ++out.solution_violations;
            if (out.notes.size() < 4) out.notes.push_back(id + ": " + what);
        };
        auto flag_conversion = [&](const std::string& what) {
            ++out.conversion_failures;
            if (out.notes.size() < 4) out.notes.push_back(id + ": " + what);
        };

        // Pattern-rule run, replayed so each witness is converted and
        // revalidated against the state it fired in.
        ResolutionPath path = solve(inst, rich);
        KnowledgeState ks = inst.initial_state();
        for (const auto& step : path.steps) {
            if (const auto* ev = std::get_if<BasicEvent>(&step.action)) {
                ++out.events;
                if (ev->kind == BasicEvent::Kind::Ecp && sol.test(ev->subject))
                    flag("ECP removed solution candidate " + inst.atom_name(ev->subject));
                if (ev->kind == BasicEvent::Kind::Single && !sol.test(ev->subject))
                    flag("assertion off the solution: " + inst.atom_name(ev->subject));
                if (ev->kind == BasicEvent::Kind::Contradiction)
                    flag("contradiction on a consistent puzzle");
            } else {
                const auto& elim = std::get<Elimination>(step.action);
                ++out.eliminations;
                if (sol.test(elim.target))
                    flag("pattern elimination removed solution candidate " + inst.atom_name(elim.target));
                if (!validate_pattern(inst, ks, elim.witness, elim.target))
                    flag("applied witness fails validation: " + to_line(inst, elim.witness));
                if (elim.witness.kind == PatternKind::BivalueChain) {
                    auto whip = chain_to_whip(elim.witness);
                    ++out.conversions;
                    if (!validate_pattern(inst, ks, whip, elim.target))
                        flag_conversion("chain->whip conversion fails: " + to_line(inst, whip));
                    auto braid = whip_to_braid(whip);
                    ++out.conversions;
                    if (!validate_pattern(inst, ks, braid, elim.target))
                        flag_conversion("whip->braid conversion fails: " + to_line(inst, braid));
                } else if (elim.witness.kind == PatternKind::ZtWhip) {
                    auto braid = whip_to_braid(elim.witness);
                    ++out.conversions;
                    if (!validate_pattern(inst, ks, braid, elim.target))
                        flag_conversion("whip->braid conversion fails: " + to_line(inst, braid));
                }
            }
            apply_action(inst, ks, step.action);
        }

        // Trial-and-error run: every elimination is a successfully probed
        // candidate; none may target the solution.
        TeResult te = te_solve(inst, inst.initial_state(), ResolutionTheory::brt());
        out.probes += static_cast<long>(te.probes.size());
        for (const auto& probe : te.probes)
            if (probe.outcome == TeTrace::Outcome::Contradiction && sol.test(probe.probed))
                flag("T&E eliminated solution candidate " + inst.atom_name(probe.probed));
        out.te_solved = te.solved;
    });

    CampaignResult res;
    long events = 0, elims = 0, conv = 0, probes = 0, sol_viol = 0, conv_fail = 0, te_solved = 0;
    for (const auto& r : results) {
        sol_viol += r.solution_violations;
        conv_fail += r.conversion_failures;
        te_solved += r.te_solved ? 1 : 0;
        events += r.events;
        elims += r.eliminations;
        conv += r.conversions;
        probes += r.probes;
        for (const auto& n : r.notes)
            if (res.notes.size() < 16) res.notes.push_back(n);
    }
    res.violations = static_cast<int>(sol_viol + conv_fail);
    res.metrics = {{"solution_violations", sol_viol}, {"conversion_failures", conv_fail},
                   {"conversions", conv},             {"eliminations", elims},
                   {"basic_events", events},          {"te_eliminations", probes},
                   {"te_solved", te_solved},          {"puzzles", static_cast<long>(corpus.size())}};
    std::ostringstream s;
    s << "soundness: puzzles=" << corpus.size() << " basic-events=" << events << " eliminations=" << elims
      << " conversions=" << conv << " te-eliminations=" << probes << " te-solved=" << te_solved
      << " solution-violations=" << sol_viol << " conversion-failures=" << conv_fail;
    res.summary = s.str();
    return res;
}

CampaignResult te_equivalence_campaign(const std::vector<Grid>& corpus, int threads) {
    struct PerPuzzle {
        int violations = 0;
        long stuck_states = 0, eliminations = 0;
        std::vector<std::string> notes;
    };
    std::vector<PerPuzzle> results(corpus.size());

    parallel_for(static_cast<int>(corpus.size()), threads, [&](int i) {
        PerPuzzle& out = results[i];
        auto csp = sudoku::build_csp(corpus[i]);
        const auto& inst = csp.inst;
        const std::string id = corpus[i].to_string();

        KnowledgeState ks = inst.initial_state();
        brt_fixpoint(inst, ks);
        while (!ks.contradiction() && !ks.fully_decided()) {
            ++out.stuck_states;
            std::vector<Atom> eliminable;
            for (Atom z = 0; z < inst.atom_count(); ++z) {
                if (!ks.present(z)) continue;
                TeTrace trace = te_probe(inst, ks, ResolutionTheory::brt(), z);
                if (trace.outcome != TeTrace::Outcome::Contradiction) continue;
                eliminable.push_back(z);
                try {
                    PatternWitness braid = braid_from_trace(inst, ks, trace);
                    if (!validate_pattern(inst, ks, braid, z)) {
                        ++out.violations;
                        if (out.notes.size() < 4)
                            out.notes.push_back(id + ": extracted braid invalid for " + inst.atom_name(z) + ": " +
                                                to_line(inst, braid));
                    }
                } catch (const NoWitness& e) {
                    ++out.violations;
                    if (out.notes.size() < 4)
                        out.notes.push_back(id + ": no braid extracted for " + inst.atom_name(z) + ": " + e.what());
                }
            }
            if (eliminable.empty()) break;
            out.eliminations += static_cast<long>(eliminable.size());
            // Braid-theory stability keeps every probed elimination valid
            // while the others are applied, so they can be committed together.
            for (Atom z : eliminable) ks.delete_candidate(inst, z);
            brt_fixpoint(inst, ks);
        }
    });

    CampaignResult res;
    long stuck = 0, elims = 0;
    for (const auto& r : results) {
        res.violations += r.violations;
        stuck += r.stuck_states;
        elims += r.eliminations;
        for (const auto& n : r.notes)
            if (res.notes.size() < 16) res.notes.push_back(n);
    }
    std::ostringstream s;
    s << "te-equivalence: puzzles=" << corpus.size() << " stuck-states=" << stuck << " te-eliminations=" << elims
      << " violations=" << res.violations;
    res.summary = s.str();
    return res;
}

CampaignResult confluence_campaign(const std::vector<Grid>& corpus, const std::vector<int>& levels,
                                   int strategies_per_level, std::uint64_t seed, int threads) {
    struct Task {
        int puzzle;
        int level;
    };
    std::vector<Task> tasks;
    for (int p = 0; p < static_cast<int>(corpus.size()); ++p)
        for (int l : levels) tasks.push_back({p, l});

    std::vector<int> violations(tasks.size(), 0);
    std::vector<std::string> notes(tasks.size());

    parallel_for(static_cast<int>(tasks.size()), threads, [&](int t) {
        const auto& task = tasks[t];
        auto csp = sudoku::build_csp(corpus[task.puzzle]);
        std::vector<Strategy> strategies;
        for (int k = 0; k < strategies_per_level; ++k)
            strategies.push_back(Strategy::seeded(mix_seed(seed, t * 131 + k)));
        auto rep = check_confluence(csp.inst, ResolutionTheory::braids(task.level), strategies);
        if (!rep.confluent) {
            violations[t] = 1;
            notes[t] = corpus[task.puzzle].to_string() + ": M" + std::to_string(task.level) +
                       " final digests diverge";
        }
    });

    CampaignResult res;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        res.violations += violations[t];
        if (!notes[t].empty() && res.notes.size() < 16) res.notes.push_back(notes[t]);
    }
    std::ostringstream s;
    s << "confluence: puzzles=" << corpus.size() << " levels=" << levels.size() << " strategies="
      << strategies_per_level << " violations=" << res.violations;
    res.summary = s.str();
    return res;
}

CampaignResult stability_campaign(const std::vector<Grid>& corpus, int checks, std::uint64_t seed, int threads) {
    (void)threads; // sequential: the check budget is shared across puzzles
    CampaignResult res;
    int done = 0;
    long asserts_seen = 0, deletes_seen = 0, elims_seen = 0;

    for (std::size_t i = 0; i < corpus.size() && done < checks; ++i) {
        auto csp = sudoku::build_csp(corpus[i]);
        const auto& inst = csp.inst;
        std::mt19937_64 rng(mix_seed(seed, i));
        const std::string id = corpus[i].to_string();

        KnowledgeState ks = inst.initial_state();
        // Walk ECP-phase by single-assertion so that sampled states still
        // offer assertions and eliminations as perturbations.
        int state_idx = 0;
        for (;;) {
            if (ks.contradiction() || ks.fully_decided()) break;
            ++state_idx;
            if (state_idx % 5 == 0) {
                // Sample this state: find a braid elimination to protect.
                auto elim = find_elimination(inst, ks, {PatternKind::ZtBraid}, 4);
                if (elim) {
                    std::vector<std::variant<BasicEvent, Elimination>> pool;
                    {
                        // Each ECP deletion and the first available single
                        // assertion are valid applications at ks.
                        KnowledgeState copy = ks;
                        auto ecp = apply_ecp(inst, copy);
                        for (std::size_t k = 0; k < ecp.size() && k < 2; ++k) pool.push_back(ecp[k]);
                    }
                    {
                        KnowledgeState copy = ks;
                        if (auto s = apply_single(inst, copy)) pool.push_back(*s);
                    }
                    for (int extra = 0; extra < 3; ++extra) {
                        Atom z2 = std::uniform_int_distribution<int>(0, inst.atom_count() - 1)(rng);
                        if (!ks.present(z2) || z2 == elim->target) continue;
                        if (auto w2 = search_braid(inst, ks, z2, 4))
                            pool.push_back(Elimination{z2, std::move(*w2)});
                    }
                    for (const auto& p : pool) {
                        if (done >= checks) break;
                        if (const auto* bev = std::get_if<BasicEvent>(&p)) {
                            if (bev->kind == BasicEvent::Kind::Single) ++asserts_seen;
                            else ++deletes_seen;
                        } else {
                            ++elims_seen;
                        }
                        ++done;
                        if (!check_stability(inst, ks, elim->witness, elim->target, p)) {
                            ++res.violations;
                            if (res.notes.size() < 16)
                                res.notes.push_back(id + ": stability failed for " +
                                                    to_line(inst, elim->witness));
                        }
                    }
                }
            }
            if (done >= checks) break;
            // Advance: one ECP phase, else one assertion, else one braid.
            if (apply_ecp(inst, ks).empty()) {
                if (!apply_single(inst, ks)) {
                    if (detect_contradiction(inst, ks)) break;
                    auto elim = find_elimination(inst, ks, {PatternKind::ZtBraid}, 5);
                    if (!elim) break;
                    ks.delete_candidate(inst, elim->target);
                }
            }
        }
    }

    std::ostringstream s;
    s << "stability: checks=" << done << " assert-perturbations=" << asserts_seen << " delete-perturbations="
      << deletes_seen << " elimination-perturbations=" << elims_seen << " violations=" << res.violations;
    res.summary = s.str();
    return res;
}

CampaignResult m1_l1_campaign(const std::vector<Grid>& corpus, int threads) {
    std::vector<int> bad(corpus.size(), 0);
    std::vector<std::string> notes(corpus.size());
    parallel_for(static_cast<int>(corpus.size()), threads, [&](int i) {
        auto csp = sudoku::build_csp(corpus[i]);
        auto l1 = solve(csp.inst, ResolutionTheory::whips(1));
        auto m1 = solve(csp.inst, ResolutionTheory::braids(1));
        if (l1.final.digest() != m1.final.digest()) {
            bad[i] = 1;
            notes[i] = corpus[i].to_string() + ": L1 and M1 finals differ";
        }
    });
    CampaignResult res;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        res.violations += bad[i];
        if (!notes[i].empty() && res.notes.size() < 16) res.notes.push_back(notes[i]);
    }
    std::ostringstream s;
    s << "m1-l1: puzzles=" << corpus.size() << " violations=" << res.violations;
    res.summary = s.str();
    return res;
}

} // namespace braidcsp::batch
