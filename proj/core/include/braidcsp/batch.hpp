#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "braidcsp/sudoku.hpp"
#include "braidcsp/theories.hpp"

namespace braidcsp::batch {

/// Ratings of a corpus bucketed by solving level: how many puzzles are newly
/// solved at each ladder level, cumulatively solved, or left over.
struct BatchReport {
    int total = 0;
    int max_n = 0;
    std::vector<int> newly;      // index 0 = basic rules, 1..max_n = ladder levels
    std::vector<int> cumulative; // same indexing
    int unsolved = 0;

    std::string render_text() const;
    std::string render_csv() const;
};

/// Rate every puzzle on the whip ladder capped at max_n and bucket the
/// results in the two-row layout.
BatchReport table1(const std::vector<sudoku::Grid>& corpus, int max_n, int threads = 1);

struct RateRow {
    std::string puzzle;
    Rating whip;
    Rating braid;
    std::string solved_by;
};

std::vector<RateRow> rate_corpus(const std::vector<sudoku::Grid>& corpus, int cap, int threads = 1);
std::string rate_csv(const std::vector<RateRow>& rows);

/// Outcome of a verification campaign. `summary` is deterministic text;
/// violations carry replayable witnesses in `notes`. `metrics` breaks the
/// run down into named counters.
struct CampaignResult {
    int violations = 0;
    std::vector<std::string> notes;
    std::string summary;
    std::vector<std::pair<std::string, long>> metrics;

    bool passed() const { return violations == 0; }
    long metric(const std::string& name) const {
        for (const auto& [k, v] : metrics)
            if (k == name) return v;
        return 0;
    }
};

/// No basic event, validated pattern elimination or trial-and-error
/// elimination may ever remove a candidate of the oracle solution. Also
/// converts every bivalue-chain witness to a whip and every whip witness
/// to a braid, revalidating each.
CampaignResult soundness_campaign(const std::vector<sudoku::Grid>& corpus, int threads = 1);

/// At every stuck state reached, every trial-and-error elimination must
/// yield an extracted braid witness that validates on the same target.
CampaignResult te_equivalence_campaign(const std::vector<sudoku::Grid>& corpus, int threads = 1);

/// Solve each puzzle under braid theories M_n for the given levels with
/// several seeded strategies; all final digests must agree per (puzzle, n).
CampaignResult confluence_campaign(const std::vector<sudoku::Grid>& corpus, const std::vector<int>& levels,
                                   int strategies_per_level, std::uint64_t seed, int threads = 1);

/// Randomized spot-checks of witness stability: after one valid rule
/// application, a previously valid braid elimination must still be available
/// at the same length or the target must be gone.
CampaignResult stability_campaign(const std::vector<sudoku::Grid>& corpus, int checks, std::uint64_t seed,
                                  int threads = 1);

/// M_1 and L_1 must produce identical final digests on every puzzle.
CampaignResult m1_l1_campaign(const std::vector<sudoku::Grid>& corpus, int threads = 1);

} // namespace braidcsp::batch
