#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "braidcsp/csp.hpp"

namespace braidcsp::sudoku {

/// A 9x9 grid of givens. Cells hold 0 (empty) or a digit 1-9.
struct Grid {
    std::array<std::uint8_t, 81> cells{};
    bool inconsistent = false; // a given repeats within a row, column or block

    std::uint8_t at(int r, int c) const { return cells[(r - 1) * 9 + (c - 1)]; }
    void set(int r, int c, std::uint8_t n) { cells[(r - 1) * 9 + (c - 1)] = n; }
    int given_count() const;
    std::string to_string() const;
};

/// Parse an 81-character row-major line; '.' or '0' mean empty. Duplicate
/// givens in a unit mark the grid inconsistent rather than failing the parse.
Grid parse_grid(std::string_view text);

// Variable families.
inline constexpr int kFamilyRc = 0;
inline constexpr int kFamilyRn = 1;
inline constexpr int kFamilyCn = 2;
inline constexpr int kFamilyBn = 3;

/// Block 1-9 of a cell (blocks numbered row-major).
inline int block_of(int r, int c) { return ((r - 1) / 3) * 3 + (c - 1) / 3 + 1; }
/// Position 1-9 within the block, row-major.
inline int pos_in_block(int r, int c) { return ((r - 1) % 3) * 3 + (c - 1) % 3 + 1; }

/// Dense candidate index of digit n at row r, column c.
inline Atom atom_index(int n, int r, int c) { return ((r - 1) * 9 + (c - 1)) * 9 + (n - 1); }

/// The paper-facing link predicate on raw digit/cell coordinates:
/// same cell with different digits, or same digit sharing a unit.
bool sudoku_linked(int n1, int r1, int c1, int n2, int r2, int c2);

/// The Sudoku CSP over the four variable families X_rc, X_rn, X_cn, X_bn.
/// All four views of a cell/digit share one candidate atom, so the
/// cross-family identifications hold structurally.
struct SudokuCsp {
    CspInstance inst;

    static Var rc(int r, int c) { return (r - 1) * 9 + (c - 1); }
    static Var rn(int r, int n) { return 81 + (r - 1) * 9 + (n - 1); }
    static Var cn(int c, int n) { return 162 + (c - 1) * 9 + (n - 1); }
    static Var bn(int b, int n) { return 243 + (b - 1) * 9 + (n - 1); }

    static Atom atom(int n, int r, int c) { return atom_index(n, r, c); }
};

/// Build the instance for a grid; givens are asserted as values, everything
/// else is left to the resolution rules.
SudokuCsp build_csp(const Grid& g);

/// Count completions up to `cap` with a grid-native exhaustive backtracker
/// (unit constraints only — independent of the rule engine). When `solution`
/// is non-null and at least one completion exists, stores the first found.
int solution_count(const Grid& g, int cap, Grid* solution = nullptr);

/// Uniquely solvable, and removing any given breaks uniqueness.
bool is_minimal(const Grid& g);

/// Produce a random minimal puzzle: complete a random grid, then drop givens
/// in random order whenever uniqueness survives. Deterministic per seed.
Grid generate_minimal(std::uint64_t seed);

/// Read puzzle lines from a corpus file ('#' comment lines and blank lines
/// are skipped). Malformed lines are reported in `diagnostics` and skipped.
std::vector<Grid> load_corpus(const std::string& path, std::vector<std::string>* diagnostics = nullptr);

} // namespace braidcsp::sudoku
