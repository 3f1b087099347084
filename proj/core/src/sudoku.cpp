#include "braidcsp/sudoku.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>
#include <random>

namespace braidcsp::sudoku {

int Grid::given_count() const {
    int n = 0;
    for (auto c : cells) n += c != 0;
    return n;
}

std::string Grid::to_string() const {
    std::string s(81, '.');
    for (int i = 0; i < 81; ++i)
        if (cells[i]) s[i] = static_cast<char>('0' + cells[i]);
    return s;
}

Grid parse_grid(std::string_view text) {
    if (text.size() != 81)
        throw ParseError("expected 81 characters, got " + std::to_string(text.size()));
    Grid g;
    for (int i = 0; i < 81; ++i) {
        char ch = text[i];
        if (ch == '.' || ch == '0') continue;
        if (ch < '1' || ch > '9') throw ParseError(std::string("invalid character '") + ch + "' at position " + std::to_string(i));
        g.cells[i] = static_cast<std::uint8_t>(ch - '0');
    }
    // Duplicate check per unit.
    for (int r = 1; r <= 9 && !g.inconsistent; ++r) {
        int seen = 0;
        for (int c = 1; c <= 9; ++c)
            if (int n = g.at(r, c)) {
                if (seen & (1 << n)) g.inconsistent = true;
                seen |= 1 << n;
            }
    }
    for (int c = 1; c <= 9 && !g.inconsistent; ++c) {
        int seen = 0;
        for (int r = 1; r <= 9; ++r)
            if (int n = g.at(r, c)) {
                if (seen & (1 << n)) g.inconsistent = true;
                seen |= 1 << n;
            }
    }
    for (int b = 1; b <= 9 && !g.inconsistent; ++b) {
        int seen = 0;
        for (int s = 1; s <= 9; ++s) {
            int r = ((b - 1) / 3) * 3 + (s - 1) / 3 + 1;
            int c = ((b - 1) % 3) * 3 + (s - 1) % 3 + 1;
            if (int n = g.at(r, c)) {
                if (seen & (1 << n)) g.inconsistent = true;
                seen |= 1 << n;
            }
        }
    }
    return g;
}

bool sudoku_linked(int n1, int r1, int c1, int n2, int r2, int c2) {
    auto check = [](int x, const char* what) {
        if (x < 1 || x > 9) throw MalformedRef(std::string(what) + " out of range");
    };
    check(n1, "digit");
    check(n2, "digit");
    check(r1, "row");
    check(r2, "row");
    check(c1, "column");
    check(c2, "column");
    if (n1 == n2 && r1 == r2 && c1 == c2) return false;
    bool same_cell = r1 == r2 && c1 == c2;
    if (n1 != n2) return same_cell;
    bool share_unit = r1 == r2 || c1 == c2 || block_of(r1, c1) == block_of(r2, c2);
    return share_unit;
}

SudokuCsp build_csp(const Grid& g) {
    CspBuilder b(729);
    for (int n = 1; n <= 9; ++n)
        for (int r = 1; r <= 9; ++r)
            for (int c = 1; c <= 9; ++c)
                b.set_atom_name(atom_index(n, r, c),
                                std::to_string(n) + "r" + std::to_string(r) + "c" + std::to_string(c));

    for (int r = 1; r <= 9; ++r)
        for (int c = 1; c <= 9; ++c) {
            std::vector<Atom> dom;
            for (int n = 1; n <= 9; ++n) dom.push_back(atom_index(n, r, c));
            b.add_variable("r" + std::to_string(r) + "c" + std::to_string(c), kFamilyRc, {r, c}, std::move(dom));
        }
    for (int r = 1; r <= 9; ++r)
        for (int n = 1; n <= 9; ++n) {
            std::vector<Atom> dom;
            for (int c = 1; c <= 9; ++c) dom.push_back(atom_index(n, r, c));
            b.add_variable("r" + std::to_string(r) + "n" + std::to_string(n), kFamilyRn, {r, n}, std::move(dom));
        }
    for (int c = 1; c <= 9; ++c)
        for (int n = 1; n <= 9; ++n) {
            std::vector<Atom> dom;
            for (int r = 1; r <= 9; ++r) dom.push_back(atom_index(n, r, c));
            b.add_variable("c" + std::to_string(c) + "n" + std::to_string(n), kFamilyCn, {c, n}, std::move(dom));
        }
    for (int blk = 1; blk <= 9; ++blk)
        for (int n = 1; n <= 9; ++n) {
            std::vector<Atom> dom;
            for (int s = 1; s <= 9; ++s) {
                int r = ((blk - 1) / 3) * 3 + (s - 1) / 3 + 1;
                int c = ((blk - 1) % 3) * 3 + (s - 1) % 3 + 1;
                dom.push_back(atom_index(n, r, c));
            }
            b.add_variable("b" + std::to_string(blk) + "n" + std::to_string(n), kFamilyBn, {blk, n}, std::move(dom));
        }

    // No explicit links: every Sudoku direct contradiction is a same-variable
    // pair in one of the four families.
    for (int r = 1; r <= 9; ++r)
        for (int c = 1; c <= 9; ++c)
            if (int n = g.at(r, c)) b.add_given(atom_index(n, r, c), SudokuCsp::rc(r, c));

    return SudokuCsp{b.build()};
}

namespace {

// Grid-native backtracking counter: row/column/block digit masks, most
// constrained cell first, digits ascending.
struct GridCounter {
    std::array<int, 9> rows{}, cols{}, boxes{};
    std::array<std::uint8_t, 81> cells{};
    int cap = 1;
    int found = 0;
    Grid* out = nullptr;

    static int box_idx(int cell) { return (cell / 27) * 3 + (cell % 9) / 3; }

    bool place_givens(const Grid& g) {
        for (int i = 0; i < 81; ++i) {
            int n = g.cells[i];
            cells[i] = static_cast<std::uint8_t>(n);
            if (!n) continue;
            int bit = 1 << n;
            int r = i / 9, c = i % 9, bx = box_idx(i);
            if ((rows[r] | cols[c] | boxes[bx]) & bit) return false;
            rows[r] |= bit;
            cols[c] |= bit;
            boxes[bx] |= bit;
        }
        return true;
    }

    int avail(int i) const {
        return ~(rows[i / 9] | cols[i % 9] | boxes[box_idx(i)]) & 0x3fe;
    }

    bool dfs() {
        int best = -1, best_n = 10;
        for (int i = 0; i < 81; ++i) {
            if (cells[i]) continue;
            int n = std::popcount(static_cast<unsigned>(avail(i)));
            if (n == 0) return false;
            if (n < best_n) {
                best_n = n;
                best = i;
                if (n == 1) break;
            }
        }
        if (best < 0) {
            if (found == 0 && out) {
                for (int i = 0; i < 81; ++i) out->cells[i] = cells[i];
            }
            ++found;
            return found >= cap;
        }
        int r = best / 9, c = best % 9, bx = box_idx(best);
        int mask = avail(best);
        for (int n = 1; n <= 9; ++n) {
            int bit = 1 << n;
            if (!(mask & bit)) continue;
            cells[best] = static_cast<std::uint8_t>(n);
            rows[r] |= bit;
            cols[c] |= bit;
            boxes[bx] |= bit;
            if (dfs()) return true;
            rows[r] &= ~bit;
            cols[c] &= ~bit;
            boxes[bx] &= ~bit;
            cells[best] = 0;
        }
        return false;
    }
};

} // namespace

int solution_count(const Grid& g, int cap, Grid* solution) {
    GridCounter gc;
    gc.cap = cap;
    gc.out = solution;
    if (!gc.place_givens(g)) return 0;
    gc.dfs();
    return gc.found;
}

bool is_minimal(const Grid& g) {
    if (solution_count(g, 2) != 1) return false;
    for (int i = 0; i < 81; ++i) {
        if (!g.cells[i]) continue;
        Grid trimmed = g;
        trimmed.cells[i] = 0;
        if (solution_count(trimmed, 2) < 2) return false;
    }
    return true;
}

namespace {

// Randomized full-grid fill: plain backtracking with a per-call shuffled
// digit order per cell.
bool fill_random(Grid& g, std::mt19937_64& rng) {
    GridCounter gc;
    if (!gc.place_givens(g)) return false;
    struct Filler {
        GridCounter& gc;
        std::mt19937_64& rng;
        bool dfs() {
            int best = -1, best_n = 10;
            for (int i = 0; i < 81; ++i) {
                if (gc.cells[i]) continue;
                int n = std::popcount(static_cast<unsigned>(gc.avail(i)));
                if (n == 0) return false;
                if (n < best_n) {
                    best_n = n;
                    best = i;
                    if (n == 1) break;
                }
            }
            if (best < 0) return true;
            std::array<int, 9> order{1, 2, 3, 4, 5, 6, 7, 8, 9};
            std::shuffle(order.begin(), order.end(), rng);
            int r = best / 9, c = best % 9, bx = GridCounter::box_idx(best);
            int mask = gc.avail(best);
            for (int n : order) {
                int bit = 1 << n;
                if (!(mask & bit)) continue;
                gc.cells[best] = static_cast<std::uint8_t>(n);
                gc.rows[r] |= bit;
                gc.cols[c] |= bit;
                gc.boxes[bx] |= bit;
                if (dfs()) return true;
                gc.rows[r] &= ~bit;
                gc.cols[c] &= ~bit;
                gc.boxes[bx] &= ~bit;
                gc.cells[best] = 0;
            }
            return false;
        }
    } filler{gc, rng};
    if (!filler.dfs()) return false;
    for (int i = 0; i < 81; ++i) g.cells[i] = gc.cells[i];
    return true;
}

} // namespace

Grid generate_minimal(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Grid g;
    if (!fill_random(g, rng)) throw Error("random grid fill failed");

    std::array<int, 81> order{};
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int pos : order) {
        std::uint8_t saved = g.cells[pos];
        g.cells[pos] = 0;
        if (solution_count(g, 2) != 1) g.cells[pos] = saved;
    }
    if (!is_minimal(g)) throw Error("generator produced a non-minimal puzzle");
    return g;
}

std::vector<Grid> load_corpus(const std::string& path, std::vector<std::string>* diagnostics) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open corpus file: " + path);
    std::vector<Grid> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            out.push_back(parse_grid(line));
        } catch (const ParseError& e) {
            if (diagnostics)
                diagnostics->push_back("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

} // namespace braidcsp::sudoku
