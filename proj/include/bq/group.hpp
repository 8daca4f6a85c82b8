#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "bq/error.hpp"
#include "bq/integer_matrix.hpp"

namespace bq {

/// A word in a free group. Letter +k is generator k-1, -k its inverse.
using Word = std::vector<int>;

inline Word free_reduce(const Word& w) {
    Word r;
    r.reserve(w.size());
    for (int l : w) {
        if (!r.empty() && r.back() == -l) {
            r.pop_back();
        } else {
            r.push_back(l);
        }
    }
    return r;
}

inline Word inverse_word(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (int& l : r) {
        l = -l;
    }
    return r;
}

inline Word concat(const Word& a, const Word& b) {
    Word r = a;
    r.insert(r.end(), b.begin(), b.end());
    return free_reduce(r);
}

/// Cyclic reduction: strips matching letter/inverse pairs at both ends.
inline Word cyclic_reduce(Word w) {
    w = free_reduce(w);
    std::size_t lo = 0;
    std::size_t hi = w.size();
    while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
        ++lo;
        --hi;
    }
    return Word(w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi));
}

inline std::string word_to_string(const Word& w, const std::vector<std::string>& names) {
    if (w.empty()) {
        return "1";
    }
    std::string s;
    for (int l : w) {
        if (!s.empty()) {
            s += "*";
        }
        s += names.at(static_cast<std::size_t>(std::abs(l)) - 1);
        if (l < 0) {
            s += "^-1";
        }
    }
    return s;
}

/// Exponent-sum vector of a word over `n` generators.
inline IntVector exponent_vector(const Word& w, std::size_t n) {
    IntVector v(n, 0);
    for (int l : w) {
        auto g = static_cast<std::size_t>(std::abs(l)) - 1;
        v.at(g) += l > 0 ? 1 : -1;
    }
    return v;
}

struct GroupPresentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;
    AbelianInvariants abelian_invariants;

    [[nodiscard]] std::size_t generator_count() const { return generators.size(); }

    [[nodiscard]] IntMatrix relator_matrix() const {
        IntMatrix m(0, generators.size());
        for (const Word& r : relators) {
            m.append_row(exponent_vector(r, generators.size()));
        }
        return m;
    }

    [[nodiscard]] std::string to_string() const {
        std::string s = "<";
        for (std::size_t i = 0; i < generators.size(); ++i) {
            s += (i ? ", " : " ") + generators[i];
        }
        s += " |";
        for (std::size_t i = 0; i < relators.size(); ++i) {
            s += (i ? ", " : " ") + word_to_string(relators[i], generators);
        }
        s += " >";
        return s;
    }
};

/// Invariant factors and free rank of the abelianized presentation.
inline AbelianInvariants abelianization(const GroupPresentation& gp) { return smith_invariants(gp.relator_matrix()); }

/// Builds a presentation from raw relators: relators are reduced, empty ones
/// dropped, and the abelian invariants computed.
inline GroupPresentation make_presentation(std::vector<std::string> generators, const std::vector<Word>& relators) {
    GroupPresentation gp;
    gp.generators = std::move(generators);
    for (const Word& r : relators) {
        for (int l : r) {
            if (l == 0 || static_cast<std::size_t>(std::abs(l)) > gp.generators.size()) {
                throw DomainError("relator uses an unknown generator");
            }
        }
        Word c = cyclic_reduce(r);
        if (!c.empty() && std::find(gp.relators.begin(), gp.relators.end(), c) == gp.relators.end()) {
            gp.relators.push_back(std::move(c));
        }
    }
    gp.abelian_invariants = abelianization(gp);
    return gp;
}

/// Coset table of the trivial subgroup, i.e. the right regular action of a
/// finite group on itself. Coset 0 is the identity.
struct CosetTable {
    std::size_t generator_count = 0;
    /// table[c][2g] = c * g, table[c][2g+1] = c * g^-1
    std::vector<std::vector<std::size_t>> table;

    [[nodiscard]] std::size_t size() const { return table.size(); }

    [[nodiscard]] std::size_t act(std::size_t coset, const Word& w) const {
        for (int l : w) {
            auto g = static_cast<std::size_t>(std::abs(l)) - 1;
            coset = table[coset][2 * g + (l > 0 ? 0 : 1)];
        }
        return coset;
    }

    /// A word is trivial in the group iff it fixes the identity coset.
    [[nodiscard]] bool is_trivial(const Word& w) const { return act(0, w) == 0; }
};

namespace detail {

/// HLT coset enumeration with coincidence processing.
class ToddCoxeter {
  public:
    ToddCoxeter(const GroupPresentation& gp, std::size_t limit)
        : n_(gp.generator_count()), limit_(limit), relators_(gp.relators) {}

    std::optional<CosetTable> run() {
        new_coset();
        for (std::size_t c = 0; c < table_.size(); ++c) {
            if (!alive(c)) {
                continue;
            }
            for (const Word& r : relators_) {
                if (!alive(c)) {
                    break;
                }
                if (!scan_and_fill(c, r)) {
                    return std::nullopt;
                }
            }
            for (std::size_t col = 0; col < 2 * n_ && alive(c); ++col) {
                if (table_[c][col] == none) {
                    if (!define(c, col)) {
                        return std::nullopt;
                    }
                }
            }
        }
        return compact();
    }

  private:
    static constexpr std::size_t none = static_cast<std::size_t>(-1);

    static std::size_t column(int l) { return 2 * (static_cast<std::size_t>(std::abs(l)) - 1) + (l > 0 ? 0 : 1); }
    static std::size_t inverse_column(std::size_t col) { return col ^ 1U; }

    bool alive(std::size_t c) const { return forward_[c] == c; }

    std::size_t rep(std::size_t c) {
        std::size_t r = c;
        while (forward_[r] != r) {
            r = forward_[r];
        }
        while (forward_[c] != r) {
            std::size_t next = forward_[c];
            forward_[c] = r;
            c = next;
        }
        return r;
    }

    std::size_t new_coset() {
        table_.emplace_back(2 * n_, none);
        forward_.push_back(table_.size() - 1);
        ++live_;
        return table_.size() - 1;
    }

    bool define(std::size_t c, std::size_t col) {
        if (live_ >= limit_ || table_.size() >= 4 * limit_) {
            return false;
        }
        std::size_t d = new_coset();
        table_[c][col] = d;
        table_[d][inverse_column(col)] = c;
        return true;
    }

    bool scan_and_fill(std::size_t c, const Word& r) {
        if (r.empty()) {
            return true;
        }
        std::size_t f = c;
        std::size_t i = 0;
        std::size_t b = c;
        std::size_t j = r.size();
        while (true) {
            while (i < j && table_[f][column(r[i])] != none) {
                f = table_[f][column(r[i])];
                ++i;
            }
            if (i == j) {
                if (f != b) {
                    coincidence(f, b);
                }
                return true;
            }
            while (j > i && table_[b][column(-r[j - 1])] != none) {
                b = table_[b][column(-r[j - 1])];
                --j;
            }
            if (j == i) {
                if (f != b) {
                    coincidence(f, b);
                }
                return true;
            }
            if (j == i + 1) {
                // Deduction closes the cycle.
                table_[f][column(r[i])] = b;
                table_[b][column(-r[i])] = f;
                return true;
            }
            if (!define(f, column(r[i]))) {
                return false;
            }
        }
    }

    void coincidence(std::size_t a, std::size_t b) {
        std::vector<std::pair<std::size_t, std::size_t>> queue{{a, b}};
        while (!queue.empty()) {
            auto [x, y] = queue.back();
            queue.pop_back();
            x = rep(x);
            y = rep(y);
            if (x == y) {
                continue;
            }
            if (x > y) {
                std::swap(x, y);
            }
            forward_[y] = x;
            --live_;
            for (std::size_t col = 0; col < 2 * n_; ++col) {
                std::size_t t = table_[y][col];
                if (t == none) {
                    continue;
                }
                table_[y][col] = none;
                if (table_[t][inverse_column(col)] == y) {
                    table_[t][inverse_column(col)] = none;
                }
                std::size_t xr = rep(x);
                std::size_t tr = rep(t);
                if (table_[xr][col] != none) {
                    queue.emplace_back(table_[xr][col], tr);
                } else if (table_[tr][inverse_column(col)] != none) {
                    queue.emplace_back(table_[tr][inverse_column(col)], xr);
                } else {
                    table_[xr][col] = tr;
                    table_[tr][inverse_column(col)] = xr;
                }
            }
        }
    }

    std::optional<CosetTable> compact() {
        std::vector<std::size_t> index(table_.size(), none);
        std::size_t k = 0;
        for (std::size_t c = 0; c < table_.size(); ++c) {
            if (alive(c)) {
                index[c] = k++;
            }
        }
        CosetTable out;
        out.generator_count = n_;
        for (std::size_t c = 0; c < table_.size(); ++c) {
            if (!alive(c)) {
                continue;
            }
            std::vector<std::size_t> row(2 * n_);
            for (std::size_t col = 0; col < 2 * n_; ++col) {
                std::size_t t = table_[c][col];
                if (t == none) {
                    return std::nullopt;
                }
                row[col] = index[rep(t)];
            }
            out.table.push_back(std::move(row));
        }
        return out;
    }

    std::size_t n_;
    std::size_t limit_;
    std::vector<Word> relators_;
    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::size_t> forward_;
    std::size_t live_ = 0;
};

} // namespace detail

/// Enumerates the cosets of the trivial subgroup. nullopt when more than
/// `limit` live cosets would be needed (infinite or just large group).
inline std::optional<CosetTable> enumerate_cosets(const GroupPresentation& gp, std::size_t limit = 10000) {
    return detail::ToddCoxeter(gp, limit).run();
}

/// Generators eliminated by Tietze moves: whenever a generator occurs exactly
/// once in a cyclically reduced relator, solve for it and substitute.
struct TietzeReduction {
    std::size_t generator_count = 0;
    /// Image of each original generator as a word in the survivors.
    std::vector<Word> images;
    std::vector<Word> relators;

    [[nodiscard]] bool is_free() const { return relators.empty(); }
};

/// Image of w under generator images (letters are +-(g+1)).
inline Word map_word(const Word& w, const std::vector<Word>& images) {
    Word out;
    for (int l : w) {
        const Word& img = images.at(static_cast<std::size_t>(std::abs(l)) - 1);
        if (l > 0) {
            out.insert(out.end(), img.begin(), img.end());
        } else {
            Word inv = inverse_word(img);
            out.insert(out.end(), inv.begin(), inv.end());
        }
    }
    return free_reduce(out);
}

inline TietzeReduction tietze_reduce(const GroupPresentation& gp, std::size_t length_limit = 4096) {
    const std::size_t n = gp.generator_count();
    std::vector<Word> images(n);
    for (std::size_t g = 0; g < n; ++g) {
        images[g] = {static_cast<int>(g) + 1};
    }
    std::vector<Word> rels;
    auto keep = [&](Word r) {
        r = cyclic_reduce(r);
        if (!r.empty()) {
            rels.push_back(std::move(r));
        }
    };
    for (const Word& r : gp.relators) {
        keep(r);
    }
    std::vector<bool> alive(n, true);
    for (;;) {
        std::sort(rels.begin(), rels.end(), [](const Word& a, const Word& b) { return a.size() < b.size(); });
        std::optional<std::pair<std::size_t, int>> pick;
        for (std::size_t k = 0; k < rels.size() && !pick; ++k) {
            std::map<int, int> count;
            for (int l : rels[k]) {
                ++count[std::abs(l)];
            }
            for (int l : rels[k]) {
                if (count[std::abs(l)] == 1) {
                    pick = {k, l};
                    break;
                }
            }
        }
        if (!pick) {
            break;
        }
        auto [k, letter] = *pick;
        Word r = rels[k];
        // rotate so the letter comes first: r = g^e w, so g^e = w^-1
        auto at = static_cast<std::size_t>(std::find(r.begin(), r.end(), letter) - r.begin());
        std::rotate(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(at), r.end());
        Word w(r.begin() + 1, r.end());
        Word value = letter > 0 ? inverse_word(w) : w;
        const std::size_t g = static_cast<std::size_t>(std::abs(letter)) - 1;
        std::vector<Word> sub(n);
        for (std::size_t h = 0; h < n; ++h) {
            sub[h] = {static_cast<int>(h) + 1};
        }
        sub[g] = value;
        rels.erase(rels.begin() + static_cast<std::ptrdiff_t>(k));
        std::vector<Word> old = std::move(rels);
        rels.clear();
        bool too_long = false;
        for (const Word& x : old) {
            Word y = map_word(x, sub);
            too_long = too_long || y.size() > length_limit;
            keep(std::move(y));
        }
        for (Word& img : images) {
            img = map_word(img, sub);
            too_long = too_long || img.size() > length_limit;
        }
        alive[g] = false;
        if (too_long) {
            break;
        }
    }
    // renumber survivors
    std::vector<Word> rename(n);
    TietzeReduction t;
    for (std::size_t g = 0; g < n; ++g) {
        if (alive[g]) {
            rename[g] = {static_cast<int>(++t.generator_count)};
        }
    }
    for (const Word& img : images) {
        t.images.push_back(map_word(img, rename));
    }
    for (const Word& r : rels) {
        t.relators.push_back(map_word(r, rename));
    }
    return t;
}

using PermImage = std::vector<std::uint8_t>;

inline PermImage perm_word(const Word& w, const std::vector<PermImage>& gens, std::size_t degree) {
    PermImage p(degree);
    std::iota(p.begin(), p.end(), 0);
    for (int l : w) {
        const PermImage& g = gens.at(static_cast<std::size_t>(std::abs(l)) - 1);
        for (auto& x : p) {
            if (l > 0) {
                x = g[x];
            } else {
                x = static_cast<std::uint8_t>(std::find(g.begin(), g.end(), x) - g.begin());
            }
        }
    }
    return p;
}

/// A homomorphism to a symmetric group S_n (n <= max_degree) killing every
/// relator but not `w`, searched exhaustively up to `budget` assignments.
inline std::optional<std::vector<PermImage>> separating_permutations(std::size_t generator_count,
                                                                   const std::vector<Word>& relators, const Word& w,
                                                                   std::size_t max_degree = 4,
                                                                   std::size_t budget = 200000) {
    for (std::size_t n = 2; n <= max_degree; ++n) {
        std::vector<PermImage> all;
        PermImage p(n);
        std::iota(p.begin(), p.end(), 0);
        do {
            all.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));
        double total = std::pow(static_cast<double>(all.size()), static_cast<double>(generator_count));
        if (total > static_cast<double>(budget)) {
            break;
        }
        PermImage id = all.front();
        std::vector<std::size_t> pick(generator_count, 0);
        std::vector<PermImage> gens(generator_count, id);
        for (;;) {
            for (std::size_t g = 0; g < generator_count; ++g) {
                gens[g] = all[pick[g]];
            }
            bool hom = std::all_of(relators.begin(), relators.end(),
                                   [&](const Word& r) { return perm_word(r, gens, n) == id; });
            if (hom && perm_word(w, gens, n) != id) {
                return gens;
            }
            std::size_t g = 0;
            while (g < generator_count && ++pick[g] == all.size()) {
                pick[g++] = 0;
            }
            if (g == generator_count) {
                break;
            }
        }
    }
    return std::nullopt;
}

} // namespace bq
