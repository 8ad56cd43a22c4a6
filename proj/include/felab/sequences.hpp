#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "felab/arith.hpp"

namespace felab::seq {

namespace detail {
inline natural add_or_throw(natural a, natural b, const char* who) {
    auto r = checked_add(a, b);
    if (!r) throw resource_error(std::string(who) + ": 64-bit overflow");
    return *r;
}

// Least multiple of m strictly greater than x.
inline natural next_multiple_above(natural x, natural m, const char* who) {
    natural q = x / m + 1;
    auto r = checked_mul(q, m);
    if (!r) throw resource_error(std::string(who) + ": 64-bit overflow");
    return *r;
}
} // namespace detail

// a_1 = 1; a_n is the least multiple of n above the sum of earlier terms.
inline std::vector<natural> exgamma(std::size_t count) {
    if (count == 0) throw input_error("exgamma: count must be >= 1");
    std::vector<natural> a{1};
    natural sum = 1;
    for (natural n = 2; a.size() < count; ++n) {
        natural next = detail::next_multiple_above(sum, n, "exgamma");
        a.push_back(next);
        sum = detail::add_or_throw(sum, next, "exgamma");
    }
    return a;
}

// a_1 = 1; a_n = n + (sum of earlier terms) + 1.
inline std::vector<natural> fastgrowth(std::size_t count) {
    if (count == 0) throw input_error("fastgrowth: count must be >= 1");
    std::vector<natural> a{1};
    natural sum = 1;
    for (natural n = 2; a.size() < count; ++n) {
        natural next = detail::add_or_throw(detail::add_or_throw(sum, n, "fastgrowth"), 1, "fastgrowth");
        a.push_back(next);
        sum = detail::add_or_throw(sum, next, "fastgrowth");
    }
    return a;
}

// Greedy sequence whose pairwise differences are all distinct.
inline std::vector<natural> sidon(std::size_t count) {
    if (count == 0) throw input_error("sidon: count must be >= 1");
    std::vector<natural> s{1};
    std::set<natural> diffs;
    for (natural c = 2; s.size() < count; ++c) {
        std::vector<natural> fresh;
        bool ok = true;
        for (natural x : s) {
            natural d = c - x;
            if (diffs.count(d) || std::find(fresh.begin(), fresh.end(), d) != fresh.end()) {
                ok = false;
                break;
            }
            fresh.push_back(d);
        }
        if (!ok) continue;
        diffs.insert(fresh.begin(), fresh.end());
        s.push_back(c);
    }
    return s;
}

inline bool has_distinct_differences(const std::vector<natural>& s) {
    std::set<natural> seen;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            if (s[i] <= s[j]) return false;
            if (!seen.insert(s[i] - s[j]).second) return false;
        }
    return true;
}

struct thick_blocks {
    std::vector<std::vector<natural>> blocks; // blocks[n-1] = F_n
    std::vector<natural> avoided;             // avoided[n-1] = a_n
};

// F_n = {a_{n-1}+1, ..., a_{n-1}+n}; a_n = least multiple of n above max F_n; a_0 = 1.
inline thick_blocks thick_nonmaxstar(std::size_t n_max) {
    if (n_max == 0) throw input_error("thick_nonmaxstar: n_max must be >= 1");
    thick_blocks out;
    natural prev = 1;
    for (natural n = 1; n <= n_max; ++n) {
        std::vector<natural> block;
        for (natural i = 1; i <= n; ++i) block.push_back(detail::add_or_throw(prev, i, "thick_nonmaxstar"));
        prev = detail::next_multiple_above(block.back(), n, "thick_nonmaxstar");
        out.blocks.push_back(std::move(block));
        out.avoided.push_back(prev);
    }
    return out;
}

struct function_pair {
    std::vector<natural> f;
    std::vector<natural> g;
};

// f(n) = p_{2n}^2 p_{2n+1}, g(n) = p_{2n} p_{2n+1}^2 with p_1 = 2.
inline function_pair mj_funcs(std::size_t h_max) {
    if (h_max == 0) throw input_error("mj_funcs: h_max must be >= 1");
    auto ps = arith::first_primes(2 * h_max + 1);
    function_pair out;
    for (std::size_t n = 1; n <= h_max; ++n) {
        natural p = ps[2 * n - 1], q = ps[2 * n];
        natural f = saturating_mul(saturating_mul(p, p), q);
        natural g = saturating_mul(saturating_mul(q, q), p);
        if (f == unbounded || g == unbounded) throw resource_error("mj_funcs: 64-bit overflow");
        out.f.push_back(f);
        out.g.push_back(g);
    }
    return out;
}

// Primes selected by 1-based index: parity "odd"/"even", or explicit indices.
struct prime_selection {
    std::string parity;           // "odd", "even", or empty for explicit
    std::vector<natural> indices; // explicit 1-based indices when parity is empty
};

inline std::vector<natural> selected_indices(const prime_selection& sel, std::size_t count) {
    std::vector<natural> idx;
    if (sel.parity == "odd" || sel.parity == "even") {
        natural start = sel.parity == "odd" ? 1 : 2;
        for (std::size_t i = 0; i < count; ++i) idx.push_back(start + 2 * i);
    } else if (sel.parity.empty()) {
        idx = sel.indices;
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        if (!idx.empty() && idx.front() == 0) throw input_error("prime indices start at 1");
        if (idx.size() > count) idx.resize(count);
    } else {
        throw input_error("prime selection must be odd, even, or an index list");
    }
    return idx;
}

// The first `count` selected primes, plus the next selected prime if any.
inline std::vector<natural> selected_primes(const prime_selection& sel, std::size_t count) {
    auto idx = selected_indices(sel, count);
    if (idx.empty()) return {};
    auto ps = arith::first_primes(idx.back());
    std::vector<natural> out;
    for (natural i : idx) out.push_back(ps[i - 1]);
    return out;
}

// The selected prime following the first `count`, when the rule is infinite.
inline std::optional<natural> next_selected_prime(const prime_selection& sel, std::size_t count) {
    if (sel.parity.empty()) return std::nullopt;
    auto idx = selected_indices(sel, count + 1);
    return arith::first_primes(idx.back()).back();
}

// Primes up to the largest index in the rule that the rule does not select.
inline std::vector<natural> complementary_primes(const prime_selection& sel, std::size_t count) {
    auto idx = selected_indices(sel, count);
    if (idx.empty()) return {};
    auto ps = arith::first_primes(idx.back());
    std::vector<natural> out;
    for (natural i = 1; i <= idx.back(); ++i)
        if (!std::binary_search(idx.begin(), idx.end(), i)) out.push_back(ps[i - 1]);
    return out;
}

inline std::vector<natural> subset_sums(const std::vector<natural>& xs, natural horizon) {
    std::vector<char> hit(horizon + 1, 0);
    std::vector<natural> found;
    for (natural x : xs) {
        if (x > horizon) continue;
        std::vector<natural> add{x};
        for (natural s : found)
            if (auto t = checked_add(s, x); t && *t <= horizon) add.push_back(*t);
        for (natural v : add)
            if (!hit[v]) { hit[v] = 1; found.push_back(v); }
    }
    std::sort(found.begin(), found.end());
    return found;
}

inline std::vector<natural> subset_products(const std::vector<natural>& xs, natural horizon) {
    // Products can repeat a value through different subsets; dedupe via a set.
    std::set<natural> found;
    for (natural x : xs) {
        if (x > horizon) continue;
        std::vector<natural> add{x};
        for (natural s : found)
            if (auto t = checked_mul(s, x); t && *t <= horizon) add.push_back(*t);
        found.insert(add.begin(), add.end());
    }
    return {found.begin(), found.end()};
}

struct prophier_block {
    std::vector<natural> primes;
    unsigned exponent;
    std::size_t count;
};

// Products over blocks of `count` distinct primes raised to `exponent`;
// blocks naming the same prime set draw distinct primes jointly.
inline std::vector<natural> prophier(const std::vector<prophier_block>& blocks, natural horizon) {
    if (blocks.empty()) throw input_error("prophier: at least one block");
    std::vector<std::vector<natural>> sets;
    std::vector<std::size_t> set_of;
    for (const auto& b : blocks) {
        if (b.exponent == 0 || b.count == 0) throw input_error("prophier: exponent and count must be >= 1");
        std::vector<natural> ps = b.primes;
        std::sort(ps.begin(), ps.end());
        if (std::adjacent_find(ps.begin(), ps.end()) != ps.end()) throw input_error("prophier: repeated prime in a block");
        for (natural p : ps)
            if (!arith::is_prime(p)) throw input_error("prophier: " + std::to_string(p) + " is not prime");
        auto same = std::find(sets.begin(), sets.end(), ps);
        if (same != sets.end()) {
            set_of.push_back(static_cast<std::size_t>(same - sets.begin()));
            continue;
        }
        for (const auto& other : sets) {
            std::vector<natural> common;
            std::set_intersection(ps.begin(), ps.end(), other.begin(), other.end(), std::back_inserter(common));
            if (!common.empty()) throw input_error("prophier: prime sets must be disjoint or identical");
        }
        set_of.push_back(sets.size());
        sets.push_back(ps);
    }
    std::vector<std::size_t> demand(sets.size(), 0);
    for (std::size_t i = 0; i < blocks.size(); ++i) demand[set_of[i]] += blocks[i].count;
    for (std::size_t s = 0; s < sets.size(); ++s)
        if (sets[s].size() < demand[s]) throw input_error("prophier: a prime set is smaller than its blocks require");

    std::set<natural> out;
    std::vector<std::vector<char>> used(sets.size());
    for (std::size_t s = 0; s < sets.size(); ++s) used[s].assign(sets[s].size(), 0);

    // Within a block primes are picked in increasing index order so each
    // product is generated once per choice of subset.
    auto rec = [&](auto&& self, std::size_t block, std::size_t picked, std::size_t from, natural value) -> void {
        if (block == blocks.size()) {
            out.insert(value);
            return;
        }
        const auto& b = blocks[block];
        if (picked == b.count) {
            self(self, block + 1, 0, 0, value);
            return;
        }
        std::size_t s = set_of[block];
        for (std::size_t i = from; i < sets[s].size(); ++i) {
            if (used[s][i]) continue;
            natural v = value;
            bool fits = true;
            for (unsigned e = 0; e < b.exponent && fits; ++e) {
                auto t = checked_mul(v, sets[s][i]);
                fits = t && *t <= horizon;
                if (fits) v = *t;
            }
            // Primes are sorted, so larger ones overshoot as well.
            if (!fits) break;
            used[s][i] = 1;
            self(self, block, picked + 1, i + 1, v);
            used[s][i] = 0;
        }
    };
    rec(rec, 0, 0, 0, 1);
    return {out.begin(), out.end()};
}

// Sorted prime factor list with `primes[j]` forced at 1-based `positions[j]`.
inline bool levelfix_member(natural m, unsigned level, const std::vector<natural>& positions,
                            const std::vector<natural>& primes, const arith::sieve* table = nullptr) {
    if (m < 2) return false;
    std::vector<natural> q;
    for (auto [p, e] : arith::factorize(m, table))
        for (unsigned i = 0; i < e; ++i) q.push_back(p);
    if (q.size() != level) return false;
    for (std::size_t j = 0; j < positions.size(); ++j)
        if (q[positions[j] - 1] != primes[j]) return false;
    return true;
}

inline void validate_levelfix(unsigned level, const std::vector<natural>& positions, const std::vector<natural>& primes) {
    if (level == 0) throw input_error("levelfix: n must be >= 1");
    if (positions.size() != primes.size()) throw input_error("levelfix: positions and primes differ in length");
    for (std::size_t j = 0; j < positions.size(); ++j) {
        if (positions[j] < 1 || positions[j] > level) throw input_error("levelfix: position out of range");
        if (j && positions[j] <= positions[j - 1]) throw input_error("levelfix: positions must increase");
        if (j && primes[j] < primes[j - 1]) throw input_error("levelfix: primes must be non-decreasing");
        if (!arith::is_prime(primes[j])) throw input_error("levelfix: " + std::to_string(primes[j]) + " is not prime");
    }
}

inline std::vector<natural> levelfix(unsigned level, const std::vector<natural>& positions,
                                     const std::vector<natural>& primes, natural horizon) {
    validate_levelfix(level, positions, primes);
    arith::sieve table(horizon);
    std::vector<natural> out;
    for (natural m = 2; m <= horizon; ++m)
        if (table.omega(m) == level && levelfix_member(m, level, positions, primes, &table)) out.push_back(m);
    return out;
}

inline bool equal_exponents(natural n, const arith::sieve* table = nullptr) {
    if (n < 2) return false;
    auto f = arith::factorize(n, table);
    return std::all_of(f.begin(), f.end(), [&](const prime_power& pp) { return pp.exponent == f[0].exponent; });
}

} // namespace felab::seq
