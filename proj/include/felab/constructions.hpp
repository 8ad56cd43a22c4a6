#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "felab/arith.hpp"
#include "felab/eval.hpp"
#include "felab/lazy_set.hpp"
#include "felab/sequences.hpp"
#include "felab/set_expr.hpp"

// Generators for the fixture sets, each re-checked against its defining rule.
namespace felab::constructions {

namespace detail {
inline void ensure(bool ok, const std::string& what) {
    if (!ok) throw error("construction check failed: " + what);
}
} // namespace detail

inline std::vector<natural> gen_exgamma(std::size_t count) {
    auto a = seq::exgamma(count);
    natural sum = 0;
    for (std::size_t n = 1; n <= a.size(); ++n) {
        detail::ensure(a[n - 1] % n == 0, "exgamma divisibility");
        detail::ensure(a[n - 1] > sum, "exgamma growth");
        sum += a[n - 1];
    }
    return a;
}

inline std::vector<natural> gen_fastgrowth(std::size_t count) {
    auto a = seq::fastgrowth(count);
    natural sum = a[0];
    for (std::size_t n = 2; n <= a.size(); ++n) {
        detail::ensure(a[n - 1] > n + sum, "fastgrowth growth");
        sum += a[n - 1];
    }
    return a;
}

inline seq::thick_blocks gen_thick_nonmaxstar(std::size_t n_max) {
    auto tb = seq::thick_nonmaxstar(n_max);
    natural prev = 1;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto& blk = tb.blocks[n - 1];
        detail::ensure(blk.size() == n && blk.front() > prev, "thick_nonmaxstar block");
        detail::ensure(tb.avoided[n - 1] % n == 0 && tb.avoided[n - 1] > blk.back(), "thick_nonmaxstar avoided multiple");
        prev = tb.avoided[n - 1];
    }
    return tb;
}

inline lazy_set gen_equal_exponent(natural horizon) {
    if (horizon < 2) throw input_error("equal_exponent: H must be >= 2");
    return setlang::eval(setlang::make::construct("equal_exponent"), horizon);
}

inline seq::function_pair gen_mj_funcs(std::size_t h_max) { return seq::mj_funcs(h_max); }

struct fp_prime_subset {
    lazy_set set;
    std::vector<natural> generators;
    std::vector<natural> complementary; // unselected primes up to the last selected index
};

inline fp_prime_subset gen_fp_prime_subset(const seq::prime_selection& sel, std::size_t count, natural horizon) {
    std::vector<setlang::fixture_arg> args;
    if (sel.parity.empty()) {
        args.push_back(sel.indices);
    } else {
        args.push_back(sel.parity);
        args.push_back(natural{count});
    }
    auto e = setlang::make::construct("fp_primes", args);
    fp_prime_subset out{setlang::eval(e, horizon), seq::selected_primes(sel, count),
                        seq::complementary_primes(sel, count)};
    for (natural x : out.set.elements()) {
        bool divisible = false;
        for (natural q : out.complementary) divisible = divisible || x % q == 0;
        detail::ensure(!divisible, "fp_primes member divisible by an unselected prime");
    }
    return out;
}

inline std::vector<natural> gen_prophier(const std::vector<seq::prophier_block>& blocks, natural horizon) {
    auto out = seq::prophier(blocks, horizon);
    natural level = 0;
    for (const auto& b : blocks) level += b.count * b.exponent;
    for (natural x : out) detail::ensure(arith::omega(x) == level, "prophier level");
    return out;
}

inline std::vector<natural> gen_levelfix(unsigned level, const std::vector<natural>& positions,
                                         const std::vector<natural>& primes, natural horizon) {
    return seq::levelfix(level, positions, primes, horizon);
}

inline std::vector<natural> gen_sidon_levels(std::size_t count) {
    auto s = seq::sidon(count);
    detail::ensure(seq::has_distinct_differences(s), "sidon differences");
    return s;
}

struct pseudo_result {
    std::vector<natural> terms;
    bool partial = false; // the horizon ran out before `count` terms
};

// y_n is the least element of X_n above y_{n-1}. The chain must be
// decreasing on the known part of [1, H].
inline pseudo_result pseudointersection(const std::vector<setlang::set_expr>& chain, std::size_t count,
                                        natural horizon) {
    if (count > chain.size()) throw input_error("pseudointersection: chain shorter than count");
    std::vector<lazy_set> sets;
    for (std::size_t i = 0; i < count; ++i) sets.push_back(setlang::eval(chain[i], horizon));
    for (std::size_t i = 1; i < sets.size(); ++i) {
        natural top = std::min(sets[i].enum_horizon(), sets[i - 1].enum_horizon());
        for (natural y : sets[i].elements())
            if (y <= top && !*sets[i - 1].member(y))
                throw input_error("pseudointersection: chain is not decreasing at index " + std::to_string(i) +
                                  " (" + std::to_string(y) + ")");
    }
    pseudo_result r;
    natural last = 0;
    for (const auto& x : sets) {
        auto it = std::upper_bound(x.elements().begin(), x.elements().end(), last);
        if (it == x.elements().end() || *it > x.enum_horizon()) {
            r.partial = true;
            break;
        }
        last = *it;
        r.terms.push_back(last);
    }
    return r;
}

// X_n = complement of the multiples of 2..n+1, for n = 1..count.
inline std::vector<setlang::set_expr> coprime_chain(std::size_t count) {
    std::vector<setlang::set_expr> out;
    for (std::size_t n = 1; n <= count; ++n) {
        if (n == 1) {
            out.push_back(setlang::make::complement(setlang::make::mult(2)));
            continue;
        }
        std::vector<setlang::set_expr> parts;
        for (natural k = 2; k <= n + 1; ++k) parts.push_back(setlang::make::mult(k));
        out.push_back(setlang::make::complement(setlang::make::unite(parts)));
    }
    return out;
}

} // namespace felab::constructions
