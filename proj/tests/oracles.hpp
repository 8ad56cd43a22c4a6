#pragma once

// Deliberately naive reference implementations. They share no code with the
// library beyond the `natural` alias.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "felab/arith.hpp"

namespace oracle {

using felab::natural;

inline std::vector<natural> prime_factors_with_multiplicity(natural n) {
    std::vector<natural> out;
    for (natural p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    if (n > 1) out.push_back(n);
    return out;
}

inline unsigned big_omega(natural n) { return static_cast<unsigned>(prime_factors_with_multiplicity(n).size()); }

inline bool prime(natural n) {
    if (n < 2) return false;
    for (natural d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<natural> nth_primes(std::size_t count) {
    std::vector<natural> out;
    for (natural n = 2; out.size() < count; ++n)
        if (prime(n)) out.push_back(n);
    return out;
}

// Least k in [1, k_max] with k*f inside `in`, or 0.
inline natural least_dilation(const std::vector<natural>& f, const std::function<bool(natural)>& in, natural k_max) {
    for (natural k = 1; k <= k_max; ++k) {
        bool all = true;
        for (natural x : f) all = all && in(k * x);
        if (all) return k;
    }
    return 0;
}

inline std::set<natural> all_subset_sums(const std::vector<natural>& xs) {
    std::set<natural> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << xs.size()); ++mask) {
        natural s = 0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (mask >> i & 1) s += xs[i];
        out.insert(s);
    }
    return out;
}

inline std::set<natural> all_subset_products(const std::vector<natural>& xs, natural cap) {
    std::set<natural> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << xs.size()); ++mask) {
        natural p = 1;
        bool over = false;
        for (std::size_t i = 0; i < xs.size() && !over; ++i)
            if (mask >> i & 1) {
                if (p > cap / xs[i]) over = true;
                p *= xs[i];
            }
        if (!over && p <= cap) out.insert(p);
    }
    return out;
}

// Longest run of consecutive members of `in` inside [1, h].
inline natural longest_run(const std::function<bool(natural)>& in, natural h) {
    natural best = 0, cur = 0;
    for (natural y = 1; y <= h; ++y) {
        cur = in(y) ? cur + 1 : 0;
        best = std::max(best, cur);
    }
    return best;
}

inline bool pairwise_coprime(const std::vector<natural>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (std::gcd(xs[i], xs[j]) != 1) return false;
    return true;
}

} // namespace oracle
