#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "felab/error.hpp"

namespace felab {

using natural = std::uint64_t;

// Marks an exact horizon that never runs out.
inline constexpr natural unbounded = std::numeric_limits<natural>::max();

inline std::optional<natural> checked_mul(natural a, natural b) {
    natural r;
    if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
    return r;
}

inline std::optional<natural> checked_add(natural a, natural b) {
    natural r;
    if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
    return r;
}

inline natural saturating_mul(natural a, natural b) {
    auto r = checked_mul(a, b);
    return r ? *r : unbounded;
}

inline natural saturating_add(natural a, natural b) {
    auto r = checked_add(a, b);
    return r ? *r : unbounded;
}

struct prime_power {
    natural prime;
    unsigned exponent;
    bool operator==(const prime_power&) const = default;
};

using factorization = std::vector<prime_power>;

// Sorted, duplicate-free set of positive naturals.
class finite_set {
public:
    finite_set() = default;
    finite_set(std::initializer_list<natural> xs) : finite_set(std::vector<natural>(xs)) {}
    explicit finite_set(std::vector<natural> xs) : elems_(std::move(xs)) {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
        if (!elems_.empty() && elems_.front() == 0)
            throw input_error("0 is not a natural number here");
    }

    static finite_set from_sorted(std::vector<natural> xs) {
        finite_set s;
        s.elems_ = std::move(xs);
        return s;
    }

    bool contains(natural n) const { return std::binary_search(elems_.begin(), elems_.end(), n); }
    bool empty() const { return elems_.empty(); }
    std::size_t size() const { return elems_.size(); }
    natural min() const { return elems_.front(); }
    natural max() const { return elems_.back(); }
    natural operator[](std::size_t i) const { return elems_[i]; }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }
    const std::vector<natural>& elements() const { return elems_; }

    bool is_subset_of(const finite_set& other) const {
        return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
    }

    bool operator==(const finite_set&) const = default;

private:
    std::vector<natural> elems_;
};

} // namespace felab

namespace felab::arith {

inline constexpr natural default_sieve_cap = 100'000'000;

// Smallest-prime-factor table with a parallel Omega table.
class sieve {
public:
    explicit sieve(natural limit, natural cap = default_sieve_cap) : limit_(std::max<natural>(limit, 1)) {
        if (limit_ > cap)
            throw resource_error("sieve limit " + std::to_string(limit_) + " exceeds cap " + std::to_string(cap));
        spf_.assign(limit_ + 1, 0);
        if (limit_ >= 1) spf_[1] = 1;
        for (natural i = 2; i <= limit_; ++i) {
            if (spf_[i] != 0) continue;
            spf_[i] = static_cast<std::uint32_t>(i);
            if (i > limit_ / i) continue;
            for (natural j = i * i; j <= limit_; j += i)
                if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
        }
        build_omega();
    }

    // Rebuilds from a stored table; the caller has checked integrity.
    static sieve from_table(std::vector<std::uint32_t> table) {
        sieve s;
        s.limit_ = table.empty() ? 0 : table.size() - 1;
        s.spf_ = std::move(table);
        s.build_omega();
        return s;
    }

    natural limit() const { return limit_; }
    const std::vector<std::uint32_t>& table() const { return spf_; }

    natural smallest_factor(natural n) const {
        if (n < 2 || n > limit_) throw input_error("smallest_factor: " + std::to_string(n) + " outside table");
        return spf_[n];
    }

    bool covers(natural n) const { return n <= limit_; }
    bool is_prime(natural n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }
    unsigned omega(natural n) const { return omega_[n]; }

    factorization factorize(natural n) const {
        factorization f;
        while (n > 1) {
            natural p = spf_[n];
            unsigned e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.push_back({p, e});
        }
        return f;
    }

private:
    sieve() = default;

    void build_omega() {
        omega_.assign(spf_.size(), 0);
        for (natural n = 2; n < spf_.size(); ++n)
            omega_[n] = static_cast<std::uint8_t>(omega_[n / spf_[n]] + 1);
    }

    natural limit_ = 0;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint8_t> omega_;
};

inline factorization factorize(natural n) {
    if (n == 0) throw input_error("factorize: 0");
    factorization f;
    auto take = [&](natural p) {
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e) f.push_back({p, e});
    };
    take(2);
    take(3);
    for (natural p = 5; p <= n / p; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

inline factorization factorize(natural n, const sieve* table) {
    if (table && table->covers(n) && n >= 1) return table->factorize(n);
    return factorize(n);
}

inline natural multiply(const factorization& f) {
    natural r = 1;
    for (auto [p, e] : f)
        for (unsigned i = 0; i < e; ++i) {
            auto next = checked_mul(r, p);
            if (!next) throw resource_error("multiply: overflow");
            r = *next;
        }
    return r;
}

inline unsigned omega(natural n) {
    unsigned total = 0;
    for (auto [p, e] : factorize(n)) total += e;
    return total;
}

inline unsigned omega(natural n, const sieve* table) {
    if (table && table->covers(n)) return table->omega(n);
    return omega(n);
}

inline bool is_prime(natural n) {
    if (n < 2) return false;
    auto f = factorize(n);
    return f.size() == 1 && f[0].exponent == 1;
}

inline bool is_prime(natural n, const sieve* table) {
    if (table && table->covers(n)) return table->is_prime(n);
    return is_prime(n);
}

inline std::vector<natural> divisors(natural n, const sieve* table = nullptr) {
    std::vector<natural> ds{1};
    for (auto [p, e] : factorize(n, table)) {
        std::size_t base = ds.size();
        natural pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

inline finite_set up_closure(const finite_set& s, natural horizon) {
    std::vector<char> mark(horizon + 1, 0);
    for (natural x : s) {
        if (x > horizon) throw input_error("up_closure: element " + std::to_string(x) + " above horizon");
        for (natural m = x; m <= horizon; m += x) mark[m] = 1;
    }
    std::vector<natural> out;
    for (natural n = 1; n <= horizon; ++n)
        if (mark[n]) out.push_back(n);
    return finite_set::from_sorted(std::move(out));
}

inline finite_set down_closure(const finite_set& s, natural horizon) {
    std::vector<natural> out;
    for (natural x : s)
        for (natural d : divisors(x))
            if (d <= horizon) out.push_back(d);
    return finite_set(std::move(out));
}

inline bool is_strong_antichain(std::span<const natural> s) {
    for (natural x : s)
        if (x < 2) throw input_error("strong antichain elements must be >= 2");
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (std::gcd(s[i], s[j]) != 1) return false;
    return true;
}

inline bool is_strong_antichain(const finite_set& s) { return is_strong_antichain(std::span(s.elements())); }

inline constexpr std::size_t default_antichain_node_cap = 50'000'000;

// Lexicographically least pairwise coprime s-subset of a sorted candidate list.
// `accept` can veto a full antichain (used for side conditions); the search
// then backtracks past it.
template <class Accept>
std::optional<finite_set> least_strong_antichain(std::span<const natural> candidates, std::size_t s, Accept accept,
                                                 std::size_t node_cap = default_antichain_node_cap) {
    if (s == 0) throw input_error("antichain size must be >= 1");
    std::vector<natural> chosen;
    std::size_t nodes = 0;
    auto dfs = [&](auto&& self, std::size_t from) -> bool {
        if (chosen.size() == s) return accept(chosen);
        for (std::size_t i = from; i < candidates.size(); ++i) {
            if (candidates.size() - i < s - chosen.size()) return false;
            if (++nodes > node_cap) throw resource_error("antichain search exceeded node cap");
            natural c = candidates[i];
            if (c < 2) continue;
            bool ok = true;
            for (natural x : chosen)
                if (std::gcd(x, c) != 1) { ok = false; break; }
            if (!ok) continue;
            chosen.push_back(c);
            if (self(self, i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (dfs(dfs, 0)) return finite_set::from_sorted(chosen);
    return std::nullopt;
}

inline std::optional<finite_set> least_strong_antichain(std::span<const natural> candidates, std::size_t s) {
    return least_strong_antichain(candidates, s, [](const std::vector<natural>&) { return true; });
}

struct congruence {
    std::int64_t residue;
    natural modulus;
};

// General CRT (moduli need not be coprime). Smallest positive solution.
inline std::optional<natural> crt_solve(std::span<const congruence> system) {
    if (system.empty()) throw input_error("crt_solve: empty system");
    using wide = __int128;
    wide x = 0, m = 1;
    for (auto [r, mod] : system) {
        if (mod < 2) throw input_error("crt_solve: modulus must be >= 2");
        wide n = static_cast<wide>(mod);
        wide a = static_cast<wide>(r) % n;
        if (a < 0) a += n;
        // Solve x + m*t = a (mod n).
        natural g = std::gcd(static_cast<natural>(m), mod);
        wide diff = a - x % n;
        if (diff % static_cast<wide>(g) != 0) return std::nullopt;
        wide n_g = n / g;
        // Inverse of m/g modulo n/g via extended Euclid.
        wide m_g = (m / g) % n_g;
        wide old_r = m_g, rr = n_g, old_s = 1, ss = 0;
        while (rr != 0) {
            wide q = old_r / rr;
            wide tmp = old_r - q * rr; old_r = rr; rr = tmp;
            tmp = old_s - q * ss; old_s = ss; ss = tmp;
        }
        wide inv = n_g == 1 ? 0 : ((old_s % n_g) + n_g) % n_g;
        wide lcm = m * n_g;
        if (lcm > static_cast<wide>(std::numeric_limits<natural>::max()))
            throw resource_error("crt_solve: modulus product overflows 64 bits");
        wide t = ((diff / g) % n_g + n_g) % n_g * inv % n_g;
        x = (x + m * t) % lcm;
        m = lcm;
    }
    natural result = static_cast<natural>(x);
    return result == 0 ? static_cast<natural>(m) : result;
}

inline std::optional<natural> crt_solve(std::initializer_list<congruence> system) {
    return crt_solve(std::span<const congruence>(system.begin(), system.size()));
}

// Least l with d*l a perfect n-th power; every exponent of l is below n.
inline natural nth_power_completion(natural d, unsigned n) {
    if (d == 0) throw input_error("nth_power_completion: d must be >= 1");
    if (n < 2) throw input_error("nth_power_completion: n must be >= 2");
    factorization missing;
    for (auto [p, e] : factorize(d)) {
        unsigned need = (n - e % n) % n;
        if (need) missing.push_back({p, need});
    }
    return multiply(missing);
}

inline bool is_perfect_power(natural x, unsigned n) {
    if (x == 0) return false;
    for (auto [p, e] : factorize(x))
        if (e % n) return false;
    return true;
}

// p_1 = 2, p_2 = 3, ...
inline std::vector<natural> first_primes(std::size_t count) {
    std::vector<natural> ps;
    for (natural c = 2; ps.size() < count; ++c) {
        bool prime = true;
        for (natural p : ps) {
            if (p * p > c) break;
            if (c % p == 0) { prime = false; break; }
        }
        if (prime) ps.push_back(c);
    }
    return ps;
}

} // namespace felab::arith
