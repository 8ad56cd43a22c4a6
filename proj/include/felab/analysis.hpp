#pragma once

#include <numeric>
#include <optional>
#include <set>

#include "felab/arith.hpp"
#include "felab/eval.hpp"
#include "felab/set_expr.hpp"

// Structural facts about set expressions that hold on all of the naturals,
// not just below a horizon. Every answer is conservative: `false` / nullopt
// means "could not show it", never "it is false".
namespace felab::setlang::analysis {

namespace detail {

inline natural mod_inverse(natural a, natural m) {
    if (m == 1) return 0;
    __int128 old_r = a % m, r = m, old_s = 1, s = 0;
    while (r != 0) {
        __int128 q = old_r / r;
        __int128 t = old_r - q * r; old_r = r; r = t;
        t = old_s - q * s; old_s = s; s = t;
    }
    __int128 v = old_s % static_cast<__int128>(m);
    if (v < 0) v += m;
    return static_cast<natural>(v);
}

inline constexpr natural period_cap = 10'000'000;

} // namespace detail

inline bool contains_residue(const set_expr& e, natural r, natural m);

// No member x satisfies x = r (mod m).
inline bool avoids_residue(const set_expr& e, natural r, natural m) {
    if (m == 0) throw input_error("avoids_residue: modulus must be >= 1");
    r %= m;
    switch (e.kind) {
    case expr_kind::ap:
    case expr_kind::mult: {
        natural a = e.params[0], d = e.kind == expr_kind::mult ? e.params[0] : e.params[1];
        natural g = std::gcd(d, m);
        natural diff = (r + m - a % m) % m;
        return diff % g != 0;
    }
    case expr_kind::level:
        if (e.params[0] == 0) return 1 % m != r;
        return false;
    case expr_kind::finite:
        for (natural x : e.params)
            if (x % m == r) return false;
        return true;
    case expr_kind::set_union:
        for (const auto& c : e.operands)
            if (!avoids_residue(c, r, m)) return false;
        return true;
    case expr_kind::set_inter:
        for (const auto& c : e.operands)
            if (avoids_residue(c, r, m)) return true;
        return false;
    case expr_kind::complement: return contains_residue(e.operands[0], r, m);
    case expr_kind::dilate: {
        natural k = e.params[0];
        natural g = std::gcd(k, m);
        if (r % g != 0) return true;
        natural m2 = m / g;
        natural target = m2 == 1 ? 0 : static_cast<natural>((static_cast<__int128>(r / g) * detail::mod_inverse(k / g, m2)) % m2);
        return avoids_residue(e.operands[0], target, m2);
    }
    case expr_kind::quotient: {
        natural n = e.params[0];
        auto nm = checked_mul(n, m);
        if (!nm) return false;
        return avoids_residue(e.operands[0], (r * n) % *nm, *nm);
    }
    case expr_kind::shift: {
        natural t = e.params[0];
        return avoids_residue(e.operands[0], (r + t % m) % m, m);
    }
    case expr_kind::up: {
        const auto& x = e.operands[0];
        if (x.kind != expr_kind::finite) return false;
        // Multiples of x cover the class iff gcd(x, m) divides r.
        for (natural v : x.params)
            if (r % std::gcd(v, m) == 0) return false;
        return true;
    }
    default: return false;
    }
}

// Every positive x = r (mod m) is a member.
inline bool contains_residue(const set_expr& e, natural r, natural m) {
    if (m == 0) throw input_error("contains_residue: modulus must be >= 1");
    r %= m;
    switch (e.kind) {
    case expr_kind::naturals: return true;
    case expr_kind::ap:
    case expr_kind::mult: {
        natural a = e.params[0], d = e.kind == expr_kind::mult ? e.params[0] : e.params[1];
        if (m % d != 0 || r % d != a % d) return false;
        natural first = r == 0 ? m : r;
        return first >= a;
    }
    case expr_kind::set_union:
        for (const auto& c : e.operands)
            if (contains_residue(c, r, m)) return true;
        return false;
    case expr_kind::set_inter:
        for (const auto& c : e.operands)
            if (!contains_residue(c, r, m)) return false;
        return true;
    case expr_kind::complement: return avoids_residue(e.operands[0], r, m);
    case expr_kind::shift: {
        // y + t runs over the class (r + t) mod m above t.
        natural t = e.params[0];
        return contains_residue(e.operands[0], (r + t % m) % m, m);
    }
    case expr_kind::dilate: {
        natural k = e.params[0];
        if (m % k != 0 || r % k != 0) return false;
        return contains_residue(e.operands[0], r / k, m / k);
    }
    case expr_kind::quotient: {
        natural n = e.params[0];
        auto nm = checked_mul(n, m);
        if (!nm) return false;
        return contains_residue(e.operands[0], (r * n) % *nm, *nm);
    }
    case expr_kind::up: {
        const auto& x = e.operands[0];
        natural g = std::gcd(r, m); // gcd(0, m) = m
        if (x.kind == expr_kind::finite) {
            for (natural v : x.params)
                if (g % v == 0) return true;
            return false;
        }
        return contains_residue(x, 0, 1);
    }
    default: return false;
    }
}

// Membership is periodic with `period` for all x > offset.
struct periodicity {
    natural period;
    natural offset;
};

inline std::optional<periodicity> period_of(const set_expr& e) {
    switch (e.kind) {
    case expr_kind::naturals: return periodicity{1, 0};
    case expr_kind::mult: return periodicity{e.params[0], 0};
    case expr_kind::ap: {
        natural a = e.params[0], d = e.params[1];
        return periodicity{d, a > d ? a - d : 0};
    }
    case expr_kind::finite: return periodicity{1, e.params.empty() ? 0 : e.params.back()};
    case expr_kind::level:
        if (e.params[0] == 0) return periodicity{1, 1};
        return std::nullopt;
    case expr_kind::set_union:
    case expr_kind::set_inter:
    case expr_kind::complement: {
        natural p = 1, s = 0;
        for (const auto& c : e.operands) {
            auto pc = period_of(c);
            if (!pc) return std::nullopt;
            natural l = std::lcm(p, pc->period);
            if (l > detail::period_cap) return std::nullopt;
            p = l;
            s = std::max(s, pc->offset);
        }
        return periodicity{p, s};
    }
    case expr_kind::shift: {
        auto pc = period_of(e.operands[0]);
        if (!pc) return std::nullopt;
        natural t = e.params[0];
        return periodicity{pc->period, pc->offset > t ? pc->offset - t : 0};
    }
    case expr_kind::dilate: {
        auto pc = period_of(e.operands[0]);
        if (!pc) return std::nullopt;
        auto p = checked_mul(pc->period, e.params[0]);
        auto s = checked_mul(pc->offset, e.params[0]);
        if (!p || !s || *p > detail::period_cap) return std::nullopt;
        return periodicity{*p, *s};
    }
    case expr_kind::quotient: {
        auto pc = period_of(e.operands[0]);
        if (!pc) return std::nullopt;
        return periodicity{pc->period, pc->offset / e.params[0]};
    }
    default: return std::nullopt;
    }
}

// Superset of the Omega values of members, when the expression pins levels.
inline std::optional<std::set<long>> levels_of(const set_expr& e) {
    switch (e.kind) {
    case expr_kind::level: return std::set<long>{static_cast<long>(e.params[0])};
    case expr_kind::primes: return std::set<long>{1};
    case expr_kind::finite: {
        std::set<long> out;
        for (natural x : e.params) out.insert(static_cast<long>(arith::omega(x)));
        return out;
    }
    case expr_kind::set_union: {
        std::set<long> out;
        for (const auto& c : e.operands) {
            auto lc = levels_of(c);
            if (!lc) return std::nullopt;
            out.insert(lc->begin(), lc->end());
        }
        return out;
    }
    case expr_kind::set_inter: {
        std::optional<std::set<long>> out;
        for (const auto& c : e.operands) {
            auto lc = levels_of(c);
            if (!lc) continue;
            if (!out) {
                out = lc;
            } else {
                std::set<long> both;
                for (long v : *lc)
                    if (out->count(v)) both.insert(v);
                out = both;
            }
        }
        return out;
    }
    case expr_kind::dilate: {
        auto lc = levels_of(e.operands[0]);
        if (!lc) return std::nullopt;
        long shift = static_cast<long>(arith::omega(e.params[0]));
        std::set<long> out;
        for (long v : *lc) out.insert(v + shift);
        return out;
    }
    case expr_kind::quotient: {
        auto lc = levels_of(e.operands[0]);
        if (!lc) return std::nullopt;
        long shift = static_cast<long>(arith::omega(e.params[0]));
        std::set<long> out;
        for (long v : *lc)
            if (v >= shift) out.insert(v - shift);
        return out;
    }
    case expr_kind::construct:
        if (e.fixture == "sidon_levels") {
            std::set<long> out;
            for (natural v : setlang::detail::sidon_levels_of(e)) out.insert(static_cast<long>(v));
            return out;
        }
        if (e.fixture == "levelfix") return std::set<long>{static_cast<long>(std::get<natural>(e.fixture_args[0]))};
        return std::nullopt;
    default: return std::nullopt;
    }
}

// Members are bounded by this value on all of the naturals (0: empty).
inline std::optional<natural> finite_bound(const set_expr& e) {
    switch (e.kind) {
    case expr_kind::finite: return e.params.empty() ? 0 : e.params.back();
    case expr_kind::level:
        if (e.params[0] == 0) return 1;
        return std::nullopt;
    case expr_kind::set_union: {
        natural m = 0;
        for (const auto& c : e.operands) {
            auto b = finite_bound(c);
            if (!b) return std::nullopt;
            m = std::max(m, *b);
        }
        return m;
    }
    case expr_kind::set_inter: {
        std::optional<natural> m;
        for (const auto& c : e.operands)
            if (auto b = finite_bound(c)) m = m ? std::min(*m, *b) : *b;
        return m;
    }
    case expr_kind::dilate: {
        auto b = finite_bound(e.operands[0]);
        if (!b) return std::nullopt;
        return saturating_mul(*b, e.params[0]);
    }
    case expr_kind::quotient: {
        auto b = finite_bound(e.operands[0]);
        if (!b) return std::nullopt;
        return *b / e.params[0];
    }
    case expr_kind::shift: {
        auto b = finite_bound(e.operands[0]);
        if (!b) return std::nullopt;
        return *b > e.params[0] ? *b - e.params[0] : 0;
    }
    case expr_kind::down: return finite_bound(e.operands[0]);
    default: return std::nullopt;
    }
}

} // namespace felab::setlang::analysis
