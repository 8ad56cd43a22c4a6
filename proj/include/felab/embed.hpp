#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "felab/analysis.hpp"
#include "felab/arith.hpp"
#include "felab/eval.hpp"
#include "felab/lazy_set.hpp"
#include "felab/sequences.hpp"
#include "felab/verdict.hpp"

namespace felab::embed {

using fe_refutation = std::variant<cert::exhausted, cert::finite_target, cert::level_gap, cert::residue>;
using fe_outcome = std::variant<cert::dilation, fe_refutation>;

inline constexpr natural default_k_max = 1'000'000;
inline constexpr std::size_t default_prefix = 16;

inline bool is_witness(const fe_outcome& o) { return std::holds_alternative<cert::dilation>(o); }

inline certificate to_certificate(const fe_refutation& r) {
    return std::visit([](const auto& c) -> certificate { return c; }, r);
}

namespace detail {

inline bool exact_finite(const lazy_set& b) { return b.is_exact() && b.finite_max().has_value(); }

inline natural required_horizon(const finite_set& f, natural k_max) { return saturating_mul(k_max, f.max()); }

inline void require_nonempty(const finite_set& f) {
    if (f.empty()) throw input_error("embedding search needs a nonempty finite set");
}

// All members of an exactly finite set.
inline std::vector<natural> all_members(const lazy_set& b) {
    natural top = *b.finite_max();
    if (top <= b.horizon()) return b.elements_between(1, top);
    if (b.source()) return setlang::eval(*b.source(), top).elements_between(1, top);
    std::vector<natural> out;
    for (natural n = 1; n <= top; ++n)
        if (*b.member(n)) out.push_back(n);
    return out;
}

} // namespace detail

// Least k <= k_max with k*F inside B. For an exactly finite B the range is
// [1, max(B)/min(F)] and the answer is exact.
inline fe_outcome fe_witness(const finite_set& f, const lazy_set& b, natural k_max = default_k_max) {
    detail::require_nonempty(f);
    if (detail::exact_finite(b)) {
        natural bound = *b.finite_max() / f.min();
        for (natural k = 1; k <= bound; ++k) {
            bool all = true;
            for (natural x : f) {
                auto kx = checked_mul(k, x);
                if (!kx || !*b.member(*kx)) {
                    all = false;
                    break;
                }
            }
            if (all) return cert::dilation{k, f.elements()};
        }
        return fe_refutation{cert::finite_target{bound}};
    }
    for (natural k = 1; k <= k_max; ++k) {
        bool unknown = false, failed = false;
        for (natural x : f) {
            auto kx = checked_mul(k, x);
            if (!kx) throw resource_error("dilation overflows 64 bits");
            auto m = b.member(*kx);
            if (!m) {
                unknown = true;
            } else if (!*m) {
                failed = true;
                break;
            }
        }
        if (failed) continue;
        if (unknown)
            throw precision_error("membership of the target is unknown at a needed point",
                                  detail::required_horizon(f, k_max));
        return cert::dilation{k, f.elements()};
    }
    return fe_refutation{cert::exhausted{k_max}};
}

// Same question answered by intersecting the quotient sets B/a, a in F.
inline fe_outcome fe_fip_oracle(const finite_set& f, const lazy_set& b, natural k_max = default_k_max) {
    detail::require_nonempty(f);
    if (detail::exact_finite(b)) {
        natural bound = *b.finite_max() / f.min();
        auto members = detail::all_members(b);
        std::vector<natural> common;
        bool first = true;
        for (natural a : f) {
            std::vector<natural> q;
            for (natural x : members)
                if (x % a == 0 && x / a <= bound) q.push_back(x / a);
            if (first) {
                common = q;
                first = false;
            } else {
                std::vector<natural> next;
                std::set_intersection(common.begin(), common.end(), q.begin(), q.end(), std::back_inserter(next));
                common.swap(next);
            }
        }
        if (common.empty()) return fe_refutation{cert::finite_target{bound}};
        return cert::dilation{common.front(), f.elements()};
    }

    natural need = detail::required_horizon(f, k_max);
    if (need == unbounded) throw resource_error("k_max * max(F) overflows 64 bits");
    std::vector<natural> known;
    natural covered; // membership fully known on [1, covered]
    if (b.enum_horizon() >= need) {
        auto xs = b.elements_between(1, need);
        known.assign(xs.begin(), xs.end());
        covered = need;
    } else if (b.is_exact() && b.source()) {
        known = setlang::eval(*b.source(), need).elements_between(1, need);
        covered = need;
    } else if (b.is_exact()) {
        for (natural n = 1; n <= need; ++n)
            if (*b.member(n)) known.push_back(n);
        covered = need;
    } else {
        auto xs = b.elements_between(1, std::min(need, b.horizon()));
        known.assign(xs.begin(), xs.end());
        covered = b.enum_horizon();
        // Some PREFIX sets (dilations) stay exact past their horizon.
        natural reach = std::min(need, b.exact_horizon());
        for (natural n = b.horizon() + 1; n <= reach; ++n)
            if (*b.member(n)) known.push_back(n);
        covered = std::max(covered, reach);
    }

    // Quotient B/a restricted to [1, k_max], and how far it is fully known.
    struct quotient {
        std::vector<natural> members;
        natural known_to;
    };
    std::vector<quotient> qs;
    for (natural a : f) {
        quotient q;
        for (natural x : known)
            if (x % a == 0 && x / a <= k_max) q.members.push_back(x / a);
        q.known_to = std::min(k_max, covered / a);
        qs.push_back(std::move(q));
    }
    // Least k not ruled out by any quotient; it is a witness iff every
    // quotient contains it, otherwise some membership is still unknown.
    std::vector<std::size_t> pos(qs.size(), 0);
    for (natural k = 1; k <= k_max; ++k) {
        bool ruled_out = false, in_all = true;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            auto& q = qs[i];
            while (pos[i] < q.members.size() && q.members[pos[i]] < k) ++pos[i];
            bool in = pos[i] < q.members.size() && q.members[pos[i]] == k;
            if (!in) {
                in_all = false;
                if (k <= q.known_to) {
                    ruled_out = true;
                    break;
                }
            }
        }
        if (ruled_out) continue;
        if (!in_all) throw precision_error("membership of the target is unknown at a needed point", need);
        return cert::dilation{k, f.elements()};
    }
    return fe_refutation{cert::exhausted{k_max}};
}

// First m in F whose multiples the target provably avoids.
inline std::optional<fe_refutation> fe_refute_residue(const finite_set& f, const lazy_set& b) {
    if (!b.is_exact() || !b.source()) return std::nullopt;
    for (natural m : f)
        if (setlang::analysis::avoids_residue(*b.source(), 0, m)) return fe_refutation{cert::residue{m}};
    return std::nullopt;
}

inline std::vector<long> level_differences(const std::set<long>& levels) {
    std::set<long> d;
    for (long x : levels)
        for (long y : levels) d.insert(x - y);
    return {d.begin(), d.end()};
}

// Lexicographically least pair c < c' of known members of A below H whose
// level difference no two levels of B share.
inline std::optional<fe_refutation> fe_refute_level(const lazy_set& a, const lazy_set& b, natural horizon) {
    if (!b.source()) throw inapplicable_error("target has no expression to read levels from");
    auto levels = setlang::analysis::levels_of(*b.source());
    if (!levels) throw inapplicable_error("target is not level-definable");
    auto deltas = level_differences(*levels);
    auto allowed = [&](long d) { return std::binary_search(deltas.begin(), deltas.end(), d); };

    auto xs = a.elements_between(1, horizon);
    std::map<long, std::vector<natural>> by_level;
    std::vector<long> lv(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        lv[i] = static_cast<long>(arith::omega(xs[i]));
        by_level[lv[i]].push_back(xs[i]);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::optional<natural> best;
        for (const auto& [l, members] : by_level) {
            if (allowed(l - lv[i])) continue;
            auto it = std::upper_bound(members.begin(), members.end(), xs[i]);
            if (it != members.end() && (!best || *it < *best)) best = *it;
        }
        if (best)
            return fe_refutation{cert::level_gap{xs[i], *best, static_cast<long>(arith::omega(*best)) - lv[i], deltas}};
    }
    return std::nullopt;
}

// Runs the exact refuters that apply to (F, B), cheapest first.
inline std::optional<fe_refutation> exact_refutation(const finite_set& f, const lazy_set& b) {
    if (auto r = fe_refute_residue(f, b)) return r;
    if (b.source() && setlang::analysis::levels_of(*b.source())) {
        lazy_set fs = lazy_set::finite(f, f.max());
        if (auto r = fe_refute_level(fs, b, f.max())) return r;
    }
    return std::nullopt;
}

// The first p enumerated elements of A (all of A when it is finite and smaller).
inline finite_set enumerated_prefix(const lazy_set& a, std::size_t p) {
    auto xs = a.elements_between(1, a.enum_horizon());
    std::vector<natural> out(xs.begin(), xs.begin() + std::min(p, xs.size()));
    return finite_set::from_sorted(std::move(out));
}

inline verdict fe_prefix_check(const lazy_set& a, const lazy_set& b, std::size_t p = default_prefix,
                               natural k_max = default_k_max) {
    if (p == 0) throw input_error("prefix length must be >= 1");
    finite_set f = enumerated_prefix(a, p);
    bool whole = a.is_exact() && a.finite_max() && *a.finite_max() <= a.enum_horizon();
    if (f.size() < p && !whole)
        throw precision_error("only " + std::to_string(f.size()) + " elements of the source set are enumerated",
                              saturating_mul(a.horizon(), 2));
    nlohmann::json bounds{{"prefix", f.size()}, {"k_max", k_max}};
    if (f.empty()) return make_verdict(verdict_status::proved, cert::dilation{1, {}}, bounds);

    if (detail::exact_finite(b)) {
        auto r = fe_witness(f, b, k_max);
        if (auto w = std::get_if<cert::dilation>(&r)) return make_verdict(verdict_status::proved, *w, bounds);
        return make_verdict(verdict_status::refuted, to_certificate(std::get<fe_refutation>(r)), bounds);
    }
    if (auto r = exact_refutation(f, b)) return make_verdict(verdict_status::refuted, to_certificate(*r), bounds);
    auto r = fe_witness(f, b, k_max);
    if (auto w = std::get_if<cert::dilation>(&r)) return make_verdict(verdict_status::proved, *w, bounds);
    return make_verdict(verdict_status::bounded_against, to_certificate(std::get<fe_refutation>(r)), bounds);
}

inline constexpr natural default_subset_cap = 2'000'000;

inline natural binomial_capped(natural n, natural m, natural cap) {
    if (m > n) return 0;
    m = std::min(m, n - m);
    __int128 r = 1;
    for (natural i = 1; i <= m; ++i) {
        r = r * (n - m + i) / i;
        if (r > static_cast<__int128>(cap)) return cap + 1;
    }
    return static_cast<natural>(r);
}

inline verdict me_check(const lazy_set& a, const lazy_set& b, std::size_t m, natural horizon,
                        natural k_max = default_k_max, natural subset_cap = default_subset_cap) {
    if (m == 0) throw input_error("me_check: m must be >= 1");
    natural top = std::min(horizon, a.enum_horizon());
    auto xs = a.elements_between(1, top);
    nlohmann::json bounds{{"m", m}, {"horizon", top}, {"elements", xs.size()}};

    if (m == 1) {
        // Every element needs a multiple inside B.
        std::vector<natural> bs(b.elements().begin(), b.elements().end());
        if (detail::exact_finite(b)) bs = detail::all_members(b);
        cert::divisor_table table;
        for (natural x : xs) {
            auto hit = std::find_if(bs.begin(), bs.end(), [x](natural y) { return y % x == 0; });
            if (hit != bs.end()) {
                table.entries.push_back({x, *hit});
                continue;
            }
            bounds["element"] = x;
            if (detail::exact_finite(b))
                return make_verdict(verdict_status::refuted, cert::finite_target{*b.finite_max() / x}, bounds);
            if (auto r = fe_refute_residue(finite_set{x}, b)) return make_verdict(verdict_status::refuted, to_certificate(*r), bounds);
            bounds["target_horizon"] = b.horizon();
            return make_verdict(verdict_status::bounded_against, cert::none{}, bounds);
        }
        return make_verdict(verdict_status::proved, table, bounds);
    }

    natural count = binomial_capped(xs.size(), m, subset_cap);
    if (count > subset_cap)
        throw resource_error("C(" + std::to_string(xs.size()) + "," + std::to_string(m) + ") subsets exceed the cap " +
                             std::to_string(subset_cap) + "; use a smaller horizon");
    bounds["subsets"] = count;
    if (count == 0) return make_verdict(verdict_status::proved, cert::none{}, bounds);

    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    cert::dilation hardest{0, {}};
    for (;;) {
        std::vector<natural> pick;
        for (auto i : idx) pick.push_back(xs[i]);
        finite_set f = finite_set::from_sorted(pick);
        std::optional<fe_refutation> exact;
        if (!detail::exact_finite(b)) exact = exact_refutation(f, b);
        fe_outcome r = exact ? fe_outcome{*exact} : fe_witness(f, b, k_max);
        if (auto w = std::get_if<cert::dilation>(&r)) {
            if (w->k > hardest.k) hardest = *w;
        } else {
            const auto& ref = std::get<fe_refutation>(r);
            bounds["subset"] = pick;
            auto status = std::holds_alternative<cert::exhausted>(ref) ? verdict_status::bounded_against
                                                                        : verdict_status::refuted;
            return make_verdict(status, to_certificate(ref), bounds);
        }
        // Next combination in lexicographic order.
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == xs.size() - m + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return make_verdict(verdict_status::proved, hardest, bounds);
}

inline std::vector<natural> sidon_sequence(std::size_t len) { return seq::sidon(len); }

inline verdict mthick_check(const lazy_set& a, natural n, natural horizon) {
    if (n == 0) throw input_error("mthick_check: n must be >= 1");
    window w(a, horizon);
    natural k_top = horizon / n;
    for (natural k = 1; k <= k_top; ++k) {
        bool ok = true;
        for (natural i = 1; i <= n && ok; ++i) ok = w.known_member(k * i);
        if (ok) {
            std::vector<natural> run;
            for (natural i = 1; i <= n; ++i) run.push_back(i);
            return make_verdict(verdict_status::proved, cert::dilation{k, run}, {{"n", n}, {"horizon", horizon}});
        }
    }
    return make_verdict(verdict_status::bounded_against, cert::exhausted{k_top}, {{"n", n}, {"horizon", horizon}});
}

// ---- strictly decreasing chain -------------------------------------------

// i-th 2-element set in colexicographic order: {1,2},{1,3},{2,3},{1,4},...
inline std::pair<natural, natural> colex_pair(std::size_t i) {
    natural hi = 2;
    while (i >= hi - 1) {
        i -= hi - 1;
        ++hi;
    }
    return {static_cast<natural>(i) + 1, hi};
}

struct chain_refutation {
    std::size_t level;        // refutes embedding into A_level
    std::vector<natural> blocked;
    std::vector<natural> target;
    natural bound;            // finite-target k range
};

struct chain_result {
    std::vector<std::vector<natural>> levels;   // displayed prefix of A_0 .. A_depth
    std::vector<std::pair<natural, natural>> dropped; // (a_0, a_1) of A_n, n < depth
    std::vector<std::vector<natural>> support;  // A_{n-1} up to max of displayed A_n
    std::vector<chain_refutation> log;
};

inline constexpr natural default_chain_cap = 10'000'000;

class chain_builder {
public:
    explicit chain_builder(natural element_cap = default_chain_cap) : cap_(element_cap) {}

    // i-th element (0-based) of A_level.
    natural element(std::size_t level, std::size_t i) {
        if (level == 0) return static_cast<natural>(i) + 1;
        ensure(level);
        while (state_[level].values.size() <= i) extend(level);
        return state_[level].values[i];
    }

    std::pair<natural, natural> dropped(std::size_t level) {
        // a_0, a_1 of A_{level-1}; a_1 stays in A_level.
        return {element(level - 1, 0), element(level - 1, 1)};
    }

    std::vector<std::pair<natural, natural>> blocked_sets(std::size_t level) {
        // A_level blocks F_0 .. F_{level-1} and {a_0, a_1} of A_{level-1}.
        std::vector<std::pair<natural, natural>> out;
        for (std::size_t j = 0; j < level; ++j) out.push_back(colex_pair(j));
        auto d = dropped(level);
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
        return out;
    }

private:
    struct level_state {
        std::vector<natural> values;
        std::size_t parent_index = 0; // next candidate index in A_{level-1}
    };

    void ensure(std::size_t level) {
        if (state_.size() <= level) state_.resize(level + 1);
        if (state_[level].values.empty()) {
            natural first = element(level - 1, 1);
            state_[level].values.push_back(first);
            state_[level].parent_index = 2;
        }
    }

    static bool embeds(std::pair<natural, natural> f, const std::vector<natural>& target) {
        lazy_set t = lazy_set::finite(finite_set(target), target.empty() ? 1 : target.back());
        return is_witness(fe_witness(finite_set{f.first, f.second}, t));
    }

    void extend(std::size_t level) {
        auto blocked = blocked_sets(level);
        for (;;) {
            natural cand = element(level - 1, state_[level].parent_index);
            ++state_[level].parent_index;
            if (cand > cap_)
                throw resource_error("chain search passed the element cap " + std::to_string(cap_));
            std::vector<natural> trial = state_[level].values;
            trial.push_back(cand);
            bool ok = true;
            for (auto f : blocked)
                if (embeds(f, trial)) {
                    ok = false;
                    break;
                }
            if (ok) {
                state_[level].values.push_back(cand);
                return;
            }
        }
    }

    natural cap_;
    std::vector<level_state> state_;
};

inline chain_result decreasing_chain(std::size_t depth, std::size_t per_level, natural element_cap = default_chain_cap) {
    if (per_level < 3) throw input_error("decreasing_chain: per_level must be >= 3");
    chain_builder b(element_cap);
    chain_result out;
    for (std::size_t n = 0; n <= depth; ++n) {
        std::vector<natural> shown;
        for (std::size_t i = 0; i < per_level; ++i) shown.push_back(b.element(n, i));
        out.levels.push_back(shown);
    }
    for (std::size_t n = 1; n <= depth; ++n) {
        out.dropped.push_back(b.dropped(n));
        std::vector<natural> sup;
        for (std::size_t i = 0;; ++i) {
            natural x = b.element(n - 1, i);
            if (x > out.levels[n].back()) break;
            sup.push_back(x);
        }
        out.support.push_back(std::move(sup));
        const auto& target = out.levels[n];
        for (auto f : b.blocked_sets(n)) {
            lazy_set t = lazy_set::finite(finite_set(target), target.back());
            auto r = fe_witness(finite_set{f.first, f.second}, t);
            if (is_witness(r)) throw error("chain construction violated: a blocked set embeds");
            natural bound = std::get<cert::finite_target>(std::get<fe_refutation>(r)).bound;
            out.log.push_back({n, {f.first, f.second}, target, bound});
        }
    }
    return out;
}

struct chain_check {
    bool ok = true;
    std::vector<std::string> problems;
};

// Independent re-check: brute-force k scans and nesting.
inline chain_check verify_chain(const chain_result& c) {
    chain_check out;
    auto fail = [&](std::string s) {
        out.ok = false;
        out.problems.push_back(std::move(s));
    };
    for (const auto& r : c.log) {
        std::set<natural> t(r.target.begin(), r.target.end());
        natural top = *t.rbegin();
        natural lo = *std::min_element(r.blocked.begin(), r.blocked.end());
        if (r.bound != top / lo) fail("logged bound differs from max/min");
        for (natural k = 1; k * lo <= top; ++k) {
            bool all = true;
            for (natural x : r.blocked) all = all && t.count(k * x);
            if (all) fail("level " + std::to_string(r.level) + ": k=" + std::to_string(k) + " embeds a blocked pair");
        }
    }
    for (std::size_t n = 1; n < c.levels.size(); ++n) {
        const auto& prev = c.support[n - 1];
        const auto& cur = c.levels[n];
        for (natural x : cur)
            if (!std::binary_search(prev.begin(), prev.end(), x))
                fail("A_" + std::to_string(n) + " contains " + std::to_string(x) + " outside A_" + std::to_string(n - 1));
        natural dropped = c.dropped[n - 1].first;
        if (std::binary_search(cur.begin(), cur.end(), dropped) || !std::binary_search(prev.begin(), prev.end(), dropped))
            fail("A_" + std::to_string(n) + " is not a proper subset of A_" + std::to_string(n - 1));
    }
    return out;
}

} // namespace felab::embed
