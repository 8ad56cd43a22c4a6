#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "felab/analysis.hpp"
#include "felab/arith.hpp"
#include "felab/embed.hpp"
#include "felab/eval.hpp"
#include "felab/lazy_set.hpp"
#include "felab/sequences.hpp"
#include "felab/verdict.hpp"

namespace felab::largeness {

namespace detail {

inline natural longest_run(const std::vector<char>& in, natural horizon) {
    natural best = 0, cur = 0;
    for (natural y = 1; y <= horizon; ++y) {
        cur = in[y] ? cur + 1 : 0;
        best = std::max(best, cur);
    }
    return best;
}

// First m >= 0 with in[m+1 .. m+n] all set.
inline std::optional<natural> first_run(const std::vector<char>& in, natural horizon, natural n) {
    natural cur = 0;
    for (natural y = 1; y <= horizon; ++y) {
        cur = in[y] ? cur + 1 : 0;
        if (cur >= n) return y - n;
    }
    return std::nullopt;
}

// Minimum-size, then lexicographically least, subset of `universe` meeting
// every option list. Exact for universes up to 16 values; beyond that it
// takes the least option of each list.
inline std::vector<natural> least_hitting_set(const std::vector<natural>& universe,
                                              const std::vector<std::vector<natural>>& options) {
    if (universe.size() <= 16) {
        std::size_t u = universe.size();
        for (std::size_t size = 1; size <= u; ++size) {
            std::vector<std::size_t> idx(size);
            for (std::size_t i = 0; i < size; ++i) idx[i] = i;
            for (;;) {
                std::vector<natural> pick;
                for (auto i : idx) pick.push_back(universe[i]);
                bool hits = std::all_of(options.begin(), options.end(), [&](const std::vector<natural>& opt) {
                    return std::any_of(opt.begin(), opt.end(),
                                       [&](natural t) { return std::binary_search(pick.begin(), pick.end(), t); });
                });
                if (hits) return pick;
                std::size_t i = size;
                while (i > 0 && idx[i - 1] == u - size + (i - 1)) --i;
                if (i == 0) break;
                ++idx[i - 1];
                for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
            }
        }
        return universe;
    }
    std::vector<natural> pick;
    for (const auto& opt : options) pick.push_back(opt.front());
    return finite_set(pick).elements();
}

inline nlohmann::json base_bounds(natural horizon) { return nlohmann::json{{"horizon", horizon}}; }

} // namespace detail

// ---- additive and multiplicative thickness ---------------------------------

inline verdict a_thick_check(const lazy_set& a, natural n, natural horizon) {
    if (n == 0 || n > horizon) throw input_error("a_thick_check: need 1 <= n <= H");
    window w(a, horizon);
    std::vector<char> in(horizon + 1, 0);
    for (natural y = 1; y <= horizon; ++y) in[y] = w.known_member(y);
    auto bounds = detail::base_bounds(horizon);
    bounds["n"] = n;
    if (auto m = detail::first_run(in, horizon, n)) return make_verdict(verdict_status::proved, cert::interval{*m, n}, bounds);

    if (a.is_exact() && a.source()) {
        if (auto per = setlang::analysis::period_of(*a.source())) {
            natural top = per->offset + per->period + n;
            if (top <= 50'000'000) {
                natural cur = 0;
                for (natural y = 1; y <= top; ++y) {
                    cur = *a.member(y) ? cur + 1 : 0;
                    if (cur >= n) return make_verdict(verdict_status::proved, cert::interval{y - n, n}, bounds);
                }
                return make_verdict(verdict_status::refuted, cert::periodic_absence{per->period, per->offset, top}, bounds);
            }
        }
    }
    bounds["longest_run"] = detail::longest_run(in, horizon);
    return make_verdict(verdict_status::bounded_against, cert::none{}, bounds);
}

inline verdict mthick_check(const lazy_set& a, natural n, natural horizon) { return embed::mthick_check(a, n, horizon); }

// ---- piecewise syndeticity ---------------------------------------------

inline verdict a_pcws_check(const lazy_set& a, natural t_max, natural n, natural horizon) {
    if (n == 0 || n > horizon || t_max > horizon) throw input_error("a_pcws_check: need 1 <= n <= H and t_max <= H");
    window w(a, saturating_add(horizon, t_max));
    std::vector<char> in(horizon + 1, 0);
    for (natural y = 1; y <= horizon; ++y)
        for (natural t = 0; t <= t_max && !in[y]; ++t) in[y] = w.known_member(y + t);
    auto bounds = detail::base_bounds(horizon);
    bounds["n"] = n;
    bounds["t_max"] = t_max;
    auto m = detail::first_run(in, horizon, n);
    if (!m) {
        bounds["longest_run"] = detail::longest_run(in, horizon);
        return make_verdict(verdict_status::bounded_against, cert::none{}, bounds);
    }
    std::vector<natural> universe;
    for (natural t = 0; t <= t_max; ++t) universe.push_back(t);
    std::vector<std::vector<natural>> options;
    for (natural y = *m + 1; y <= *m + n; ++y) {
        std::vector<natural> opt;
        for (natural t = 0; t <= t_max; ++t)
            if (w.known_member(y + t)) opt.push_back(t);
        options.push_back(std::move(opt));
    }
    return make_verdict(verdict_status::proved, cert::shifted_interval{detail::least_hitting_set(universe, options), *m, n},
                        bounds);
}

inline verdict m_pcws_check(const lazy_set& a, natural t_max, natural n, natural horizon) {
    if (n == 0 || n > horizon || t_max == 0 || t_max > horizon)
        throw input_error("m_pcws_check: need 1 <= n <= H and 1 <= t_max <= H");
    window w(a, horizon);
    auto bounds = detail::base_bounds(horizon);
    bounds["n"] = n;
    bounds["t_max"] = t_max;
    auto covered = [&](natural y) {
        for (natural t = 1; t <= t_max; ++t) {
            auto ty = checked_mul(t, y);
            if (ty && w.known_member(*ty)) return true;
        }
        return false;
    };
    natural k_top = horizon / n;
    for (natural k = 1; k <= k_top; ++k) {
        bool ok = true;
        for (natural i = 1; i <= n && ok; ++i) ok = covered(k * i);
        if (!ok) continue;
        std::vector<natural> universe;
        for (natural t = 1; t <= t_max; ++t) universe.push_back(t);
        std::vector<std::vector<natural>> options;
        for (natural i = 1; i <= n; ++i) {
            std::vector<natural> opt;
            for (natural t = 1; t <= t_max; ++t) {
                auto ty = checked_mul(t, k * i);
                if (ty && w.known_member(*ty)) opt.push_back(t);
            }
            options.push_back(std::move(opt));
        }
        return make_verdict(verdict_status::proved,
                            cert::quotient_dilation{detail::least_hitting_set(universe, options), k, n}, bounds);
    }
    bounds["k_max"] = k_top;
    return make_verdict(verdict_status::bounded_against, cert::none{}, bounds);
}

// ---- IP sets --------------------------------------------------------------

enum class ip_mode { additive, multiplicative };

inline const char* mode_name(ip_mode m) { return m == ip_mode::additive ? "additive" : "multiplicative"; }

inline constexpr std::size_t default_ip_budget = 50'000'000;

// Depth-first search for x_1 < ... < x_L whose subset sums (products) are
// known members below H.
inline verdict ip_search(const lazy_set& a, std::size_t length, natural horizon, ip_mode mode,
                         std::size_t node_budget = default_ip_budget) {
    if (length == 0) throw input_error("ip_search: L must be >= 1");
    if (length > 24) throw resource_error("ip_search: L above 24 exceeds the subset cap");
    window w(a, horizon);
    auto members = w.members();
    bool add = mode == ip_mode::additive;
    auto combine = [&](natural s, natural x) -> std::optional<natural> {
        auto r = add ? checked_add(s, x) : checked_mul(s, x);
        if (!r || *r > horizon) return std::nullopt;
        return r;
    };

    std::vector<natural> chosen;
    std::vector<natural> sums; // all nonempty subset combinations of `chosen`
    std::size_t nodes = 0;
    bool out_of_budget = false;

    auto dfs = [&](auto&& self, std::size_t from) -> bool {
        if (chosen.size() == length) return true;
        natural top = sums.empty() ? 0 : *std::max_element(sums.begin(), sums.end());
        for (std::size_t i = from; i < members.size(); ++i) {
            natural x = members[i];
            if (!add && x == 1) continue; // 1 adds nothing to a product
            if (!sums.empty() && !combine(top, x)) break; // larger x overshoot too
            if (++nodes > node_budget) {
                out_of_budget = true;
                return false;
            }
            std::vector<natural> fresh{x};
            bool ok = true;
            for (natural s : sums) {
                auto v = combine(s, x);
                if (!v || !w.known_member(*v)) {
                    ok = false;
                    break;
                }
                fresh.push_back(*v);
            }
            if (!ok) continue;
            std::size_t keep = sums.size();
            chosen.push_back(x);
            sums.insert(sums.end(), fresh.begin(), fresh.end());
            if (self(self, i + 1)) return true;
            if (out_of_budget) return false;
            chosen.pop_back();
            sums.resize(keep);
        }
        return false;
    };
    auto bounds = detail::base_bounds(horizon);
    bounds["L"] = length;
    bounds["mode"] = mode_name(mode);
    if (dfs(dfs, 0)) return make_verdict(verdict_status::proved, cert::generating_sequence{mode_name(mode), chosen}, bounds);
    bounds["nodes"] = nodes;
    bounds["budget_exhausted"] = out_of_budget;
    return make_verdict(verdict_status::bounded_against, cert::none{}, bounds);
}

inline lazy_set complement_of(const lazy_set& a, natural horizon) {
    if (a.source()) return setlang::eval(setlang::make::complement(*a.source()), horizon);
    std::vector<natural> known;
    for (natural n = 1; n <= horizon; ++n)
        if (!*a.member(n)) known.push_back(n);
    lazy_set copy = a;
    return lazy_set(std::move(known), horizon, unbounded, [copy](natural n) { return !*copy.member(n); });
}

// A is IP* iff its complement is not IP.
inline verdict ip_star_check(const lazy_set& a, std::size_t length, natural horizon,
                             std::size_t node_budget = default_ip_budget) {
    if (!a.is_exact()) throw inapplicable_error("IP* needs an EXACT set: its complement must be queryable");
    lazy_set c = complement_of(a, horizon);
    verdict v = ip_search(c, length, horizon, ip_mode::additive, node_budget);
    v.bounds["target"] = "complement";
    if (auto g = v.as<cert::generating_sequence>()) {
        cert::generating_sequence seqc = *g;
        seqc.complement = true;
        return make_verdict(verdict_status::refuted, seqc, v.bounds);
    }
    return make_verdict(verdict_status::bounded_for, cert::none{}, v.bounds);
}

// ---- J sets ---------------------------------------------------------------

inline verdict j_check(const lazy_set& a, const std::vector<std::vector<natural>>& funcs, natural a_max,
                       std::size_t h_max, ip_mode mode) {
    if (funcs.empty()) throw input_error("j_check: at least one function");
    if (h_max == 0) throw input_error("j_check: h_max must be >= 1");
    if (h_max > 20) throw resource_error("j_check: 2^h_max subsets exceed the cap (h_max <= 20)");
    for (const auto& f : funcs)
        if (f.size() < h_max) throw input_error("j_check: every function needs h_max values");
    bool add = mode == ip_mode::additive;
    std::size_t unknown = 0;
    for (natural anchor = 1; anchor <= a_max; ++anchor) {
        for (std::uint32_t mask = 1; mask < (1u << h_max); ++mask) {
            bool all = true;
            for (const auto& f : funcs) {
                std::optional<natural> v = anchor;
                for (std::size_t i = 0; i < h_max && v; ++i)
                    if (mask & (1u << i)) v = add ? checked_add(*v, f[i]) : checked_mul(*v, f[i]);
                std::optional<bool> m = v ? a.member(*v) : std::nullopt;
                if (!m) ++unknown;
                if (!m || !*m) {
                    all = false;
                    break;
                }
            }
            if (all) {
                std::vector<natural> idx;
                for (std::size_t i = 0; i < h_max; ++i)
                    if (mask & (1u << i)) idx.push_back(i + 1);
                return make_verdict(verdict_status::proved, cert::j_witness{anchor, idx},
                                    {{"a_max", a_max}, {"h_max", h_max}, {"mode", mode_name(mode)}});
            }
        }
    }
    return make_verdict(verdict_status::bounded_against, cert::none{},
                        {{"a_max", a_max}, {"h_max", h_max}, {"mode", mode_name(mode)}, {"unknown_points", unknown}});
}

inline std::vector<std::vector<natural>> default_additive_j_funcs(std::size_t h_max) {
    std::vector<natural> f, g;
    for (natural i = 1; i <= h_max; ++i) {
        f.push_back(i);
        g.push_back(2 * i);
    }
    return {f, g};
}

inline std::vector<std::vector<natural>> default_multiplicative_j_funcs(std::size_t h_max) {
    auto p = seq::mj_funcs(h_max);
    return {p.f, p.g};
}

// ---- MAX / MAX* / NMAX / NMAX* -------------------------------------------

inline verdict max_check(const lazy_set& a, natural n_max, natural horizon) {
    if (n_max == 0 || n_max > horizon) throw input_error("max_check: need 1 <= N <= H");
    window w(a, horizon);
    cert::divisor_table table;
    auto bounds = detail::base_bounds(horizon);
    bounds["N"] = n_max;
    for (natural n = 1; n <= n_max; ++n) {
        std::optional<natural> hit;
        for (natural m = n; m <= horizon; m += n)
            if (w.known_member(m)) {
                hit = m;
                break;
            }
        if (hit) {
            table.entries.push_back({n, *hit});
            continue;
        }
        bounds["n0"] = n;
        if (a.is_exact() && a.source() && setlang::analysis::avoids_residue(*a.source(), 0, n))
            return make_verdict(verdict_status::refuted, cert::residue{n}, bounds);
        return make_verdict(verdict_status::bounded_against, cert::none{}, bounds);
    }
    return make_verdict(verdict_status::proved, table, bounds);
}

inline verdict maxstar_check(const lazy_set& a, natural a_max, natural horizon) {
    if (a_max == 0 || a_max > horizon) throw input_error("maxstar_check: need 1 <= a_max <= H");
    window w(a, horizon);
    cert::missing_multiples missing;
    bool all_definite = true;
    auto bounds = detail::base_bounds(horizon);
    bounds["a_max"] = a_max;
    for (natural d = 1; d <= a_max; ++d) {
        std::optional<natural> gap;
        for (natural m = d; m <= horizon; m += d)
            if (!w.known_member(m)) {
                gap = m;
                break;
            }
        if (!gap) return make_verdict(verdict_status::proved, cert::full_multiples{d, horizon}, bounds);
        if (!w.known_absent(*gap)) all_definite = false;
        missing.entries.push_back({d, *gap});
    }
    return make_verdict(all_definite ? verdict_status::refuted : verdict_status::bounded_against, missing, bounds);
}

namespace detail {

// c in [2, H/2] whose every multiple up to H satisfies `keep`.
template <class Keep>
std::vector<natural> antichain_candidates(natural horizon, Keep keep) {
    std::vector<natural> out;
    for (natural c = 2; c <= horizon / 2; ++c) {
        bool ok = true;
        for (natural m = c; m <= horizon && ok; m += c) ok = keep(m);
        if (ok) out.push_back(c);
    }
    return out;
}

} // namespace detail

// Evidence against NMAX: a strong antichain none of whose multiples below H
// is a member. `pool` restricts the candidates when given.
inline verdict nmax_refute(const lazy_set& a, std::size_t s, natural horizon, const std::vector<natural>& pool = {}) {
    if (s < 2) throw input_error("nmax_refute: s must be >= 2");
    window w(a, horizon);
    auto avoids = [&](natural c) {
        for (natural m = c; m <= horizon; m += c)
            if (!w.known_absent(m)) return false;
        return true;
    };
    std::vector<natural> cands;
    if (pool.empty()) {
        cands = detail::antichain_candidates(horizon, [&](natural m) { return w.known_absent(m); });
    } else {
        for (natural c : finite_set(pool))
            if (c >= 2 && c <= horizon && avoids(c)) cands.push_back(c);
    }
    auto bounds = detail::base_bounds(horizon);
    bounds["s"] = s;
    bounds["candidates"] = cands.size();
    if (!pool.empty()) bounds["pool"] = finite_set(pool).elements();
    if (auto c = arith::least_strong_antichain(cands, s))
        return make_verdict(verdict_status::bounded_against, cert::strong_antichain{c->elements(), s}, bounds);
    return make_verdict(verdict_status::bounded_for, cert::none{}, bounds);
}

// Evidence for NMAX*: a strong antichain whose multiples below H are all members.
inline verdict nmaxstar_check(const lazy_set& a, std::size_t s, natural horizon) {
    if (s < 2) throw input_error("nmaxstar_check: s must be >= 2");
    window w(a, horizon);
    auto cands = detail::antichain_candidates(horizon, [&](natural m) { return w.known_member(m); });
    auto bounds = detail::base_bounds(horizon);
    bounds["s"] = s;
    bounds["candidates"] = cands.size();
    if (auto c = arith::least_strong_antichain(cands, s))
        return make_verdict(verdict_status::bounded_for, cert::strong_antichain{c->elements(), s}, bounds);
    return make_verdict(verdict_status::bounded_against, cert::none{}, bounds);
}

// x with c_m | x + m for m = 1..n, so {x+1, ..., x+n} lies in C's multiples.
inline natural crt_thickness_demo(const finite_set& c, std::size_t n) {
    if (n == 0 || n > c.size()) throw input_error("crt_thickness_demo: need 1 <= n <= |C|");
    if (!arith::is_strong_antichain(c)) throw input_error("crt_thickness_demo: C must be pairwise coprime");
    std::vector<arith::congruence> sys;
    for (std::size_t m = 1; m <= n; ++m) sys.push_back({-static_cast<std::int64_t>(m), c[m - 1]});
    auto x = arith::crt_solve(sys);
    if (!x) throw error("crt_thickness_demo: coprime system without solution");
    for (std::size_t m = 1; m <= n; ++m)
        if ((*x + m) % c[m - 1] != 0) throw error("crt_thickness_demo: solution fails a congruence");
    return *x;
}

// ---- report -----------------------------------------------------------------

struct property_params {
    natural horizon = 100'000;
    natural run_length = 10;            // A-thick, M-thick, pcws
    natural shift_cap = 3;              // pcws t_max
    std::size_t ip_length = 3;          // A-IP, M-IP, A-IP*
    natural j_anchor_max = 1000;
    std::size_t j_index_max = 4;
    natural divisor_bound = 20;         // MAX
    natural dilation_cap = 20;          // MAX*
    std::size_t antichain_strength = 4; // NMAX, NMAX*
    std::vector<std::vector<natural>> a_j_funcs; // empty: f(i)=i, g(i)=2i
    std::vector<std::vector<natural>> m_j_funcs; // empty: the prime-pair functions
    std::size_t ip_budget = default_ip_budget;
    natural audit_cap = 20'000'000;     // largest horizon the audits may evaluate
};

struct report_entry {
    std::string name;
    std::optional<verdict> result;
    std::string note; // "out of scope" / inapplicability reason
};

struct audit_entry {
    std::string implication;
    std::string status; // pass, violation, inconclusive, skipped
    std::string detail;
};

struct largeness_report {
    natural horizon = 0;
    std::vector<report_entry> entries;
    std::vector<audit_entry> audits;

    bool consistent() const {
        return std::none_of(audits.begin(), audits.end(), [](const audit_entry& a) { return a.status == "violation"; });
    }

    const verdict* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name && e.result) return &*e.result;
        return nullptr;
    }
};

inline const std::vector<std::string>& property_names() {
    static const std::vector<std::string> names{"A-thick", "M-thick", "A-pcws", "M-pcws", "A-IP", "M-IP", "A-IP*",
                                                "A-J",     "M-J",     "MAX",    "NMAX",   "MAX*", "NMAX*"};
    return names;
}

inline verdict run_property(const std::string& name, const lazy_set& a, const property_params& p) {
    natural h = p.horizon;
    if (name == "A-thick") return a_thick_check(a, p.run_length, h);
    if (name == "M-thick") return mthick_check(a, p.run_length, h);
    if (name == "A-pcws") return a_pcws_check(a, p.shift_cap, p.run_length, h);
    if (name == "M-pcws") return m_pcws_check(a, std::max<natural>(p.shift_cap, 1), p.run_length, h);
    if (name == "A-IP") return ip_search(a, p.ip_length, h, ip_mode::additive, p.ip_budget);
    if (name == "M-IP") return ip_search(a, p.ip_length, h, ip_mode::multiplicative, p.ip_budget);
    if (name == "A-IP*") return ip_star_check(a, p.ip_length, h, p.ip_budget);
    if (name == "A-J") {
        auto funcs = p.a_j_funcs.empty() ? default_additive_j_funcs(p.j_index_max) : p.a_j_funcs;
        return j_check(a, funcs, p.j_anchor_max, p.j_index_max, ip_mode::additive);
    }
    if (name == "M-J") {
        auto funcs = p.m_j_funcs.empty() ? default_multiplicative_j_funcs(p.j_index_max) : p.m_j_funcs;
        return j_check(a, funcs, p.j_anchor_max, p.j_index_max, ip_mode::multiplicative);
    }
    if (name == "MAX") return max_check(a, std::min(p.divisor_bound, h), h);
    if (name == "NMAX") return nmax_refute(a, p.antichain_strength, h);
    if (name == "MAX*") return maxstar_check(a, std::min(p.dilation_cap, h), h);
    if (name == "NMAX*") return nmaxstar_check(a, p.antichain_strength, h);
    throw input_error("unknown property '" + name + "'");
}

namespace detail {

// Membership at points possibly beyond the evaluated horizon.
inline std::optional<bool> member_far(const lazy_set& a, natural n, natural cap, std::optional<lazy_set>& extended) {
    if (auto m = a.member(n)) return m;
    if (!a.source() || n > cap) return std::nullopt;
    if (!extended || extended->horizon() < n) extended = setlang::eval(*a.source(), std::max(n, 2 * a.horizon()));
    return extended->member(n);
}

inline void audit(largeness_report& r, const lazy_set& a, const property_params& p) {
    natural h = p.horizon;
    if (const verdict* thick = r.find("A-thick"); thick && thick->proved()) {
        verdict v = a_pcws_check(a, 0, p.run_length, h);
        r.audits.push_back({"A-thick => A-pcws(t_max=0)", v.proved() ? "pass" : "violation",
                            v.proved() ? describe(v.evidence) : "pcws with F={0} failed"});
    } else {
        r.audits.push_back({"A-thick => A-pcws(t_max=0)", "skipped", "A-thick not proved"});
    }

    if (const verdict* ms = r.find("MAX*"); ms && ms->proved()) {
        natural d = ms->as<cert::full_multiples>()->a;
        natural n = h / d;
        verdict v = max_check(a, n, h);
        r.audits.push_back({"MAX*(a) => MAX up to H/a", v.proved() ? "pass" : "violation", "N=" + std::to_string(n)});
    } else {
        r.audits.push_back({"MAX*(a) => MAX up to H/a", "skipped", "MAX* not proved"});
    }

    const verdict* ns = r.find("NMAX*");
    if (ns && ns->as<cert::strong_antichain>()) {
        finite_set c(ns->as<cert::strong_antichain>()->elements);
        natural x = crt_thickness_demo(c, c.size());
        std::optional<lazy_set> ext;
        std::string status = "pass";
        std::string detail = "run " + std::to_string(x + 1) + ".." + std::to_string(x + c.size());
        for (natural m = 1; m <= c.size(); ++m) {
            auto in = member_far(a, x + m, p.audit_cap, ext);
            if (in && *in) continue;
            // Bounded evidence only covers multiples up to H.
            bool binding = x + m <= h;
            if (in && binding) status = "violation";
            else if (status == "pass") status = "inconclusive";
            detail += "; " + std::to_string(x + m) + (in ? " absent" : " unknown");
        }
        r.audits.push_back({"NMAX*(C) => A-thick run of |C| via CRT", status, detail});
    } else {
        r.audits.push_back({"NMAX*(C) => A-thick run of |C| via CRT", "skipped", "no NMAX* evidence"});
    }
}

} // namespace detail

inline largeness_report diagram_report(const lazy_set& a, const property_params& p) {
    largeness_report r;
    r.horizon = p.horizon;
    for (const auto& name : property_names()) {
        try {
            r.entries.push_back({name, run_property(name, a, p), ""});
        } catch (const inapplicable_error& ex) {
            r.entries.push_back({name, std::nullopt, std::string("inapplicable: ") + ex.what()});
        }
    }
    for (const char* name : {"A-central", "A-central*", "M-central", "M-central*"})
        r.entries.push_back({name, std::nullopt, "out of scope: needs minimal idempotent ultrafilters"});
    detail::audit(r, a, p);
    return r;
}

// ---- exact atlas of the divisor poset on {1..n} -------------------------------

struct atlas_report {
    unsigned n = 0;
    std::size_t upset_count = 0;
    std::optional<std::size_t> brute_upset_count;
    std::optional<std::size_t> brute_downset_count;
    std::size_t subsets_checked = 0;
    bool exhaustive = false;
    std::size_t max_violations = 0;       // (i)
    std::size_t maxstar_violations = 0;   // (ii)
    std::size_t duality_violations = 0;   // (iii)
    std::size_t complement_violations = 0;
    std::size_t max_sets = 0;
    std::size_t maxstar_sets = 0;
    bool ok() const {
        bool counts = !brute_upset_count || (*brute_upset_count == upset_count && *brute_downset_count == upset_count);
        return counts && max_violations == 0 && maxstar_violations == 0 && duality_violations == 0 &&
               complement_violations == 0;
    }
};

inline constexpr std::size_t atlas_sample = 4096;

inline atlas_report poset_atlas(unsigned n, bool exhaustive = false) {
    if (n == 0 || n > 20) throw resource_error("poset_atlas: n must be in [1, 20]");
    if (exhaustive && n > 16) throw resource_error("poset_atlas: exhaustive audit is capped at n = 16");
    using mask = std::uint32_t;
    const mask universe = n == 32 ? ~mask{0} : ((mask{1} << n) - 1);
    auto bit = [](unsigned x) { return mask{1} << (x - 1); };

    std::vector<mask> multiples(n + 1, 0), divisors(n + 1, 0);
    for (unsigned x = 1; x <= n; ++x)
        for (unsigned y = x; y <= n; y += x) {
            multiples[x] |= bit(y);
            divisors[y] |= bit(x);
        }
    auto up = [&](mask s) {
        mask out = 0;
        for (unsigned x = 1; x <= n; ++x)
            if (s & bit(x)) out |= multiples[x];
        return out;
    };
    auto down = [&](mask s) {
        mask out = 0;
        for (unsigned x = 1; x <= n; ++x)
            if (s & bit(x)) out |= divisors[x];
        return out;
    };

    // Up-sets are exactly the up-closures of antichains.
    std::vector<mask> upsets;
    mask chosen = 0;
    auto rec = [&](auto&& self, unsigned from) -> void {
        upsets.push_back(up(chosen));
        for (unsigned x = from; x <= n; ++x) {
            if ((divisors[x] | multiples[x]) & chosen) continue;
            chosen |= bit(x);
            self(self, x + 1);
            chosen &= ~bit(x);
        }
    };
    rec(rec, 1);

    atlas_report r;
    r.n = n;
    r.upset_count = upsets.size();
    r.exhaustive = exhaustive || n <= 14;
    if (n <= 14) {
        std::size_t ups = 0, downs = 0;
        for (mask s = 0; s <= universe; ++s) {
            if (up(s) == s) ++ups;
            if (down(s) == s) ++downs;
        }
        r.brute_upset_count = ups;
        r.brute_downset_count = downs;
    }
    for (mask u : upsets)
        if (down(universe & ~u) != (universe & ~u)) ++r.complement_violations;

    auto check = [&](mask a) {
        // (i) A meets every nonempty up-set, i.e. lies in no proper down-set.
        bool max_by_family = std::all_of(upsets.begin(), upsets.end(), [&](mask u) { return u == 0 || (u & a); });
        bool max_by_closure = down(a) == universe;
        if (max_by_family != max_by_closure) ++r.max_violations;
        // (ii) A contains a nonempty up-set iff it contains some principal one.
        bool star_by_family = std::any_of(upsets.begin(), upsets.end(), [&](mask u) { return u != 0 && (u & ~a) == 0; });
        bool star_by_principal = false;
        for (unsigned x = 1; x <= n && !star_by_principal; ++x) star_by_principal = (multiples[x] & ~a) == 0;
        if (star_by_family != star_by_principal) ++r.maxstar_violations;
        // (iii) MAX*(A) iff not MAX(complement of A).
        bool comp_max = down(universe & ~a) == universe;
        if (star_by_family == comp_max) ++r.duality_violations;
        r.max_sets += max_by_family;
        r.maxstar_sets += star_by_family;
        ++r.subsets_checked;
    };
    if (r.exhaustive) {
        for (std::uint64_t s = 0; s <= universe; ++s) check(static_cast<mask>(s));
    } else {
        std::uint64_t total = std::uint64_t{universe} + 1;
        std::uint64_t stride = total / atlas_sample;
        for (std::uint64_t i = 0; i < atlas_sample; ++i) check(static_cast<mask>(i * stride));
        check(universe);
    }
    return r;
}

} // namespace felab::largeness
