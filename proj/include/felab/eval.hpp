#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <vector>

#include "felab/arith.hpp"
#include "felab/lazy_set.hpp"
#include "felab/sequences.hpp"
#include "felab/set_expr.hpp"

namespace felab::setlang {

struct eval_options {
    natural max_horizon = 50'000'000;      // largest bitmap any sub-evaluation may allocate
    std::size_t max_sequence_length = 24;  // fs/fp enumerate at most 2^24 subsets
    std::shared_ptr<const arith::sieve> sieve; // reused when it covers the needed range
};

namespace detail {

using bits = std::vector<bool>;

struct node_value {
    std::shared_ptr<const bits> members; // known members over [0, horizon]
    natural horizon = 0;
    natural exact = 0;                   // predicate authoritative on [1, exact]
    lazy_set::predicate pred;
    std::optional<natural> finite_max;   // 0 for the empty set
    lazy_set::predicate excluded;        // certain non-members; combinators drop it
};

inline natural fixture_nat(const set_expr& e, std::size_t i) { return std::get<natural>(e.fixture_args[i]); }
inline const std::vector<natural>& fixture_list(const set_expr& e, std::size_t i) {
    return std::get<std::vector<natural>>(e.fixture_args[i]);
}

inline seq::prime_selection fixture_selection(const set_expr& e) {
    if (e.fixture_args.size() == 1) return {"", fixture_list(e, 0)};
    return {std::get<std::string>(e.fixture_args[0]), {}};
}

inline std::vector<natural> sidon_levels_of(const set_expr& e) {
    auto terms = seq::sidon(fixture_nat(e, 0));
    natural parity = fixture_nat(e, 1);
    std::vector<natural> lv;
    for (std::size_t i = parity; i < terms.size(); i += 2) lv.push_back(terms[i]);
    return lv;
}

inline std::vector<seq::prophier_block> prophier_blocks(const set_expr& e) {
    std::vector<seq::prophier_block> blocks;
    for (std::size_t i = 0; i + 2 < e.fixture_args.size(); i += 3)
        blocks.push_back({fixture_list(e, i), static_cast<unsigned>(fixture_nat(e, i + 1)),
                          static_cast<std::size_t>(fixture_nat(e, i + 2))});
    return blocks;
}

// Horizon demanded of the sieve when evaluating `e` at `h`.
inline natural sieve_demand(const set_expr& e, natural h) {
    switch (e.kind) {
    case expr_kind::primes:
    case expr_kind::level:
    case expr_kind::construct: return h;
    case expr_kind::quotient: return sieve_demand(e.operands[0], saturating_mul(h, e.params[0]));
    case expr_kind::shift: return sieve_demand(e.operands[0], saturating_add(h, e.params[0]));
    case expr_kind::dilate: return sieve_demand(e.operands[0], h / e.params[0]);
    default: {
        natural need = 0;
        for (const auto& c : e.operands) need = std::max(need, sieve_demand(c, h));
        return need;
    }
    }
}

inline bool fp_of_primes(natural n, const std::vector<natural>& gens) {
    if (n < 2) return false;
    for (auto [p, e] : arith::factorize(n))
        if (e != 1 || !std::binary_search(gens.begin(), gens.end(), p)) return false;
    return true;
}

// n is not a product of distinct primes whose 1-based index has the given
// parity. `primes` lists every prime up to some bound; larger factors prove
// nothing on their own.
inline bool outside_parity_fp(natural n, bool odd, const std::vector<natural>& primes) {
    if (n < 2) return true;
    for (auto [p, e] : arith::factorize(n)) {
        if (e != 1) return true;
        if (primes.empty() || p > primes.back()) continue;
        natural index = static_cast<natural>(std::lower_bound(primes.begin(), primes.end(), p) - primes.begin()) + 1;
        if ((index % 2 == 1) != odd) return true;
    }
    return false;
}

class evaluator {
public:
    evaluator(const eval_options& opt, natural sieve_limit) : opt_(opt) {
        if (opt.sieve && opt.sieve->limit() >= sieve_limit) {
            sieve_ = opt.sieve;
        } else if (sieve_limit >= 2) {
            if (sieve_limit > opt.max_horizon)
                throw resource_error("evaluation needs a sieve up to " + std::to_string(sieve_limit) +
                                     ", above the cap " + std::to_string(opt.max_horizon));
            sieve_ = std::make_shared<const arith::sieve>(sieve_limit);
        }
    }

    node_value eval(const set_expr& e, natural h) {
        if (h > opt_.max_horizon)
            throw resource_error("evaluation horizon " + std::to_string(h) + " exceeds cap " +
                                 std::to_string(opt_.max_horizon));
        switch (e.kind) {
        case expr_kind::naturals: {
            bits b(h + 1, true);
            b[0] = false;
            return exact_node(std::move(b), h, [](natural) { return true; });
        }
        case expr_kind::primes: {
            auto sv = sieve_;
            bits b(h + 1, false);
            for (natural n = 2; n <= h; ++n) b[n] = arith::is_prime(n, sv.get());
            return exact_node(std::move(b), h, [sv](natural n) { return arith::is_prime(n, sv.get()); });
        }
        case expr_kind::level: {
            auto sv = sieve_;
            unsigned lv = static_cast<unsigned>(e.params[0]);
            bits b(h + 1, false);
            for (natural n = 1; n <= h; ++n) b[n] = arith::omega(n, sv.get()) == lv;
            node_value v = exact_node(std::move(b), h, [sv, lv](natural n) { return arith::omega(n, sv.get()) == lv; });
            if (lv == 0) v.finite_max = 1;
            return v;
        }
        case expr_kind::mult: return progression(e.params[0], e.params[0], h);
        case expr_kind::ap: return progression(e.params[0], e.params[1], h);
        case expr_kind::finite: {
            auto elems = std::make_shared<const std::vector<natural>>(e.params);
            bits b(h + 1, false);
            for (natural x : e.params)
                if (x <= h) b[x] = true;
            node_value v = exact_node(std::move(b), h, [elems](natural n) {
                return std::binary_search(elems->begin(), elems->end(), n);
            });
            v.finite_max = e.params.empty() ? 0 : e.params.back();
            return v;
        }
        case expr_kind::set_union:
        case expr_kind::set_inter: return combine(e, h);
        case expr_kind::complement: {
            node_value c = eval(e.operands[0], h);
            natural full = std::min(h, c.exact);
            bits b(h + 1, false);
            for (natural n = 1; n <= full; ++n) b[n] = !(*c.members)[n];
            auto p = c.pred;
            return make(std::move(b), h, c.exact, [p](natural n) { return !p(n); }, std::nullopt);
        }
        case expr_kind::dilate: {
            natural k = e.params[0];
            node_value c = eval(e.operands[0], h / k);
            bits b(h + 1, false);
            for (natural y = 1; y <= h / k; ++y)
                if ((*c.members)[y]) b[y * k] = true;
            natural exact = c.exact == unbounded ? unbounded : saturating_mul(k, saturating_add(c.exact, 1)) - 1;
            auto p = c.pred;
            std::optional<natural> fmax;
            if (c.finite_max) fmax = saturating_mul(*c.finite_max, k);
            return make(std::move(b), h, exact, [p, k](natural n) { return n % k == 0 && p(n / k); }, fmax);
        }
        case expr_kind::quotient: {
            natural d = e.params[0];
            auto ch = checked_mul(h, d);
            if (!ch) throw resource_error("quotient horizon overflows");
            node_value c = eval(e.operands[0], *ch);
            bits b(h + 1, false);
            for (natural y = 1; y <= h; ++y) b[y] = (*c.members)[y * d];
            natural exact = c.exact == unbounded ? unbounded : c.exact / d;
            auto p = c.pred;
            std::optional<natural> fmax;
            if (c.finite_max) fmax = *c.finite_max / d;
            return make(std::move(b), h, exact,
                        [p, d](natural n) {
                            auto m = checked_mul(n, d);
                            if (!m) throw resource_error("quotient membership query overflows");
                            return p(*m);
                        },
                        fmax);
        }
        case expr_kind::shift: {
            natural t = e.params[0];
            auto ch = checked_add(h, t);
            if (!ch) throw resource_error("shift horizon overflows");
            node_value c = eval(e.operands[0], *ch);
            bits b(h + 1, false);
            for (natural y = 1; y <= h; ++y) b[y] = (*c.members)[y + t];
            natural exact = c.exact == unbounded ? unbounded : (c.exact > t ? c.exact - t : 0);
            auto p = c.pred;
            std::optional<natural> fmax;
            if (c.finite_max) fmax = *c.finite_max > t ? *c.finite_max - t : 0;
            return make(std::move(b), h, exact,
                        [p, t](natural n) {
                            auto m = checked_add(n, t);
                            if (!m) throw resource_error("shift membership query overflows");
                            return p(*m);
                        },
                        fmax);
        }
        case expr_kind::up: {
            node_value c = eval(e.operands[0], h);
            bits b(h + 1, false);
            for (natural x = 1; x <= h; ++x)
                if ((*c.members)[x])
                    for (natural m = x; m <= h; m += x) b[m] = true;
            auto p = c.pred;
            auto sv = sieve_;
            std::optional<natural> fmax;
            if (c.finite_max && *c.finite_max == 0) fmax = 0;
            return make(std::move(b), h, c.exact,
                        [p, sv](natural n) {
                            for (natural d : arith::divisors(n, sv.get()))
                                if (p(d)) return true;
                            return false;
                        },
                        fmax);
        }
        case expr_kind::down: return down(e, h);
        case expr_kind::fs:
        case expr_kind::fp: return sums_or_products(e, h);
        case expr_kind::pseudo: return pseudo(e, h);
        case expr_kind::construct: return construct(e, h);
        }
        throw input_error("unknown expression kind");
    }

private:
    static node_value make(bits b, natural h, natural exact, lazy_set::predicate pred, std::optional<natural> fmax) {
        node_value v;
        v.members = std::make_shared<const bits>(std::move(b));
        v.horizon = h;
        v.exact = exact;
        v.finite_max = fmax;
        if (exact == unbounded) {
            v.pred = std::move(pred);
        } else {
            // Outside the exact range nobody may call the predicate; inside it
            // the bitmap is authoritative, and the operand predicate stays
            // valid below `exact` too.
            auto m = v.members;
            auto inner = std::move(pred);
            v.pred = [m, h, inner](natural n) { return n <= h ? static_cast<bool>((*m)[n]) : inner(n); };
        }
        return v;
    }

    static node_value exact_node(bits b, natural h, lazy_set::predicate pred) {
        return make(std::move(b), h, unbounded, std::move(pred), std::nullopt);
    }

    node_value progression(natural a, natural d, natural h) {
        bits b(h + 1, false);
        for (natural x = a; x <= h; x += d) b[x] = true;
        return exact_node(std::move(b), h, [a, d](natural n) { return n >= a && (n - a) % d == 0; });
    }

    node_value combine(const set_expr& e, natural h) {
        bool is_union = e.kind == expr_kind::set_union;
        std::vector<node_value> parts;
        for (const auto& c : e.operands) parts.push_back(eval(c, h));
        bits b(h + 1, false);
        natural exact = unbounded;
        for (const auto& p : parts) exact = std::min(exact, p.exact);
        for (natural n = 1; n <= h; ++n) {
            bool v = is_union ? false : true;
            for (const auto& p : parts) {
                bool m = (*p.members)[n];
                v = is_union ? (v || m) : (v && m);
            }
            b[n] = v;
        }
        std::vector<lazy_set::predicate> preds;
        for (const auto& p : parts) preds.push_back(p.pred);
        std::optional<natural> fmax;
        if (is_union) {
            natural m = 0;
            bool all = true;
            for (const auto& p : parts) {
                if (!p.finite_max) all = false;
                else m = std::max(m, *p.finite_max);
            }
            if (all) fmax = m;
        } else {
            for (const auto& p : parts)
                if (p.finite_max) fmax = fmax ? std::min(*fmax, *p.finite_max) : *p.finite_max;
        }
        return make(std::move(b), h, exact,
                    [preds, is_union](natural n) {
                        for (const auto& p : preds) {
                            bool m = p(n);
                            if (is_union && m) return true;
                            if (!is_union && !m) return false;
                        }
                        return !is_union;
                    },
                    fmax);
    }

    node_value down(const set_expr& e, natural h) {
        node_value c = eval(e.operands[0], h);
        if (c.exact == unbounded && c.finite_max) {
            natural top = *c.finite_max;
            if (top > h) c = eval(e.operands[0], top);
            auto elems = std::make_shared<std::vector<natural>>();
            for (natural x = 1; x <= top; ++x)
                if ((*c.members)[x]) elems->push_back(x);
            bits b(h + 1, false);
            for (natural x : *elems)
                for (natural d : arith::divisors(x, sieve_.get()))
                    if (d <= h) b[d] = true;
            return make(std::move(b), h, unbounded,
                        [elems](natural n) {
                            for (natural x : *elems)
                                if (x % n == 0) return true;
                            return false;
                        },
                        top);
        }
        // Divisors of unseen members can be small, so nothing is certain
        // beyond the divisors already found.
        bits b(h + 1, false);
        for (natural x = 1; x <= h; ++x)
            if ((*c.members)[x])
                for (natural d : arith::divisors(x, sieve_.get())) b[d] = true;
        return make(std::move(b), h, 0, [](natural) { return false; }, std::nullopt);
    }

    struct sequence_terms {
        std::vector<natural> terms;
        std::optional<natural> next; // first term not included, if the rule continues
    };

    sequence_terms resolve_sequence(const sequence_spec& s) const {
        switch (s.rule) {
        case seq_rule::list: return {s.values, std::nullopt};
        case seq_rule::exgamma:
        case seq_rule::fastgrowth:
        case seq_rule::sidon: {
            auto gen = [&](std::size_t n) {
                return s.rule == seq_rule::exgamma ? seq::exgamma(n)
                       : s.rule == seq_rule::fastgrowth ? seq::fastgrowth(n)
                                                        : seq::sidon(n);
            };
            std::vector<natural> all;
            try {
                all = gen(s.count + 1);
            } catch (const resource_error&) {
                return {gen(s.count), std::nullopt};
            }
            natural next = all.back();
            all.pop_back();
            return {all, next};
        }
        case seq_rule::primes_sub: {
            seq::prime_selection sel{s.parity, s.values};
            std::size_t count = s.parity.empty() ? s.values.size() : s.count;
            return {seq::selected_primes(sel, count), seq::next_selected_prime(sel, count)};
        }
        }
        return {};
    }

    node_value sums_or_products(const set_expr& e, natural h) {
        auto seqv = resolve_sequence(e.sequence);
        if (seqv.terms.size() > opt_.max_sequence_length)
            throw resource_error("fs/fp sequence length " + std::to_string(seqv.terms.size()) + " exceeds cap " +
                                 std::to_string(opt_.max_sequence_length));
        auto vals = e.kind == expr_kind::fs ? seq::subset_sums(seqv.terms, h) : seq::subset_products(seqv.terms, h);
        natural exact = h;
        // Any sum or product involving a later term is at least that term.
        if (seqv.next) exact = std::min(h, *seqv.next - 1);
        return from_list(vals, h, exact, std::nullopt);
    }

    node_value from_list(const std::vector<natural>& vals, natural h, natural exact, std::optional<natural> fmax) {
        bits b(h + 1, false);
        for (natural v : vals)
            if (v <= h) b[v] = true;
        return make(std::move(b), h, exact, [](natural) { return false; }, fmax);
    }

    node_value pseudo(const set_expr& e, natural h) {
        std::vector<natural> ys;
        natural last = 0;
        for (const auto& c : e.operands) {
            node_value x = eval(c, h);
            natural top = std::min(h, x.exact);
            natural pick = 0;
            for (natural n = last + 1; n <= top; ++n)
                if ((*x.members)[n]) {
                    pick = n;
                    break;
                }
            if (!pick) break;
            ys.push_back(pick);
            last = pick;
        }
        // The listed choices are final; anything past the last one is not.
        return from_list(ys, h, ys.size() == e.operands.size() ? h : last, std::nullopt);
    }

    node_value construct(const set_expr& e, natural h) {
        const std::string& name = e.fixture;
        if (name == "exgamma" || name == "sidon") {
            sequence_spec s;
            s.rule = name == "exgamma" ? seq_rule::exgamma : seq_rule::sidon;
            s.count = fixture_nat(e, 0);
            auto sq = resolve_sequence(s);
            natural exact = sq.next ? std::min(h, *sq.next - 1) : h;
            return from_list(sq.terms, h, exact, std::nullopt);
        }
        if (name == "fastgrowth") {
            set_expr f{expr_kind::fs};
            f.sequence.rule = seq_rule::fastgrowth;
            f.sequence.count = fixture_nat(e, 0);
            return sums_or_products(f, h);
        }
        if (name == "thick_nonmaxstar") {
            auto tb = seq::thick_nonmaxstar(fixture_nat(e, 0));
            std::vector<natural> vals;
            for (const auto& blk : tb.blocks) vals.insert(vals.end(), blk.begin(), blk.end());
            // Later blocks start above the last avoided multiple.
            return from_list(vals, h, std::min(h, tb.avoided.back()), std::nullopt);
        }
        if (name == "equal_exponent") {
            auto sv = sieve_;
            bits b(h + 1, false);
            for (natural n = 2; n <= h; ++n) b[n] = seq::equal_exponents(n, sv.get());
            return exact_node(std::move(b), h, [sv](natural n) { return seq::equal_exponents(n, sv.get()); });
        }
        if (name == "fp_primes") {
            auto sel = fixture_selection(e);
            std::size_t count = sel.parity.empty() ? sel.indices.size() : fixture_nat(e, 1);
            if (count > opt_.max_sequence_length)
                throw resource_error("fp_primes count exceeds the fp cap " + std::to_string(opt_.max_sequence_length));
            auto ps = seq::selected_primes(sel, count);
            auto next = seq::next_selected_prime(sel, count);
            auto vals = seq::subset_products(ps, h);
            if (!next) {
                // Finitely many generators: squarefree products of exactly these primes.
                natural top = 1;
                for (natural p : ps) top = saturating_mul(top, p);
                bits b(h + 1, false);
                for (natural x : vals) b[x] = true;
                auto gens = std::make_shared<const std::vector<natural>>(ps);
                node_value v = exact_node(std::move(b), h, [gens](natural n) { return fp_of_primes(n, *gens); });
                if (top != unbounded) v.finite_max = top;
                return v;
            }
            node_value v = from_list(vals, h, std::min(h, *next - 1), std::nullopt);
            // Nothing with a square factor or a prime of the other parity ever joins.
            auto primes = std::make_shared<std::vector<natural>>();
            for (natural n = 2; n <= h; ++n)
                if (arith::is_prime(n, sieve_.get())) primes->push_back(n);
            bool odd = sel.parity == "odd";
            v.excluded = [primes, odd](natural n) { return outside_parity_fp(n, odd, *primes); };
            return v;
        }
        if (name == "prophier") return from_list(seq::prophier(prophier_blocks(e), h), h, h, std::nullopt);
        if (name == "levelfix") {
            unsigned lv = static_cast<unsigned>(fixture_nat(e, 0));
            auto pos = fixture_list(e, 1);
            auto ps = fixture_list(e, 2);
            seq::validate_levelfix(lv, pos, ps);
            auto sv = sieve_;
            bits b(h + 1, false);
            for (natural n = 2; n <= h; ++n) b[n] = arith::omega(n, sv.get()) == lv && seq::levelfix_member(n, lv, pos, ps, sv.get());
            return exact_node(std::move(b), h, [=](natural n) { return seq::levelfix_member(n, lv, pos, ps, sv.get()); });
        }
        if (name == "sidon_levels") {
            auto lvs = sidon_levels_of(e);
            auto sv = sieve_;
            bits b(h + 1, false);
            for (natural n = 2; n <= h; ++n) b[n] = std::binary_search(lvs.begin(), lvs.end(), natural{arith::omega(n, sv.get())});
            return exact_node(std::move(b), h, [sv, lvs](natural n) {
                return std::binary_search(lvs.begin(), lvs.end(), natural{arith::omega(n, sv.get())});
            });
        }
        throw input_error("unknown construction '" + name + "'");
    }

    eval_options opt_;
    std::shared_ptr<const arith::sieve> sieve_;
};

} // namespace detail

inline lazy_set eval(const set_expr& e, natural horizon, const eval_options& opt = {}) {
    if (horizon == 0) throw input_error("eval: horizon must be >= 1");
    natural need = detail::sieve_demand(e, horizon);
    detail::evaluator ev(opt, need);
    detail::node_value v = ev.eval(e, horizon);
    std::vector<natural> known;
    for (natural n = 1; n <= horizon; ++n)
        if ((*v.members)[n]) known.push_back(n);
    lazy_set out(std::move(known), horizon, v.exact, std::move(v.pred), v.finite_max,
                 std::make_shared<const set_expr>(e));
    if (v.excluded) out.with_exclusion(std::move(v.excluded));
    return out;
}

inline lazy_set eval(std::string_view text, natural horizon, const eval_options& opt = {}) {
    return eval(parse(text), horizon, opt);
}

} // namespace felab::setlang
