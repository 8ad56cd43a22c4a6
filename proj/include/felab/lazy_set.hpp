#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "felab/arith.hpp"
#include "felab/set_expr.hpp"

namespace felab {

enum class exactness { exact, prefix };

// An evaluated subset of the naturals.
//
// `elements()` lists known members up to `horizon()`; the list is complete on
// [1, enum_horizon()]. `member()` is definite on [1, exact_horizon()] and for
// any listed element. An EXACT set has an unbounded exact horizon. A PREFIX
// set may also carry `excluded`, which is true only at certain non-members.
class lazy_set {
public:
    using predicate = std::function<bool(natural)>;

    lazy_set() = default;

    lazy_set(std::vector<natural> known, natural horizon, natural exact_horizon, predicate pred,
             std::optional<natural> finite_max = std::nullopt,
             std::shared_ptr<const setlang::set_expr> source = nullptr)
        : known_(std::make_shared<const std::vector<natural>>(std::move(known))), horizon_(horizon),
          exact_(exact_horizon), pred_(std::move(pred)), finite_max_(finite_max), source_(std::move(source)) {}

    // Exact finite set.
    static lazy_set finite(const finite_set& s, natural horizon) {
        std::vector<natural> known;
        for (natural x : s)
            if (x <= horizon) known.push_back(x);
        auto elems = std::make_shared<const finite_set>(s);
        auto src = std::make_shared<const setlang::set_expr>(setlang::make::finite(s.elements()));
        return lazy_set(std::move(known), horizon, unbounded, [elems](natural n) { return elems->contains(n); },
                        s.empty() ? natural{0} : s.max(), src);
    }

    exactness kind() const { return exact_ == unbounded ? exactness::exact : exactness::prefix; }
    bool is_exact() const { return exact_ == unbounded; }
    natural horizon() const { return horizon_; }
    natural exact_horizon() const { return exact_; }
    natural enum_horizon() const { return std::min(horizon_, exact_); }
    std::span<const natural> elements() const {
        return known_ ? std::span<const natural>(*known_) : std::span<const natural>();
    }

    // Bound on all members when the set is known to be finite (0 means empty).
    std::optional<natural> finite_max() const { return finite_max_; }
    const setlang::set_expr* source() const { return source_.get(); }
    std::shared_ptr<const setlang::set_expr> source_ptr() const { return source_; }

    lazy_set& with_exclusion(predicate excluded) {
        excluded_ = std::move(excluded);
        return *this;
    }

    std::optional<bool> member(natural n) const {
        if (n == 0) return false;
        if (n <= horizon_ && n <= exact_) return listed(n);
        if (finite_max_ && n > *finite_max_ && exact_ == unbounded) return false;
        if (n <= exact_) return pred_(n);
        if (n <= horizon_ && listed(n)) return true;
        if (excluded_ && excluded_(n)) return false;
        return std::nullopt;
    }

    // Known members in [lo, hi].
    std::vector<natural> elements_between(natural lo, natural hi) const {
        std::vector<natural> out;
        auto xs = elements();
        for (auto it = std::lower_bound(xs.begin(), xs.end(), lo); it != xs.end() && *it <= hi; ++it) out.push_back(*it);
        return out;
    }

private:
    bool listed(natural n) const {
        auto xs = elements();
        return std::binary_search(xs.begin(), xs.end(), n);
    }

    std::shared_ptr<const std::vector<natural>> known_;
    natural horizon_ = 0;
    natural exact_ = 0;
    predicate pred_;
    predicate excluded_;
    std::optional<natural> finite_max_;
    std::shared_ptr<const setlang::set_expr> source_;
};

inline const char* exactness_name(exactness e) { return e == exactness::exact ? "EXACT" : "PREFIX"; }

// Tri-state view of a set over [1, H]: 1 member, 0 non-member, -1 unknown.
class window {
public:
    window(const lazy_set& s, natural horizon) : state_(horizon + 1, -1) {
        state_[0] = 0;
        natural full = std::min(horizon, s.enum_horizon());
        for (natural n = 1; n <= full; ++n) state_[n] = 0;
        for (natural x : s.elements()) {
            if (x > horizon) break;
            state_[x] = 1;
        }
        for (natural n = full + 1; n <= horizon; ++n) {
            if (state_[n] == 1) continue;
            auto m = s.member(n);
            if (m) state_[n] = *m ? 1 : 0;
        }
    }

    natural horizon() const { return state_.size() - 1; }
    bool known_member(natural n) const { return n < state_.size() && state_[n] == 1; }
    bool known_absent(natural n) const { return n < state_.size() && state_[n] == 0; }
    bool unknown(natural n) const { return n >= state_.size() || state_[n] == -1; }
    std::optional<bool> at(natural n) const {
        if (unknown(n)) return std::nullopt;
        return state_[n] == 1;
    }
    bool all_known() const {
        for (signed char c : state_)
            if (c < 0) return false;
        return true;
    }
    std::vector<natural> members() const {
        std::vector<natural> out;
        for (natural n = 1; n < state_.size(); ++n)
            if (state_[n] == 1) out.push_back(n);
        return out;
    }

private:
    std::vector<signed char> state_;
};

} // namespace felab
