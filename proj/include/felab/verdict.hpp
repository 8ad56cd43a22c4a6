#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "felab/arith.hpp"

namespace felab {

namespace cert {

struct none {};

// k * prefix lies inside the target set.
struct dilation {
    natural k;
    std::vector<natural> prefix;
};

// {location + 1, ..., location + length} lies inside the set.
struct interval {
    natural location;
    natural length;
};

// The run lies inside the union of the set shifted down by each shift.
struct shifted_interval {
    std::vector<natural> shifts;
    natural location;
    natural length;
};

// k * {1, ..., length} lies inside the union of the quotients by each divisor.
struct quotient_dilation {
    std::vector<natural> divisors;
    natural k;
    natural length;
};

// All nonempty subset sums ("additive") or products ("multiplicative") are members.
struct generating_sequence {
    std::string mode;
    std::vector<natural> terms;
    bool complement = false; // the sequence lives in the complement of the set
};

struct j_witness {
    natural anchor;
    std::vector<natural> indices;
};

// (n, member divisible by n) for each n checked.
struct divisor_table {
    std::vector<std::pair<natural, natural>> entries;
};

// Every multiple of `a` up to `checked_to` is a member.
struct full_multiples {
    natural a;
    natural checked_to;
};

// (a, multiple of a that is not a member) for each a checked.
struct missing_multiples {
    std::vector<std::pair<natural, natural>> entries;
};

struct strong_antichain {
    std::vector<natural> elements;
    std::size_t strength;
};

struct crt_solution {
    natural x;
    std::vector<natural> moduli;
};

// Levels of k*first and k*second differ by `delta` for every k; no two
// levels of the target differ by that amount.
struct level_gap {
    natural first;
    natural second;
    long delta;
    std::vector<long> achievable;
};

// The target avoids every multiple of `modulus`, which lies in F.
struct residue {
    natural modulus;
};

// The target is finite; every k up to `bound` was tried.
struct finite_target {
    natural bound;
};

struct exhausted {
    natural k_max;
};

// The set is periodic past `offset`; scanning to `scanned_to` settles it.
struct periodic_absence {
    natural period;
    natural offset;
    natural scanned_to;
};

} // namespace cert

using certificate = std::variant<cert::none, cert::dilation, cert::interval, cert::shifted_interval,
                                 cert::quotient_dilation, cert::generating_sequence, cert::j_witness,
                                 cert::divisor_table, cert::full_multiples, cert::missing_multiples,
                                 cert::strong_antichain, cert::crt_solution, cert::level_gap, cert::residue,
                                 cert::finite_target, cert::exhausted, cert::periodic_absence>;

enum class verdict_status { proved, refuted, bounded_for, bounded_against };

inline const char* status_name(verdict_status s) {
    switch (s) {
    case verdict_status::proved: return "proved";
    case verdict_status::refuted: return "refuted";
    case verdict_status::bounded_for: return "bounded-for";
    case verdict_status::bounded_against: return "bounded-against";
    }
    return "?";
}

struct verdict {
    verdict_status status = verdict_status::bounded_against;
    certificate evidence = cert::none{};
    nlohmann::json bounds = nlohmann::json::object();

    bool proved() const { return status == verdict_status::proved; }
    bool refuted() const { return status == verdict_status::refuted; }
    bool bounded() const { return status == verdict_status::bounded_for || status == verdict_status::bounded_against; }

    template <class T>
    const T* as() const { return std::get_if<T>(&evidence); }
};

inline verdict make_verdict(verdict_status s, certificate c, nlohmann::json bounds = nlohmann::json::object()) {
    return verdict{s, std::move(c), std::move(bounds)};
}

namespace cert {

using nlohmann::json;

inline void to_json(json& j, const none&) { j = json{{"kind", "none"}}; }
inline void to_json(json& j, const dilation& c) { j = json{{"kind", "dilation"}, {"k", c.k}, {"prefix", c.prefix}}; }
inline void to_json(json& j, const interval& c) {
    j = json{{"kind", "interval"}, {"location", c.location}, {"length", c.length}};
}
inline void to_json(json& j, const shifted_interval& c) {
    j = json{{"kind", "shifted-interval"}, {"shifts", c.shifts}, {"location", c.location}, {"length", c.length}};
}
inline void to_json(json& j, const quotient_dilation& c) {
    j = json{{"kind", "quotient-dilation"}, {"divisors", c.divisors}, {"k", c.k}, {"length", c.length}};
}
inline void to_json(json& j, const generating_sequence& c) {
    j = json{{"kind", "generating-sequence"}, {"mode", c.mode}, {"terms", c.terms}, {"complement", c.complement}};
}
inline void to_json(json& j, const j_witness& c) {
    j = json{{"kind", "j-witness"}, {"anchor", c.anchor}, {"indices", c.indices}};
}
inline void to_json(json& j, const divisor_table& c) {
    json rows = json::array();
    for (auto [n, a] : c.entries) rows.push_back(json::array({n, a}));
    j = json{{"kind", "divisor-table"}, {"entries", rows}};
}
inline void to_json(json& j, const full_multiples& c) {
    j = json{{"kind", "full-multiples"}, {"a", c.a}, {"checked_to", c.checked_to}};
}
inline void to_json(json& j, const missing_multiples& c) {
    json rows = json::array();
    for (auto [a, m] : c.entries) rows.push_back(json::array({a, m}));
    j = json{{"kind", "missing-multiples"}, {"entries", rows}};
}
inline void to_json(json& j, const strong_antichain& c) {
    j = json{{"kind", "strong-antichain"}, {"elements", c.elements}, {"strength", c.strength}};
}
inline void to_json(json& j, const crt_solution& c) {
    j = json{{"kind", "crt-solution"}, {"x", c.x}, {"moduli", c.moduli}};
}
inline void to_json(json& j, const level_gap& c) {
    j = json{{"kind", "level-certificate"}, {"pair", json::array({c.first, c.second})}, {"delta", c.delta},
             {"achievable", c.achievable}};
}
inline void to_json(json& j, const residue& c) { j = json{{"kind", "residue-certificate"}, {"modulus", c.modulus}}; }
inline void to_json(json& j, const finite_target& c) { j = json{{"kind", "finite-target"}, {"bound", c.bound}}; }
inline void to_json(json& j, const exhausted& c) { j = json{{"kind", "exhausted"}, {"k_max", c.k_max}}; }
inline void to_json(json& j, const periodic_absence& c) {
    j = json{{"kind", "periodic-absence"}, {"period", c.period}, {"offset", c.offset}, {"scanned_to", c.scanned_to}};
}

} // namespace cert

inline nlohmann::json certificate_json(const certificate& c) {
    return std::visit([](const auto& v) { return nlohmann::json(v); }, c);
}

inline nlohmann::json to_json(const verdict& v) {
    return nlohmann::json{{"verdict", status_name(v.status)}, {"certificate", certificate_json(v.evidence)},
                          {"bounds", v.bounds}};
}

namespace detail {
inline std::string join_naturals(const std::vector<natural>& xs, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(xs[i]);
    }
    return out;
}
} // namespace detail

// One-line human summary of a certificate.
inline std::string describe(const certificate& c) {
    using detail::join_naturals;
    struct visitor {
        std::string operator()(const cert::none&) const { return "-"; }
        std::string operator()(const cert::dilation& d) const { return "k=" + std::to_string(d.k); }
        std::string operator()(const cert::interval& d) const {
            return "m=" + std::to_string(d.location) + " run " + std::to_string(d.location + 1) + ".." +
                   std::to_string(d.location + d.length);
        }
        std::string operator()(const cert::shifted_interval& d) const {
            return "F={" + join_naturals(d.shifts) + "} m=" + std::to_string(d.location) + " n=" + std::to_string(d.length);
        }
        std::string operator()(const cert::quotient_dilation& d) const {
            return "F={" + join_naturals(d.divisors) + "} k=" + std::to_string(d.k) + " n=" + std::to_string(d.length);
        }
        std::string operator()(const cert::generating_sequence& d) const {
            return std::string(d.complement ? "complement " : "") + d.mode + " x=(" + join_naturals(d.terms) + ")";
        }
        std::string operator()(const cert::j_witness& d) const {
            return "a=" + std::to_string(d.anchor) + " H={" + join_naturals(d.indices) + "}";
        }
        std::string operator()(const cert::divisor_table& d) const {
            return "divisors 1.." + std::to_string(d.entries.empty() ? 0 : d.entries.back().first) + " covered";
        }
        std::string operator()(const cert::full_multiples& d) const {
            return "a=" + std::to_string(d.a) + " multiples to " + std::to_string(d.checked_to);
        }
        std::string operator()(const cert::missing_multiples& d) const {
            std::string out;
            for (std::size_t i = 0; i < d.entries.size() && i < 6; ++i) {
                if (i) out += ' ';
                out += std::to_string(d.entries[i].first) + ":" + std::to_string(d.entries[i].second);
            }
            if (d.entries.size() > 6) out += " ...";
            return "missing " + out;
        }
        std::string operator()(const cert::strong_antichain& d) const {
            return "C={" + join_naturals(d.elements) + "} s=" + std::to_string(d.strength);
        }
        std::string operator()(const cert::crt_solution& d) const { return "x=" + std::to_string(d.x); }
        std::string operator()(const cert::level_gap& d) const {
            return "pair (" + std::to_string(d.first) + "," + std::to_string(d.second) + ") delta=" + std::to_string(d.delta);
        }
        std::string operator()(const cert::residue& d) const { return "avoids multiples of " + std::to_string(d.modulus); }
        std::string operator()(const cert::finite_target& d) const { return "finite target, k<=" + std::to_string(d.bound); }
        std::string operator()(const cert::exhausted& d) const { return "no k<=" + std::to_string(d.k_max); }
        std::string operator()(const cert::periodic_absence& d) const {
            return "period " + std::to_string(d.period) + " scanned to " + std::to_string(d.scanned_to);
        }
    };
    return std::visit(visitor{}, c);
}

} // namespace felab
