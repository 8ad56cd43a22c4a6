#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "felab/arith.hpp"

namespace felab::setlang {

enum class expr_kind {
    naturals,
    primes,
    level,
    mult,
    ap,
    finite,
    set_union,
    set_inter,
    complement,
    dilate,
    quotient,
    shift,
    up,
    down,
    fs,
    fp,
    pseudo,
    construct,
};

enum class seq_rule { list, exgamma, fastgrowth, sidon, primes_sub };

struct sequence_spec {
    seq_rule rule = seq_rule::list;
    std::vector<natural> values; // list terms, or explicit prime indices for primes_sub
    natural count = 0;           // length for generated rules
    std::string parity;          // primes_sub: "odd" / "even"; empty means explicit indices

    bool operator==(const sequence_spec&) const = default;
};

using fixture_arg = std::variant<natural, std::vector<natural>, std::string>;

struct set_expr {
    expr_kind kind = expr_kind::naturals;
    std::vector<natural> params;
    std::vector<set_expr> operands;
    sequence_spec sequence;
    std::string fixture;
    std::vector<fixture_arg> fixture_args;

    bool operator==(const set_expr& other) const {
        return kind == other.kind && params == other.params && operands == other.operands &&
               sequence == other.sequence && fixture == other.fixture && fixture_args == other.fixture_args;
    }
};

// Builders, mostly for tests and library callers.
namespace make {
inline set_expr naturals() { return {expr_kind::naturals}; }
inline set_expr primes() { return {expr_kind::primes}; }
inline set_expr level(natural n) { return {expr_kind::level, {n}}; }
inline set_expr mult(natural k) { return {expr_kind::mult, {k}}; }
inline set_expr ap(natural a, natural d) { return {expr_kind::ap, {a, d}}; }
inline set_expr finite(std::vector<natural> xs) {
    return {expr_kind::finite, finite_set(std::move(xs)).elements()};
}
inline set_expr unite(std::vector<set_expr> xs) { return {expr_kind::set_union, {}, std::move(xs)}; }
inline set_expr intersect(std::vector<set_expr> xs) { return {expr_kind::set_inter, {}, std::move(xs)}; }
inline set_expr complement(set_expr x) { return {expr_kind::complement, {}, {std::move(x)}}; }
inline set_expr dilate(natural k, set_expr x) { return {expr_kind::dilate, {k}, {std::move(x)}}; }
inline set_expr quotient(set_expr x, natural n) { return {expr_kind::quotient, {n}, {std::move(x)}}; }
inline set_expr shift(set_expr x, natural t) { return {expr_kind::shift, {t}, {std::move(x)}}; }
inline set_expr up(set_expr x) { return {expr_kind::up, {}, {std::move(x)}}; }
inline set_expr down(set_expr x) { return {expr_kind::down, {}, {std::move(x)}}; }
inline set_expr fs(std::vector<natural> xs) {
    set_expr e{expr_kind::fs};
    e.sequence.values = std::move(xs);
    return e;
}
inline set_expr fp(std::vector<natural> xs) {
    set_expr e{expr_kind::fp};
    e.sequence.values = std::move(xs);
    return e;
}
inline set_expr pseudo(std::vector<set_expr> chain) { return {expr_kind::pseudo, {}, std::move(chain)}; }
inline set_expr construct(std::string name, std::vector<fixture_arg> args = {}) {
    set_expr e{expr_kind::construct};
    e.fixture = std::move(name);
    e.fixture_args = std::move(args);
    return e;
}
} // namespace make

struct fixture_info {
    std::string_view name;
    std::string_view usage;
};

inline const std::vector<fixture_info>& fixture_catalog() {
    static const std::vector<fixture_info> catalog{
        {"exgamma", "exgamma(count): a_1=1, a_n least multiple of n above the running sum"},
        {"fastgrowth", "fastgrowth(count): FS set of a_n = n + running sum + 1"},
        {"sidon", "sidon(count): greedy distinct-difference sequence"},
        {"thick_nonmaxstar", "thick_nonmaxstar(n_max): union of runs F_n skipping a multiple of each n"},
        {"equal_exponent", "equal_exponent(): n >= 2 whose prime exponents are all equal"},
        {"fp_primes", "fp_primes(odd|even, count) or fp_primes([indices]): FP set of selected primes"},
        {"prophier", "prophier([primes], exponent, count, ...): products of distinct primes per block"},
        {"levelfix", "levelfix(n, [positions], [primes]): level n with fixed sorted-factor entries"},
        {"sidon_levels", "sidon_levels(count, 0|1): union of levels at even (0) or odd (1) Sidon positions"},
    };
    return catalog;
}

inline std::string catalog_listing() {
    std::string out;
    for (const auto& f : fixture_catalog()) {
        out += "  ";
        out += f.usage;
        out += '\n';
    }
    return out;
}

namespace detail {

inline bool is_nat(const fixture_arg& a) { return std::holds_alternative<natural>(a); }
inline bool is_list(const fixture_arg& a) { return std::holds_alternative<std::vector<natural>>(a); }
inline bool is_str(const fixture_arg& a) { return std::holds_alternative<std::string>(a); }

} // namespace detail

// Throws input_error with a readable message when the arguments do not fit.
inline void validate_fixture(const std::string& name, const std::vector<fixture_arg>& args) {
    using namespace detail;
    auto fail = [&](const std::string& why) { throw input_error("construct(" + name + "): " + why); };
    auto positive = [&](std::size_t i) {
        if (!is_nat(args[i]) || std::get<natural>(args[i]) == 0) fail("argument " + std::to_string(i + 1) + " must be a natural >= 1");
    };
    bool known = false;
    for (const auto& f : fixture_catalog()) known = known || f.name == name;
    if (!known) throw input_error("unknown construction '" + name + "'; available:\n" + catalog_listing());

    if (name == "exgamma" || name == "fastgrowth" || name == "sidon" || name == "thick_nonmaxstar") {
        if (args.size() != 1) fail("expects one count");
        positive(0);
    } else if (name == "equal_exponent") {
        if (!args.empty()) fail("takes no arguments");
    } else if (name == "fp_primes") {
        if (args.size() == 1) {
            if (!is_list(args[0]) || std::get<std::vector<natural>>(args[0]).empty()) fail("expects a nonempty index list");
            for (natural i : std::get<std::vector<natural>>(args[0]))
                if (i == 0) fail("prime indices start at 1");
        } else if (args.size() == 2) {
            if (!is_str(args[0])) fail("first argument must be odd or even");
            const auto& p = std::get<std::string>(args[0]);
            if (p != "odd" && p != "even") fail("first argument must be odd or even");
            positive(1);
        } else {
            fail("expects (odd|even, count) or ([indices])");
        }
    } else if (name == "prophier") {
        if (args.empty() || args.size() % 3 != 0) fail("expects triples ([primes], exponent, count)");
        for (std::size_t i = 0; i < args.size(); i += 3) {
            if (!is_list(args[i])) fail("block prime set must be a list");
            positive(i + 1);
            positive(i + 2);
        }
    } else if (name == "levelfix") {
        if (args.size() != 3 || !is_nat(args[0]) || !is_list(args[1]) || !is_list(args[2]))
            fail("expects (n, [positions], [primes])");
        positive(0);
    } else if (name == "sidon_levels") {
        if (args.size() != 2 || !is_nat(args[0]) || !is_nat(args[1])) fail("expects (count, parity)");
        positive(0);
        if (std::get<natural>(args[1]) > 1) fail("parity must be 0 or 1");
    }
}

class parser {
public:
    explicit parser(std::string_view text) : text_(text) {}

    set_expr parse_all() {
        skip_space();
        set_expr e = parse_expr();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    struct mark {
        std::size_t line, column;
    };

    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, line_, col_); }
    [[noreturn]] void fail_at(const mark& m, const std::string& msg) const { throw parse_error(msg, m.line, m.column); }

    mark here() const { return {line_, col_}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
        if (text_[pos_] != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    bool at_ident() {
        skip_space();
        return pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
    }

    bool at_number() {
        skip_space();
        return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }

    std::string ident() {
        skip_space();
        std::string out;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            out += text_[pos_];
            advance();
        }
        if (out.empty()) fail("expected a name");
        return out;
    }

    natural number() {
        skip_space();
        if (!at_number()) fail("expected a natural number");
        natural v = 0;
        mark m = here();
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            auto next = checked_mul(v, 10);
            if (next) next = checked_add(*next, static_cast<natural>(text_[pos_] - '0'));
            if (!next) fail_at(m, "number does not fit in 64 bits");
            v = *next;
            advance();
        }
        return v;
    }

    std::string quoted() {
        expect('"');
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            out += text_[pos_];
            advance();
        }
        if (pos_ >= text_.size()) fail("unterminated string");
        advance();
        return out;
    }

    std::vector<natural> natlist(char close) {
        std::vector<natural> out;
        if (peek(close)) {
            advance();
            return out;
        }
        for (;;) {
            out.push_back(number());
            if (peek(',')) {
                advance();
                continue;
            }
            expect(close);
            return out;
        }
    }

    natural positive_number(const char* what) {
        mark m = here();
        natural v = number();
        if (v == 0) fail_at(m, std::string(what) + " must be >= 1");
        return v;
    }

    void comma() { expect(','); }

    set_expr parse_expr() {
        skip_space();
        mark m = here();
        if (peek('{')) {
            advance();
            mark inner = here();
            auto xs = natlist('}');
            for (natural x : xs)
                if (x == 0) fail_at(inner, "set elements must be >= 1");
            return make::finite(std::move(xs));
        }
        if (!at_ident()) fail("expected a set expression");
        std::string name = ident();
        if (name == "N") return make::naturals();
        if (name == "primes") return make::primes();
        if (name == "odd") return make::ap(1, 2);

        if (!peek('(')) fail_at(m, "unknown set name '" + name + "'");
        advance();
        set_expr e;
        if (name == "mult") {
            e = make::mult(positive_number("mult modulus"));
        } else if (name == "level") {
            e = make::level(number());
        } else if (name == "ap") {
            natural a = positive_number("ap start");
            comma();
            natural d = positive_number("ap difference");
            e = make::ap(a, d);
        } else if (name == "union" || name == "inter") {
            std::vector<set_expr> xs{parse_expr()};
            while (peek(',')) {
                advance();
                xs.push_back(parse_expr());
            }
            if (xs.size() < 2) fail_at(m, name + " needs at least two operands");
            e = name == "union" ? make::unite(std::move(xs)) : make::intersect(std::move(xs));
        } else if (name == "compl" || name == "up" || name == "down") {
            set_expr x = parse_expr();
            e = name == "compl" ? make::complement(std::move(x)) : name == "up" ? make::up(std::move(x)) : make::down(std::move(x));
        } else if (name == "dilate") {
            natural k = positive_number("dilation factor");
            comma();
            e = make::dilate(k, parse_expr());
        } else if (name == "quot") {
            set_expr x = parse_expr();
            comma();
            e = make::quotient(std::move(x), positive_number("quotient divisor"));
        } else if (name == "shift") {
            set_expr x = parse_expr();
            comma();
            e = make::shift(std::move(x), number());
        } else if (name == "fs" || name == "fp") {
            e.kind = name == "fs" ? expr_kind::fs : expr_kind::fp;
            e.sequence = parse_sequence();
        } else if (name == "pseudo") {
            std::vector<set_expr> xs{parse_expr()};
            while (peek(',')) {
                advance();
                xs.push_back(parse_expr());
            }
            e = make::pseudo(std::move(xs));
        } else if (name == "construct") {
            e = parse_construct(m);
        } else {
            fail_at(m, "unknown set name '" + name + "'");
        }
        expect(')');
        return e;
    }

    sequence_spec parse_sequence() {
        sequence_spec s;
        skip_space();
        if (peek('[')) {
            advance();
            mark inner = here();
            s.values = natlist(']');
            if (s.values.empty()) fail_at(inner, "sequence must be nonempty");
            for (natural x : s.values)
                if (x == 0) fail_at(inner, "sequence terms must be >= 1");
            return s;
        }
        mark m = here();
        if (!at_ident()) fail("expected a sequence");
        std::string rule = ident();
        expect('(');
        if (rule == "exgamma" || rule == "fastgrowth" || rule == "sidon") {
            s.rule = rule == "exgamma" ? seq_rule::exgamma : rule == "fastgrowth" ? seq_rule::fastgrowth : seq_rule::sidon;
            s.count = positive_number("sequence length");
        } else if (rule == "primes_sub") {
            s.rule = seq_rule::primes_sub;
            if (peek('[')) {
                advance();
                mark inner = here();
                s.values = natlist(']');
                if (s.values.empty()) fail_at(inner, "index list must be nonempty");
                for (natural x : s.values)
                    if (x == 0) fail_at(inner, "prime indices start at 1");
            } else {
                mark pm = here();
                s.parity = at_ident() ? ident() : quoted();
                if (s.parity != "odd" && s.parity != "even") fail_at(pm, "primes_sub parity must be odd or even");
                comma();
                s.count = positive_number("sequence length");
            }
        } else {
            fail_at(m, "unknown sequence rule '" + rule + "'");
        }
        expect(')');
        return s;
    }

    set_expr parse_construct(const mark& m) {
        std::string name;
        if (peek('"'))
            name = quoted();
        else
            name = ident();
        std::vector<fixture_arg> args;
        while (peek(',')) {
            advance();
            skip_space();
            if (peek('[')) {
                advance();
                args.emplace_back(natlist(']'));
            } else if (at_number()) {
                args.emplace_back(number());
            } else if (peek('"')) {
                args.emplace_back(quoted());
            } else if (at_ident()) {
                args.emplace_back(ident());
            } else {
                fail("expected a construction argument");
            }
        }
        try {
            validate_fixture(name, args);
        } catch (const input_error& ex) {
            fail_at(m, ex.what());
        }
        return make::construct(std::move(name), std::move(args));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

inline set_expr parse(std::string_view text) { return parser(text).parse_all(); }

namespace detail {

inline std::string join(const std::vector<natural>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

inline bool plain_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

inline std::string unparse_sequence(const sequence_spec& s) {
    switch (s.rule) {
    case seq_rule::list: return "[" + join(s.values) + "]";
    case seq_rule::exgamma: return "exgamma(" + std::to_string(s.count) + ")";
    case seq_rule::fastgrowth: return "fastgrowth(" + std::to_string(s.count) + ")";
    case seq_rule::sidon: return "sidon(" + std::to_string(s.count) + ")";
    case seq_rule::primes_sub:
        if (s.parity.empty()) return "primes_sub([" + join(s.values) + "])";
        return "primes_sub(" + s.parity + "," + std::to_string(s.count) + ")";
    }
    return {};
}

} // namespace detail

// Canonical text; parse(unparse(e)) == e.
inline std::string unparse(const set_expr& e) {
    using detail::join;
    auto operand_list = [&]() {
        std::string out;
        for (std::size_t i = 0; i < e.operands.size(); ++i) {
            if (i) out += ',';
            out += unparse(e.operands[i]);
        }
        return out;
    };
    switch (e.kind) {
    case expr_kind::naturals: return "N";
    case expr_kind::primes: return "primes";
    case expr_kind::level: return "level(" + std::to_string(e.params[0]) + ")";
    case expr_kind::mult: return "mult(" + std::to_string(e.params[0]) + ")";
    case expr_kind::ap: return "ap(" + join(e.params) + ")";
    case expr_kind::finite: return "{" + join(e.params) + "}";
    case expr_kind::set_union: return "union(" + operand_list() + ")";
    case expr_kind::set_inter: return "inter(" + operand_list() + ")";
    case expr_kind::complement: return "compl(" + operand_list() + ")";
    case expr_kind::dilate: return "dilate(" + std::to_string(e.params[0]) + "," + operand_list() + ")";
    case expr_kind::quotient: return "quot(" + operand_list() + "," + std::to_string(e.params[0]) + ")";
    case expr_kind::shift: return "shift(" + operand_list() + "," + std::to_string(e.params[0]) + ")";
    case expr_kind::up: return "up(" + operand_list() + ")";
    case expr_kind::down: return "down(" + operand_list() + ")";
    case expr_kind::fs: return "fs(" + detail::unparse_sequence(e.sequence) + ")";
    case expr_kind::fp: return "fp(" + detail::unparse_sequence(e.sequence) + ")";
    case expr_kind::pseudo: return "pseudo(" + operand_list() + ")";
    case expr_kind::construct: {
        std::string out = "construct(" + e.fixture;
        for (const auto& a : e.fixture_args) {
            out += ',';
            if (auto n = std::get_if<natural>(&a)) out += std::to_string(*n);
            else if (auto l = std::get_if<std::vector<natural>>(&a)) out += "[" + join(*l) + "]";
            else {
                const auto& s = std::get<std::string>(a);
                out += detail::plain_identifier(s) ? s : "\"" + s + "\"";
            }
        }
        return out + ")";
    }
    }
    return {};
}

inline const char* kind_name(expr_kind k) {
    switch (k) {
    case expr_kind::naturals: return "naturals";
    case expr_kind::primes: return "primes";
    case expr_kind::level: return "level";
    case expr_kind::mult: return "mult";
    case expr_kind::ap: return "ap";
    case expr_kind::finite: return "finite";
    case expr_kind::set_union: return "union";
    case expr_kind::set_inter: return "inter";
    case expr_kind::complement: return "compl";
    case expr_kind::dilate: return "dilate";
    case expr_kind::quotient: return "quot";
    case expr_kind::shift: return "shift";
    case expr_kind::up: return "up";
    case expr_kind::down: return "down";
    case expr_kind::fs: return "fs";
    case expr_kind::fp: return "fp";
    case expr_kind::pseudo: return "pseudo";
    case expr_kind::construct: return "construct";
    }
    return "?";
}

} // namespace felab::setlang
