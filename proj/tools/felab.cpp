#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "felab/felab.hpp"

using namespace felab;
using nlohmann::json;

namespace {

enum exit_code : int { ok_proved = 0, ok_refuted = 1, ok_bounded = 2, bad_usage = 3, bad_resource = 4, inconsistent = 5 };

struct run_config {
    natural horizon = 100'000;
    std::string format = "table";
    bool json_flag = false;
    std::string cache;
    std::string batch;

    bool as_json() const { return json_flag || format == "json"; }
};

int status_exit(const verdict& v) {
    if (v.proved()) return ok_proved;
    if (v.refuted()) return ok_refuted;
    return ok_bounded;
}

setlang::eval_options options(const run_config& cfg) {
    setlang::eval_options opt;
    std::string path = cfg.cache;
    if (path.empty())
        if (const char* env = std::getenv("FELAB_CACHE")) path = env;
    if (!path.empty() && cfg.horizon >= 2) opt.sieve = sieve_cache::obtain(path, cfg.horizon).table;
    return opt;
}

// "@path" reads an explicit set file; anything else is a set expression.
setlang::set_expr read_expr(const std::string& text) {
    if (!text.empty() && text[0] == '@') return setlang::make::finite(set_file::read(text.substr(1)));
    return setlang::parse(text);
}

lazy_set evaluate(const std::string& text, const run_config& cfg) {
    if (cfg.horizon == 0) throw input_error("--horizon must be >= 1");
    return setlang::eval(read_expr(text), cfg.horizon, options(cfg));
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string set_line(const std::string& expr, const lazy_set& s) {
    std::string out = expr + "  [" + exactness_name(s.kind()) + ", H=" + std::to_string(s.horizon());
    if (!s.is_exact()) out += ", exact to " + std::to_string(s.exact_horizon());
    return out + "]";
}

void print_verdict_table(const std::string& property, const std::string& expr, const lazy_set& s, const verdict& v) {
    std::cout << "set       " << set_line(expr, s) << '\n'
              << "property  " << property << '\n'
              << "verdict   " << status_name(v.status) << '\n'
              << "evidence  " << describe(v.evidence) << '\n'
              << "bounds    " << v.bounds.dump() << '\n';
}

// ---- check ------------------------------------------------------------------

struct check_args {
    std::string property;
    std::string expr;
    natural n = 10;
    natural divisor_bound = 20;
    std::size_t ip_length = 3;
    natural t_max = 3;
    std::optional<natural> a_max;
    std::size_t h_max = 4;
    std::size_t strength = 4;
    std::vector<natural> pool;
    std::size_t budget = largeness::default_ip_budget;
};

std::string canonical_property(std::string p) {
    for (auto& c : p) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (p == "a-ip*") p = "a-ip-star";
    if (p == "max*") p = "max-star";
    if (p == "nmax*") p = "nmax-star";
    static const std::vector<std::pair<std::string, std::string>> names{
        {"a-thick", "A-thick"}, {"m-thick", "M-thick"}, {"a-pcws", "A-pcws"}, {"m-pcws", "M-pcws"},
        {"a-ip", "A-IP"},       {"m-ip", "M-IP"},       {"a-ip-star", "A-IP*"}, {"a-j", "A-J"},
        {"m-j", "M-J"},         {"max", "MAX"},         {"nmax", "NMAX"},       {"max-star", "MAX*"},
        {"nmax-star", "NMAX*"}};
    for (const auto& [cli, lib] : names)
        if (p == cli) return lib;
    std::string all;
    for (const auto& [cli, lib] : names) all += " " + cli;
    throw input_error("unknown property '" + p + "'; known:" + all);
}

verdict run_check(const std::string& prop, const lazy_set& s, const check_args& a, natural h) {
    using namespace largeness;
    if (prop == "A-thick") return a_thick_check(s, a.n, h);
    if (prop == "M-thick") return mthick_check(s, a.n, h);
    if (prop == "A-pcws") return a_pcws_check(s, a.t_max, a.n, h);
    if (prop == "M-pcws") return m_pcws_check(s, a.t_max, a.n, h);
    if (prop == "A-IP") return ip_search(s, a.ip_length, h, ip_mode::additive, a.budget);
    if (prop == "M-IP") return ip_search(s, a.ip_length, h, ip_mode::multiplicative, a.budget);
    if (prop == "A-IP*") return ip_star_check(s, a.ip_length, h, a.budget);
    if (prop == "A-J") return j_check(s, default_additive_j_funcs(a.h_max), a.a_max.value_or(1000), a.h_max, ip_mode::additive);
    if (prop == "M-J")
        return j_check(s, default_multiplicative_j_funcs(a.h_max), a.a_max.value_or(1000), a.h_max, ip_mode::multiplicative);
    if (prop == "MAX") return max_check(s, a.divisor_bound, h);
    if (prop == "NMAX") return nmax_refute(s, a.strength, h, a.pool);
    if (prop == "MAX*") return maxstar_check(s, a.a_max.value_or(20), h);
    if (prop == "NMAX*") return nmaxstar_check(s, a.strength, h);
    throw input_error("unknown property " + prop);
}

int cmd_check(const check_args& a, const run_config& cfg) {
    std::string prop = canonical_property(a.property);
    lazy_set s = evaluate(a.expr, cfg);
    verdict v = run_check(prop, s, a, cfg.horizon);
    if (cfg.as_json())
        print_json(report::verdict_doc("check", prop, a.expr, s, v));
    else
        print_verdict_table(prop, a.expr, s, v);
    return status_exit(v);
}

// ---- fe / me ------------------------------------------------------------------

struct fe_args {
    std::string a, b;
    std::size_t prefix = embed::default_prefix;
    natural k_max = embed::default_k_max;
    std::size_t m = 2;
};

// Re-run the dilation scan and the quotient-intersection oracle on the same
// prefix and bound; they must return the same least witness.
json oracle_agreement(const lazy_set& a, const lazy_set& b, const fe_args& f, const verdict& v) {
    finite_set pre = embed::enumerated_prefix(a, f.prefix);
    natural bound = v.as<cert::dilation>() ? v.as<cert::dilation>()->k : std::min<natural>(f.k_max, 10'000);
    json j{{"k_bound", bound}};
    if (pre.empty()) {
        j["status"] = "n/a";
        return j;
    }
    auto show = [](const embed::fe_outcome& o) -> json {
        if (embed::is_witness(o)) return std::get<cert::dilation>(o).k;
        return "none";
    };
    try {
        auto scan = embed::fe_witness(pre, b, bound);
        auto oracle = embed::fe_fip_oracle(pre, b, bound);
        j["scan"] = show(scan);
        j["oracle"] = show(oracle);
        j["status"] = j["scan"] == j["oracle"] ? "agree" : "disagree";
    } catch (const precision_error& ex) {
        j["status"] = "n/a";
        j["reason"] = ex.what();
    }
    return j;
}

int cmd_fe(const fe_args& f, const run_config& cfg) {
    lazy_set a = evaluate(f.a, cfg);
    lazy_set b = evaluate(f.b, cfg);
    verdict v = embed::fe_prefix_check(a, b, f.prefix, f.k_max);
    json agree = oracle_agreement(a, b, f, v);
    if (cfg.as_json()) {
        json j{{"kind", "fe"}, {"source", report::set_summary(f.a, a)}, {"target", report::set_summary(f.b, b)}};
        j.update(to_json(v));
        j["oracle_agreement"] = agree;
        print_json(j);
    } else {
        std::cout << "A         " << set_line(f.a, a) << '\n'
                  << "B         " << set_line(f.b, b) << '\n'
                  << "verdict   " << status_name(v.status) << '\n'
                  << "evidence  " << describe(v.evidence) << '\n'
                  << "bounds    " << v.bounds.dump() << '\n'
                  << "oracle    " << agree["status"].get<std::string>();
        if (agree.contains("oracle")) std::cout << " (scan " << agree["scan"].dump() << ", oracle " << agree["oracle"].dump() << ")";
        std::cout << '\n';
    }
    if (agree["status"] == "disagree") return inconsistent;
    return status_exit(v);
}

int cmd_me(const fe_args& f, const run_config& cfg) {
    lazy_set a = evaluate(f.a, cfg);
    lazy_set b = evaluate(f.b, cfg);
    verdict v = embed::me_check(a, b, f.m, cfg.horizon, f.k_max);
    if (cfg.as_json()) {
        json j{{"kind", "me"}, {"m", f.m}, {"source", report::set_summary(f.a, a)}, {"target", report::set_summary(f.b, b)}};
        j.update(to_json(v));
        print_json(j);
    } else {
        std::cout << "A         " << set_line(f.a, a) << '\n'
                  << "B         " << set_line(f.b, b) << '\n'
                  << "m         " << f.m << '\n'
                  << "verdict   " << status_name(v.status) << '\n'
                  << "evidence  " << describe(v.evidence) << '\n'
                  << "bounds    " << v.bounds.dump() << '\n';
    }
    return status_exit(v);
}

// ---- diagram ----------------------------------------------------------------

largeness::property_params diagram_params(const check_args& a, natural h) {
    largeness::property_params p;
    p.horizon = h;
    p.run_length = a.n;
    p.shift_cap = a.t_max;
    p.ip_length = a.ip_length;
    p.j_anchor_max = a.a_max.value_or(1000);
    p.j_index_max = a.h_max;
    p.divisor_bound = a.divisor_bound;
    p.antichain_strength = a.strength;
    p.ip_budget = a.budget;
    return p;
}

json diagram_json(const std::string& expr, const check_args& a, const run_config& cfg) {
    lazy_set s = evaluate(expr, cfg);
    auto r = largeness::diagram_report(s, diagram_params(a, cfg.horizon));
    return report::largeness(expr, s, r);
}

void print_diagram_table(const json& j) {
    std::cout << "set  " << j["set"]["expr"].get<std::string>() << "  [" << j["set"]["exactness"].get<std::string>()
              << ", H=" << j["set"]["horizon"].get<natural>() << "]\n";
    for (const auto& row : j["properties"]) {
        std::string evidence;
        if (row.contains("reason")) {
            evidence = row["reason"].get<std::string>();
        } else {
            evidence = row["summary"].get<std::string>();
        }
        std::cout << "  " << std::left << std::setw(12) << row["property"].get<std::string>() << std::setw(17)
                  << row["verdict"].get<std::string>() << evidence << '\n';
    }
    std::cout << "audits\n";
    for (const auto& a : j["audits"])
        std::cout << "  " << std::left << std::setw(40) << a["implication"].get<std::string>() << std::setw(13)
                  << a["status"].get<std::string>() << a["detail"].get<std::string>() << '\n';
}

int cmd_diagram(const check_args& a, const run_config& cfg) {
    json j = diagram_json(a.expr, a, cfg);
    if (cfg.as_json())
        print_json(j);
    else
        print_diagram_table(j);
    return j["consistent"].get<bool>() ? ok_proved : inconsistent;
}

// ---- batch: one expression per line, one compact JSON object per line --------

int classify(const std::exception_ptr& ep, std::string& msg) {
    try {
        std::rethrow_exception(ep);
    } catch (const resource_error& e) {
        msg = e.what();
        return bad_resource;
    } catch (const precision_error& e) {
        msg = e.what();
        return bad_resource;
    } catch (const input_error& e) {
        msg = e.what();
        return bad_usage;
    } catch (const parse_error& e) {
        msg = e.what();
        return bad_usage;
    } catch (const inapplicable_error& e) {
        msg = e.what();
        return bad_usage;
    } catch (const std::bad_alloc&) {
        msg = "out of memory";
        return bad_resource;
    } catch (const std::exception& e) {
        msg = e.what();
        return inconsistent;
    }
}

int run_batch(const std::string& path, const std::function<json(const std::string&)>& one) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open batch file '" + path + "'");
    std::string line;
    int worst = 0;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        std::string expr = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
        json out;
        try {
            out = one(expr);
        } catch (...) {
            std::string msg;
            int code = classify(std::current_exception(), msg);
            out = json{{"kind", "error"}, {"line", lineno}, {"expr", expr}, {"error", msg}, {"exit", code}};
            worst = std::max(worst, code);
        }
        if (out.contains("consistent") && !out["consistent"].get<bool>()) worst = std::max<int>(worst, inconsistent);
        std::cout << out.dump() << '\n';
    }
    return worst;
}

// ---- construct --------------------------------------------------------------

struct construct_args {
    std::string name;
    std::vector<std::string> params;
    std::string emit;
};

std::string fixture_text(const construct_args& c) {
    std::string text = "construct(" + c.name;
    for (const auto& p : c.params) text += "," + p;
    return text + ")";
}

int cmd_construct(const construct_args& c, const run_config& cfg) {
    bool known = false;
    for (const auto& f : setlang::fixture_catalog()) known = known || f.name == c.name;
    if (!known) {
        std::cerr << "felab: unknown construction '" << c.name << "'\ncatalog:\n" << setlang::catalog_listing();
        return bad_usage;
    }
    std::string text = fixture_text(c);
    setlang::set_expr e = setlang::parse(text);
    lazy_set s = setlang::eval(e, cfg.horizon, options(cfg));

    json j{{"kind", "construct"}, {"name", c.name}, {"expr", setlang::unparse(e)}, {"set", report::set_summary(text, s)}};
    auto count = [&] { return std::get<natural>(e.fixture_args[0]); };
    std::vector<natural> terms;
    if (c.name == "exgamma") terms = constructions::gen_exgamma(count());
    if (c.name == "fastgrowth") terms = constructions::gen_fastgrowth(count());
    if (c.name == "sidon") terms = constructions::gen_sidon_levels(count());
    if (!terms.empty()) j["terms"] = terms;
    if (c.name == "thick_nonmaxstar") {
        auto tb = constructions::gen_thick_nonmaxstar(count());
        j["blocks"] = tb.blocks;
        j["avoided"] = tb.avoided;
    }
    if (c.name == "fp_primes") {
        seq::prime_selection sel = setlang::detail::fixture_selection(e);
        std::size_t n = sel.parity.empty() ? sel.indices.size() : std::get<natural>(e.fixture_args[1]);
        j["generators"] = seq::selected_primes(sel, n);
        j["complementary_primes"] = seq::complementary_primes(sel, n);
    }
    if (c.name == "sidon_levels") j["levels"] = setlang::detail::sidon_levels_of(e);
    std::vector<natural> members(s.elements().begin(), s.elements().end());
    j["members"] = members;

    if (!c.emit.empty()) {
        std::ofstream out(c.emit);
        if (!out) throw input_error("cannot write '" + c.emit + "'");
        set_file::write(out, members,
                        {"felab construct " + setlang::unparse(e), "horizon " + std::to_string(cfg.horizon),
                         std::string("exactness ") + exactness_name(s.kind()) +
                             (s.is_exact() ? "" : " (exact to " + std::to_string(s.exact_horizon()) + ")")});
        j["emitted"] = c.emit;
    }

    if (cfg.as_json()) {
        print_json(j);
        return ok_proved;
    }
    auto line = [](const std::vector<natural>& xs) {
        std::string out;
        for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + std::to_string(xs[i]);
        return out;
    };
    if (!terms.empty()) std::cout << line(terms) << '\n';
    if (j.contains("blocks")) {
        for (std::size_t n = 0; n < j["blocks"].size(); ++n)
            std::cout << "F_" << n + 1 << " = {" << line(j["blocks"][n].get<std::vector<natural>>()) << "}  a_" << n + 1
                      << " = " << j["avoided"][n].get<natural>() << '\n';
    }
    if (j.contains("generators"))
        std::cout << "generators " << line(j["generators"]) << "\ncomplementary primes " << line(j["complementary_primes"]) << '\n';
    if (j.contains("levels")) std::cout << "levels " << line(j["levels"]) << '\n';
    if (terms.empty()) {
        std::cout << set_line(setlang::unparse(e), s) << '\n';
        constexpr std::size_t shown = 200;
        std::vector<natural> head(members.begin(), members.begin() + std::min(shown, members.size()));
        std::cout << line(head) << (members.size() > shown ? " ..." : "") << '\n';
    }
    if (!c.emit.empty()) std::cout << "wrote " << members.size() << " elements to " << c.emit << '\n';
    return ok_proved;
}

// ---- chain / atlas / parse ----------------------------------------------------

int cmd_chain(std::size_t depth, std::size_t per_level, bool verify, const run_config& cfg) {
    auto c = embed::decreasing_chain(depth, per_level);
    std::optional<embed::chain_check> check;
    if (verify) check = embed::verify_chain(c);
    if (cfg.as_json()) {
        print_json(report::chain(c, check ? &*check : nullptr));
    } else {
        for (std::size_t n = 0; n < c.levels.size(); ++n) {
            std::cout << "A_" << n << " = {";
            for (std::size_t i = 0; i < c.levels[n].size(); ++i) std::cout << (i ? "," : "") << c.levels[n][i];
            std::cout << ",...}";
            if (n > 0) std::cout << "  drops " << c.dropped[n - 1].first;
            std::cout << '\n';
            for (const auto& r : c.log)
                if (r.level == n)
                    std::cout << "    {" << r.blocked[0] << "," << r.blocked[1] << "} does not embed: finite target, k<="
                              << r.bound << '\n';
        }
        if (check) {
            std::cout << "verify " << (check->ok ? "PASS" : "FAIL") << '\n';
            for (const auto& p : check->problems) std::cout << "  " << p << '\n';
        }
    }
    return check && !check->ok ? inconsistent : ok_proved;
}

int cmd_atlas(unsigned n, bool exhaustive, const run_config& cfg) {
    auto r = largeness::poset_atlas(n, exhaustive);
    if (cfg.as_json()) {
        print_json(report::atlas(r));
    } else {
        std::cout << "divisor poset on {1.." << n << "}\n"
                  << "  up-closed sets        " << r.upset_count;
        if (r.brute_upset_count) std::cout << " (brute force " << *r.brute_upset_count << ", down-closed " << *r.brute_downset_count << ")";
        std::cout << "\n  subsets audited       " << r.subsets_checked << (r.exhaustive ? " (all)" : " (sample)") << '\n'
                  << "  MAX / MAX* sets       " << r.max_sets << " / " << r.maxstar_sets << '\n'
                  << "  (i)   MAX iff down-closure is everything      " << r.max_violations << " violations\n"
                  << "  (ii)  MAX* iff contains a principal up-set    " << r.maxstar_violations << " violations\n"
                  << "  (iii) MAX*(A) iff not MAX(complement)         " << r.duality_violations << " violations\n"
                  << "  complements of up-sets are down-sets          " << r.complement_violations << " violations\n"
                  << "duality check " << (r.ok() ? "PASS" : "FAIL") << '\n';
    }
    return r.ok() ? ok_proved : inconsistent;
}

json ast_json(const setlang::set_expr& e) {
    json j{{"kind", setlang::kind_name(e.kind)}};
    if (!e.params.empty()) j["params"] = e.params;
    if (!e.operands.empty()) {
        json ops = json::array();
        for (const auto& o : e.operands) ops.push_back(ast_json(o));
        j["operands"] = ops;
    }
    if (e.kind == setlang::expr_kind::construct) j["fixture"] = e.fixture;
    return j;
}

void print_ast(const setlang::set_expr& e, int depth) {
    std::cout << std::string(2 * depth, ' ') << setlang::kind_name(e.kind);
    if (e.kind == setlang::expr_kind::construct || e.kind == setlang::expr_kind::fs || e.kind == setlang::expr_kind::fp ||
        e.kind == setlang::expr_kind::finite)
        std::cout << "  " << setlang::unparse(e);
    else
        for (natural p : e.params) std::cout << ' ' << p;
    std::cout << '\n';
    for (const auto& o : e.operands) print_ast(o, depth + 1);
}

int cmd_parse(const std::string& text, const run_config& cfg) {
    setlang::set_expr e = read_expr(text);
    if (cfg.as_json()) {
        print_json(json{{"kind", "parse"}, {"canonical", setlang::unparse(e)}, {"ast", ast_json(e)}});
    } else {
        std::cout << setlang::unparse(e) << '\n';
        print_ast(e, 0);
    }
    return ok_proved;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"felab: finite embeddability and largeness checks for sets of naturals"};
    app.require_subcommand(1);
    app.fallthrough();
    run_config cfg;
    app.add_option("--horizon", cfg.horizon, "evaluation horizon H")->check(CLI::Range(natural{1}, natural{50'000'000}));
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"table", "json"}));
    app.add_flag("--json", cfg.json_flag, "same as --format json");
    app.add_option("--cache", cfg.cache, "sieve cache file (default: $FELAB_CACHE)");

    check_args ca;
    auto add_bounds = [&](CLI::App* sub) {
        sub->add_option("--n", ca.n, "run length for thick/pcws");
        sub->add_option("--N", ca.divisor_bound, "divisor bound for MAX");
        sub->add_option("--L", ca.ip_length, "IP sequence length");
        sub->add_option("--t-max", ca.t_max, "shift / divisor cap for pcws");
        sub->add_option("--a-max", ca.a_max, "anchor cap (J) or dilation cap (MAX*)");
        sub->add_option("--h-max", ca.h_max, "index cap for J");
        sub->add_option("--s", ca.strength, "antichain strength for NMAX / NMAX*");
        sub->add_option("--pool", ca.pool, "candidate pool for NMAX")->delimiter(',');
        sub->add_option("--budget", ca.budget, "IP search node budget");
        sub->add_option("--batch", cfg.batch, "file with one expression per line; JSON lines out");
    };

    auto* check = app.add_subcommand("check", "run one property checker");
    check->add_option("property", ca.property)->required();
    check->add_option("expr", ca.expr);
    add_bounds(check);

    auto* diagram = app.add_subcommand("diagram", "run every property checker and the implication audits");
    diagram->add_option("expr", ca.expr);
    add_bounds(diagram);

    fe_args fa;
    auto* fe = app.add_subcommand("fe", "finite embeddability of a prefix of A into B");
    fe->add_option("A", fa.a)->required();
    fe->add_option("B", fa.b)->required();
    fe->add_option("--prefix", fa.prefix, "prefix length");
    fe->add_option("--kmax", fa.k_max, "largest dilation tried");

    auto* me = app.add_subcommand("me", "m-element embeddability");
    me->add_option("A", fa.a)->required();
    me->add_option("B", fa.b)->required();
    me->add_option("--m", fa.m, "subset size");
    me->add_option("--kmax", fa.k_max, "largest dilation tried");

    construct_args cons;
    auto* construct = app.add_subcommand("construct", "generate a fixture");
    construct->add_option("name", cons.name)->required();
    construct->add_option("params", cons.params);
    construct->add_option("--emit", cons.emit, "write the members as an explicit set file");

    std::size_t depth = 0, per_level = 0;
    bool verify = false;
    auto* chain = app.add_subcommand("chain", "strictly decreasing embeddability chain");
    chain->add_option("depth", depth)->required();
    chain->add_option("per_level", per_level)->required();
    chain->add_flag("--verify", verify, "re-check every logged refutation");

    unsigned atlas_n = 0;
    bool exhaustive = false;
    auto* atlas = app.add_subcommand("atlas", "exact audit of the divisor poset on {1..n}");
    atlas->add_option("n", atlas_n)->required();
    atlas->add_flag("--exhaustive", exhaustive, "audit every subset");

    std::string parse_text;
    auto* parse = app.add_subcommand("parse", "print the syntax tree of a set expression");
    parse->add_option("expr", parse_text)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : bad_usage;
    }

    try {
        if (check->parsed()) {
            if (!cfg.batch.empty()) {
                std::string prop = canonical_property(ca.property);
                return run_batch(cfg.batch, [&](const std::string& expr) {
                    lazy_set s = evaluate(expr, cfg);
                    return report::verdict_doc("check", prop, expr, s, run_check(prop, s, ca, cfg.horizon));
                });
            }
            if (ca.expr.empty()) throw input_error("check needs a set expression or --batch");
            return cmd_check(ca, cfg);
        }
        if (diagram->parsed()) {
            if (!cfg.batch.empty())
                return run_batch(cfg.batch, [&](const std::string& expr) { return diagram_json(expr, ca, cfg); });
            if (ca.expr.empty()) throw input_error("diagram needs a set expression or --batch");
            return cmd_diagram(ca, cfg);
        }
        if (fe->parsed()) return cmd_fe(fa, cfg);
        if (me->parsed()) return cmd_me(fa, cfg);
        if (construct->parsed()) return cmd_construct(cons, cfg);
        if (chain->parsed()) return cmd_chain(depth, per_level, verify, cfg);
        if (atlas->parsed()) return cmd_atlas(atlas_n, exhaustive, cfg);
        if (parse->parsed()) return cmd_parse(parse_text, cfg);
    } catch (...) {
        std::string msg;
        int code = classify(std::current_exception(), msg);
        std::cerr << "felab: " << msg << '\n';
        return code;
    }
    return bad_usage;
}
