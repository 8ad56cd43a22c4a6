#pragma once

#include <string>

#include <json.hpp>

#include "felab/embed.hpp"
#include "felab/largeness.hpp"
#include "felab/lazy_set.hpp"
#include "felab/verdict.hpp"

// JSON documents emitted by the CLI. Keys are fixed and ordered by
// nlohmann's std::map backing, so equal inputs give byte-identical output.
namespace felab::report {

using nlohmann::json;

inline json set_summary(const std::string& expr, const lazy_set& s) {
    json j{{"expr", expr}, {"exactness", exactness_name(s.kind())}, {"horizon", s.horizon()},
           {"known_members", s.elements().size()}};
    if (!s.is_exact()) j["exact_to"] = s.exact_horizon();
    return j;
}

inline json largeness(const std::string& expr, const lazy_set& s, const largeness::largeness_report& r) {
    json props = json::array();
    for (const auto& e : r.entries) {
        json row{{"property", e.name}};
        if (e.result) {
            row.update(to_json(*e.result));
            row["summary"] = describe(e.result->evidence);
        } else {
            bool scope = e.note.rfind("out of scope", 0) == 0;
            row["verdict"] = scope ? "out-of-scope" : "inapplicable";
            row["reason"] = e.note;
        }
        props.push_back(row);
    }
    json audits = json::array();
    for (const auto& a : r.audits)
        audits.push_back({{"implication", a.implication}, {"status", a.status}, {"detail", a.detail}});
    return json{{"kind", "diagram"},        {"set", set_summary(expr, s)},   {"properties", props},
                {"audits", audits},         {"consistent", r.consistent()}};
}

inline json verdict_doc(const std::string& command, const std::string& property, const std::string& expr,
                        const lazy_set& s, const verdict& v) {
    json j{{"kind", command}, {"property", property}, {"set", set_summary(expr, s)}};
    j.update(to_json(v));
    return j;
}

inline json atlas(const largeness::atlas_report& r) {
    json j{{"kind", "atlas"},
           {"n", r.n},
           {"upset_count", r.upset_count},
           {"subsets_checked", r.subsets_checked},
           {"exhaustive", r.exhaustive},
           {"max_sets", r.max_sets},
           {"maxstar_sets", r.maxstar_sets},
           {"violations",
            {{"max_iff_down_closure_full", r.max_violations},
             {"maxstar_iff_principal_upset", r.maxstar_violations},
             {"maxstar_iff_complement_not_max", r.duality_violations},
             {"complement_of_upset_is_downset", r.complement_violations}}},
           {"pass", r.ok()}};
    if (r.brute_upset_count) {
        j["brute_upset_count"] = *r.brute_upset_count;
        j["brute_downset_count"] = *r.brute_downset_count;
    }
    return j;
}

inline json chain(const embed::chain_result& c, const embed::chain_check* check) {
    json levels = json::array();
    for (std::size_t n = 0; n < c.levels.size(); ++n) {
        json row{{"level", n}, {"prefix", c.levels[n]}};
        if (n > 0) row["dropped"] = json::array({c.dropped[n - 1].first, c.dropped[n - 1].second});
        levels.push_back(row);
    }
    json log = json::array();
    for (const auto& r : c.log)
        log.push_back({{"level", r.level}, {"blocked", r.blocked}, {"certificate", certificate_json(cert::finite_target{r.bound})}});
    json j{{"kind", "chain"}, {"depth", c.levels.size() - 1}, {"levels", levels}, {"refutations", log}};
    if (check) j["verification"] = {{"ok", check->ok}, {"problems", check->problems}};
    return j;
}

} // namespace felab::report
