#include <gtest/gtest.h>

#include <random>

#include "felab/constructions.hpp"
#include "felab/eval.hpp"
#include "felab/largeness.hpp"
#include "oracles.hpp"

using namespace felab;
using namespace felab::largeness;

namespace {

lazy_set ev(const std::string& text, natural h) { return setlang::eval(text, h); }

// Naive count of up-closed subsets of the divisor order on {1..n}.
std::size_t naive_upsets(unsigned n) {
    std::size_t count = 0;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        bool closed = true;
        for (unsigned x = 1; x <= n && closed; ++x)
            if (s >> (x - 1) & 1)
                for (unsigned y = 2 * x; y <= n; y += x) closed = closed && (s >> (y - 1) & 1);
        count += closed;
    }
    return count;
}

} // namespace

TEST(AThick, RunsAndPeriodicRefutation) {
    auto v = a_thick_check(ev("N", 100), 10, 100);
    ASSERT_TRUE(v.proved());
    EXPECT_EQ(v.as<cert::interval>()->location, 0u);
    auto odd = a_thick_check(ev("odd", 100), 2, 100);
    EXPECT_TRUE(odd.refuted());
    EXPECT_EQ(odd.as<cert::periodic_absence>()->period, 2u);
    // A run that only starts far past H is still found through the period.
    auto late = a_thick_check(ev("union(mult(2),ap(501,1000))", 100), 3, 100);
    EXPECT_TRUE(late.proved());
    auto pre = a_thick_check(ev("fs(exgamma(8))", 1000), 10, 1000);
    EXPECT_EQ(pre.status, verdict_status::bounded_against);
    EXPECT_EQ(pre.bounds["longest_run"], oracle::longest_run([&](natural n) { return *ev("fs(exgamma(8))", 1000).member(n); }, 1000));
    EXPECT_THROW(a_thick_check(ev("N", 10), 11, 10), input_error);
}

TEST(APcws, OddNeedsBothShifts) {
    auto v = a_pcws_check(ev("odd", 10000), 1, 50, 10000);
    ASSERT_TRUE(v.proved());
    auto c = v.as<cert::shifted_interval>();
    EXPECT_EQ(c->shifts, (std::vector<natural>{0, 1}));
    EXPECT_EQ(c->location, 0u);
    EXPECT_FALSE(a_pcws_check(ev("mult(3)", 1000), 1, 5, 1000).proved());
    EXPECT_TRUE(a_pcws_check(ev("mult(3)", 1000), 2, 5, 1000).proved());
}

TEST(APcws, CertificateCoversTheRun) {
    for (const char* text : {"mult(4)", "union(mult(3),mult(5))", "compl(mult(2))", "primes"}) {
        auto a = ev(text, 5000);
        auto v = a_pcws_check(a, 6, 8, 5000);
        if (!v.proved()) continue;
        auto c = v.as<cert::shifted_interval>();
        for (natural y = c->location + 1; y <= c->location + c->length; ++y) {
            bool hit = false;
            for (natural t : c->shifts) hit = hit || *a.member(y + t);
            EXPECT_TRUE(hit) << text << " y=" << y;
        }
    }
}

TEST(MPcws, QuotientCover) {
    auto v = m_pcws_check(ev("mult(2)", 1000), 2, 5, 1000);
    ASSERT_TRUE(v.proved());
    EXPECT_EQ(v.as<cert::quotient_dilation>()->divisors, (std::vector<natural>{2}));
    auto a = ev("level(2)", 5000);
    auto w = m_pcws_check(a, 6, 4, 5000);
    if (w.proved()) {
        auto c = w.as<cert::quotient_dilation>();
        for (natural i = 1; i <= c->length; ++i) {
            bool hit = false;
            for (natural t : c->divisors) hit = hit || *a.member(t * c->k * i);
            EXPECT_TRUE(hit);
        }
    }
}

TEST(IpSearch, AdditiveOnNaturals) {
    auto v = ip_search(ev("N", 100), 3, 100, ip_mode::additive);
    ASSERT_TRUE(v.proved());
    auto terms = v.as<cert::generating_sequence>()->terms;
    EXPECT_EQ(terms, (std::vector<natural>{1, 2, 3}));
}

TEST(IpSearch, MultiplicativeOnPrimeProducts) {
    auto fp = ev("construct(fp_primes,odd,6)", 10000);
    auto v = ip_search(fp, 4, 10000, ip_mode::multiplicative);
    ASSERT_TRUE(v.proved());
    auto terms = v.as<cert::generating_sequence>()->terms;
    EXPECT_EQ(terms, (std::vector<natural>{2, 5, 11, 17}));
    for (natural p : oracle::all_subset_products(terms, 10000)) EXPECT_TRUE(*fp.member(p)) << p;
    // 1 never serves as a generator.
    auto one = ip_search(ev("{1,3}", 10), 2, 10, ip_mode::multiplicative);
    EXPECT_FALSE(one.proved());
}

TEST(IpSearch, FoundSequencesAreGenuine) {
    for (const char* text : {"mult(3)", "union(mult(5),mult(7))", "compl(primes)", "fs(fastgrowth(6))", "level(3)"}) {
        auto a = ev(text, 3000);
        for (auto mode : {ip_mode::additive, ip_mode::multiplicative}) {
            auto v = ip_search(a, 3, 3000, mode, 2'000'000);
            if (!v.proved()) continue;
            auto terms = v.as<cert::generating_sequence>()->terms;
            auto all = mode == ip_mode::additive ? oracle::all_subset_sums(terms) : oracle::all_subset_products(terms, 3000);
            for (natural x : all) EXPECT_TRUE(*a.member(x)) << text;
        }
    }
}

TEST(IpSearch, ExgammaHasNoFsPair) {
    natural h = 10000;
    auto a = ev("construct(exgamma,20)", h);
    auto v = ip_search(a, 2, h, ip_mode::additive);
    EXPECT_EQ(v.status, verdict_status::bounded_against);
    auto xs = a.elements();
    bool pair = false;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            pair = pair || std::binary_search(xs.begin(), xs.end(), xs[i] + xs[j]);
    EXPECT_FALSE(pair);
}

TEST(IpSearch, BudgetIsReported) {
    auto v = ip_search(ev("construct(exgamma,20)", 10000), 2, 10000, ip_mode::additive, 3);
    EXPECT_EQ(v.bounds["budget_exhausted"], true);
    EXPECT_THROW(ip_search(ev("N", 10), 25, 10, ip_mode::additive), resource_error);
}

TEST(IpStar, ComplementSearch) {
    EXPECT_EQ(ip_star_check(ev("N", 200), 3, 200).status, verdict_status::bounded_for);
    auto v = ip_star_check(ev("odd", 200), 3, 200);
    EXPECT_TRUE(v.refuted());
    EXPECT_TRUE(v.as<cert::generating_sequence>()->complement);
    for (natural x : v.as<cert::generating_sequence>()->terms) EXPECT_EQ(x % 2, 0u);
    EXPECT_THROW(ip_star_check(ev("fs(exgamma(4))", 100), 2, 100), inapplicable_error);
}

TEST(JCheck, AdditiveWitnessIsGenuine) {
    auto funcs = default_additive_j_funcs(4);
    for (const char* text : {"N", "mult(2)", "compl(mult(3))", "union(mult(4),mult(6))"}) {
        auto a = ev(text, 2000);
        auto v = j_check(a, funcs, 100, 4, ip_mode::additive);
        ASSERT_TRUE(v.proved()) << text;
        auto w = v.as<cert::j_witness>();
        for (const auto& f : funcs) {
            natural s = w->anchor;
            for (natural i : w->indices) s += f[i - 1];
            EXPECT_TRUE(*a.member(s)) << text;
        }
    }
    EXPECT_THROW(j_check(ev("N", 10), funcs, 5, 21, ip_mode::additive), resource_error);
    EXPECT_THROW(j_check(ev("N", 10), {}, 5, 2, ip_mode::additive), input_error);
}

TEST(JCheck, MultiplicativeOnEqualExponents) {
    // Exhaustive (a, H') scan: no anchor up to 5000 works for the prime-pair functions.
    natural a_max = 5000;
    auto a = ev("construct(equal_exponent)", 100);
    auto funcs = default_multiplicative_j_funcs(4);
    auto v = j_check(a, funcs, a_max, 4, ip_mode::multiplicative);
    EXPECT_EQ(v.status, verdict_status::bounded_against);
    bool any = false;
    for (natural anchor = 1; anchor <= a_max && !any; ++anchor)
        for (unsigned mask = 1; mask < 16 && !any; ++mask) {
            bool all = true;
            for (const auto& f : funcs) {
                // Factor the pieces separately; the product itself is too large for trial division.
                std::map<natural, int> exps;
                for (natural p : oracle::prime_factors_with_multiplicity(anchor)) ++exps[p];
                for (unsigned i = 0; i < 4; ++i)
                    if (mask >> i & 1)
                        for (natural p : oracle::prime_factors_with_multiplicity(f[i])) ++exps[p];
                bool equal = !exps.empty();
                for (auto [p, e] : exps) equal = equal && e == exps.begin()->second;
                all = all && equal;
            }
            any = all;
        }
    EXPECT_FALSE(any);
}

TEST(Max, ExamplesAndResidueRefutation) {
    auto v = max_check(ev("odd", 100), 2, 100);
    ASSERT_TRUE(v.refuted());
    EXPECT_EQ(v.bounds["n0"], 2);
    EXPECT_EQ(v.as<cert::residue>()->modulus, 2u);
    auto n = max_check(ev("N", 100), 20, 100);
    ASSERT_TRUE(n.proved());
    for (auto [d, m] : n.as<cert::divisor_table>()->entries) EXPECT_EQ(m, d);
    auto pre = max_check(ev("construct(exgamma,20)", 100), 30, 100);
    EXPECT_EQ(pre.status, verdict_status::bounded_against);
}

TEST(Max, EqualExponentHitsEveryDivisor) {
    auto a = ev("construct(equal_exponent)", 10000);
    auto v = max_check(a, 20, 10000);
    ASSERT_TRUE(v.proved());
    for (auto [d, m] : v.as<cert::divisor_table>()->entries) {
        EXPECT_EQ(m % d, 0u);
        EXPECT_TRUE(*a.member(m));
    }
}

TEST(MaxStar, ThickNonmaxstarMissesAMultipleOfEach) {
    auto a = ev("construct(thick_nonmaxstar,20)", 10000);
    EXPECT_TRUE(a_thick_check(a, 20, 10000).proved());
    auto v = maxstar_check(a, 20, 10000);
    ASSERT_TRUE(v.refuted());
    auto miss = v.as<cert::missing_multiples>();
    ASSERT_EQ(miss->entries.size(), 20u);
    for (auto [d, m] : miss->entries) {
        EXPECT_EQ(m % d, 0u);
        EXPECT_EQ(*a.member(m), false);
    }
    auto n = maxstar_check(ev("mult(3)", 300), 5, 300);
    ASSERT_TRUE(n.proved());
    EXPECT_EQ(n.as<cert::full_multiples>()->a, 3u);
}

TEST(Nmax, OddPrimeProductsAvoidEvenIndexedPrimes) {
    auto fp = constructions::gen_fp_prime_subset({"odd", {}}, 6, 10000);
    std::vector<natural> pool(fp.complementary.begin(), fp.complementary.end());
    pool.push_back(29);
    auto v = nmax_refute(fp.set, 4, 10000, pool);
    ASSERT_EQ(v.status, verdict_status::bounded_against);
    EXPECT_EQ(v.as<cert::strong_antichain>()->elements, (std::vector<natural>{3, 7, 13, 19}));
    for (natural c : v.as<cert::strong_antichain>()->elements)
        for (natural m = c; m <= 10000; m += c) {
            auto in = fp.set.member(m);
            ASSERT_TRUE(in.has_value()) << m;
            EXPECT_FALSE(*in) << m;
        }
    EXPECT_EQ(nmax_refute(ev("N", 1000), 2, 1000).status, verdict_status::bounded_for);
    EXPECT_THROW(nmax_refute(ev("N", 10), 1, 10), input_error);
}

TEST(NmaxStar, NaturalsGiveFirstPrimes) {
    auto v = nmaxstar_check(ev("N", 1000), 4, 1000);
    ASSERT_EQ(v.status, verdict_status::bounded_for);
    EXPECT_EQ(v.as<cert::strong_antichain>()->elements, (std::vector<natural>{2, 3, 5, 7}));
    EXPECT_EQ(nmaxstar_check(ev("primes", 1000), 2, 1000).status, verdict_status::bounded_against);
}

TEST(Crt, ThicknessDemo) {
    natural x = crt_thickness_demo(finite_set{3, 5, 7, 11}, 4);
    EXPECT_LE(x, 1155u);
    EXPECT_EQ((x + 1) % 3, 0u);
    EXPECT_EQ((x + 2) % 5, 0u);
    EXPECT_EQ((x + 3) % 7, 0u);
    EXPECT_EQ((x + 4) % 11, 0u);
    EXPECT_THROW(crt_thickness_demo(finite_set{2, 4}, 2), input_error);
    EXPECT_THROW(crt_thickness_demo(finite_set{3, 5}, 3), input_error);
}

TEST(Diagram, NaturalsAreLargeEverywhere) {
    property_params p;
    p.horizon = 2000;
    auto a = ev("N", p.horizon);
    auto r = diagram_report(a, p);
    EXPECT_EQ(r.entries.size(), 17u);
    EXPECT_TRUE(r.consistent());
    for (const auto& e : r.entries) {
        if (!e.result) {
            EXPECT_EQ(e.note.rfind("out of scope", 0), 0u) << e.name;
            continue;
        }
        EXPECT_TRUE(e.result->proved() || e.result->status == verdict_status::bounded_for) << e.name;
    }
    for (const auto& au : r.audits) EXPECT_EQ(au.status, "pass") << au.implication;
}

TEST(Diagram, OddPattern) {
    property_params p;
    p.horizon = 2000;
    auto r = diagram_report(ev("odd", p.horizon), p);
    EXPECT_TRUE(r.find("A-pcws")->proved());
    EXPECT_TRUE(r.find("MAX")->refuted());
    EXPECT_TRUE(r.find("A-thick")->refuted());
    EXPECT_TRUE(r.find("A-IP*")->refuted());
    EXPECT_TRUE(r.consistent());
}

TEST(Diagram, PrefixSetMarksIpStarInapplicable) {
    property_params p;
    p.horizon = 1000;
    auto r = diagram_report(ev("fs(exgamma(8))", p.horizon), p);
    EXPECT_EQ(r.find("A-IP*"), nullptr);
    bool noted = false;
    for (const auto& e : r.entries)
        if (e.name == "A-IP*") noted = e.note.rfind("inapplicable", 0) == 0;
    EXPECT_TRUE(noted);
}

// Upward-monotone properties: a proof for A carries over to any superset.
TEST(Monotonicity, ProofsSurviveSupersets) {
    std::mt19937_64 rng(8);
    const std::vector<std::string> pieces{"mult(2)", "mult(3)", "ap(1,4)", "primes", "level(2)", "compl(mult(5))",
                                          "{1,2,3,4,5,6,7,8,9,10}", "dilate(3,level(1))"};
    property_params p;
    p.horizon = 1500;
    p.run_length = 4;
    p.ip_length = 2;
    p.j_anchor_max = 50;
    p.j_index_max = 3;
    p.divisor_bound = 10;
    p.dilation_cap = 6;
    p.ip_budget = 200000;
    const std::vector<std::string> monotone{"A-thick", "M-thick", "A-pcws", "M-pcws", "A-IP", "M-IP", "A-J", "M-J", "MAX", "MAX*", "NMAX*"};
    for (int t = 0; t < 40; ++t) {
        std::string small = pieces[rng() % pieces.size()];
        std::string big = "union(" + small + "," + pieces[rng() % pieces.size()] + ")";
        auto a = ev(small, p.horizon), b = ev(big, p.horizon);
        for (const auto& name : monotone) {
            auto va = run_property(name, a, p);
            if (va.proved() || (name == "NMAX*" && va.status == verdict_status::bounded_for)) {
                // A run found through the period may lie past H, where the superset is not scanned.
                if (auto run = va.as<cert::interval>(); run && run->location + run->length > p.horizon) continue;
                auto vb = run_property(name, b, p);
                EXPECT_EQ(vb.status, va.status) << name << " " << small << " -> " << big;
            }
        }
    }
}

TEST(Atlas, CountsMatchNaiveEnumeration) {
    for (unsigned n = 1; n <= 12; ++n) {
        auto r = poset_atlas(n);
        EXPECT_EQ(r.upset_count, naive_upsets(n)) << n;
        EXPECT_TRUE(r.ok()) << n;
    }
    EXPECT_EQ(poset_atlas(1).upset_count, 2u);
    EXPECT_EQ(poset_atlas(6).upset_count, 17u);
}

TEST(Atlas, ExhaustiveTwelve) {
    auto r = poset_atlas(12, true);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.subsets_checked, 4096u);
    EXPECT_EQ(r.max_violations + r.maxstar_violations + r.duality_violations + r.complement_violations, 0u);
}

TEST(Atlas, Caps) {
    EXPECT_THROW(poset_atlas(21), resource_error);
    EXPECT_THROW(poset_atlas(17, true), resource_error);
    EXPECT_FALSE(poset_atlas(18).exhaustive);
}
