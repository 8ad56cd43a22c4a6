#include <gtest/gtest.h>

#include <random>

#include "felab/embed.hpp"
#include "felab/eval.hpp"
#include "oracles.hpp"

using namespace felab;
using namespace felab::setlang;

namespace {

lazy_set ev(const char* text, natural h = 2000) { return eval(text, h); }

natural witness_k(const embed::fe_outcome& o) {
    auto w = std::get_if<cert::dilation>(&o);
    return w ? w->k : 0;
}

const std::vector<const char*> targets{"mult(6)", "odd", "union(mult(4),mult(9))", "ap(5,6)", "compl(mult(5))",
                                       "inter(mult(2),compl(mult(3)))", "level(2)", "primes", "{12,18,24,36}",
                                       "union(level(1),level(3))", "N", "dilate(7,odd)"};

} // namespace

TEST(FeWitness, SmallWitnessesAndExhaustion) {
    EXPECT_EQ(witness_k(embed::fe_witness(finite_set{2, 3}, ev("mult(6)"), 10)), 6u);
    EXPECT_EQ(witness_k(embed::fe_fip_oracle(finite_set{2, 3}, ev("mult(6)"), 10)), 6u);
    EXPECT_EQ(witness_k(embed::fe_witness(finite_set{3, 5}, ev("N"), 10)), 1u);
    auto r = embed::fe_witness(finite_set{2, 3}, ev("mult(5)"), 4);
    ASSERT_FALSE(embed::is_witness(r));
    EXPECT_EQ(std::get<cert::exhausted>(std::get<embed::fe_refutation>(r)).k_max, 4u);
    EXPECT_THROW(embed::fe_witness(finite_set{}, ev("N"), 4), input_error);
}

TEST(FeWitness, FiniteTargetIsExact) {
    auto b = ev("{4,6,8,9,12}", 20);
    EXPECT_EQ(witness_k(embed::fe_witness(finite_set{2, 3}, b)), 2u);
    auto r = embed::fe_witness(finite_set{2, 5}, b);
    ASSERT_FALSE(embed::is_witness(r));
    EXPECT_EQ(std::get<cert::finite_target>(std::get<embed::fe_refutation>(r)).bound, 6u);
}

TEST(FeWitness, PrefixTargetRaisesPrecisionError) {
    auto b = ev("fs(exgamma(4))", 100); // exact only to 24
    // k=1,2 fail inside the exact range; k=3 needs 33.
    EXPECT_THROW(embed::fe_witness(finite_set{5, 11}, b, 50), precision_error);
}

TEST(FeWitness, AgreesWithNaiveScanAndFipOracle) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 400; ++t) {
        const char* text = targets[rng() % targets.size()];
        auto b = ev(text, 3000);
        std::vector<natural> xs;
        std::size_t size = rng() % 4 + 1;
        for (std::size_t i = 0; i < size; ++i) xs.push_back(rng() % 15 + 1);
        finite_set f(xs);
        natural k_max = 150;
        natural want = oracle::least_dilation(f.elements(), [&](natural n) { return *b.member(n); }, k_max);
        auto w = embed::fe_witness(f, b, k_max);
        auto o = embed::fe_fip_oracle(f, b, k_max);
        if (b.finite_max()) {
            // Finite targets search the whole useful range, not k_max.
            natural full = oracle::least_dilation(f.elements(), [&](natural n) { return *b.member(n); }, *b.finite_max());
            EXPECT_EQ(witness_k(w), full) << text;
        } else {
            EXPECT_EQ(witness_k(w), want) << text << " F size " << f.size();
        }
        EXPECT_EQ(witness_k(w), witness_k(o)) << text;
    }
}

TEST(Refuters, ResidueCertificate) {
    auto r = embed::fe_refute_residue(finite_set{3, 4}, ev("odd"));
    ASSERT_TRUE(r);
    EXPECT_EQ(std::get<cert::residue>(*r).modulus, 4u);
    EXPECT_FALSE(embed::fe_refute_residue(finite_set{3, 5}, ev("odd")));
}

TEST(Refuters, LevelCertificate) {
    auto a = lazy_set::finite(finite_set{6, 8}, 8);
    auto r = embed::fe_refute_level(a, ev("union(level(2),level(5))"), 8);
    ASSERT_TRUE(r);
    auto g = std::get<cert::level_gap>(*r);
    EXPECT_EQ(g.first, 6u);
    EXPECT_EQ(g.second, 8u);
    EXPECT_EQ(g.delta, 1);
    EXPECT_EQ(g.achievable, (std::vector<long>{-3, 0, 3}));
    EXPECT_THROW(embed::fe_refute_level(a, ev("mult(2)"), 8), inapplicable_error);
}

TEST(Refuters, LevelCertificateIsSound) {
    // A certified pair really has no dilation into the target: check k up to a bound.
    auto b = ev("union(level(2),level(5))", 200000);
    for (natural x = 2; x <= 40; ++x)
        for (natural y = x + 1; y <= 40; ++y) {
            auto r = embed::fe_refute_level(lazy_set::finite(finite_set{x, y}, y), b, y);
            if (!r) continue;
            EXPECT_EQ(oracle::least_dilation({x, y}, [&](natural n) { return *b.member(n); }, 4000), 0u) << x << "," << y;
        }
}

TEST(PrefixCheck, Examples) {
    auto v = embed::fe_prefix_check(ev("mult(3)"), ev("mult(6)"), 5, 4);
    EXPECT_TRUE(v.proved());
    EXPECT_EQ(v.as<cert::dilation>()->k, 2u);
    EXPECT_EQ(embed::fe_prefix_check(ev("mult(3)"), ev("mult(3)")).as<cert::dilation>()->k, 1u);
    auto quot = embed::fe_prefix_check(ev("quot(fp([2,5,11]),2)"), ev("fp([2,5,11])"), 4);
    EXPECT_TRUE(quot.proved());
    EXPECT_EQ(quot.as<cert::dilation>()->k, 2u);
    auto r = embed::fe_prefix_check(ev("{6,8}"), ev("union(level(2),level(5))"));
    EXPECT_TRUE(r.refuted());
    EXPECT_TRUE(r.as<cert::level_gap>());
    EXPECT_TRUE(embed::fe_prefix_check(ev("N"), ev("odd")).refuted());
    EXPECT_THROW(embed::fe_prefix_check(ev("N"), ev("N"), 0), input_error);
}

TEST(MeCheck, SingletonsUseDivisibility) {
    auto v = embed::me_check(ev("N", 20), ev("mult(2)"), 1, 20);
    EXPECT_TRUE(v.proved());
    EXPECT_EQ(v.as<cert::divisor_table>()->entries.size(), 20u);
    auto f = embed::me_check(ev("N", 20), ev("{12}"), 1, 20);
    EXPECT_TRUE(f.refuted());
    EXPECT_EQ(f.bounds["element"], 5);
}

TEST(MeCheck, Pairs) {
    auto v = embed::me_check(ev("{2,3,5}"), ev("level(2)"), 2, 10);
    EXPECT_TRUE(v.proved());
    auto r = embed::me_check(ev("{2,3}"), ev("odd"), 2, 10);
    EXPECT_TRUE(r.refuted());
    EXPECT_TRUE(r.as<cert::residue>());
    EXPECT_THROW(embed::me_check(ev("N", 1000), ev("N"), 4, 1000, 10, 1000), resource_error);
}

TEST(MeCheck, AgreesWithPairwiseOracle) {
    auto a = ev("{2,3,4,6,9}");
    for (const char* text : {"mult(6)", "union(mult(4),mult(9))", "level(2)", "compl(mult(5))"}) {
        auto b = ev(text, 5000);
        bool all = true;
        auto xs = a.elements();
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = i + 1; j < xs.size(); ++j)
                all = all && oracle::least_dilation({xs[i], xs[j]}, [&](natural n) { return *b.member(n); }, 500) != 0;
        auto v = embed::me_check(a, b, 2, 20, 500);
        EXPECT_EQ(v.proved(), all) << text;
    }
}

TEST(MThick, Basics) {
    auto v = embed::mthick_check(ev("N", 100), 5, 100);
    EXPECT_TRUE(v.proved());
    EXPECT_EQ(v.as<cert::dilation>()->k, 1u);
    auto m = embed::mthick_check(ev("mult(7)", 700), 5, 700);
    EXPECT_EQ(m.as<cert::dilation>()->k, 7u);
    EXPECT_FALSE(embed::mthick_check(ev("odd", 500), 2, 500).proved());
}

TEST(Chain, ColexOrder) {
    std::vector<std::pair<natural, natural>> want{{1, 2}, {1, 3}, {2, 3}, {1, 4}, {2, 4}, {3, 4}, {1, 5}};
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(embed::colex_pair(i), want[i]);
}

TEST(Chain, StrictlyNestedAndBlocked) {
    auto c = embed::decreasing_chain(3, 6);
    ASSERT_EQ(c.levels.size(), 4u);
    EXPECT_EQ(c.levels[0], (std::vector<natural>{1, 2, 3, 4, 5, 6}));
    EXPECT_TRUE(embed::verify_chain(c).ok);
    for (const auto& r : c.log) {
        // No k at all puts the blocked pair inside the finite target.
        std::set<natural> t(r.target.begin(), r.target.end());
        natural top = *t.rbegin();
        EXPECT_EQ(oracle::least_dilation(r.blocked, [&](natural n) { return t.count(n) > 0; }, top), 0u);
    }
    for (std::size_t n = 1; n < c.levels.size(); ++n) EXPECT_EQ(c.levels[n].front(), c.levels[n - 1][1]);
}

TEST(Chain, DepthZeroAndBadInput) {
    auto c = embed::decreasing_chain(0, 4);
    EXPECT_EQ(c.levels.size(), 1u);
    EXPECT_TRUE(c.log.empty());
    EXPECT_THROW(embed::decreasing_chain(2, 2), input_error);
}

TEST(Chain, TamperedLogIsCaught) {
    auto c = embed::decreasing_chain(2, 5);
    c.levels[1].push_back(c.dropped[0].first);
    std::sort(c.levels[1].begin(), c.levels[1].end());
    EXPECT_FALSE(embed::verify_chain(c).ok);
}
