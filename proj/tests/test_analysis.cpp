#include <gtest/gtest.h>

#include <random>

#include "felab/analysis.hpp"
#include "felab/eval.hpp"
#include "oracles.hpp"

using namespace felab;
using namespace felab::setlang;

namespace {

set_expr random_periodic(std::mt19937_64& rng, int depth) {
    int pick = static_cast<int>(rng() % (depth > 0 ? 8 : 4));
    switch (pick) {
    case 0: return make::naturals();
    case 1: return make::mult(rng() % 6 + 1);
    case 2: return make::ap(rng() % 9 + 1, rng() % 5 + 1);
    case 3: return make::finite({rng() % 20 + 1, rng() % 20 + 1});
    case 4: return make::unite({random_periodic(rng, depth - 1), random_periodic(rng, depth - 1)});
    case 5: return make::intersect({random_periodic(rng, depth - 1), random_periodic(rng, depth - 1)});
    case 6: return make::complement(random_periodic(rng, depth - 1));
    default: return make::shift(random_periodic(rng, depth - 1), rng() % 6);
    }
}

} // namespace

TEST(Residues, AvoidsOnProgressions) {
    EXPECT_TRUE(analysis::avoids_residue(parse("odd"), 0, 2));
    EXPECT_FALSE(analysis::avoids_residue(parse("odd"), 1, 4));
    EXPECT_TRUE(analysis::avoids_residue(parse("mult(6)"), 1, 9));
    EXPECT_TRUE(analysis::avoids_residue(parse("{5,9}"), 0, 2));
    EXPECT_FALSE(analysis::avoids_residue(parse("primes"), 1, 4));
    EXPECT_THROW(analysis::avoids_residue(parse("N"), 0, 0), input_error);
}

TEST(Residues, AvoidsIsSoundOnRandomSets) {
    std::mt19937_64 rng(17);
    int claims = 0;
    for (int t = 0; t < 300; ++t) {
        auto e = random_periodic(rng, 2);
        auto s = eval(e, 600);
        for (natural m = 1; m <= 8; ++m)
            for (natural r = 0; r < m; ++r) {
                if (!analysis::avoids_residue(e, r, m)) continue;
                ++claims;
                for (natural x : s.elements()) ASSERT_NE(x % m, r) << unparse(e) << " r=" << r << " m=" << m;
            }
    }
    EXPECT_GT(claims, 100);
}

TEST(Periodicity, Basics) {
    auto p = analysis::period_of(parse("ap(7,3)"));
    ASSERT_TRUE(p);
    EXPECT_EQ(p->period, 3u);
    EXPECT_EQ(p->offset, 4u);
    EXPECT_FALSE(analysis::period_of(parse("primes")));
    auto u = analysis::period_of(parse("union(mult(4),mult(6))"));
    ASSERT_TRUE(u);
    EXPECT_EQ(u->period, 12u);
}

TEST(Periodicity, RandomSetsRepeatAfterOffset) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 300; ++t) {
        auto e = random_periodic(rng, 3);
        auto p = analysis::period_of(e);
        ASSERT_TRUE(p) << unparse(e);
        auto s = eval(e, 2000);
        natural start = p->offset + 1;
        for (natural x = start; x + p->period <= 2000; ++x)
            ASSERT_EQ(*s.member(x), *s.member(x + p->period)) << unparse(e) << " at " << x;
    }
}

TEST(Levels, PinnedValues) {
    EXPECT_EQ(*analysis::levels_of(parse("union(level(2),level(5))")), (std::set<long>{2, 5}));
    EXPECT_EQ(*analysis::levels_of(parse("dilate(4,primes)")), (std::set<long>{3}));
    EXPECT_EQ(*analysis::levels_of(parse("inter(N,level(3))")), (std::set<long>{3}));
    EXPECT_EQ(*analysis::levels_of(parse("{6,8}")), (std::set<long>{2, 3}));
    EXPECT_FALSE(analysis::levels_of(parse("mult(2)")));
    EXPECT_EQ(*analysis::levels_of(parse("construct(levelfix,3,[1],[2])")), (std::set<long>{3}));
}

TEST(Levels, MembersLieOnReportedLevels) {
    for (const char* text : {"union(level(2),dilate(3,level(1)))", "quot(level(4),6)", "construct(sidon_levels,4,1)",
                             "inter(mult(2),level(3))"}) {
        auto e = parse(text);
        auto lv = analysis::levels_of(e);
        ASSERT_TRUE(lv) << text;
        for (natural x : eval(e, 3000).elements()) EXPECT_TRUE(lv->count(oracle::big_omega(x))) << text << " " << x;
    }
}

TEST(FiniteBound, Values) {
    EXPECT_EQ(*analysis::finite_bound(parse("{3,40}")), 40u);
    EXPECT_EQ(*analysis::finite_bound(parse("inter(N,{7})")), 7u);
    EXPECT_EQ(*analysis::finite_bound(parse("shift({3,9},4)")), 5u);
    EXPECT_EQ(*analysis::finite_bound(parse("{}")), 0u);
    EXPECT_FALSE(analysis::finite_bound(parse("union({1},mult(2))")));
}
