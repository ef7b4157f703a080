#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace vshell;
using fixtures::v;

TEST(OrderComplex, DiamondIsTwoPoints) {
    auto c = order_complex(fixtures::diamond());
    EXPECT_EQ(c.facets.size(), 2u);
    EXPECT_EQ(c.dimension(), 0);
    auto b = reduced_betti(c);
    EXPECT_EQ(b.at(0), 1u);
    EXPECT_EQ(b.at(-1), 0u);
}

TEST(OrderComplex, BooleanCubeIsAHexagon) {
    auto c = order_complex(fixtures::boolean_lattice(3));
    EXPECT_EQ(c.facets.size(), 6u);
    EXPECT_EQ(c.vertices.size(), 6u);
    auto b = reduced_betti(c);
    EXPECT_EQ(b.at(0), 0u);
    EXPECT_EQ(b.at(1), 1u);
}

TEST(OrderComplex, FacetsAreMaximalChains) {
    auto p = build_interval(VeroneseSpace::pinched(4), v("1124"));
    EXPECT_EQ(order_complex(p).facets.size(), fixtures::dp_chain_count(p));
}

TEST(OrderComplex, ShortPosetConventions) {
    auto point = fixtures::chain(0);
    EXPECT_TRUE(order_complex(point).is_void());
    EXPECT_TRUE(reduced_betti(order_complex(point)).all_zero());
    auto edge = fixtures::chain(1);
    auto c = order_complex(edge);
    EXPECT_FALSE(c.is_void());
    EXPECT_EQ(c.dimension(), -1);
    auto b = reduced_betti(c);
    EXPECT_EQ(b.minus_one, 1u);
    EXPECT_TRUE(b.by_dim.empty());
}

TEST(Betti, BooleanLatticeProperPartIsASphere) {
    auto b = reduced_betti(order_complex(fixtures::boolean_lattice(4)));
    EXPECT_EQ(b.by_dim, (std::vector<std::uint64_t>{0, 0, 1}));
}

TEST(Betti, FaceBudget) {
    EXPECT_THROW(reduced_betti(order_complex(fixtures::boolean_lattice(4)), 10), BudgetExceeded);
}

TEST(Betti, ShelledIntervalHasOnlyTopHomology) {
    for (const char* z : {"2334", "1245", "0444"}) {
        auto iv = build_veronese_interval(VeroneseSpace::pinched(4), v(z));
        auto order = shell_pinched_interval(4, v(z));
        auto cert = verify_shelling(iv.poset, order);
        ASSERT_TRUE(cert.ok());
        auto b = reduced_betti(order_complex(iv.poset));
        const int top = iv.poset.rank(iv.poset.require_top()) - 2;
        for (int d = -1; d < top; ++d) EXPECT_EQ(b.at(d), 0u) << z << " d=" << d;
        EXPECT_EQ(static_cast<std::int64_t>(b.at(top)), std::abs(mobius(iv.poset, iv.poset.bottom(), iv.poset.require_top())));
        EXPECT_EQ(b.at(top), cert.certificate->homology_facet_count());
    }
}

TEST(CohenMacaulay, Chains) {
    for (std::size_t len : {0u, 1u, 2u, 4u}) EXPECT_TRUE(is_cohen_macaulay_Q(fixtures::chain(len)).cohen_macaulay);
}

TEST(CohenMacaulay, BrokenDiamondFails) {
    auto d = fixtures::broken_diamond();
    auto r = is_cohen_macaulay_Q(d);
    EXPECT_FALSE(r.cohen_macaulay);
    ASSERT_TRUE(r.failing_interval.has_value());
    EXPECT_EQ(r.failing_interval->first, d.bottom());
    EXPECT_EQ(r.failing_interval->second, d.require_top());
    EXPECT_EQ(r.failing_betti.at(0), 1u);
}

TEST(CohenMacaulay, RankTwoIntervalsForFour) {
    std::size_t checked = 0;
    for (const auto& z : vectors_with_sum(4, 8)) {
        if (checked > 40) break;
        auto p = build_interval(VeroneseSpace::pinched(4), z);
        EXPECT_TRUE(is_cohen_macaulay_Q(p).cohen_macaulay) << z.to_string();
        ++checked;
    }
}

TEST(EulerMobius, HoldsOnTestPosets) {
    std::vector<GradedPoset> ps{fixtures::chain(0), fixtures::chain(1), fixtures::chain(3), fixtures::diamond(),
                                fixtures::broken_diamond(), fixtures::boolean_lattice(3), fixtures::boolean_lattice(4),
                                fixtures::alternation_poset().poset, build_interval(VeroneseSpace::pinched(4), v("2334"))};
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) ps.push_back(fixtures::random_graded(rng, 3, 3));
    for (const auto& p : ps) {
        auto c = order_complex(p);
        if (p.require_top() == p.bottom()) continue;
        EXPECT_EQ(reduced_euler_characteristic(c, 100'000), mobius(p, p.bottom(), p.require_top()));
        auto b = reduced_betti(c, 100'000);
        std::int64_t alt = -static_cast<std::int64_t>(b.minus_one);
        for (std::size_t d = 0; d < b.by_dim.size(); ++d) alt += (d % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(b.by_dim[d]);
        EXPECT_EQ(alt, mobius(p, p.bottom(), p.require_top()));
    }
}
