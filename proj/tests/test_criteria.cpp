#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace vshell;
using fixtures::v;

namespace {

/// 0 < a, a+; a+ < q; a < x; q, x < p < 1. The pair (p, a+) breaks edge falling at q.
struct EdgeViolator {
    GradedPoset poset;
    ElementId a, a_plus, q, p;
};

EdgeViolator edge_violator() {
    fixtures::Builder b;
    auto z = b.add("0"), a = b.add("a"), ap = b.add("a+"), q = b.add("q"), x = b.add("x"), p = b.add("p"), t = b.add("1");
    b.cover(z, a);
    b.cover(z, ap);
    b.cover(ap, q);
    b.cover(a, x);
    b.cover(q, p);
    b.cover(x, p);
    b.cover(p, t);
    EdgeViolator out{b.build(z, t), 0, 0, 0, 0};
    out.a = fixtures::Builder::id(out.poset, a);
    out.a_plus = fixtures::Builder::id(out.poset, ap);
    out.q = fixtures::Builder::id(out.poset, q);
    out.p = fixtures::Builder::id(out.poset, p);
    return out;
}

AtomOrder pinched_atoms(const VeroneseInterval& iv, const std::vector<LatticeVector>& family) {
    AtomOrder out;
    for (const auto& a : family)
        if (auto id = iv.find(a); id && iv.poset.covers(iv.poset.bottom(), *id)) out.push_back(*id);
    return out;
}

}  // namespace

TEST(Context, DiamondQ) {
    auto d = fixtures::diamond();
    auto at = atoms(d);
    auto ctx = compute_context(d, {at[0]}, at[1]);
    EXPECT_EQ(ctx.Q, (std::vector<ElementId>{at[1]}));
    EXPECT_EQ(ctx.A_of(at[1]), (std::vector<ElementId>{d.require_top()}));
    EXPECT_THROW(compute_context(d, {at[0]}, at[0]), InvalidInput);
    EXPECT_THROW(compute_context(d, {at[0]}, d.require_top()), InvalidInput);
}

TEST(Context, SecondAtomMatchesClosedForm) {
    auto iv = build_veronese_interval(VeroneseSpace::pinched(4), v("2226"));
    auto ctx = compute_context(iv.poset, {iv.id(v("0004"))}, iv.id(v("0013")));
    for (ElementId x = 0; x < iv.poset.size(); ++x) {
        const auto& q = iv.vec(x);
        bool expect = leq(VeroneseSpace::pinched(4), v("0013"), q) && ((q - v("0013"))[3] == 0 || q - v("0013") == v("1102"));
        EXPECT_EQ(ctx.in_Q.contains(x), expect) << q.to_string();
    }
}

TEST(Context, LastLexAtomMatchesClosedForm) {
    auto iv = build_veronese_interval(VeroneseSpace::pinched(4), v("4332"));
    const auto& fam = atom_catalog(4)->l_order;
    auto before = pinched_atoms(iv, {fam.begin(), fam.end() - 1});
    auto ctx = compute_context(iv.poset, before, iv.id(v("4000")));
    for (ElementId x = 0; x < iv.poset.size(); ++x) {
        const auto& q = iv.vec(x);
        bool expect = leq(VeroneseSpace::pinched(4), v("4000"), q) && (q - v("4000")).suffix_is_zero(2);
        EXPECT_EQ(ctx.in_Q.contains(x), expect) << q.to_string();
    }
}

TEST(EdgeFalling, VacuousWhenNothingAboveIsOld) {
    auto e = edge_violator();
    auto ctx = compute_context(e.poset, {e.a}, e.a_plus);
    EXPECT_FALSE(check_edge_falling(ctx, e.a_plus).has_value());
}

TEST(EdgeFalling, SyntheticViolatorIsReported) {
    auto e = edge_violator();
    auto ctx = compute_context(e.poset, {e.a}, e.a_plus);
    auto bad = check_edge_falling(ctx, e.q);
    ASSERT_TRUE(bad.has_value());
    EXPECT_EQ(bad->first, e.p);
    EXPECT_EQ(bad->second, e.a_plus);
}

TEST(EdgeFalling, HoldsInLexContextsAtRankTwo) {
    const auto& fam = atom_catalog(4)->l_order;
    std::size_t contexts = 0;
    for (const auto& z : vectors_with_sum(4, 8)) {
        auto iv = build_veronese_interval(VeroneseSpace::pinched(4), z);
        for (std::size_t k = 3; k <= fam.size(); ++k) {
            if (!iv.find(fam[k - 1])) continue;
            auto before = pinched_atoms(iv, {fam.begin(), fam.begin() + static_cast<std::ptrdiff_t>(k - 1)});
            if (before.empty()) continue;
            auto ctx = compute_context(iv.poset, before, iv.id(fam[k - 1]));
            for (ElementId q : ctx.Q) EXPECT_FALSE(check_edge_falling(ctx, q).has_value()) << z.to_string();
            ++contexts;
        }
    }
    EXPECT_GT(contexts, 500u);
}

TEST(CriterionI, SingleElementQAppendsUpperOrder) {
    auto d = fixtures::diamond();
    auto at = atoms(d);
    auto ctx = compute_context(d, {at[0]}, at[1]);
    ChainOrder pa{{d.bottom(), at[0], d.require_top()}};
    std::map<ElementId, ChainOrder> lower{{at[1], {{at[1]}}}};
    std::map<ElementId, ChainOrder> upper{{at[1], {{at[1], d.require_top()}}}};
    auto out = criterion_I_combine(ctx, pa, lower, upper, true);
    EXPECT_EQ(out, enumerate_maximal_chains(d));
}

TEST(CriterionI, MissingSubShellingIsAnError) {
    auto d = fixtures::diamond();
    auto at = atoms(d);
    auto ctx = compute_context(d, {at[0]}, at[1]);
    ChainOrder pa{{d.bottom(), at[0], d.require_top()}};
    EXPECT_THROW(criterion_I_combine(ctx, pa, {}, {}, false), InvalidInput);
    EXPECT_THROW(criterion_I_combine(ctx, pa, {}, {}, true), PreconditionViolation);
}

TEST(CriterionI, EdgeFallingFailureIsAPreconditionViolation) {
    auto e = edge_violator();
    auto ctx = compute_context(e.poset, {e.a}, e.a_plus);
    auto pa = enumerate_chains_through(e.poset, std::vector<ElementId>{e.a});
    std::map<ElementId, ChainOrder> lower, upper;
    for (ElementId q : ctx.Q) {
        auto iv = closed_interval(e.poset, e.a_plus, q);
        lower[q] = iv.order_to_parent(enumerate_maximal_chains(iv.poset));
        upper[q] = detail::upper_chains(ctx, q);
    }
    EXPECT_THROW(criterion_I_combine(ctx, pa, lower, upper, true), PreconditionViolation);
}

TEST(CriterionI, AlternatingOrderOnSyntheticPoset) {
    auto f = fixtures::alternation_poset();
    const auto& P = f.poset;
    auto ctx = compute_context(P, {f.a}, f.q1);
    EXPECT_EQ(ctx.Q, (std::vector<ElementId>{f.q1, f.q2, f.q3, f.q4, f.q5}));
    for (ElementId q : ctx.Q) EXPECT_FALSE(check_edge_falling(ctx, q).has_value());

    ChainOrder pa{{P.bottom(), f.a, f.x, f.s2, f.top}, {P.bottom(), f.a, f.x, f.s3, f.top}};
    std::map<ElementId, ChainOrder> lower{{f.q1, {{f.q1}}},
                                          {f.q2, {{f.q1, f.q2}}},
                                          {f.q3, {{f.q1, f.q3}}},
                                          {f.q4, {{f.q1, f.q2, f.q4}, {f.q1, f.q3, f.q4}}},
                                          {f.q5, {{f.q1, f.q2, f.q5}, {f.q1, f.q3, f.q5}}}};
    std::map<ElementId, ChainOrder> upper{{f.q1, {{f.q1, f.x, f.s2, f.top}, {f.q1, f.x, f.s3, f.top}}},
                                          {f.q2, {{f.q2, f.s2, f.top}}},
                                          {f.q3, {{f.q3, f.s3, f.top}}},
                                          {f.q4, {{f.q4, f.top}}},
                                          {f.q5, {{f.q5, f.top}}}};
    auto out = criterion_I_combine(ctx, pa, lower, upper, true);
    ASSERT_EQ(out.size(), 10u);
    EXPECT_EQ(ChainOrder(out.begin(), out.begin() + 2), pa);
    ChainOrder tail(out.end() - 4, out.end());
    EXPECT_EQ(tail, (ChainOrder{{P.bottom(), f.q1, f.q2, f.q4, f.top},
                                {P.bottom(), f.q1, f.q3, f.q4, f.top},
                                {P.bottom(), f.q1, f.q2, f.q5, f.top},
                                {P.bottom(), f.q1, f.q3, f.q5, f.top}}));
    EXPECT_TRUE(verify_shelling(P, out).ok());
}

TEST(CriterionII, DiamondSecondAtom) {
    auto d = fixtures::diamond();
    auto at = atoms(d);
    auto ctx = compute_context(d, {at[0]}, at[1]);
    ChainOrder pa{{d.bottom(), at[0], d.require_top()}};
    auto out = criterion_II_combine(ctx, pa, {{at[1], d.require_top()}}, {d.require_top()}, true);
    EXPECT_TRUE(verify_A_shelling(d, at, out).ok());
}

TEST(CriterionII, ConditionThreeViolationNamesWitness) {
    // 0 < a, a+; a < x; a+ < q; x, q < p; a+ < y; p, y < 1: p covers q but p is not above y
    fixtures::Builder b;
    auto z = b.add("0"), a = b.add("a"), ap = b.add("a+"), x = b.add("x"), q = b.add("q"), y = b.add("y");
    auto p = b.add("p"), w = b.add("w"), t = b.add("1");
    b.cover(z, a);
    b.cover(z, ap);
    b.cover(a, x);
    b.cover(ap, q);
    b.cover(ap, y);
    b.cover(x, p);
    b.cover(q, p);
    b.cover(y, w);
    b.cover(x, w);
    b.cover(p, t);
    b.cover(w, t);
    auto P = b.build(z, t);
    auto id = [&](std::size_t i) { return fixtures::Builder::id(P, i); };
    auto ctx = compute_context(P, {id(a)}, id(ap));
    auto bad = check_criterion_II_condition(ctx);
    ASSERT_TRUE(bad.has_value());
    EXPECT_EQ(bad->first, id(q));
    EXPECT_EQ(bad->second, id(p));
}

TEST(CriterionII, SecondAtomCandidateWitness) {
    auto s = VeroneseSpace::pinched(4);
    auto iv = build_veronese_interval(s, v("2226"));
    const auto a_plus = v("0013");
    auto ctx = compute_context(iv.poset, {iv.id(v("0004"))}, iv.id(a_plus));
    auto cat = atom_catalog(4);
    std::set<LatticeVector> a_s(cat->a_s.begin(), cat->a_s.end());
    // A(a+) is exactly {p' in I : p' - a+ in A^S}
    std::set<LatticeVector> direct, expected;
    for (ElementId p : ctx.A_of(ctx.a_plus)) direct.insert(iv.vec(p));
    for (const auto& x : iv.vectors)
        if (x.dominated_by(iv.z) && a_plus.dominated_by(x) && a_s.count(x - a_plus)) expected.insert(x);
    EXPECT_EQ(direct, expected);
    std::size_t used = 0;
    for (ElementId q : ctx.Q)
        for (ElementId p : iv.poset.upper_covers(q)) {
            if (!ctx.in_PA.contains(p)) continue;
            auto step = iv.vec(p) - iv.vec(q);
            if (!a_s.count(step)) continue;
            auto cand = a_plus + step;
            auto id = iv.find(cand);
            ASSERT_TRUE(id.has_value());
            EXPECT_TRUE(iv.poset.covers(ctx.a_plus, *id));
            EXPECT_TRUE(iv.poset.leq(*id, p));
            ++used;
        }
    EXPECT_GT(used, 0u);
    EXPECT_FALSE(check_criterion_II_condition(ctx).has_value());
}

TEST(CriterionIII, IdentityAndFirstAtom) {
    auto b3 = fixtures::boolean_lattice(3);
    auto at = atoms(b3);
    auto full = brute_force_shelling(b3, {}, &at).order;
    EXPECT_EQ(criterion_III_restrict(b3, at, at, full), full);
    std::vector<ElementId> first{at[0]};
    auto out = criterion_III_restrict(b3, at, first, full);
    EXPECT_TRUE(verify_A_shelling(b3, first, out).ok());
    EXPECT_EQ(out.size(), 2u);
}

TEST(CriterionIII, ViolationThrowsWithWitness) {
    auto d = fixtures::diamond();
    auto at = atoms(d);
    auto full = enumerate_maximal_chains(d);
    std::vector<ElementId> second{at[1]};
    auto bad = check_criterion_III_condition(d, at, second);
    ASSERT_TRUE(bad.has_value());
    EXPECT_EQ(bad->first, at[0]);
    EXPECT_EQ(bad->second, d.require_top());
    EXPECT_THROW(criterion_III_restrict(d, at, second, full), PreconditionViolation);
}

TEST(CriterionIII, RestrictionToSecondSliceFamily) {
    auto cat = atom_catalog(4);
    for (const char* zs : {"2334", "1245", "0444", "3324"}) {
        auto z = v(zs);
        PinchedSheller sheller(4);
        const auto& iv = sheller.interval(z);
        auto A = pinched_atoms(iv, cat->l_order);
        auto A2 = pinched_atoms(iv, cat->ell(2));
        auto full = sheller.shell({AssertionKind::L, 0, cat->l_order.size(), z});
        EXPECT_FALSE(check_criterion_III_condition(iv.poset, A, A2).has_value()) << zs;
        auto out = criterion_III_restrict(iv.poset, A, A2, full);
        EXPECT_TRUE(verify_A_shelling(iv.poset, A2, out).ok()) << zs;
    }
}

TEST(RecursiveAtomOrdering, LengthOneAndDiamond) {
    auto c = fixtures::chain(1);
    RecursiveAtomOrderSearch sc(c);
    EXPECT_TRUE(verify_recursive_atom_ordering(c, atoms(c), sc.provider()));
    auto d = fixtures::diamond();
    auto at = atoms(d);
    RecursiveAtomOrderSearch sd(d);
    EXPECT_TRUE(verify_recursive_atom_ordering(d, at, sd.provider()));
    EXPECT_TRUE(verify_recursive_atom_ordering(d, {at[1], at[0]}, sd.provider()));
}

TEST(RecursiveAtomOrdering, BrokenDiamondFails) {
    auto d = fixtures::broken_diamond();
    auto at = atoms(d);
    RecursiveAtomOrderSearch s(d);
    EXPECT_FALSE(verify_recursive_atom_ordering(d, at, s.provider()));
    EXPECT_FALSE(verify_recursive_atom_ordering(d, {at[1], at[0]}, s.provider()));
    EXPECT_FALSE(search_recursive_atom_ordering(d).has_value());
}

TEST(RecursiveAtomOrdering, ImpliesShellable) {
    std::mt19937_64 rng(23);
    int positives = 0;
    for (int t = 0; t < 150; ++t) {
        auto p = fixtures::random_graded(rng, 3, 3, 0.6);
        if (count_maximal_chains(p) > 200) continue;
        RecursiveAtomOrderSearch search(p);
        auto order = search.find(p.bottom(), {});
        if (!order) continue;
        ++positives;
        EXPECT_TRUE(verify_recursive_atom_ordering(p, *order, search.provider()));
        EXPECT_EQ(brute_force_shelling(p).status, SearchResult::Status::found);
    }
    EXPECT_GT(positives, 20);
}

TEST(ElLabeling, ProductOfChains) {
    auto s = el_shelling_divisibility(v("21"));
    EdgeLabeling labels;
    for (auto [a, b] : s.interval.poset.cover_list()) labels[{a, b}] = divisibility_label(s.interval.vec(a), s.interval.vec(b));
    EXPECT_TRUE(verify_el_labeling(s.interval.poset, labels));
}

TEST(ElLabeling, Diamond) {
    auto d = fixtures::diamond();
    auto at = atoms(d);
    const ElementId z = d.bottom(), t = d.require_top();
    EdgeLabeling good{{{z, at[0]}, 1}, {{z, at[1]}, 2}, {{at[0], t}, 2}, {{at[1], t}, 1}};
    EXPECT_TRUE(verify_el_labeling(d, good));
    EdgeLabeling both{{{z, at[0]}, 1}, {{z, at[1]}, 2}, {{at[0], t}, 3}, {{at[1], t}, 4}};
    EXPECT_FALSE(verify_el_labeling(d, both));
    EdgeLabeling partial{{{z, at[0]}, 1}};
    EXPECT_THROW(verify_el_labeling(d, partial), InvalidInput);
}
