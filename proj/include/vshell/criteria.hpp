#ifndef VSHELL_CRITERIA_HPP
#define VSHELL_CRITERIA_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vshell/errors.hpp"
#include "vshell/poset.hpp"
#include "vshell/shelling.hpp"

namespace vshell {

/// A precondition of a combiner does not hold; the message names a witness.
class PreconditionViolation : public VerificationFailure {
public:
    using VerificationFailure::VerificationFailure;
};

/// Setup shared by the three criteria, all in ids of the ambient poset P.
struct CriterionContext {
    const GradedPoset* poset = nullptr;
    AtomOrder atoms;
    ElementId a_plus = no_element;
    ElementSet in_PA;        ///< ground set of P⟨A⟩
    ElementSet in_PA_plus;   ///< ground set of P⟨A ∪ {a⁺}⟩
    std::vector<ElementId> Q;  ///< P⟨A⁺⟩ ∖ P⟨A⟩ sorted by (rank, id)
    ElementSet in_Q;

    const GradedPoset& P() const { return *poset; }
    bool in_P_A(ElementId x) const { return in_PA.contains(x); }
    bool in_Q_set(ElementId x) const { return in_Q.contains(x); }

    /// Atoms of I(q) = [q, 1̂] that lie in P⟨A⟩.
    std::vector<ElementId> A_of(ElementId q) const {
        std::vector<ElementId> out;
        for (ElementId p : P().upper_covers(q))
            if (in_PA.contains(p)) out.push_back(p);
        return out;
    }
    /// All atoms of I(q).
    std::vector<ElementId> A_all_of(ElementId q) const {
        auto u = P().upper_covers(q);
        return {u.begin(), u.end()};
    }
};

inline ElementSet atom_generated_ground(const GradedPoset& p, std::span<const ElementId> atom_set) {
    ElementSet g(p.size());
    g.insert(p.bottom());
    for (ElementId a : atom_set) g |= p.up_set(a);
    return g;
}

inline CriterionContext compute_context(const GradedPoset& p, AtomOrder A, ElementId a_plus) {
    if (!p.covers(p.bottom(), a_plus)) throw InvalidInput("compute_context: a+ is not an atom");
    for (ElementId a : A) {
        if (!p.covers(p.bottom(), a)) throw InvalidInput("compute_context: A contains a non-atom");
        if (a == a_plus) throw InvalidInput("compute_context: a+ belongs to A");
    }
    CriterionContext ctx;
    ctx.poset = &p;
    ctx.atoms = std::move(A);
    ctx.a_plus = a_plus;
    ctx.in_PA = atom_generated_ground(p, ctx.atoms);
    ctx.in_PA_plus = ctx.in_PA;
    ctx.in_PA_plus |= p.up_set(a_plus);
    ctx.in_Q = p.up_set(a_plus);
    ctx.in_Q.subtract(ctx.in_PA);
    ctx.Q = ctx.in_Q.elements();  // canonical ids are already rank-sorted
    return ctx;
}

/// Edge-falling check for q: returns the first violating (p, q') if any.
inline std::optional<std::pair<ElementId, ElementId>> check_edge_falling(const CriterionContext& ctx, ElementId q) {
    const auto& P = ctx.P();
    for (ElementId p : P.upper_covers(q)) {
        if (!ctx.in_PA.contains(p)) continue;
        for (ElementId qp : P.lower_covers(q)) {
            if (qp != P.bottom() && !ctx.in_Q.contains(qp)) continue;
            bool found = false;
            for (ElementId pp : P.lower_covers(p))
                if (ctx.in_PA.contains(pp) && P.covers(qp, pp)) {
                    found = true;
                    break;
                }
            if (!found) return std::make_pair(p, qp);
        }
    }
    return std::nullopt;
}

/// Condition (iii) of Criterion II: every p ∈ P⟨A⟩ covering some q ∈ Q lies in
/// I(a⁺)⟨A(a⁺)⟩. Returns the first violating (q, p).
inline std::optional<std::pair<ElementId, ElementId>> check_criterion_II_condition(const CriterionContext& ctx) {
    const auto& P = ctx.P();
    ElementSet allowed(P.size());
    for (ElementId b : ctx.A_of(ctx.a_plus)) allowed |= P.up_set(b);
    for (ElementId q : ctx.Q)
        for (ElementId p : P.upper_covers(q))
            if (ctx.in_PA.contains(p) && !allowed.contains(p)) return std::make_pair(q, p);
    return std::nullopt;
}

/// Condition (ii) of Criterion III. Returns the first violating (b, p).
inline std::optional<std::pair<ElementId, ElementId>> check_criterion_III_condition(const GradedPoset& P, const AtomOrder& A,
                                                                                    const std::vector<ElementId>& A_prime) {
    std::unordered_map<ElementId, std::size_t> pos;
    for (std::size_t i = 0; i < A.size(); ++i) pos.emplace(A[i], i);
    ElementSet keep(P.size());
    for (ElementId b : A_prime) {
        if (!pos.count(b)) throw InvalidInput("criterion III: A' is not a subset of A");
        keep.insert(b);
    }
    ElementSet ground = atom_generated_ground(P, A_prime);
    for (std::size_t i = 0; i < A.size(); ++i) {
        ElementId b = A[i];
        if (keep.contains(b)) continue;
        for (ElementId p : P.upper_covers(b)) {
            if (!ground.contains(p)) continue;
            bool found = false;
            for (ElementId bp : P.lower_covers(p))
                if (keep.contains(bp) && pos.at(bp) < i) {
                    found = true;
                    break;
                }
            if (!found) return std::make_pair(b, p);
        }
    }
    return std::nullopt;
}

namespace detail {

inline std::string id_pair(const char* what, ElementId a, ElementId b) {
    return std::string(what) + " (" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

inline std::unordered_map<MaximalChain, std::size_t, ChainHash> positions(const ChainOrder& order) {
    std::unordered_map<MaximalChain, std::size_t, ChainHash> m;
    m.reserve(order.size() * 2);
    for (std::size_t i = 0; i < order.size(); ++i) m.emplace(order[i], i);
    return m;
}

/// Maximal chains of I(q)⟨A(q)⟩ in ambient ids; {[q]} when q is the top.
inline ChainOrder upper_chains(const CriterionContext& ctx, ElementId q) {
    const auto& P = ctx.P();
    if (q == P.require_top()) return {{q}};
    auto iv = closed_interval(P, q, P.require_top());
    std::vector<ElementId> local_atoms;
    for (ElementId a : ctx.A_of(q)) local_atoms.push_back(*iv.to_local(a));
    if (local_atoms.empty()) return {};
    return iv.order_to_parent(enumerate_chains_through(iv.poset, local_atoms));
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionViolation(what);
}

}  // namespace detail

/// Shelling of P⟨A⁺⟩ from Criterion I.
///
/// Chains of P⟨A⟩ come first in the given order. Chains through a⁺ follow, sorted
/// by: the index in ctx.Q of the highest element of the chain lying in Q; then the
/// position of the chain's part in [a⁺, q] within `interval_shellings[q]`; then the
/// position of its part in [q, 1̂] within `upper_shellings[q]`. All orders use
/// ambient ids. With `check`, every precondition and the output are verified.
inline ChainOrder criterion_I_combine(const CriterionContext& ctx, const ChainOrder& shelling_PA,
                                      const std::map<ElementId, ChainOrder>& interval_shellings,
                                      const std::map<ElementId, ChainOrder>& upper_shellings, bool check = false) {
    const auto& P = ctx.P();
    const ElementId top = P.require_top();
    if (check) {
        auto v = verify_A_shelling(P, ctx.atoms, shelling_PA);
        detail::require(v.ok(), "criterion I (i): P<A> order is not an A-shelling: " + v.report.message);
        for (ElementId q : ctx.Q) {
            auto it = interval_shellings.find(q);
            detail::require(it != interval_shellings.end(), "criterion I (ii): missing shelling of [a+, q]");
            auto iv = closed_interval(P, ctx.a_plus, q);
            auto lv = verify_shelling(iv.poset, iv.order_to_local(it->second));
            detail::require(lv.ok(), "criterion I (ii): [a+, q] order is not a shelling: " + lv.report.message);
            auto ef = check_edge_falling(ctx, q);
            detail::require(!ef, ef ? detail::id_pair("criterion I (iii): edge falling fails at (p, q')", ef->first, ef->second) : "");
            auto ut = upper_shellings.find(q);
            detail::require(ut != upper_shellings.end(), "criterion I (iv): missing shelling of I(q)<A(q)>");
            auto expected = detail::upper_chains(ctx, q);
            std::string why;
            detail::require(detail::is_permutation_of(ut->second, expected, why), "criterion I (iv): " + why);
            auto uv = verify_shelling_order(ut->second);
            detail::require(uv.ok(), "criterion I (iv): I(q)<A(q)> order is not a shelling: " + uv.report.message);
        }
    }

    std::unordered_map<ElementId, std::size_t> q_index;
    for (std::size_t i = 0; i < ctx.Q.size(); ++i) q_index.emplace(ctx.Q[i], i);
    std::map<ElementId, std::unordered_map<MaximalChain, std::size_t, detail::ChainHash>> lower_pos, upper_pos;
    for (auto& [q, order] : interval_shellings) lower_pos.emplace(q, detail::positions(order));
    for (auto& [q, order] : upper_shellings) upper_pos.emplace(q, detail::positions(order));

    std::vector<ElementId> through{ctx.a_plus};
    auto fresh = enumerate_chains_through(P, through);
    using Key = std::array<std::size_t, 3>;
    std::vector<std::pair<Key, std::size_t>> keyed;
    keyed.reserve(fresh.size());
    for (std::size_t ci = 0; ci < fresh.size(); ++ci) {
        const auto& c = fresh[ci];
        std::size_t r = 1;
        while (r + 1 < c.size() && ctx.in_Q.contains(c[r + 1])) ++r;
        const ElementId q = c[r];
        MaximalChain lower(c.begin() + 1, c.begin() + static_cast<std::ptrdiff_t>(r) + 1);
        MaximalChain upper(c.begin() + static_cast<std::ptrdiff_t>(r), c.end());
        auto lp = lower_pos.find(q);
        auto up = upper_pos.find(q);
        if (lp == lower_pos.end() || up == upper_pos.end())
            throw InvalidInput("criterion I: missing sub-shelling for element " + std::to_string(q));
        auto li = lp->second.find(lower);
        auto ui = up->second.find(upper);
        if (li == lp->second.end() || ui == up->second.end())
            throw InvalidInput("criterion I: a sub-shelling does not contain a required chain");
        keyed.push_back({Key{q_index.at(q), li->second, ui->second}, ci});
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 1; i < keyed.size(); ++i)
        if (keyed[i].first == keyed[i - 1].first) throw VerificationFailure("criterion I: tie between two chains");

    ChainOrder out = shelling_PA;
    out.reserve(out.size() + keyed.size());
    for (auto& [key, ci] : keyed) out.push_back(std::move(fresh[ci]));
    (void)top;
    if (check) {
        AtomOrder plus = ctx.atoms;
        plus.push_back(ctx.a_plus);
        auto v = verify_A_shelling(P, plus, out);
        if (!v.ok()) throw VerificationFailure("criterion I output failed verification: " + v.report.message);
    }
    return out;
}

/// Shelling of P⟨A⁺⟩ from Criterion II: chains of P⟨A⟩ first, then the chains
/// through a⁺ in the order of their parts in `shelling_I_a_plus` (a shelling of
/// I(a⁺) in ambient ids).
inline ChainOrder criterion_II_combine(const CriterionContext& ctx, const ChainOrder& shelling_PA,
                                       const ChainOrder& shelling_I_a_plus, const AtomOrder& atom_order_on_I,
                                       bool check = false) {
    const auto& P = ctx.P();
    if (check) {
        auto v = verify_A_shelling(P, ctx.atoms, shelling_PA);
        detail::require(v.ok(), "criterion II (i): P<A> order is not an A-shelling: " + v.report.message);
        auto a_set = ctx.A_of(ctx.a_plus);
        std::vector<ElementId> sorted_first(atom_order_on_I.begin(),
                                            atom_order_on_I.begin() + static_cast<std::ptrdiff_t>(std::min(a_set.size(), atom_order_on_I.size())));
        std::sort(sorted_first.begin(), sorted_first.end());
        detail::require(sorted_first == a_set, "criterion II (ii): atom order on I(a+) does not list A(a+) first");
        auto iv = closed_interval(P, ctx.a_plus, P.require_top());
        if (ctx.a_plus != P.require_top()) {
            AtomOrder local_order;
            for (ElementId a : atom_order_on_I) local_order.push_back(*iv.to_local(a));
            detail::require(local_order.size() == atoms(iv.poset).size(), "criterion II (ii): atom order on I(a+) is incomplete");
            auto lv = verify_A_shelling(iv.poset, local_order, iv.order_to_local(shelling_I_a_plus));
            detail::require(lv.ok(), "criterion II (ii): I(a+) order is not an A-shelling: " + lv.report.message);
        }
        auto bad = check_criterion_II_condition(ctx);
        detail::require(!bad, bad ? detail::id_pair("criterion II (iii): violated at (q, p)", bad->first, bad->second) : "");
    }
    ChainOrder out = shelling_PA;
    out.reserve(out.size() + shelling_I_a_plus.size());
    for (const auto& d : shelling_I_a_plus) {
        if (d.empty() || d.front() != ctx.a_plus) throw InvalidInput("criterion II: chain of I(a+) does not start at a+");
        MaximalChain c;
        c.reserve(d.size() + 1);
        c.push_back(P.bottom());
        c.insert(c.end(), d.begin(), d.end());
        out.push_back(std::move(c));
    }
    if (check) {
        AtomOrder plus = ctx.atoms;
        plus.push_back(ctx.a_plus);
        auto v = verify_A_shelling(P, plus, out);
        if (!v.ok()) throw VerificationFailure("criterion II output failed verification: " + v.report.message);
    }
    return out;
}

/// Shelling of P⟨A'⟩ from Criterion III: the subsequence of `shelling_PA` whose
/// atoms lie in A'. Condition (ii) is always checked; violations throw
/// PreconditionViolation naming (b, p).
inline ChainOrder criterion_III_restrict(const GradedPoset& P, const AtomOrder& A, const std::vector<ElementId>& A_prime,
                                         const ChainOrder& shelling_PA, bool check_condition = true) {
    if (check_condition) {
        auto bad = check_criterion_III_condition(P, A, A_prime);
        if (bad) throw PreconditionViolation(detail::id_pair("criterion III (ii): violated at (b, p)", bad->first, bad->second));
    }
    ElementSet keep(P.size());
    for (ElementId b : A_prime) keep.insert(b);
    ChainOrder out;
    for (const auto& c : shelling_PA)
        if (keep.contains(chain_atom(c))) out.push_back(c);
    return out;
}

/// Supplies, for an interval [x, 1̂] and the atoms that must come first, an atom
/// ordering of that interval (ambient ids), or nothing.
using AtomOrderProvider = std::function<std::optional<AtomOrder>(ElementId x, const std::vector<ElementId>& must_first)>;

namespace detail {

/// (R2) for the atom a_j = order[j] of [x, 1̂] against the earlier atoms.
inline bool r2_holds(const GradedPoset& P, const AtomOrder& order, std::size_t j) {
    if (j == 0) return true;
    const ElementId aj = order[j];
    ElementSet common(P.size());
    for (std::size_t i = 0; i < j; ++i) {
        ElementSet s = P.up_set(order[i]);
        s &= P.up_set(aj);
        common |= s;
    }
    ElementSet reach(P.size());
    for (ElementId z : P.upper_covers(aj))
        for (std::size_t k = 0; k < j; ++k)
            if (P.covers(order[k], z)) {
                reach |= P.up_set(z);
                break;
            }
    return common.subset_of(reach);
}

inline std::vector<ElementId> covering_earlier(const GradedPoset& P, const AtomOrder& order, std::size_t j) {
    std::vector<ElementId> out;
    for (ElementId z : P.upper_covers(order[j]))
        for (std::size_t i = 0; i < j; ++i)
            if (P.covers(order[i], z)) {
                out.push_back(z);
                break;
            }
    return out;
}

}  // namespace detail

/// Recursive atom ordering check on [x, 1̂] (default x = 0̂). `order` lists the
/// upper covers of x; sub-orders for [a_j, 1̂] come from `provider`.
inline bool verify_recursive_atom_ordering(const GradedPoset& P, const AtomOrder& order, const AtomOrderProvider& provider,
                                           std::optional<ElementId> root = std::nullopt) {
    const ElementId x = root.value_or(P.bottom());
    const ElementId top = P.require_top();
    if (P.rank(top) - P.rank(x) <= 1) return true;
    auto covers = P.upper_covers(x);
    std::vector<ElementId> sorted_order(order);
    std::sort(sorted_order.begin(), sorted_order.end());
    if (!std::equal(sorted_order.begin(), sorted_order.end(), covers.begin(), covers.end())) return false;
    for (std::size_t j = 0; j < order.size(); ++j) {
        if (!detail::r2_holds(P, order, j)) return false;
        auto first = detail::covering_earlier(P, order, j);
        auto sub = provider(order[j], first);
        if (!sub) return false;
        std::vector<ElementId> head(sub->begin(), sub->begin() + static_cast<std::ptrdiff_t>(std::min(first.size(), sub->size())));
        std::sort(head.begin(), head.end());
        if (head != first) return false;
        if (!verify_recursive_atom_ordering(P, *sub, provider, order[j])) return false;
    }
    return true;
}

/// Backtracking search for a recursive atom ordering of [x, 1̂] in which
/// `must_first` atoms come first. Returns the top-level order found.
class RecursiveAtomOrderSearch {
public:
    explicit RecursiveAtomOrderSearch(const GradedPoset& P, std::uint64_t node_budget = 10'000'000)
        : P_(P), budget_(node_budget) {}

    std::optional<AtomOrder> find(ElementId x, std::vector<ElementId> must_first) {
        std::sort(must_first.begin(), must_first.end());
        auto key = std::make_pair(x, must_first);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::optional<AtomOrder> result;
        if (P_.rank(P_.require_top()) - P_.rank(x) <= 1) {
            auto u = P_.upper_covers(x);
            AtomOrder o(must_first);
            for (ElementId a : u)
                if (!std::binary_search(must_first.begin(), must_first.end(), a)) o.push_back(a);
            result = o;
        } else {
            AtomOrder current;
            std::vector<char> used(P_.size(), 0);
            if (extend(x, must_first, current, used)) result = current;
        }
        memo_.emplace(std::move(key), result);
        return result;
    }

    /// Provider usable with verify_recursive_atom_ordering.
    AtomOrderProvider provider() {
        return [this](ElementId x, const std::vector<ElementId>& first) { return find(x, first); };
    }

    bool exhausted() const noexcept { return nodes_ > budget_; }

private:
    bool extend(ElementId x, const std::vector<ElementId>& must_first, AtomOrder& current, std::vector<char>& used) {
        auto covers = P_.upper_covers(x);
        if (current.size() == covers.size()) return true;
        if (++nodes_ > budget_) throw BudgetExceeded("recursive atom ordering search exceeded its node budget");
        const bool in_first_block = current.size() < must_first.size();
        for (ElementId a : covers) {
            if (used[a]) continue;
            const bool is_first = std::binary_search(must_first.begin(), must_first.end(), a);
            if (in_first_block != is_first) continue;
            current.push_back(a);
            used[a] = 1;
            const std::size_t j = current.size() - 1;
            if (detail::r2_holds(P_, current, j) && find(a, detail::covering_earlier(P_, current, j)) &&
                extend(x, must_first, current, used))
                return true;
            used[a] = 0;
            current.pop_back();
        }
        return false;
    }

    const GradedPoset& P_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::map<std::pair<ElementId, std::vector<ElementId>>, std::optional<AtomOrder>> memo_;
};

inline std::optional<AtomOrder> search_recursive_atom_ordering(const GradedPoset& P, std::uint64_t node_budget = 10'000'000) {
    RecursiveAtomOrderSearch search(P, node_budget);
    return search.find(P.bottom(), {});
}

/// Integer labels on covers, keyed by (lower, upper).
using EdgeLabeling = std::map<Cover, std::int64_t>;

/// EL check: every closed interval [x, y] has exactly one weakly increasing
/// maximal chain, and its label word is strictly smaller than every other word.
inline bool verify_el_labeling(const GradedPoset& P, const EdgeLabeling& labels) {
    for (auto [a, b] : P.cover_list())
        if (!labels.count({a, b})) throw InvalidInput("verify_el_labeling: a cover has no label");
    std::vector<std::int64_t> word;
    for (ElementId x = 0; x < P.size(); ++x) {
        for (ElementId y : P.up_set(x).elements()) {
            if (P.rank(y) - P.rank(x) < 2) continue;
            std::size_t increasing = 0;
            std::vector<std::int64_t> inc_word;
            std::optional<std::vector<std::int64_t>> best;
            std::size_t best_count = 0;
            auto dfs = [&](auto&& self, ElementId cur) -> void {
                if (cur == y) {
                    bool inc = std::is_sorted(word.begin(), word.end());
                    if (inc) {
                        ++increasing;
                        inc_word = word;
                    }
                    if (!best || word < *best) {
                        best = word;
                        best_count = 1;
                    } else if (word == *best) {
                        ++best_count;
                    }
                    return;
                }
                for (ElementId nxt : P.upper_covers(cur)) {
                    if (!P.leq(nxt, y)) continue;
                    word.push_back(labels.at({cur, nxt}));
                    self(self, nxt);
                    word.pop_back();
                }
            };
            dfs(dfs, x);
            if (increasing != 1 || best_count != 1 || inc_word != *best) return false;
        }
    }
    return true;
}

}  // namespace vshell

#endif
