#ifndef VSHELL_PINCHED_SHELLER_HPP
#define VSHELL_PINCHED_SHELLER_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "vshell/criteria.hpp"
#include "vshell/errors.hpp"
#include "vshell/lattice_vector.hpp"
#include "vshell/poset.hpp"
#include "vshell/shelling.hpp"
#include "vshell/veronese.hpp"

namespace vshell {

enum class AssertionKind { L, S, Ell };

/// "I⟨first k atoms of the family, intersected with I⟩ is shellable in family order"
/// for I = [0, z]. Families: L and S are A^all under `<^L` / `<^S`; Ell uses
/// A^(ell+1) under `<^L`, with 1 <= ell <= n-1.
struct Assertion {
    AssertionKind kind = AssertionKind::L;
    std::size_t ell = 0;
    std::size_t k = 0;
    LatticeVector z;

    std::string to_string() const {
        std::string head = kind == AssertionKind::L ? "L:" : kind == AssertionKind::S ? "S:" : "ELL:" + std::to_string(ell) + ":";
        return head + std::to_string(k) + " z=" + z.to_string();
    }
};

namespace detail {

inline LatticeVector two_zero_ones(std::size_t n) {
    auto v = LatticeVector::ones(n);
    v[0] = 2;
    v[1] = 0;
    return v;
}

inline LatticeVector two_zero_ones_zero_two(std::size_t n) {
    auto v = two_zero_ones(n);
    v[n - 2] = 0;
    v[n - 1] = 2;
    return v;
}

inline bool pinched_leq(std::size_t n, const LatticeVector& a, const LatticeVector& b) {
    return leq(VeroneseSpace::pinched(n), a, b);
}

}  // namespace detail

/// a' with a' <^L a, a' ⪯ a + j and a' != 1...102; for a = 0...0n returns
/// 0...01(n-1). With `ell`, a' additionally lies in A^(ell+1) (a must not be 0...0n).
inline LatticeVector witness_a_prime(std::size_t n, const LatticeVector& a, std::optional<std::size_t> ell = std::nullopt) {
    auto cat = atom_catalog(n);
    if (!is_pinched_atom(n, a)) throw InvalidInput("witness_a_prime: not an atom");
    if (a == cat->l_order[0]) {
        if (ell) throw InvalidInput("witness_a_prime: the first atom has no witness in A^(l+1)");
        return cat->l_order[1];
    }
    const std::size_t l = a.leading_index();
    LatticeVector b = a;
    b[l - 1] -= 1;
    b[n - 1] += 1;
    LatticeVector out = b;
    if (is_all_ones(b)) {
        out = LatticeVector::ones(n);
        out[n - 2] = 2;
        out[n - 1] = 0;
    } else if (b == one_one_zero_two(n)) {
        out = LatticeVector::ones(n);
        out[n - 3] = 2;
        out[n - 2] = 0;
        out[n - 1] = 1;
    }
    if (ell && !AtomCatalog::in_ell(out, *ell + 1)) {
        std::size_t best = n;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (out[i] != 0 && (best == n || out[i] < out[best])) best = i;
        out[best] -= 1;
        out[n - 1] = 1;
    }
    return out;
}

/// v ∈ A^S with v ≺ u + 1...102, for u nonzero with last coordinate 0 or u = 1...102.
inline LatticeVector witness_v(std::size_t n, const LatticeVector& u) {
    if (n < 4) throw InvalidInput("witness_v needs n >= 4");
    const auto w = one_one_zero_two(n);
    if (u == w) {
        auto v = LatticeVector::ones(n);
        v[n - 3] = 0;
        v[n - 2] = 0;
        v[n - 1] = 3;
        return v;
    }
    if (u.size() != n || u[n - 1] != 0 || u.is_zero() || !is_member(VeroneseSpace::pinched(n), u))
        throw InvalidInput("witness_v: u must be a nonzero member with last coordinate 0, or 1...102");
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (i != n - 2 && u[i] >= 1 && u[i] != 2) {
            pick = i;
            break;
        }
    if (!pick)
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (i != n - 2 && u[i] >= 1) {
                pick = i;
                break;
            }
    auto v = LatticeVector::ones(n);
    if (pick) {
        v[*pick] = 2;
        v[n - 2] = 0;
        v[n - 1] = 1;
    } else {
        v[n - 3] = 0;
        v[n - 2] = 2;
        v[n - 1] = 1;
    }
    return v;
}

enum class QContext { LS2, Lk, Sk };

/// Membership predicate for Q = I⟨A⁺⟩ ∖ I⟨A⟩ in the three induction contexts,
/// without the q ⪯ z condition (intersect with the interval separately).
struct ClosedFormQ {
    std::size_t n = 0;
    QContext context = QContext::Lk;
    LatticeVector a_plus;

    bool contains(const LatticeVector& q) const {
        if (!detail::pinched_leq(n, a_plus, q)) return false;
        const LatticeVector d = q - a_plus;
        auto second_slice = [&] {
            for (std::size_t i = 2; i < n; ++i)
                if (d[i] != 0) return false;
            return d[1] <= 1;
        };
        switch (context) {
            case QContext::LS2: return d[n - 1] == 0 || d == one_one_zero_two(n);
            case QContext::Lk:
                if (a_plus == detail::two_zero_ones(n)) return second_slice();
                return d.suffix_is_zero(a_plus.leading_index() + 1);
            case QContext::Sk:
                if (a_plus == one_one_zero_two(n)) return d.is_zero();
                if (a_plus == detail::two_zero_ones(n) || a_plus == detail::two_zero_ones_zero_two(n)) return second_slice();
                return d.suffix_is_zero(a_plus.leading_index() + 1);
        }
        return false;
    }
};

inline ClosedFormQ closed_form_Q(std::size_t n, QContext context, const LatticeVector& a_plus) {
    if (n < 4) throw InvalidInput("closed_form_Q needs n >= 4");
    auto cat = atom_catalog(n);
    if (!is_pinched_atom(n, a_plus)) throw InvalidInput("closed_form_Q: a+ is not an atom");
    switch (context) {
        case QContext::LS2:
            if (a_plus != cat->l_order[1]) throw InvalidInput("closed_form_Q: LS2 requires a+ = 0...01(n-1)");
            break;
        case QContext::Lk:
            if (cat->index_L(a_plus) < 2) throw InvalidInput("closed_form_Q: Lk requires a+ at position >= 3 in <^L");
            break;
        case QContext::Sk:
            if (cat->index_S(a_plus) < 2) throw InvalidInput("closed_form_Q: Sk requires a+ at position >= 3 in <^S");
            break;
    }
    return {n, context, a_plus};
}

struct ShellerConfig {
    std::size_t max_rank = 6;
    std::size_t memo_cap = 2'000'000;
    bool debug_verify = false;
    std::uint64_t chain_budget = default_chain_budget;
};

struct ShellerStats {
    std::uint64_t assertions_computed = 0;
    std::uint64_t memo_hits = 0;
    std::uint64_t criterion_I = 0;
    std::uint64_t criterion_II = 0;
    std::uint64_t single_atom = 0;
    std::uint64_t restrictions = 0;
    std::uint64_t family_searches = 0;
    std::uint64_t brute_force_fallbacks = 0;
};

/// Memoized recursive construction of A-shellings of intervals [0, z] in V•_n
/// for n >= 4. Orders are returned in ids of interval(z).poset. Not thread-safe;
/// use one instance per thread.
class PinchedSheller {
public:
    explicit PinchedSheller(std::size_t n, ShellerConfig config = {}) : n_(n), config_(config) {
        if (n < 4) throw InvalidInput("the pinched sheller requires n >= 4");
        catalog_ = atom_catalog(n);
        for (std::size_t l = 1; l < n; ++l) ell_families_.push_back(catalog_->ell(l + 1));
    }

    std::size_t n() const noexcept { return n_; }
    const AtomCatalog& catalog() const noexcept { return *catalog_; }
    const ShellerConfig& config() const noexcept { return config_; }
    const ShellerStats& stats() const noexcept { return stats_; }
    std::size_t memo_size() const noexcept { return memo_.size(); }
    void clear() {
        memo_.clear();
        intervals_.clear();
        rank_selected_.clear();
    }

    const VeroneseInterval& interval(const LatticeVector& z) {
        if (auto it = intervals_.find(z); it != intervals_.end()) return *it->second;
        auto space = VeroneseSpace::pinched(n_);
        if (z.size() != n_ || !is_member(space, z)) throw InvalidInput(z.to_string() + " is not in the pinched Veronese poset");
        auto iv = std::make_unique<VeroneseInterval>(build_veronese_interval(space, z));
        return *intervals_.emplace(z, std::move(iv)).first->second;
    }

    /// The atom family of an assertion, in its order (vectors, not restricted to I).
    const std::vector<LatticeVector>& family(AssertionKind kind, std::size_t ell) const {
        switch (kind) {
            case AssertionKind::L: return catalog_->l_order;
            case AssertionKind::S: return catalog_->s_order;
            case AssertionKind::Ell:
                if (ell < 1 || ell >= n_) throw InvalidInput("ELL assertion needs 1 <= l <= n-1");
                return ell_families_[ell - 1];
        }
        throw InvalidInput("unknown assertion kind");
    }

    /// Atoms of the assertion that lie in I, in assertion order, as ids of interval(z).
    AtomOrder atom_order(const Assertion& a) {
        const auto& iv = interval(a.z);
        AtomOrder out;
        const auto& fam = family(a.kind, a.ell);
        for (std::size_t i = 0; i < std::min(a.k, fam.size()); ++i)
            if (detail::pinched_leq(n_, fam[i], a.z)) out.push_back(iv.id(fam[i]));
        return out;
    }

    ChainOrder shell(const Assertion& a) { return *shell_ptr(a); }

    /// Certified shelling of the whole interval [0, z]. For z = 0 this is the
    /// single one-element chain.
    ChainOrder shell_pinched_interval(const LatticeVector& z) {
        const auto& iv = interval(z);
        if (z.is_zero()) return {{iv.poset.bottom()}};
        auto order = shell({AssertionKind::L, 0, catalog_->l_order.size(), z});
        auto v = verify_shelling(iv.poset, order, 1, config_.chain_budget);
        if (!v.ok()) throw VerificationFailure("shelling of [0, " + z.to_string() + "] failed verification: " + v.report.message);
        return order;
    }

    /// verify_A_shelling against the assertion's atom order restricted to I.
    ShellingVerification verify(const Assertion& a, const ChainOrder& order) {
        return verify_A_shelling(interval(a.z).poset, atom_order(a), order, 1, config_.chain_budget);
    }

private:
    using OrderPtr = std::shared_ptr<const ChainOrder>;
    using Key = std::tuple<int, std::size_t, std::size_t, LatticeVector>;

    std::size_t full_k() const noexcept { return catalog_->l_order.size(); }

    void validate(const Assertion& a) const {
        if (a.z.size() != n_) throw InvalidInput("assertion vector has the wrong dimension");
        if (!is_member(VeroneseSpace::pinched(n_), a.z)) throw InvalidInput(a.z.to_string() + " is not in the pinched Veronese poset");
        if (a.z.sum() / n_ > config_.max_rank)
            throw BudgetExceeded("rank of " + a.z.to_string() + " exceeds the configured maximum " + std::to_string(config_.max_rank));
        if (a.k == 0 || a.k > family(a.kind, a.ell).size()) throw InvalidInput("assertion prefix length out of range: " + a.to_string());
    }

    /// Number of leading family entries that matter in I: one past the last one in I.
    std::size_t effective_k(const Assertion& a) const {
        const auto& fam = family(a.kind, a.ell);
        for (std::size_t i = std::min(a.k, fam.size()); i > 0; --i)
            if (detail::pinched_leq(n_, fam[i - 1], a.z)) return i;
        return 0;
    }

    OrderPtr shell_ptr(const Assertion& a) {
        validate(a);
        const std::size_t k = effective_k(a);
        if (k == 0) return std::make_shared<const ChainOrder>();
        Key key{static_cast<int>(a.kind), a.kind == AssertionKind::Ell ? a.ell : 0, k, a.z};
        if (auto it = memo_.find(key); it != memo_.end()) {
            ++stats_.memo_hits;
            return it->second;
        }
        if (memo_.size() >= config_.memo_cap)
            throw BudgetExceeded("memo cap of " + std::to_string(config_.memo_cap) + " assertions reached after computing " +
                                 std::to_string(stats_.assertions_computed) + " assertions");
        Assertion eff = a;
        eff.k = k;
        ChainOrder order = a.kind == AssertionKind::Ell ? restrict_family(eff) : extend_family(eff);
        ++stats_.assertions_computed;
        if (config_.debug_verify) {
            auto v = verify(eff, order);
            if (!v.ok()) throw VerificationFailure("assertion " + eff.to_string() + " failed verification: " + v.report.message);
        }
        auto ptr = std::make_shared<const ChainOrder>(std::move(order));
        memo_.emplace(std::move(key), ptr);
        return ptr;
    }

    /// Full shelling of [0, w] in ids of interval(w).
    OrderPtr full_shelling(const LatticeVector& w) {
        if (w.is_zero()) return std::make_shared<const ChainOrder>(ChainOrder{{interval(w).poset.bottom()}});
        return shell_ptr({AssertionKind::L, 0, full_k(), w});
    }

    /// Maps chains of interval(w) to interval(z) by adding `shift`, optionally prepending 0.
    ChainOrder lift(const LatticeVector& w, const ChainOrder& chains, const LatticeVector& shift, const LatticeVector& z,
                    bool prepend_bottom) {
        const auto& src = interval(w);
        const auto& dst = interval(z);
        ChainOrder out;
        out.reserve(chains.size());
        for (const auto& c : chains) {
            MaximalChain d;
            d.reserve(c.size() + 1);
            if (prepend_bottom) d.push_back(dst.poset.bottom());
            for (ElementId x : c) d.push_back(dst.id(src.vec(x) + shift));
            out.push_back(std::move(d));
        }
        return out;
    }

    ChainOrder restrict_family(const Assertion& a) {
        ++stats_.restrictions;
        auto full = shell_ptr({AssertionKind::L, 0, full_k(), a.z});
        auto keep = atom_order(a);
        if (config_.debug_verify) {
            auto bad = check_criterion_III_condition(interval(a.z).poset, atom_order({AssertionKind::L, 0, full_k(), a.z}), keep);
            if (bad)
                throw PreconditionViolation("restriction condition fails for " + a.to_string() + " at (b, p) = (" +
                                            std::to_string(bad->first) + ", " + std::to_string(bad->second) + ")");
        }
        return criterion_III_restrict(interval(a.z).poset, {}, keep, *full, false);
    }

    ChainOrder extend_family(const Assertion& a) {
        const auto& fam = family(a.kind, a.ell);
        const auto& iv = interval(a.z);
        const LatticeVector& a_plus = fam[a.k - 1];
        AtomOrder before;
        for (std::size_t i = 0; i + 1 < a.k; ++i)
            if (detail::pinched_leq(n_, fam[i], a.z)) before.push_back(iv.id(fam[i]));

        if (before.empty()) {
            ++stats_.single_atom;
            const LatticeVector w = a.z - a_plus;
            auto sub = full_shelling(w);
            return lift(w, *sub, a_plus, a.z, true);
        }
        Assertion prev = a;
        prev.k = a.k - 1;
        auto shelling_PA = shell_ptr(prev);
        auto ctx = compute_context(iv.poset, before, iv.id(a_plus));
        if (a.k == 2) return via_criterion_II(a, a_plus, ctx, *shelling_PA);
        return via_criterion_I(a, a_plus, ctx, *shelling_PA);
    }

    ChainOrder via_criterion_II(const Assertion& a, const LatticeVector& a_plus, const CriterionContext& ctx,
                                const ChainOrder& shelling_PA) {
        ++stats_.criterion_II;
        const LatticeVector w = a.z - a_plus;
        const auto& iv = interval(a.z);
        ChainOrder upper;
        AtomOrder order_on_I;
        if (w.is_zero()) {
            upper = {{iv.id(a_plus)}};
        } else {
            auto sub = shell_ptr({AssertionKind::S, 0, full_k(), w});
            upper = lift(w, *sub, a_plus, a.z, false);
            for (const auto& b : catalog_->s_order)
                if (detail::pinched_leq(n_, b, w)) order_on_I.push_back(iv.id(b + a_plus));
        }
        if (config_.debug_verify) check_closed_form(QContext::LS2, a_plus, a.z, ctx);
        return criterion_II_combine(ctx, shelling_PA, upper, order_on_I, config_.debug_verify);
    }

    ChainOrder via_criterion_I(const Assertion& a, const LatticeVector& a_plus, const CriterionContext& ctx,
                               const ChainOrder& shelling_PA) {
        ++stats_.criterion_I;
        const auto& iv = interval(a.z);
        if (config_.debug_verify) check_closed_form(a.kind == AssertionKind::L ? QContext::Lk : QContext::Sk, a_plus, a.z, ctx);

        std::map<ElementId, ChainOrder> lower, upper;
        for (ElementId q : ctx.Q) {
            const LatticeVector& qv = iv.vec(q);
            lower.emplace(q, lower_shelling(a_plus, qv, a.z, ctx));
            if (q == iv.poset.require_top()) {
                upper.emplace(q, ChainOrder{{q}});
                continue;
            }
            const LatticeVector w = a.z - qv;
            std::set<LatticeVector> target;
            for (ElementId p : ctx.A_of(q)) target.insert(iv.vec(p) - qv);
            if (target.empty()) {
                upper.emplace(q, ChainOrder{});
                continue;
            }
            Assertion sub = upper_assertion(a.kind, a_plus, qv - a_plus, w);
            if (atom_set(sub) != target) sub = search_assertion(w, target);
            auto order = shell_ptr(sub);
            upper.emplace(q, lift(w, *order, qv, a.z, false));
        }
        return criterion_I_combine(ctx, shelling_PA, lower, upper, config_.debug_verify);
    }

    /// Shelling of [a⁺, q] in ids of interval(z). The interval is a plain V_{n,n}
    /// interval because q - a⁺ has a zero last coordinate (or q = a⁺).
    ChainOrder lower_shelling(const LatticeVector& a_plus, const LatticeVector& q, const LatticeVector& z,
                              const CriterionContext& ctx) {
        const auto& iv = interval(z);
        if (q == a_plus) return {{iv.id(q)}};
        const LatticeVector d = q - a_plus;
        auto it = rank_selected_.find(d);
        if (it == rank_selected_.end()) it = rank_selected_.emplace(d, rank_selected_shelling(d, n_, config_.chain_budget)).first;
        const auto& rs = it->second;
        ChainOrder out;
        out.reserve(rs.order.size());
        bool ok = true;
        for (const auto& c : rs.order) {
            MaximalChain m;
            for (ElementId x : c) {
                auto id = iv.find(rs.interval.vec(x) + a_plus);
                if (!id) {
                    ok = false;
                    break;
                }
                m.push_back(*id);
            }
            if (!ok) break;
            out.push_back(std::move(m));
        }
        auto sub = closed_interval(iv.poset, ctx.a_plus, iv.id(q));
        if (ok && (!config_.debug_verify || verify_shelling(sub.poset, sub.order_to_local(out)).ok())) return out;
        ++stats_.brute_force_fallbacks;
        auto found = brute_force_shelling(sub.poset);
        if (found.status != SearchResult::Status::found)
            throw VerificationFailure("no shelling found for [a+, q] with q = " + q.to_string());
        return sub.order_to_parent(found.order);
    }

    /// The tier-3 assertion used by the induction for I(q)⟨A(q)⟩ ⊖ q = [0, w]⟨...⟩.
    Assertion upper_assertion(AssertionKind kind, const LatticeVector& a_plus, const LatticeVector& d, const LatticeVector& w) const {
        const bool exceptional =
            a_plus == detail::two_zero_ones(n_) || (kind == AssertionKind::S && a_plus == detail::two_zero_ones_zero_two(n_));
        if (kind == AssertionKind::S && a_plus == one_one_zero_two(n_)) return {AssertionKind::L, 0, full_k(), w};
        if (exceptional) {
            if (d[1] == 1) return {AssertionKind::Ell, 1, ell_families_[0].size(), w};
            return {AssertionKind::L, 0, full_k() - 2, w};
        }
        const std::size_t l = a_plus.leading_index();
        return {AssertionKind::Ell, l, ell_families_[l - 1].size(), w};
    }

    std::set<LatticeVector> atom_set(const Assertion& a) const {
        std::set<LatticeVector> out;
        const auto& fam = family(a.kind, a.ell);
        for (std::size_t i = 0; i < std::min(a.k, fam.size()); ++i)
            if (detail::pinched_leq(n_, fam[i], a.z)) out.insert(fam[i]);
        return out;
    }

    Assertion search_assertion(const LatticeVector& w, const std::set<LatticeVector>& target) {
        ++stats_.family_searches;
        for (std::size_t l = 1; l < n_; ++l) {
            Assertion c{AssertionKind::Ell, l, ell_families_[l - 1].size(), w};
            if (atom_set(c) == target) return c;
        }
        for (AssertionKind kind : {AssertionKind::L, AssertionKind::S})
            for (std::size_t k = 1; k <= full_k(); ++k) {
                Assertion c{kind, 0, k, w};
                if (atom_set(c) == target) return c;
            }
        throw VerificationFailure("no induction assertion matches the atom set above an element of Q in [0, " + w.to_string() + "]");
    }

    void check_closed_form(QContext context, const LatticeVector& a_plus, const LatticeVector& z, const CriterionContext& ctx) {
        auto pred = closed_form_Q(n_, context, a_plus);
        const auto& iv = interval(z);
        for (ElementId x = 0; x < iv.poset.size(); ++x) {
            const bool direct = ctx.in_Q.contains(x);
            const bool closed = x != iv.poset.bottom() && pred.contains(iv.vec(x));
            if (direct != closed)
                throw VerificationFailure("closed-form Q disagrees with direct Q at " + iv.vec(x).to_string() + " for a+ = " +
                                          a_plus.to_string());
        }
    }

    std::size_t n_;
    ShellerConfig config_;
    std::shared_ptr<const AtomCatalog> catalog_;
    std::vector<std::vector<LatticeVector>> ell_families_;
    std::map<LatticeVector, std::unique_ptr<VeroneseInterval>> intervals_;
    std::map<LatticeVector, IntervalShelling> rank_selected_;
    std::map<Key, OrderPtr> memo_;
    ShellerStats stats_;
};

/// One-shot convenience wrapper.
inline ChainOrder shell_assertion(std::size_t n, const Assertion& a, ShellerConfig config = {}) {
    PinchedSheller sheller(n, config);
    return sheller.shell(a);
}

inline ChainOrder shell_pinched_interval(std::size_t n, const LatticeVector& z, ShellerConfig config = {}) {
    PinchedSheller sheller(n, config);
    return sheller.shell_pinched_interval(z);
}

}  // namespace vshell

#endif
