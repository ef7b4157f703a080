#ifndef VSHELL_VERONESE_HPP
#define VSHELL_VERONESE_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vshell/errors.hpp"
#include "vshell/lattice_vector.hpp"
#include "vshell/poset.hpp"

namespace vshell {

/// V_{m,n} (plain) or the pinched poset V•_n, where m = n and j = (1,...,1) is removed.
struct VeroneseSpace {
    enum class Kind { plain, pinched };
    Kind kind = Kind::pinched;
    std::size_t n = 4;
    std::size_t m = 4;

    static VeroneseSpace plain(std::size_t m, std::size_t n) {
        if (m == 0 || n == 0 || n > LatticeVector::max_dimension) throw InvalidInput("plain Veronese space needs m, n >= 1 and n <= 16");
        return {Kind::plain, n, m};
    }
    static VeroneseSpace pinched(std::size_t n) {
        if (n < 2 || n > LatticeVector::max_dimension) throw InvalidInput("pinched Veronese space needs 2 <= n <= 16");
        return {Kind::pinched, n, n};
    }

    bool is_pinched() const noexcept { return kind == Kind::pinched; }
    friend bool operator==(const VeroneseSpace&, const VeroneseSpace&) = default;
};

inline bool is_all_ones(const LatticeVector& v) noexcept {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 1) return false;
    return true;
}

inline bool is_member(const VeroneseSpace& s, const LatticeVector& v) noexcept {
    if (v.size() != s.n) return false;
    if (v.sum() % s.m != 0) return false;
    return !(s.is_pinched() && is_all_ones(v));
}

/// a ⪯ b. In the pinched space the difference b - a must itself be a member,
/// so vectors differing by exactly j are incomparable.
inline bool leq(const VeroneseSpace& s, const LatticeVector& a, const LatticeVector& b) noexcept {
    if (a.size() != s.n || b.size() != s.n || !a.dominated_by(b)) return false;
    return is_member(s, b - a);
}

inline std::uint64_t rank(const VeroneseSpace& s, const LatticeVector& v) {
    if (!is_member(s, v)) throw InvalidInput("rank: " + v.to_string() + " is not in the space");
    return v.sum() / s.m;
}

namespace detail {

inline void compositions(std::size_t n, std::uint64_t total, std::vector<LatticeVector>& out, std::uint64_t limit) {
    LatticeVector v(n);
    // Enumerate in lexicographic order: the last coordinate absorbs the remainder.
    auto rec = [&](auto&& self, std::size_t pos, std::uint64_t left) -> void {
        if (pos + 1 == n) {
            v[pos] = static_cast<LatticeVector::value_type>(left);
            if (out.size() >= limit) throw BudgetExceeded("too many vectors to enumerate");
            out.push_back(v);
            return;
        }
        for (std::uint64_t c = 0; c <= left; ++c) {
            v[pos] = static_cast<LatticeVector::value_type>(c);
            self(self, pos + 1, left - c);
        }
    };
    rec(rec, 0, total);
}

}  // namespace detail

/// All vectors of length n with coordinate sum `total`, in lexicographic order.
inline std::vector<LatticeVector> vectors_with_sum(std::size_t n, std::uint64_t total,
                                                   std::uint64_t limit = 5'000'000) {
    std::vector<LatticeVector> out;
    detail::compositions(n, total, out, limit);
    return out;
}

/// Atoms of the space (rank-1 members), in lexicographic order.
inline std::vector<LatticeVector> space_atoms(const VeroneseSpace& s) {
    auto all = vectors_with_sum(s.n, s.m);
    std::erase_if(all, [&](const LatticeVector& v) { return !is_member(s, v); });
    return all;
}

/// A closed interval [0, z] of a Veronese space, with vector <-> id lookup.
struct VeroneseInterval {
    VeroneseSpace space;
    LatticeVector z;
    GradedPoset poset;
    std::vector<LatticeVector> vectors;
    std::unordered_map<LatticeVector, ElementId, LatticeVectorHash> ids;

    const LatticeVector& vec(ElementId x) const { return vectors.at(x); }
    std::optional<ElementId> find(const LatticeVector& v) const {
        auto it = ids.find(v);
        if (it == ids.end()) return std::nullopt;
        return it->second;
    }
    ElementId id(const LatticeVector& v) const {
        auto it = ids.find(v);
        if (it == ids.end()) throw InvalidInput("vector " + v.to_string() + " is not in the interval");
        return it->second;
    }
};

/// Builds [0, z]: ground set {x : 0 ⪯ x ⪯ z}, covers are steps by atoms of the space.
inline VeroneseInterval build_veronese_interval(const VeroneseSpace& s, const LatticeVector& z,
                                                std::uint64_t element_budget = 2'000'000) {
    if (!is_member(s, z) && !z.is_zero()) throw InvalidInput("build_interval: " + z.to_string() + " is not in the space");
    if (z.size() != s.n) throw InvalidInput("build_interval: dimension mismatch");

    std::vector<LatticeVector> ground;
    LatticeVector x(s.n);
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == s.n) {
            if ((x.is_zero() || is_member(s, x)) && leq(s, x, z)) {
                if (ground.size() >= element_budget) throw BudgetExceeded("interval has too many elements");
                ground.push_back(x);
            }
            return;
        }
        for (LatticeVector::value_type c = 0; c <= z[pos]; ++c) {
            x[pos] = c;
            self(self, pos + 1);
        }
        x[pos] = 0;
    };
    rec(rec, 0);

    std::unordered_map<LatticeVector, std::size_t, LatticeVectorHash> index;
    for (std::size_t i = 0; i < ground.size(); ++i) index.emplace(ground[i], i);
    auto steps = space_atoms(s);
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    for (std::size_t i = 0; i < ground.size(); ++i) {
        for (const auto& a : steps) {
            if (!(ground[i] + a).dominated_by(z)) continue;
            auto it = index.find(ground[i] + a);
            if (it != index.end()) covers.emplace_back(i, it->second);
        }
    }
    std::size_t bottom = index.at(LatticeVector(s.n));
    std::size_t top = index.at(z);

    std::vector<Payload> payloads;
    payloads.reserve(ground.size());
    for (const auto& v : ground) payloads.push_back(v.to_payload());

    VeroneseInterval out;
    out.space = s;
    out.z = z;
    out.poset = build_poset(std::move(payloads), std::move(covers), bottom, top);
    out.vectors.reserve(out.poset.size());
    for (ElementId id = 0; id < out.poset.size(); ++id) {
        const auto& p = out.poset.payload(id);
        out.vectors.push_back(LatticeVector::from_signed(p));
        out.ids.emplace(out.vectors.back(), id);
    }
    return out;
}

/// Just the poset of [0, z].
inline GradedPoset build_interval(const VeroneseSpace& s, const LatticeVector& z) {
    return build_veronese_interval(s, z).poset;
}

/// The `<^L` order: plain lexicographic comparison of coordinates.
inline std::strong_ordering lex_cmp(const LatticeVector& a, const LatticeVector& b) {
    if (a.size() != b.size()) throw InvalidInput("lex_cmp: dimension mismatch");
    return a <=> b;
}

/// The vector 1...102.
inline LatticeVector one_one_zero_two(std::size_t n) {
    auto v = LatticeVector::ones(n);
    v[n - 2] = 0;
    v[n - 1] = 2;
    return v;
}

/// Atom of V•_n: coordinate sum n and not j.
inline bool is_pinched_atom(std::size_t n, const LatticeVector& a) {
    return a.size() == n && a.sum() == n && !is_all_ones(a);
}

/// The `<^S` order: A^S by `<^L`, then 1...102, then atoms with last coordinate 0 by `<^L`.
inline std::strong_ordering s_cmp(std::size_t n, const LatticeVector& a, const LatticeVector& b) {
    if (!is_pinched_atom(n, a) || !is_pinched_atom(n, b)) throw InvalidInput("s_cmp: arguments must be atoms of V•_n");
    const auto special = one_one_zero_two(n);
    auto block = [&](const LatticeVector& v) {
        if (v[n - 1] == 0) return 2;
        return v == special ? 1 : 0;
    };
    int ba = block(a), bb = block(b);
    if (ba != bb) return ba <=> bb;
    return a <=> b;
}

/// The atom taxonomy of V•_n with both linear orders materialized.
struct AtomCatalog {
    std::size_t n = 0;
    std::vector<LatticeVector> l_order;
    std::vector<LatticeVector> s_order;
    std::vector<LatticeVector> a_s;
    std::unordered_map<LatticeVector, std::size_t, LatticeVectorHash> l_index;
    std::unordered_map<LatticeVector, std::size_t, LatticeVectorHash> s_index;

    const std::vector<LatticeVector>& a_all() const noexcept { return l_order; }

    /// Membership in A^(l): some coordinate among positions l..n (1-based) is nonzero.
    static bool in_ell(const LatticeVector& a, std::size_t l) { return !a.suffix_is_zero(l); }

    /// A^(l) in `<^L` order.
    std::vector<LatticeVector> ell(std::size_t l) const {
        if (l < 1 || l > n) throw InvalidInput("A^(l) needs 1 <= l <= n");
        std::vector<LatticeVector> out;
        for (const auto& a : l_order)
            if (in_ell(a, l)) out.push_back(a);
        return out;
    }

    std::size_t index_L(const LatticeVector& a) const {
        auto it = l_index.find(a);
        if (it == l_index.end()) throw InvalidInput(a.to_string() + " is not an atom");
        return it->second;
    }
    std::size_t index_S(const LatticeVector& a) const {
        auto it = s_index.find(a);
        if (it == s_index.end()) throw InvalidInput(a.to_string() + " is not an atom");
        return it->second;
    }
};

/// Cached per n. Refuses dimensions whose atom count exceeds `max_atoms`.
inline std::shared_ptr<const AtomCatalog> atom_catalog(std::size_t n, std::uint64_t max_atoms = 2'000'000) {
    if (n < 2) throw InvalidInput("atom_catalog needs n >= 2");
    if (n > LatticeVector::max_dimension) throw InvalidInput("atom_catalog needs n <= 16");
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const AtomCatalog>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    auto cat = std::make_shared<AtomCatalog>();
    cat->n = n;
    cat->l_order = space_atoms(VeroneseSpace::pinched(n));
    if (cat->l_order.size() > max_atoms) throw BudgetExceeded("atom catalog too large");
    cat->s_order = cat->l_order;
    std::stable_sort(cat->s_order.begin(), cat->s_order.end(),
                     [n](const LatticeVector& a, const LatticeVector& b) { return s_cmp(n, a, b) < 0; });
    const auto special = one_one_zero_two(n);
    for (const auto& a : cat->l_order)
        if (a[n - 1] != 0 && a != special) cat->a_s.push_back(a);
    for (std::size_t i = 0; i < cat->l_order.size(); ++i) cat->l_index.emplace(cat->l_order[i], i);
    for (std::size_t i = 0; i < cat->s_order.size(); ++i) cat->s_index.emplace(cat->s_order[i], i);
    cache.emplace(n, cat);
    return cat;
}

/// X ⊕ v.
inline std::vector<LatticeVector> translate(std::span<const LatticeVector> xs, const LatticeVector& v) {
    std::vector<LatticeVector> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(x + v);
    return out;
}

/// X ⊖ v; throws std::domain_error if some coordinate goes negative.
inline std::vector<LatticeVector> translate_down(std::span<const LatticeVector> xs, const LatticeVector& v) {
    std::vector<LatticeVector> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(x - v);
    return out;
}

/// Shifts every payload of a poset whose payloads are vectors by +shift or -shift.
/// The shape (and hence canonical ids) is unchanged whenever the shift preserves
/// the payload order, which translation does.
inline GradedPoset translate(const GradedPoset& p, const LatticeVector& shift, bool subtract = false) {
    std::vector<Payload> payloads;
    payloads.reserve(p.size());
    for (ElementId x = 0; x < p.size(); ++x) {
        auto v = LatticeVector::from_signed(p.payload(x));
        payloads.push_back((subtract ? v - shift : v + shift).to_payload());
    }
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    for (auto [a, b] : p.cover_list()) covers.emplace_back(a, b);
    std::optional<std::size_t> top;
    if (p.top()) top = *p.top();
    return build_poset(std::move(payloads), std::move(covers), p.bottom(), top);
}

}  // namespace vshell

#endif
