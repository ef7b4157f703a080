#ifndef VSHELL_POSET_HPP
#define VSHELL_POSET_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vshell/errors.hpp"

namespace vshell {

using ElementId = std::uint32_t;
using Payload = std::vector<std::int64_t>;
using MaximalChain = std::vector<ElementId>;
using ChainOrder = std::vector<MaximalChain>;
using AtomOrder = std::vector<ElementId>;
using Cover = std::pair<ElementId, ElementId>;

inline constexpr ElementId no_element = std::numeric_limits<ElementId>::max();
inline constexpr std::uint64_t default_chain_budget = 5'000'000;

/// Fixed-size bitset over element ids.
class ElementSet {
public:
    ElementSet() = default;
    explicit ElementSet(std::size_t n) : bits_((n + 63) / 64, 0), size_(n) {}

    std::size_t universe() const noexcept { return size_; }
    bool contains(ElementId x) const noexcept { return (bits_[x >> 6] >> (x & 63)) & 1u; }
    void insert(ElementId x) noexcept { bits_[x >> 6] |= std::uint64_t{1} << (x & 63); }
    void erase(ElementId x) noexcept { bits_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }

    ElementSet& operator|=(const ElementSet& o) noexcept {
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
        return *this;
    }
    ElementSet& operator&=(const ElementSet& o) noexcept {
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
        return *this;
    }
    ElementSet& subtract(const ElementSet& o) noexcept {
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
        return *this;
    }
    bool subset_of(const ElementSet& o) const noexcept {
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & ~o.bits_[i]) return false;
        return true;
    }
    bool empty() const noexcept {
        return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
    }
    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : bits_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }
    std::vector<ElementId> elements() const {
        std::vector<ElementId> out;
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            std::uint64_t w = bits_[i];
            while (w) {
                out.push_back(static_cast<ElementId>(i * 64 + static_cast<std::size_t>(__builtin_ctzll(w))));
                w &= w - 1;
            }
        }
        return out;
    }
    friend bool operator==(const ElementSet&, const ElementSet&) = default;

private:
    std::vector<std::uint64_t> bits_;
    std::size_t size_ = 0;
};

/// A finite graded poset with an explicit Hasse diagram and a unique bottom.
///
/// Element ids are canonical: sorted by (rank, payload). Covers are stored as
/// sorted adjacency lists, and the full order relation is precomputed as one
/// up-set bitset per element. Instances are immutable once built.
class GradedPoset {
public:
    GradedPoset() = default;

    std::size_t size() const noexcept { return payloads_.size(); }
    const Payload& payload(ElementId x) const { return payloads_.at(x); }
    const std::vector<Payload>& payloads() const noexcept { return payloads_; }
    int rank(ElementId x) const { return ranks_.at(x); }
    std::span<const ElementId> upper_covers(ElementId x) const { return up_.at(x); }
    std::span<const ElementId> lower_covers(ElementId x) const { return down_.at(x); }
    ElementId bottom() const noexcept { return bottom_; }
    std::optional<ElementId> top() const noexcept { return top_; }
    bool bounded() const noexcept { return top_.has_value(); }

    ElementId require_top() const {
        if (!top_) throw InvalidInput("poset has no designated top element");
        return *top_;
    }

    /// Rank of the top element.
    int length() const { return ranks_.at(require_top()); }

    int max_rank() const noexcept { return ranks_.empty() ? 0 : ranks_.back(); }

    bool leq(ElementId x, ElementId y) const { return above_.at(x).contains(y); }
    bool less(ElementId x, ElementId y) const { return x != y && leq(x, y); }
    bool covers(ElementId lower, ElementId upper) const {
        auto u = upper_covers(lower);
        return std::binary_search(u.begin(), u.end(), upper);
    }

    /// The principal up-set {y : x <= y}.
    const ElementSet& up_set(ElementId x) const { return above_.at(x); }

    std::optional<ElementId> find(const Payload& p) const {
        auto it = std::lower_bound(by_payload_.begin(), by_payload_.end(), p,
                                   [this](ElementId id, const Payload& key) { return payloads_[id] < key; });
        if (it == by_payload_.end() || payloads_[*it] != p) return std::nullopt;
        return *it;
    }

    std::vector<ElementId> elements_of_rank(int r) const {
        std::vector<ElementId> out;
        for (ElementId x = 0; x < size(); ++x)
            if (ranks_[x] == r) out.push_back(x);
        return out;
    }

    std::vector<Cover> cover_list() const {
        std::vector<Cover> out;
        for (ElementId x = 0; x < size(); ++x)
            for (ElementId y : up_[x]) out.emplace_back(x, y);
        return out;
    }

    std::size_t cover_count() const noexcept {
        std::size_t c = 0;
        for (const auto& u : up_) c += u.size();
        return c;
    }

    friend bool operator==(const GradedPoset& a, const GradedPoset& b) {
        return a.payloads_ == b.payloads_ && a.up_ == b.up_ && a.bottom_ == b.bottom_ && a.top_ == b.top_;
    }

private:
    friend GradedPoset build_poset(std::vector<Payload>, std::vector<std::pair<std::size_t, std::size_t>>,
                                   std::size_t, std::optional<std::size_t>);

    std::vector<Payload> payloads_;
    std::vector<int> ranks_;
    std::vector<std::vector<ElementId>> up_;
    std::vector<std::vector<ElementId>> down_;
    std::vector<ElementSet> above_;
    std::vector<ElementId> by_payload_;
    ElementId bottom_ = 0;
    std::optional<ElementId> top_;
};

/// Builds a canonical graded poset from a Hasse diagram given by index pairs
/// (lower, upper) into `elements`.
///
/// Rejects duplicate payloads, cycles, elements not above `bottom`, elements
/// not below `top`, and diagrams whose longest and shortest path lengths from
/// `bottom` disagree somewhere (not graded, or a listed cover is implied by a
/// longer path). Duplicate cover pairs are merged.
inline GradedPoset build_poset(std::vector<Payload> elements, std::vector<std::pair<std::size_t, std::size_t>> covers,
                               std::size_t bottom, std::optional<std::size_t> top = std::nullopt) {
    const std::size_t n = elements.size();
    if (n == 0) throw InvalidInput("poset must have at least one element");
    if (n >= no_element) throw InvalidInput("too many elements");
    if (bottom >= n) throw InvalidInput("bottom index out of range");
    if (top && *top >= n) throw InvalidInput("top index out of range");

    {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return elements[a] < elements[b]; });
        for (std::size_t i = 1; i < n; ++i)
            if (elements[idx[i]] == elements[idx[i - 1]]) throw InvalidInput("duplicate element payload");
    }

    std::sort(covers.begin(), covers.end());
    covers.erase(std::unique(covers.begin(), covers.end()), covers.end());
    std::vector<std::vector<std::size_t>> up(n), down(n);
    for (auto [lo, hi] : covers) {
        if (lo >= n || hi >= n) throw InvalidInput("cover index out of range");
        if (lo == hi) throw InvalidInput("cover relation on a single element");
        up[lo].push_back(hi);
        down[hi].push_back(lo);
    }

    // Kahn's algorithm for a topological order; leftovers mean a cycle.
    std::vector<std::size_t> indeg(n), topo;
    topo.reserve(n);
    for (std::size_t x = 0; x < n; ++x) indeg[x] = down[x].size();
    std::vector<std::size_t> ready;
    for (std::size_t x = 0; x < n; ++x)
        if (indeg[x] == 0) ready.push_back(x);
    while (!ready.empty()) {
        std::size_t x = ready.back();
        ready.pop_back();
        topo.push_back(x);
        for (std::size_t y : up[x])
            if (--indeg[y] == 0) ready.push_back(y);
    }
    if (topo.size() != n) throw InvalidInput("cover relation contains a cycle");

    constexpr int unreached = -1;
    std::vector<int> longest(n, unreached), shortest(n, unreached);
    longest[bottom] = 0;
    for (std::size_t x : topo) {
        if (longest[x] == unreached) continue;
        for (std::size_t y : up[x]) longest[y] = std::max(longest[y], longest[x] + 1);
    }
    std::queue<std::size_t> bfs;
    shortest[bottom] = 0;
    bfs.push(bottom);
    while (!bfs.empty()) {
        std::size_t x = bfs.front();
        bfs.pop();
        for (std::size_t y : up[x])
            if (shortest[y] == unreached) {
                shortest[y] = shortest[x] + 1;
                bfs.push(y);
            }
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (longest[x] == unreached) throw InvalidInput("element is not above the bottom element");
        if (longest[x] != shortest[x]) throw InvalidInput("poset is not graded");
    }
    if (top) {
        std::vector<char> below_top(n, 0);
        std::vector<std::size_t> stack{*top};
        below_top[*top] = 1;
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            for (std::size_t y : down[x])
                if (!below_top[y]) {
                    below_top[y] = 1;
                    stack.push_back(y);
                }
        }
        if (std::find(below_top.begin(), below_top.end(), 0) != below_top.end())
            throw InvalidInput("element is not below the top element");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (longest[a] != longest[b]) return longest[a] < longest[b];
        return elements[a] < elements[b];
    });
    std::vector<ElementId> new_id(n);
    for (std::size_t i = 0; i < n; ++i) new_id[order[i]] = static_cast<ElementId>(i);

    GradedPoset p;
    p.payloads_.resize(n);
    p.ranks_.resize(n);
    p.up_.assign(n, {});
    p.down_.assign(n, {});
    for (std::size_t old = 0; old < n; ++old) {
        ElementId id = new_id[old];
        p.payloads_[id] = std::move(elements[old]);
        p.ranks_[id] = longest[old];
        for (std::size_t y : up[old]) p.up_[id].push_back(new_id[y]);
        for (std::size_t y : down[old]) p.down_[id].push_back(new_id[y]);
    }
    for (auto& v : p.up_) std::sort(v.begin(), v.end());
    for (auto& v : p.down_) std::sort(v.begin(), v.end());
    p.bottom_ = new_id[bottom];
    if (top) p.top_ = new_id[*top];

    p.above_.assign(n, ElementSet(n));
    for (std::size_t i = n; i-- > 0;) {
        auto x = static_cast<ElementId>(i);
        p.above_[x].insert(x);
        for (ElementId y : p.up_[x]) p.above_[x] |= p.above_[y];
    }
    p.by_payload_.resize(n);
    std::iota(p.by_payload_.begin(), p.by_payload_.end(), 0);
    std::sort(p.by_payload_.begin(), p.by_payload_.end(),
              [&](ElementId a, ElementId b) { return p.payloads_[a] < p.payloads_[b]; });
    return p;
}

/// Elements covering the bottom, in canonical order.
inline std::vector<ElementId> atoms(const GradedPoset& p) {
    auto u = p.upper_covers(p.bottom());
    return {u.begin(), u.end()};
}

/// An induced subposet together with its embedding into the parent poset.
///
/// Canonical ids are preserved in relative order (ranks shift uniformly), so
/// `to_parent` is strictly increasing.
struct Subposet {
    GradedPoset poset;
    std::vector<ElementId> to_parent;

    std::optional<ElementId> to_local(ElementId parent_id) const {
        auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent_id);
        if (it == to_parent.end() || *it != parent_id) return std::nullopt;
        return static_cast<ElementId>(it - to_parent.begin());
    }

    MaximalChain chain_to_parent(const MaximalChain& local) const {
        MaximalChain out;
        out.reserve(local.size());
        for (ElementId x : local) out.push_back(to_parent.at(x));
        return out;
    }

    MaximalChain chain_to_local(const MaximalChain& parent) const {
        MaximalChain out;
        out.reserve(parent.size());
        for (ElementId x : parent) {
            auto local = to_local(x);
            if (!local) throw InvalidInput("chain element outside the subposet");
            out.push_back(*local);
        }
        return out;
    }

    ChainOrder order_to_parent(const ChainOrder& local) const {
        ChainOrder out;
        out.reserve(local.size());
        for (const auto& c : local) out.push_back(chain_to_parent(c));
        return out;
    }

    ChainOrder order_to_local(const ChainOrder& parent) const {
        ChainOrder out;
        out.reserve(parent.size());
        for (const auto& c : parent) out.push_back(chain_to_local(c));
        return out;
    }
};

/// Induced subposet on `ground` (any order, duplicates ignored). Covers are the
/// minimal strict relations inside the subset, so non-convex subsets such as
/// rank selections are handled.
inline Subposet induced_subposet(const GradedPoset& p, std::vector<ElementId> ground, ElementId bottom,
                                 std::optional<ElementId> top) {
    std::sort(ground.begin(), ground.end());
    ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
    ElementSet in(p.size());
    for (ElementId x : ground) in.insert(x);
    if (!in.contains(bottom)) throw InvalidInput("subposet bottom not in ground set");
    if (top && !in.contains(*top)) throw InvalidInput("subposet top not in ground set");

    std::vector<std::size_t> local(p.size(), 0);
    for (std::size_t i = 0; i < ground.size(); ++i) local[ground[i]] = i;

    std::vector<Payload> elements;
    elements.reserve(ground.size());
    for (ElementId x : ground) elements.push_back(p.payload(x));
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    for (ElementId x : ground) {
        ElementSet above = p.up_set(x);
        above &= in;
        above.erase(x);
        ElementSet dominated(p.size());
        // Ground elements in canonical (rank-sorted) order: minimal ones come first.
        for (ElementId y : above.elements()) {
            if (dominated.contains(y)) continue;
            covers.emplace_back(local[x], local[y]);
            dominated |= p.up_set(y);
        }
    }
    Subposet s;
    s.poset = build_poset(std::move(elements), std::move(covers), local[bottom],
                          top ? std::optional<std::size_t>(local[*top]) : std::nullopt);
    s.to_parent.resize(ground.size());
    for (ElementId i = 0; i < s.poset.size(); ++i) {
        auto parent = p.find(s.poset.payload(i));
        s.to_parent[i] = *parent;
    }
    return s;
}

/// The subposet {bottom} ∪ {b : b >= a for some a in A}.
///
/// Top is kept when it lies above some atom of A. An empty A gives the
/// one-element poset {bottom}.
inline Subposet atom_generated_subposet(const GradedPoset& p, std::span<const ElementId> atom_set) {
    ElementSet ground(p.size());
    ground.insert(p.bottom());
    for (ElementId a : atom_set) {
        if (p.rank(a) != 1 || !p.covers(p.bottom(), a)) throw InvalidInput("atom_generated_subposet: not an atom");
        ground |= p.up_set(a);
    }
    std::optional<ElementId> top;
    if (p.top() && ground.contains(*p.top()) && !atom_set.empty()) top = p.top();
    if (atom_set.empty() && p.top() && *p.top() == p.bottom()) top = p.bottom();
    return induced_subposet(p, ground.elements(), p.bottom(), top);
}

/// The closed interval [x, y], re-graded so that x has rank 0.
inline Subposet closed_interval(const GradedPoset& p, ElementId x, ElementId y) {
    if (!p.leq(x, y)) throw InvalidInput("closed_interval: x is not below y");
    std::vector<ElementId> ground;
    for (ElementId z : p.up_set(x).elements())
        if (p.leq(z, y)) ground.push_back(z);
    return induced_subposet(p, std::move(ground), x, y);
}

/// Number of maximal chains from `from` to the top, saturating at UINT64_MAX.
inline std::uint64_t count_maximal_chains(const GradedPoset& p, ElementId from) {
    ElementId top = p.require_top();
    std::vector<std::uint64_t> paths(p.size(), 0);
    paths[top] = 1;
    for (std::size_t i = p.size(); i-- > 0;) {
        auto x = static_cast<ElementId>(i);
        if (x == top) continue;
        std::uint64_t total = 0;
        for (ElementId y : p.upper_covers(x)) {
            std::uint64_t add = paths[y];
            total = (total > UINT64_MAX - add) ? UINT64_MAX : total + add;
        }
        paths[x] = total;
    }
    return paths[from];
}

inline std::uint64_t count_maximal_chains(const GradedPoset& p) { return count_maximal_chains(p, p.bottom()); }

/// Maximal chains starting bottom -> a -> ... -> top for each atom a in
/// `through` (in the given order), each block in lexicographic id order.
inline ChainOrder enumerate_chains_through(const GradedPoset& p, std::span<const ElementId> through,
                                           std::uint64_t budget = default_chain_budget) {
    ElementId top = p.require_top();
    std::uint64_t total = 0;
    for (ElementId a : through) {
        if (!p.covers(p.bottom(), a)) throw InvalidInput("enumerate_chains_through: not an atom");
        std::uint64_t c = count_maximal_chains(p, a);
        total = (total > UINT64_MAX - c) ? UINT64_MAX : total + c;
    }
    if (total > budget)
        throw BudgetExceeded("maximal chain count " + std::to_string(total) + " exceeds budget " + std::to_string(budget));

    ChainOrder out;
    out.reserve(static_cast<std::size_t>(total));
    const auto len = static_cast<std::size_t>(p.rank(top)) + 1;
    for (ElementId a : through) {
        MaximalChain chain{p.bottom(), a};
        std::vector<std::size_t> next{0, 0};  // next child index per depth
        while (chain.size() > 1) {
            ElementId x = chain.back();
            if (x == top) {
                if (chain.size() == len) out.push_back(chain);
                chain.pop_back();
                next.pop_back();
                continue;
            }
            auto up = p.upper_covers(x);
            std::size_t& i = next.back();
            if (i < up.size()) {
                chain.push_back(up[i++]);
                next.push_back(0);
            } else {
                chain.pop_back();
                next.pop_back();
            }
        }
    }
    return out;
}

/// All maximal chains in lexicographic-by-id order. Refuses (BudgetExceeded)
/// when the precomputed count is above `budget`.
inline ChainOrder enumerate_maximal_chains(const GradedPoset& p, std::uint64_t budget = default_chain_budget) {
    ElementId top = p.require_top();
    if (top == p.bottom()) return {{p.bottom()}};
    auto a = atoms(p);
    return enumerate_chains_through(p, a, budget);
}

/// Möbius function mu(x, y) by the defining recursion.
inline std::int64_t mobius(const GradedPoset& p, ElementId x, ElementId y) {
    if (!p.leq(x, y)) throw InvalidInput("mobius: x is not below y");
    std::vector<std::int64_t> mu(p.size(), 0);
    std::vector<ElementId> interval;
    for (ElementId z : p.up_set(x).elements())
        if (p.leq(z, y)) interval.push_back(z);
    // ids are rank-sorted, so every w < z is visited before z
    for (ElementId z : interval) {
        if (z == x) {
            mu[z] = 1;
            continue;
        }
        std::int64_t s = 0;
        for (ElementId w : interval) {
            if (w == z) break;
            if (p.leq(w, z)) s += mu[w];
        }
        mu[z] = -s;
    }
    return mu[y];
}

/// The element of `chain` at rank 1, i.e. its atom.
inline ElementId chain_atom(const MaximalChain& chain) {
    if (chain.size() < 2) throw InvalidInput("chain has no atom");
    return chain[1];
}

}  // namespace vshell

#endif
