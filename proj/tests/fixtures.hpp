#ifndef VSHELL_TESTS_FIXTURES_HPP
#define VSHELL_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vshell/vshell.hpp"

namespace fixtures {

using namespace vshell;

struct Named {
    std::string name;
    GradedPoset poset;
};

inline Payload tag(std::int64_t v) { return {v}; }

/// Builds a poset from (name, rank) labels; payloads are label indices so the
/// canonical order follows the listing order within a rank.
struct Builder {
    std::vector<std::string> names;
    std::vector<std::pair<std::size_t, std::size_t>> covers;

    std::size_t add(const std::string& name) {
        names.push_back(name);
        return names.size() - 1;
    }
    void cover(std::size_t lo, std::size_t hi) { covers.emplace_back(lo, hi); }
    GradedPoset build(std::size_t bottom, std::size_t top) const {
        std::vector<Payload> payloads;
        for (std::size_t i = 0; i < names.size(); ++i) payloads.push_back(tag(static_cast<std::int64_t>(i)));
        return build_poset(payloads, covers, bottom, top);
    }
    /// Canonical id of the element added as `index`.
    static ElementId id(const GradedPoset& p, std::size_t index) { return *p.find(tag(static_cast<std::int64_t>(index))); }
};

inline GradedPoset chain(std::size_t length) {
    Builder b;
    for (std::size_t i = 0; i <= length; ++i) b.add("c" + std::to_string(i));
    for (std::size_t i = 0; i < length; ++i) b.cover(i, i + 1);
    return b.build(0, length);
}

inline GradedPoset diamond() {
    Builder b;
    auto z = b.add("0"), a = b.add("a"), c = b.add("b"), t = b.add("1");
    b.cover(z, a);
    b.cover(z, c);
    b.cover(a, t);
    b.cover(c, t);
    return b.build(z, t);
}

/// 0 < a < x < 1 and 0 < b < y < 1 with no cross covers.
inline GradedPoset broken_diamond() {
    Builder b;
    auto z = b.add("0"), a = b.add("a"), c = b.add("b"), x = b.add("x"), y = b.add("y"), t = b.add("1");
    b.cover(z, a);
    b.cover(z, c);
    b.cover(a, x);
    b.cover(c, y);
    b.cover(x, t);
    b.cover(y, t);
    return b.build(z, t);
}

/// Subsets of {0..k-1}, payload = bitmask.
inline GradedPoset boolean_lattice(unsigned k) {
    std::vector<Payload> payloads;
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    for (unsigned s = 0; s < (1u << k); ++s) payloads.push_back(tag(s));
    for (unsigned s = 0; s < (1u << k); ++s)
        for (unsigned i = 0; i < k; ++i)
            if (!(s & (1u << i))) covers.emplace_back(s, s | (1u << i));
    return build_poset(payloads, covers, 0, (1u << k) - 1);
}

/// Random bounded graded poset: `ranks` interior levels of 1..max_width elements,
/// each element covering a random nonempty subset of the level below, and every
/// element covered by something above.
inline GradedPoset random_graded(std::mt19937_64& rng, int ranks, int max_width, double density = 0.5) {
    std::vector<std::vector<std::size_t>> levels{{0}};
    std::vector<std::pair<std::size_t, std::size_t>> covers;
    std::size_t next = 1;
    std::uniform_int_distribution<int> width(1, max_width);
    std::bernoulli_distribution coin(density);
    for (int r = 1; r <= ranks; ++r) {
        std::vector<std::size_t> level;
        const int w = width(rng);
        for (int i = 0; i < w; ++i) level.push_back(next++);
        const auto& below = levels.back();
        for (std::size_t y : level) {
            bool any = false;
            for (std::size_t x : below)
                if (coin(rng)) {
                    covers.emplace_back(x, y);
                    any = true;
                }
            if (!any) covers.emplace_back(below[std::uniform_int_distribution<std::size_t>(0, below.size() - 1)(rng)], y);
        }
        for (std::size_t x : below) {
            bool covered = std::any_of(covers.begin(), covers.end(), [&](auto c) { return c.first == x; });
            if (!covered) covers.emplace_back(x, level[std::uniform_int_distribution<std::size_t>(0, level.size() - 1)(rng)]);
        }
        levels.push_back(level);
    }
    const std::size_t top = next++;
    for (std::size_t x : levels.back()) covers.emplace_back(x, top);
    std::vector<Payload> payloads;
    for (std::size_t i = 0; i < next; ++i) payloads.push_back(tag(static_cast<std::int64_t>(i)));
    return build_poset(payloads, covers, 0, top);
}

/// Number of maximal chains by memoized recursion on payload-level covers.
inline std::uint64_t dp_chain_count(const GradedPoset& p) {
    std::map<ElementId, std::uint64_t> memo;
    const ElementId top = p.require_top();
    auto rec = [&](auto&& self, ElementId x) -> std::uint64_t {
        if (x == top) return 1;
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        std::uint64_t s = 0;
        for (auto [a, b] : p.cover_list())
            if (a == x) s += self(self, b);
        memo[x] = s;
        return s;
    };
    return rec(rec, p.bottom());
}

/// Condition (Sh) straight from the definition, by set intersections.
inline bool naive_sh(const ChainOrder& order) {
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::set<ElementId> c(order[i].begin(), order[i].end());
        for (std::size_t ip = 0; ip < i; ++ip) {
            std::set<ElementId> cp(order[ip].begin(), order[ip].end());
            std::set<ElementId> meet;
            std::set_intersection(c.begin(), c.end(), cp.begin(), cp.end(), std::inserter(meet, meet.end()));
            bool found = false;
            for (std::size_t is = 0; is < i && !found; ++is) {
                std::set<ElementId> cs(order[is].begin(), order[is].end());
                std::size_t common = 0;
                for (ElementId x : c) common += cs.count(x);
                if (common + 1 != c.size()) continue;
                found = std::includes(cs.begin(), cs.end(), meet.begin(), meet.end());
            }
            if (!found) return false;
        }
    }
    return true;
}

/// Exhaustive shellability decision: DP over subsets of chains (a chain may be
/// appended to a placed set iff (Sh) holds against all of it).
inline bool shellable_by_subsets(const ChainOrder& chains) {
    const std::size_t n = chains.size();
    if (n == 0) return true;
    if (n > 20) throw std::runtime_error("too many chains for the subset oracle");
    auto one_level = [&](std::size_t a, std::size_t b) {
        std::size_t d = 0;
        for (std::size_t r = 0; r < chains[a].size(); ++r) d += chains[a][r] != chains[b][r];
        return d == 1;
    };
    auto ok_append = [&](std::uint32_t placed, std::size_t i) {
        for (std::size_t ip = 0; ip < n; ++ip) {
            if (!(placed & (1u << ip))) continue;
            bool found = false;
            for (std::size_t is = 0; is < n && !found; ++is) {
                if (!(placed & (1u << is)) || !one_level(i, is)) continue;
                bool keeps = true;
                for (std::size_t r = 0; r < chains[i].size(); ++r)
                    if (chains[i][r] == chains[ip][r] && chains[is][r] != chains[i][r]) keeps = false;
                found = keeps;
            }
            if (!found) return false;
        }
        return true;
    };
    std::vector<char> reach(std::size_t{1} << n, 0);
    reach[0] = 1;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        if (!reach[s]) continue;
        for (std::size_t i = 0; i < n; ++i)
            if (!(s & (1u << i)) && ok_append(s, i)) reach[s | (1u << i)] = 1;
    }
    return reach[(std::size_t{1} << n) - 1];
}

/// Same decision by trying every permutation (feasible up to 7 chains).
inline bool shellable_by_permutations(ChainOrder chains) {
    std::sort(chains.begin(), chains.end());
    do {
        if (naive_sh(chains)) return true;
    } while (std::next_permutation(chains.begin(), chains.end()));
    return false;
}

/// Rank-4 poset with atoms a, q1 used to exhibit a criterion I order that is not
/// lexicographic. Q = {q1..q5} for A = {a}, a+ = q1.
struct AlternationPoset {
    GradedPoset poset;
    ElementId a, q1, q2, q3, q4, q5, x, s2, s3, top;
};

inline AlternationPoset alternation_poset() {
    Builder b;
    auto z = b.add("0"), a = b.add("a"), q1 = b.add("q1"), x = b.add("x"), q2 = b.add("q2"), q3 = b.add("q3");
    auto s2 = b.add("s2"), s3 = b.add("s3"), q4 = b.add("q4"), q5 = b.add("q5"), t = b.add("1");
    b.cover(z, a);
    b.cover(z, q1);
    b.cover(a, x);
    b.cover(q1, x);
    b.cover(q1, q2);
    b.cover(q1, q3);
    b.cover(q2, s2);
    b.cover(x, s2);
    b.cover(q3, s3);
    b.cover(x, s3);
    for (auto q : {q4, q5}) {
        b.cover(q2, q);
        b.cover(q3, q);
    }
    for (auto s : {s2, s3, q4, q5}) b.cover(s, t);
    AlternationPoset out{b.build(z, t), 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    auto id = [&](std::size_t i) { return Builder::id(out.poset, i); };
    out.a = id(a);
    out.q1 = id(q1);
    out.q2 = id(q2);
    out.q3 = id(q3);
    out.q4 = id(q4);
    out.q5 = id(q5);
    out.x = id(x);
    out.s2 = id(s2);
    out.s3 = id(s3);
    out.top = id(t);
    return out;
}

inline LatticeVector v(const char* s) { return LatticeVector::parse(s); }

}  // namespace fixtures

#endif
