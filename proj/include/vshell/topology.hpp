#ifndef VSHELL_TOPOLOGY_HPP
#define VSHELL_TOPOLOGY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vshell/errors.hpp"
#include "vshell/poset.hpp"

namespace vshell {

/// A simplicial complex given by its facets (sorted vertex lists).
///
/// `facets` empty is the void complex (no faces at all). A single empty facet is
/// the complex {∅}, whose only nonzero reduced Betti number is in degree -1.
struct SimplicialComplex {
    std::vector<ElementId> vertices;
    std::vector<std::vector<ElementId>> facets;

    bool is_void() const noexcept { return facets.empty(); }
    int dimension() const {
        int d = -2;
        for (const auto& f : facets) d = std::max(d, static_cast<int>(f.size()) - 1);
        return d;
    }
};

/// Order complex of the proper part of P (facets: maximal chains minus 0̂ and 1̂).
inline SimplicialComplex order_complex(const GradedPoset& p, std::uint64_t chain_budget = default_chain_budget) {
    SimplicialComplex c;
    const ElementId top = p.require_top();
    if (top == p.bottom()) return c;
    for (ElementId x = 0; x < p.size(); ++x)
        if (x != p.bottom() && x != top) c.vertices.push_back(x);
    for (auto& chain : enumerate_maximal_chains(p, chain_budget)) {
        std::vector<ElementId> f(chain.begin() + 1, chain.end() - 1);
        std::sort(f.begin(), f.end());
        c.facets.push_back(std::move(f));
    }
    std::sort(c.facets.begin(), c.facets.end());
    return c;
}

/// Order complex of the open interval (x, y) of P, in ids of P.
inline SimplicialComplex open_interval_complex(const GradedPoset& p, ElementId x, ElementId y,
                                               std::uint64_t chain_budget = default_chain_budget) {
    auto iv = closed_interval(p, x, y);
    auto local = order_complex(iv.poset, chain_budget);
    SimplicialComplex out;
    for (ElementId v : local.vertices) out.vertices.push_back(iv.to_parent[v]);
    for (auto& f : local.facets) {
        std::vector<ElementId> g;
        for (ElementId v : f) g.push_back(iv.to_parent[v]);
        out.facets.push_back(std::move(g));
    }
    return out;
}

/// Reduced Betti numbers over the rationals. `by_dim[d]` is β̃_d for d >= 0.
struct ReducedBetti {
    std::uint64_t minus_one = 0;
    std::vector<std::uint64_t> by_dim;

    std::uint64_t at(int d) const {
        if (d == -1) return minus_one;
        if (d < -1 || static_cast<std::size_t>(d) >= by_dim.size()) return 0;
        return by_dim[static_cast<std::size_t>(d)];
    }
    bool all_zero() const {
        return minus_one == 0 && std::all_of(by_dim.begin(), by_dim.end(), [](auto b) { return b == 0; });
    }
    friend bool operator==(const ReducedBetti&, const ReducedBetti&) = default;
};

namespace detail {

/// Faces grouped by dimension: faces[d] for d = 0..dim, each sorted.
inline std::vector<std::vector<std::vector<ElementId>>> all_faces(const SimplicialComplex& c, std::uint64_t max_faces) {
    const int dim = c.dimension();
    std::vector<std::set<std::vector<ElementId>>> by_dim(dim >= 0 ? static_cast<std::size_t>(dim) + 1 : 0);
    std::uint64_t total = 0;
    for (const auto& f : c.facets) {
        if (f.size() > 30) throw BudgetExceeded("facet too large for face enumeration");
        const std::uint32_t n = static_cast<std::uint32_t>(f.size());
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::vector<ElementId> face;
            for (std::uint32_t i = 0; i < n; ++i)
                if (mask & (1u << i)) face.push_back(f[i]);
            if (by_dim[face.size() - 1].insert(std::move(face)).second && ++total > max_faces)
                throw BudgetExceeded("complex has more than " + std::to_string(max_faces) + " faces");
        }
    }
    std::vector<std::vector<std::vector<ElementId>>> out;
    for (auto& s : by_dim) out.emplace_back(s.begin(), s.end());
    return out;
}

/// Rank over Q of the boundary map from d-faces to (d-1)-faces, by exact sparse
/// elimination.
inline std::size_t boundary_rank(const std::vector<std::vector<ElementId>>& lower,
                                 const std::vector<std::vector<ElementId>>& upper) {
    using boost::multiprecision::cpp_rational;
    std::map<std::vector<ElementId>, std::size_t> index;
    for (std::size_t i = 0; i < lower.size(); ++i) index.emplace(lower[i], i);
    using Row = std::map<std::size_t, cpp_rational>;
    std::vector<Row> rows;
    rows.reserve(upper.size());
    for (const auto& f : upper) {
        Row r;
        for (std::size_t i = 0; i < f.size(); ++i) {
            std::vector<ElementId> g;
            g.reserve(f.size() - 1);
            for (std::size_t j = 0; j < f.size(); ++j)
                if (j != i) g.push_back(f[j]);
            r[index.at(g)] = (i % 2 == 0) ? 1 : -1;
        }
        rows.push_back(std::move(r));
    }
    // pivot column -> reduced row with leading entry at that column
    std::map<std::size_t, Row> pivots;
    std::size_t rank = 0;
    for (auto& r : rows) {
        while (!r.empty()) {
            auto lead = r.begin();
            auto it = pivots.find(lead->first);
            if (it == pivots.end()) {
                pivots.emplace(lead->first, r);
                ++rank;
                break;
            }
            const cpp_rational factor = lead->second / it->second.begin()->second;
            for (const auto& [col, val] : it->second) {
                cpp_rational nv = r[col] - factor * val;
                if (nv == 0)
                    r.erase(col);
                else
                    r[col] = nv;
            }
        }
    }
    return rank;
}

}  // namespace detail

/// Reduced Betti numbers via ranks of boundary maps; refuses complexes with more
/// than `max_faces` nonempty faces.
inline ReducedBetti reduced_betti(const SimplicialComplex& c, std::uint64_t max_faces = 10'000) {
    ReducedBetti out;
    if (c.is_void()) return out;
    const int dim = c.dimension();
    if (dim < 0) {
        out.minus_one = 1;
        return out;
    }
    auto faces = detail::all_faces(c, max_faces);
    std::vector<std::size_t> rank(faces.size() + 1, 0);  // rank[d] = rank of ∂_d : C_d -> C_{d-1}
    rank[0] = faces[0].empty() ? 0 : 1;                  // augmentation onto the empty face
    for (std::size_t d = 1; d < faces.size(); ++d) rank[d] = detail::boundary_rank(faces[d - 1], faces[d]);
    out.minus_one = 1 - rank[0];
    out.by_dim.resize(faces.size());
    for (std::size_t d = 0; d < faces.size(); ++d)
        out.by_dim[d] = faces[d].size() - rank[d] - rank[d + 1];
    return out;
}

/// Σ (-1)^d f_d including f_{-1} = 1 for a non-void complex.
inline std::int64_t reduced_euler_characteristic(const SimplicialComplex& c, std::uint64_t max_faces = 10'000) {
    if (c.is_void()) return 0;
    std::int64_t chi = -1;
    if (c.dimension() < 0) return chi;
    auto faces = detail::all_faces(c, max_faces);
    for (std::size_t d = 0; d < faces.size(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(faces[d].size());
    return chi;
}

struct CohenMacaulayReport {
    bool cohen_macaulay = true;
    std::optional<std::pair<ElementId, ElementId>> failing_interval;
    ReducedBetti failing_betti;
};

/// For every x < y, the open interval (x, y) must have vanishing reduced rational
/// homology below its top dimension rk(y) - rk(x) - 2. Returns the first failure.
inline CohenMacaulayReport is_cohen_macaulay_Q(const GradedPoset& p, std::uint64_t max_faces = 10'000) {
    CohenMacaulayReport rep;
    p.require_top();
    for (ElementId x = 0; x < p.size(); ++x)
        for (ElementId y : p.up_set(x).elements()) {
            const int len = p.rank(y) - p.rank(x);
            if (len < 3) continue;  // dimensions -1 and 0 have nothing below the top to check
            auto b = reduced_betti(open_interval_complex(p, x, y), max_faces);
            const int top_dim = len - 2;
            bool ok = b.minus_one == 0;
            for (int d = 0; d < top_dim && ok; ++d) ok = b.at(d) == 0;
            if (!ok) {
                rep.cohen_macaulay = false;
                rep.failing_interval = std::make_pair(x, y);
                rep.failing_betti = b;
                return rep;
            }
        }
    return rep;
}

}  // namespace vshell

#endif
