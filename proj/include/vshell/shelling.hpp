#ifndef VSHELL_SHELLING_HPP
#define VSHELL_SHELLING_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vshell/errors.hpp"
#include "vshell/poset.hpp"
#include "vshell/veronese.hpp"

namespace vshell {

namespace detail {

struct ChainHash {
    std::size_t operator()(const MaximalChain& c) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (ElementId x : c) {
            h ^= x;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

inline std::uint64_t diff_mask(const MaximalChain& a, const MaximalChain& b) noexcept {
    std::uint64_t m = 0;
    for (std::size_t r = 0; r < a.size(); ++r)
        if (a[r] != b[r]) m |= std::uint64_t{1} << r;
    return m;
}

/// For each chain and each level r, the first earlier chain that differs from it
/// exactly at level r (or no_index).
struct NeighborTable {
    static constexpr std::size_t no_index = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> level_witness;
    std::vector<std::uint64_t> restriction;

    explicit NeighborTable(const ChainOrder& order) {
        const std::size_t count = order.size();
        const std::size_t len = count ? order[0].size() : 0;
        level_witness.assign(count, std::vector<std::size_t>(len, no_index));
        restriction.assign(count, 0);
        MaximalChain key;
        for (std::size_t r = 0; r < len; ++r) {
            std::unordered_map<MaximalChain, std::size_t, ChainHash> first_seen;
            first_seen.reserve(count * 2);
            for (std::size_t i = 0; i < count; ++i) {
                key = order[i];
                key[r] = no_element;
                auto [it, inserted] = first_seen.try_emplace(key, i);
                if (!inserted) {
                    level_witness[i][r] = it->second;
                    restriction[i] |= std::uint64_t{1} << r;
                }
            }
        }
    }
};

}  // namespace detail

/// Result of checking condition (Sh) on a chain order.
struct ShellingReport {
    enum class Status { certified, sh_violated, not_a_permutation, atom_order_violated, atom_not_in_order };
    Status status = Status::certified;
    std::string message;
    /// For sh_violated: the earliest failing pair (c at index `later`, c' at index `earlier`).
    std::size_t later = 0;
    std::size_t earlier = 0;

    bool ok() const noexcept { return status == Status::certified; }
    explicit operator bool() const noexcept { return ok(); }
};

inline const char* to_string(ShellingReport::Status s) {
    switch (s) {
        case ShellingReport::Status::certified: return "certified";
        case ShellingReport::Status::sh_violated: return "sh_violated";
        case ShellingReport::Status::not_a_permutation: return "not_a_permutation";
        case ShellingReport::Status::atom_order_violated: return "atom_order_violated";
        case ShellingReport::Status::atom_not_in_order: return "atom_not_in_order";
    }
    return "unknown";
}

/// A chain order together with everything needed to produce witnesses c* on demand.
///
/// For a pair i' < i the witness is the earlier chain differing from chain i
/// only at the lowest level where chain i' also differs and such a neighbour exists.
class ShellingCertificate {
public:
    ShellingCertificate() = default;
    ShellingCertificate(ChainOrder order, detail::NeighborTable table)
        : order_(std::move(order)), table_(std::move(table)) {}

    const ChainOrder& order() const noexcept { return order_; }
    std::size_t size() const noexcept { return order_.size(); }

    std::optional<std::size_t> witness(std::size_t i, std::size_t i_prime) const {
        if (i_prime >= i || i >= order_.size()) return std::nullopt;
        std::uint64_t m = detail::diff_mask(order_[i], order_[i_prime]) & table_.restriction[i];
        if (!m) return std::nullopt;
        return table_.level_witness[i][static_cast<std::size_t>(__builtin_ctzll(m))];
    }

    /// Levels r at which chain i has an earlier one-level neighbour.
    std::uint64_t restriction(std::size_t i) const { return table_.restriction.at(i); }

    /// Chains whose every interior level has an earlier neighbour; their number
    /// equals the top reduced Betti number of the order complex.
    std::size_t homology_facet_count() const {
        if (order_.empty()) return 0;
        const std::size_t len = order_[0].size();
        std::uint64_t interior = 0;
        for (std::size_t r = 1; r + 1 < len; ++r) interior |= std::uint64_t{1} << r;
        std::size_t c = 0;
        for (std::size_t i = 0; i < order_.size(); ++i)
            if ((table_.restriction[i] & interior) == interior) ++c;
        return c;
    }

    /// All (i, i', i*) triples; refuses more than `limit` pairs.
    std::vector<std::array<std::size_t, 3>> witness_triples(std::uint64_t limit = 50'000'000) const {
        const std::uint64_t pairs = static_cast<std::uint64_t>(order_.size()) * (order_.size() ? order_.size() - 1 : 0) / 2;
        if (pairs > limit) throw BudgetExceeded("too many witness pairs to materialize");
        std::vector<std::array<std::size_t, 3>> out;
        out.reserve(static_cast<std::size_t>(pairs));
        for (std::size_t i = 0; i < order_.size(); ++i)
            for (std::size_t ip = 0; ip < i; ++ip) out.push_back({i, ip, *witness(i, ip)});
        return out;
    }

private:
    ChainOrder order_;
    detail::NeighborTable table_{ChainOrder{}};
};

/// Outcome of verify_shelling: a certificate when (Sh) holds.
struct ShellingVerification {
    ShellingReport report;
    std::optional<ShellingCertificate> certificate;
    bool ok() const noexcept { return report.ok(); }
    explicit operator bool() const noexcept { return ok(); }
};

/// Checks condition (Sh) for the given family, without checking that the
/// family is complete. All chains must have the same length (at most 64).
inline ShellingVerification verify_shelling_order(const ChainOrder& order, unsigned threads = 1) {
    ShellingVerification out;
    if (!order.empty()) {
        const std::size_t len = order[0].size();
        if (len > 64) throw InvalidInput("chains longer than 64 elements are not supported");
        for (const auto& c : order)
            if (c.size() != len) {
                out.report.status = ShellingReport::Status::not_a_permutation;
                out.report.message = "chains of different lengths";
                return out;
            }
        std::unordered_set<MaximalChain, detail::ChainHash> seen;
        for (const auto& c : order)
            if (!seen.insert(c).second) {
                out.report.status = ShellingReport::Status::not_a_permutation;
                out.report.message = "duplicate chain in order";
                return out;
            }
    }
    detail::NeighborTable table(order);
    const std::size_t count = order.size();
    constexpr std::size_t none = detail::NeighborTable::no_index;

    auto first_failure = [&](std::size_t i) -> std::size_t {
        const std::uint64_t r = table.restriction[i];
        for (std::size_t ip = 0; ip < i; ++ip)
            if ((detail::diff_mask(order[i], order[ip]) & r) == 0) return ip;
        return none;
    };

    std::size_t bad_i = none, bad_ip = none;
    if (threads <= 1 || count < 256) {
        for (std::size_t i = 0; i < count && bad_i == none; ++i)
            if (auto ip = first_failure(i); ip != none) {
                bad_i = i;
                bad_ip = ip;
            }
    } else {
        std::vector<std::size_t> fail(count, none);
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) fail[i] = first_failure(i);
            });
        for (auto& th : pool) th.join();
        for (std::size_t i = 0; i < count; ++i)
            if (fail[i] != none) {
                bad_i = i;
                bad_ip = fail[i];
                break;
            }
    }
    if (bad_i != none) {
        out.report.status = ShellingReport::Status::sh_violated;
        out.report.later = bad_i;
        out.report.earlier = bad_ip;
        out.report.message = "condition (Sh) fails for chain " + std::to_string(bad_i) + " against earlier chain " +
                             std::to_string(bad_ip);
        return out;
    }
    out.certificate.emplace(order, std::move(table));
    return out;
}

namespace detail {

inline bool is_permutation_of(const ChainOrder& order, const ChainOrder& expected, std::string& why) {
    if (order.size() != expected.size()) {
        why = "order has " + std::to_string(order.size()) + " chains, expected " + std::to_string(expected.size());
        return false;
    }
    std::unordered_set<MaximalChain, ChainHash> want(expected.begin(), expected.end());
    std::unordered_set<MaximalChain, ChainHash> seen;
    for (const auto& c : order) {
        if (!want.count(c)) {
            why = "order contains a chain that is not a maximal chain of the poset";
            return false;
        }
        if (!seen.insert(c).second) {
            why = "order contains a duplicate chain";
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Checks that `order` lists every maximal chain of P exactly once and satisfies (Sh).
inline ShellingVerification verify_shelling(const GradedPoset& p, const ChainOrder& order, unsigned threads = 1,
                                            std::uint64_t chain_budget = default_chain_budget) {
    ShellingVerification out;
    auto all = enumerate_maximal_chains(p, chain_budget);
    if (!detail::is_permutation_of(order, all, out.report.message)) {
        out.report.status = ShellingReport::Status::not_a_permutation;
        return out;
    }
    return verify_shelling_order(order, threads);
}

/// A-shelling check on an ambient poset: `order` must list exactly the maximal
/// chains of P whose atom lies in `atom_order`, satisfy (Sh), and list chains in
/// non-decreasing position of their atoms.
inline ShellingVerification verify_A_shelling(const GradedPoset& p, const AtomOrder& atom_order, const ChainOrder& order,
                                              unsigned threads = 1, std::uint64_t chain_budget = default_chain_budget) {
    ShellingVerification out;
    std::unordered_map<ElementId, std::size_t> position;
    for (std::size_t i = 0; i < atom_order.size(); ++i) {
        if (!p.covers(p.bottom(), atom_order[i])) throw InvalidInput("atom order contains a non-atom");
        if (!position.emplace(atom_order[i], i).second) throw InvalidInput("atom order contains a duplicate");
    }
    std::size_t last = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i].size() < 2) {
            out.report.status = ShellingReport::Status::atom_not_in_order;
            out.report.message = "chain without an atom";
            return out;
        }
        auto it = position.find(order[i][1]);
        if (it == position.end()) {
            out.report.status = ShellingReport::Status::atom_not_in_order;
            out.report.message = "chain " + std::to_string(i) + " has an atom outside the atom order";
            return out;
        }
        if (it->second < last) {
            out.report.status = ShellingReport::Status::atom_order_violated;
            out.report.later = i;
            out.report.message = "chain " + std::to_string(i) + " comes after a chain with a later atom";
            return out;
        }
        last = it->second;
    }
    auto expected = enumerate_chains_through(p, atom_order, chain_budget);
    if (!detail::is_permutation_of(order, expected, out.report.message)) {
        out.report.status = ShellingReport::Status::not_a_permutation;
        return out;
    }
    return verify_shelling_order(order, threads);
}

struct SearchBudget {
    std::uint64_t nodes = 50'000'000;
    double seconds = 30.0;
};

struct SearchResult {
    enum class Status { found, none_found, budget_exceeded };
    Status status = Status::none_found;
    ChainOrder order;
    std::uint64_t nodes = 0;
};

inline const char* to_string(SearchResult::Status s) {
    switch (s) {
        case SearchResult::Status::found: return "found";
        case SearchResult::Status::none_found: return "none_found";
        case SearchResult::Status::budget_exceeded: return "budget_exceeded";
    }
    return "unknown";
}

/// Backtracking search for an order of `chains` satisfying (Sh).
///
/// Whether a chain may be appended depends only on the set of chains already
/// placed, so failed sets are memoized. Candidates are tried in the given order,
/// which makes the search deterministic. With `atom_rank`, chains must appear in
/// non-decreasing atom rank (an A-shelling).
inline SearchResult search_shelling_order(const ChainOrder& chains, SearchBudget budget = {},
                                          const std::unordered_map<ElementId, std::size_t>* atom_rank = nullptr) {
    SearchResult result;
    const std::size_t count = chains.size();
    if (count == 0) {
        result.status = SearchResult::Status::found;
        return result;
    }
    const std::size_t len = chains[0].size();
    if (len > 64) throw InvalidInput("chains longer than 64 elements are not supported");
    const std::size_t words = (count + 63) / 64;

    std::vector<std::size_t> rank_of(count, 0);
    if (atom_rank)
        for (std::size_t i = 0; i < count; ++i) {
            auto it = atom_rank->find(chain_atom(chains[i]));
            if (it == atom_rank->end()) throw InvalidInput("chain atom missing from atom order");
            rank_of[i] = it->second;
        }

    // neighbours[i] = (j, level) for chains differing from i in exactly one level
    std::vector<std::vector<std::pair<std::size_t, unsigned>>> neighbours(count);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j) {
            if (i == j) continue;
            std::uint64_t d = detail::diff_mask(chains[i], chains[j]);
            if (d && (d & (d - 1)) == 0) neighbours[i].emplace_back(j, static_cast<unsigned>(__builtin_ctzll(d)));
        }

    struct VecHash {
        std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
            std::uint64_t h = 1469598103934665603ULL;
            for (auto w : v) {
                h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
                h *= 1099511628211ULL;
            }
            return static_cast<std::size_t>(h);
        }
    };
    std::unordered_set<std::vector<std::uint64_t>, VecHash> failed;
    std::vector<std::uint64_t> used(words, 0);
    std::vector<std::size_t> prefix;
    prefix.reserve(count);
    const auto start = std::chrono::steady_clock::now();
    bool out_of_budget = false;

    auto is_used = [&](std::size_t i) { return (used[i >> 6] >> (i & 63)) & 1u; };
    auto can_append = [&](std::size_t i) {
        std::uint64_t r = 0;
        for (auto [j, level] : neighbours[i])
            if (is_used(j)) r |= std::uint64_t{1} << level;
        for (std::size_t j : prefix)
            if ((detail::diff_mask(chains[i], chains[j]) & r) == 0) return false;
        return true;
    };

    auto dfs = [&](auto&& self) -> bool {
        if (prefix.size() == count) return true;
        if (++result.nodes > budget.nodes) {
            out_of_budget = true;
            return false;
        }
        if ((result.nodes & 1023) == 0) {
            std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
            if (el.count() > budget.seconds) {
                out_of_budget = true;
                return false;
            }
        }
        if (failed.count(used)) return false;
        const std::size_t floor = prefix.empty() ? 0 : rank_of[prefix.back()];
        for (std::size_t i = 0; i < count; ++i) {
            if (is_used(i) || rank_of[i] < floor || !can_append(i)) continue;
            used[i >> 6] |= std::uint64_t{1} << (i & 63);
            prefix.push_back(i);
            if (self(self)) return true;
            prefix.pop_back();
            used[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
            if (out_of_budget) return false;
        }
        failed.insert(used);
        return false;
    };

    if (dfs(dfs)) {
        result.status = SearchResult::Status::found;
        for (std::size_t i : prefix) result.order.push_back(chains[i]);
    } else {
        result.status = out_of_budget ? SearchResult::Status::budget_exceeded : SearchResult::Status::none_found;
    }
    return result;
}

/// Searches for a shelling of all maximal chains of P. With `atom_order`, only
/// chains through those atoms are ordered and the result is an A-shelling.
inline SearchResult brute_force_shelling(const GradedPoset& p, SearchBudget budget = {},
                                         const AtomOrder* atom_order = nullptr) {
    if (!atom_order) return search_shelling_order(enumerate_maximal_chains(p), budget);
    std::unordered_map<ElementId, std::size_t> rank;
    for (std::size_t i = 0; i < atom_order->size(); ++i) rank.emplace((*atom_order)[i], i);
    return search_shelling_order(enumerate_chains_through(p, *atom_order), budget, &rank);
}

/// A Veronese interval together with an order of its maximal chains.
struct IntervalShelling {
    VeroneseInterval interval;
    ChainOrder order;
};

/// Label of the cover x ⋖ y in [0, z] of V_{1,n}: the (1-based) coordinate that increases.
inline int divisibility_label(const LatticeVector& x, const LatticeVector& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i]) return static_cast<int>(i + 1);
    throw InvalidInput("divisibility_label: not a cover");
}

namespace detail {

/// Least V_{1,n} extension word of a V_{m,n} chain: each step's increased
/// coordinate indices, repeated by multiplicity, sorted ascending.
inline std::vector<int> extension_word(const VeroneseInterval& iv, const MaximalChain& c) {
    std::vector<int> word;
    for (std::size_t r = 0; r + 1 < c.size(); ++r) {
        const auto& x = iv.vec(c[r]);
        const auto& y = iv.vec(c[r + 1]);
        for (std::size_t i = 0; i < x.size(); ++i)
            for (auto d = x[i]; d < y[i]; ++d) word.push_back(static_cast<int>(i + 1));
    }
    return word;
}

inline ChainOrder sort_by_word(const VeroneseInterval& iv, std::uint64_t chain_budget) {
    auto chains = enumerate_maximal_chains(iv.poset, chain_budget);
    std::vector<std::pair<std::vector<int>, std::size_t>> keyed;
    keyed.reserve(chains.size());
    for (std::size_t i = 0; i < chains.size(); ++i) keyed.emplace_back(extension_word(iv, chains[i]), i);
    std::sort(keyed.begin(), keyed.end());
    ChainOrder out;
    out.reserve(chains.size());
    for (auto& [w, i] : keyed) out.push_back(std::move(chains[i]));
    return out;
}

}  // namespace detail

/// Lexicographic shelling of [0, z] in V_{1,n} by the coordinate-index labeling.
inline IntervalShelling el_shelling_divisibility(const LatticeVector& z, std::uint64_t chain_budget = default_chain_budget) {
    IntervalShelling out{build_veronese_interval(VeroneseSpace::plain(1, z.size()), z), {}};
    out.order = detail::sort_by_word(out.interval, chain_budget);
    return out;
}

/// Shelling of [0, z] in V_{m,n}: chains of the rank-selected interval ordered by
/// the label word of their lexicographically least V_{1,n} extension.
inline IntervalShelling rank_selected_shelling(const LatticeVector& z, std::size_t m,
                                               std::uint64_t chain_budget = default_chain_budget) {
    if (m == 0 || z.sum() % m != 0) throw InvalidInput("rank_selected_shelling: coordinate sum not divisible by m");
    IntervalShelling out{build_veronese_interval(VeroneseSpace::plain(m, z.size()), z), {}};
    out.order = detail::sort_by_word(out.interval, chain_budget);
    return out;
}

}  // namespace vshell

#endif
