#ifndef VSHELL_IO_HPP
#define VSHELL_IO_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vshell/errors.hpp"
#include "vshell/poset.hpp"
#include "vshell/shelling.hpp"

namespace vshell {

using Json = nlohmann::json;

/// FNV-1a over the canonical structure (payloads, covers, bottom, top), as 16 hex digits.
inline std::string poset_hash(const GradedPoset& p) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ULL;
        }
    };
    mix(p.size());
    for (ElementId x = 0; x < p.size(); ++x) {
        mix(p.payload(x).size());
        for (auto v : p.payload(x)) mix(static_cast<std::uint64_t>(v));
    }
    for (auto [a, b] : p.cover_list()) {
        mix(a);
        mix(b);
    }
    mix(p.bottom());
    mix(p.top() ? *p.top() : no_element);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline Json poset_to_json(const GradedPoset& p) {
    Json j;
    j["n"] = p.size() ? p.payload(0).size() : 0;
    j["elements"] = p.payloads();
    Json covers = Json::array();
    for (auto [a, b] : p.cover_list()) covers.push_back({a, b});
    j["covers"] = std::move(covers);
    j["bottom"] = p.bottom();
    if (p.top()) j["top"] = *p.top();
    return j;
}

inline GradedPoset poset_from_json(const Json& j) {
    try {
        auto elements = j.at("elements").get<std::vector<Payload>>();
        std::vector<std::pair<std::size_t, std::size_t>> covers;
        for (const auto& c : j.at("covers")) {
            if (!c.is_array() || c.size() != 2) throw InvalidInput("cover entries must be [lower, upper]");
            covers.emplace_back(c[0].get<std::size_t>(), c[1].get<std::size_t>());
        }
        std::optional<std::size_t> top;
        if (j.contains("top") && !j["top"].is_null()) top = j["top"].get<std::size_t>();
        return build_poset(std::move(elements), std::move(covers), j.at("bottom").get<std::size_t>(), top);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed poset JSON: ") + e.what());
    }
}

inline Json shelling_to_json(const GradedPoset& p, const ChainOrder& order) {
    Json j;
    j["poset"] = poset_hash(p);
    j["chains"] = order;
    return j;
}

/// Shelling JSON plus one [i, i', i*] triple per ordered pair.
inline Json certificate_to_json(const GradedPoset& p, const ShellingCertificate& cert) {
    Json j = shelling_to_json(p, cert.order());
    Json w = Json::array();
    for (auto& t : cert.witness_triples()) w.push_back(t);
    j["witnesses"] = std::move(w);
    return j;
}

/// Reads the chains of a shelling JSON, checking the poset hash when given.
inline ChainOrder shelling_from_json(const Json& j, const GradedPoset* expected = nullptr) {
    try {
        if (expected && j.at("poset").get<std::string>() != poset_hash(*expected))
            throw InvalidInput("shelling was produced for a different poset (hash mismatch)");
        return j.at("chains").get<ChainOrder>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed shelling JSON: ") + e.what());
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput("cannot parse " + path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << j.dump(1) << '\n';
}

namespace detail {

inline std::string payload_label(const Payload& p) {
    bool digits = true;
    for (auto v : p) digits = digits && v >= 0 && v <= 9;
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!digits && i) s += ',';
        s += std::to_string(p[i]);
    }
    return s.empty() ? "()" : s;
}

}  // namespace detail

/// Hasse diagram in Graphviz DOT, one rank per row (bottom row is rank 0).
inline std::string to_dot(const GradedPoset& p) {
    std::ostringstream out;
    out << "digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n";
    for (int r = 0; r <= p.max_rank(); ++r) {
        out << "  { rank=same;";
        for (ElementId x : p.elements_of_rank(r)) out << " n" << x << ';';
        out << " }\n";
    }
    for (ElementId x = 0; x < p.size(); ++x) out << "  n" << x << " [label=\"" << detail::payload_label(p.payload(x)) << "\"];\n";
    for (auto [a, b] : p.cover_list()) out << "  n" << a << " -> n" << b << " [arrowhead=none];\n";
    out << "}\n";
    return out.str();
}

}  // namespace vshell

#endif
