#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include <json.hpp>

#include "core.hpp"
#include "rational.hpp"

namespace hyperstab {

using json = nlohmann::json;

inline constexpr std::string_view tool_version = "hyperstab 0.1.0";

/// 64-bit FNV-1a, printed as 16 lowercase hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Hash of a 0/1 outcome vector, e.g. one bit per enumerated case.
inline std::string outcome_vector_hash(const std::vector<bool>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (bool b : bits)
        s.push_back(b ? '1' : '0');
    return fnv1a_hex(s);
}

namespace verdict {
inline constexpr std::string_view pass = "pass";
inline constexpr std::string_view fail = "fail";
inline constexpr std::string_view witness = "witness";
inline constexpr std::string_view exhausted = "exhausted";
inline constexpr std::string_view budget = "budget";
} // namespace verdict

struct Certificate {
    std::string claim_id;
    json inputs = json::object();
    std::string verdict{verdict::pass};
    json payload = json::object();

    /// pass, witness and exhausted all mean the claim was established.
    bool established() const {
        return verdict == verdict::pass || verdict == verdict::witness || verdict == verdict::exhausted;
    }
    bool failed() const { return verdict == verdict::fail; }
    bool incomplete() const { return verdict == verdict::budget; }

    json body() const {
        return json{{"claim_id", claim_id},
                    {"tool_version", std::string(tool_version)},
                    {"inputs", inputs},
                    {"verdict", verdict},
                    {"payload", payload}};
    }

    /// Hash of the compact dump of body(); object keys are sorted, so the
    /// serialization is canonical.
    std::string content_hash() const { return fnv1a_hex(body().dump()); }

    json to_json() const {
        json j = body();
        j["content_hash"] = content_hash();
        return j;
    }

    /// Re-checks the stored hash against the body of a serialized certificate.
    static bool hash_matches(const json& j) {
        json copy = j;
        if (!copy.contains("content_hash"))
            return false;
        std::string stored = copy["content_hash"];
        copy.erase("content_hash");
        return fnv1a_hex(copy.dump()) == stored;
    }
};

inline json to_json(const Rational& q) { return to_string(q); }

inline json to_json(const ThreeGraph& g) {
    json edges = json::array();
    for (Triple t : g.edges())
        edges.push_back({t.a, t.b, t.c});
    return json{{"n", g.order()}, {"edges", edges}};
}

inline json to_json(const VertexMap& m) {
    return json{{"source_n", m.source_n}, {"target_n", m.target_n}, {"image", m.image}};
}

inline ThreeGraph graph_from_json(const json& j) {
    std::vector<Triple> triples;
    for (const auto& e : j.at("edges"))
        triples.push_back({e.at(0).get<Vertex>(), e.at(1).get<Vertex>(), e.at(2).get<Vertex>()});
    return ThreeGraph::build(j.at("n").get<std::size_t>(), triples);
}

inline VertexMap map_from_json(const json& j) {
    return VertexMap::make(j.at("target_n").get<std::size_t>(), j.at("image").get<std::vector<Vertex>>());
}

} // namespace hyperstab
