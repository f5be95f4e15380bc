#pragma once

// Canonical 3-uniform hypergraphs and the structures derived from them:
// shadow, links, codegrees, twin classes and small-graph isomorphism.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <ranges>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace hyperstab {

using Vertex = std::uint32_t;
using VertexPair = std::pair<Vertex, Vertex>;

inline constexpr std::size_t max_vertices = std::size_t{1} << 16;

struct Triple {
    Vertex a = 0, b = 0, c = 0;

    auto operator<=>(const Triple&) const = default;

    /// Sorted copy; does not check distinctness.
    Triple sorted() const {
        std::array<Vertex, 3> v{a, b, c};
        std::sort(v.begin(), v.end());
        return {v[0], v[1], v[2]};
    }

    bool contains(Vertex v) const { return a == v || b == v || c == v; }
};

/// Sorted triple packed into three 16-bit fields; the packed order is the
/// lexicographic order of the triples.
inline std::uint64_t pack(const Triple& t) {
    return (std::uint64_t{t.a} << 32) | (std::uint64_t{t.b} << 16) | std::uint64_t{t.c};
}

inline Triple unpack(std::uint64_t p) {
    return {static_cast<Vertex>((p >> 32) & 0xffff), static_cast<Vertex>((p >> 16) & 0xffff),
            static_cast<Vertex>(p & 0xffff)};
}

class ThreeGraph {
public:
    ThreeGraph() = default;

    /// Canonicalizes `triples` (sorts each triple, sorts and dedupes the list).
    static ThreeGraph build(std::size_t n, std::span<const Triple> triples) {
        if (n > max_vertices)
            throw Error(ErrorKind::TooLarge, "vertex count " + std::to_string(n) + " exceeds 2^16");
        ThreeGraph g;
        g.n_ = n;
        g.packed_.reserve(triples.size());
        for (const Triple& raw : triples) {
            if (raw.a >= n || raw.b >= n || raw.c >= n)
                throw Error(ErrorKind::OutOfRange, "triple (" + std::to_string(raw.a) + "," + std::to_string(raw.b) +
                                                       "," + std::to_string(raw.c) + ") has a vertex >= " +
                                                       std::to_string(n));
            Triple t = raw.sorted();
            if (t.a == t.b || t.b == t.c)
                throw Error(ErrorKind::Degenerate, "triple (" + std::to_string(raw.a) + "," + std::to_string(raw.b) +
                                                       "," + std::to_string(raw.c) + ") repeats a vertex");
            g.packed_.push_back(pack(t));
        }
        std::sort(g.packed_.begin(), g.packed_.end());
        g.packed_.erase(std::unique(g.packed_.begin(), g.packed_.end()), g.packed_.end());
        return g;
    }

    static ThreeGraph build(std::size_t n, std::initializer_list<Triple> triples) {
        return build(n, std::span<const Triple>(triples.begin(), triples.size()));
    }

    static ThreeGraph empty(std::size_t n) { return build(n, std::span<const Triple>{}); }

    std::size_t order() const { return n_; }
    std::size_t size() const { return packed_.size(); }

    Triple edge(std::size_t i) const { return unpack(packed_[i]); }
    std::span<const std::uint64_t> packed() const { return packed_; }

    auto edges() const { return packed_ | std::views::transform(unpack); }

    std::vector<Triple> edge_list() const {
        std::vector<Triple> out;
        out.reserve(packed_.size());
        for (auto p : packed_)
            out.push_back(unpack(p));
        return out;
    }

    bool has_edge(Vertex a, Vertex b, Vertex c) const {
        if (a == b || b == c || a == c || a >= n_ || b >= n_ || c >= n_)
            return false;
        return std::binary_search(packed_.begin(), packed_.end(), pack(Triple{a, b, c}.sorted()));
    }

    bool operator==(const ThreeGraph&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> packed_;
};

enum class MapKind { general, injective, bijective };

/// A total map V(source) -> V(target).
struct VertexMap {
    std::size_t source_n = 0;
    std::size_t target_n = 0;
    std::vector<Vertex> image;
    MapKind kind = MapKind::general;

    static VertexMap make(std::size_t target_n, std::vector<Vertex> image, MapKind kind = MapKind::general) {
        VertexMap m{image.size(), target_n, std::move(image), kind};
        for (Vertex v : m.image)
            if (v >= target_n)
                throw Error(ErrorKind::OutOfRange, "map image " + std::to_string(v) + " >= " + std::to_string(target_n));
        if (kind != MapKind::general) {
            std::vector<Vertex> sorted = m.image;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw Error(ErrorKind::InvalidSpec, "map declared injective is not");
            if (kind == MapKind::bijective && m.source_n != target_n)
                throw Error(ErrorKind::InvalidSpec, "map declared bijective has mismatched sizes");
        }
        return m;
    }

    Vertex operator()(Vertex v) const { return image.at(v); }
};

/// Follow `first` then `second`.
inline VertexMap compose(const VertexMap& first, const VertexMap& second) {
    if (first.target_n != second.source_n)
        throw Error(ErrorKind::ArityMismatch, "cannot compose maps with mismatched middle set");
    std::vector<Vertex> image(first.source_n);
    for (std::size_t v = 0; v < first.source_n; ++v)
        image[v] = second.image[first.image[v]];
    return VertexMap::make(second.target_n, std::move(image));
}

struct PairStats {
    VertexPair pair;
    std::size_t codegree = 0;
};

/// Pairs covered by at least one edge, sorted.
inline std::vector<VertexPair> shadow(const ThreeGraph& h) {
    std::vector<VertexPair> out;
    out.reserve(3 * h.size());
    for (Triple t : h.edges()) {
        out.emplace_back(t.a, t.b);
        out.emplace_back(t.a, t.c);
        out.emplace_back(t.b, t.c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::size_t codegree(const ThreeGraph& h, Vertex u, Vertex v) {
    if (u == v)
        throw Error(ErrorKind::SameVertex, "codegree of a vertex with itself");
    if (u >= h.order() || v >= h.order())
        throw Error(ErrorKind::OutOfRange, "codegree vertex out of range");
    std::size_t d = 0;
    for (Triple t : h.edges())
        d += t.contains(u) && t.contains(v);
    return d;
}

/// Codegree of every unordered pair (u < v), including zeros, in lexicographic order.
inline std::vector<PairStats> pair_stats(const ThreeGraph& h) {
    const std::size_t n = h.order();
    std::vector<std::size_t> table(n * n, 0);
    for (Triple t : h.edges()) {
        ++table[t.a * n + t.b];
        ++table[t.a * n + t.c];
        ++table[t.b * n + t.c];
    }
    std::vector<PairStats> out;
    out.reserve(n * (n - (n > 0)) / 2);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            out.push_back({{u, v}, table[u * n + v]});
    return out;
}

inline std::vector<std::size_t> degrees(const ThreeGraph& h) {
    std::vector<std::size_t> deg(h.order(), 0);
    for (Triple t : h.edges()) {
        ++deg[t.a];
        ++deg[t.b];
        ++deg[t.c];
    }
    return deg;
}

/// Pairs {x,y} with {v,x,y} an edge, sorted with x < y.
inline std::vector<VertexPair> link(const ThreeGraph& h, Vertex v) {
    if (v >= h.order())
        throw Error(ErrorKind::OutOfRange, "link vertex " + std::to_string(v) + " out of range");
    std::vector<VertexPair> out;
    for (Triple t : h.edges()) {
        if (t.a == v)
            out.emplace_back(t.b, t.c);
        else if (t.b == v)
            out.emplace_back(t.a, t.c);
        else if (t.c == v)
            out.emplace_back(t.a, t.b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct TwinQuotient {
    ThreeGraph quotient;
    VertexMap projection;  // H -> quotient
};

/// Merges vertices that share no edge and have identical links. Classes are
/// numbered by their smallest member.
inline TwinQuotient twin_quotient(const ThreeGraph& h) {
    const std::size_t n = h.order();
    std::vector<std::vector<VertexPair>> links(n);
    for (Triple t : h.edges()) {
        links[t.a].emplace_back(t.b, t.c);
        links[t.b].emplace_back(t.a, t.c);
        links[t.c].emplace_back(t.a, t.b);
    }
    for (auto& l : links)
        std::sort(l.begin(), l.end());
    auto covered = shadow(h);

    // Equal links is already an equivalence; the non-adjacency requirement is
    // checked pairwise and closed transitively with union-find.
    std::vector<Vertex> parent(n);
    std::iota(parent.begin(), parent.end(), Vertex{0});
    auto find = [&](Vertex x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    std::map<std::vector<VertexPair>, std::vector<Vertex>> by_link;
    for (Vertex v = 0; v < n; ++v)
        by_link[links[v]].push_back(v);
    for (const auto& [l, members] : by_link) {
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                VertexPair p{members[i], members[j]};
                if (!std::binary_search(covered.begin(), covered.end(), p)) {
                    Vertex ri = find(p.first), rj = find(p.second);
                    if (ri != rj)
                        parent[std::max(ri, rj)] = std::min(ri, rj);
                }
            }
    }

    std::vector<Vertex> class_of(n);
    std::vector<Vertex> class_index(n, ~Vertex{0});
    Vertex classes = 0;
    for (Vertex v = 0; v < n; ++v) {
        Vertex r = find(v);
        if (class_index[r] == ~Vertex{0})
            class_index[r] = classes++;
        class_of[v] = class_index[r];
    }
    std::vector<Triple> q;
    q.reserve(h.size());
    for (Triple t : h.edges())
        q.push_back({class_of[t.a], class_of[t.b], class_of[t.c]});
    return {ThreeGraph::build(classes, q), VertexMap::make(classes, std::move(class_of))};
}

/// Dense lookup table for graphs small enough that n^3 bits are cheap.
class DenseAdjacency {
public:
    explicit DenseAdjacency(const ThreeGraph& g) : n_(g.order()), bits_(n_ * n_ * n_, false) {
        for (Triple t : g.edges()) {
            const Vertex v[3] = {t.a, t.b, t.c};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k)
                        if (i != j && j != k && i != k)
                            bits_[(v[i] * n_ + v[j]) * n_ + v[k]] = true;
        }
    }

    bool operator()(Vertex a, Vertex b, Vertex c) const { return bits_[(a * n_ + b) * n_ + c]; }

private:
    std::size_t n_;
    std::vector<bool> bits_;
};

inline constexpr std::size_t default_isomorphism_limit = 12;

/// Returns a bijection mapping the edges of `g` exactly onto the edges of `h`,
/// or nothing. Backtracks over vertices of `g` with candidates restricted to
/// vertices of equal (degree, codegree multiset) and pairwise codegrees checked
/// as the map grows.
inline std::optional<VertexMap> is_isomorphic(const ThreeGraph& g, const ThreeGraph& h,
                                              std::size_t limit = default_isomorphism_limit) {
    if (g.order() > limit || h.order() > limit)
        throw Error(ErrorKind::TooLarge, "isomorphism test limited to " + std::to_string(limit) + " vertices");
    if (g.order() != h.order() || g.size() != h.size())
        return std::nullopt;
    const std::size_t n = g.order();

    auto codeg_table = [n](const ThreeGraph& x) {
        std::vector<std::size_t> t(n * n, 0);
        for (Triple e : x.edges()) {
            ++t[e.a * n + e.b], ++t[e.b * n + e.a];
            ++t[e.a * n + e.c], ++t[e.c * n + e.a];
            ++t[e.b * n + e.c], ++t[e.c * n + e.b];
        }
        return t;
    };
    auto cg = codeg_table(g), ch = codeg_table(h);
    auto dg = degrees(g), dh = degrees(h);
    auto signature = [n](const std::vector<std::size_t>& table, const std::vector<std::size_t>& deg, Vertex v) {
        std::vector<std::size_t> s;
        s.reserve(n + 1);
        for (Vertex u = 0; u < n; ++u)
            if (u != v)
                s.push_back(table[v * n + u]);
        std::sort(s.begin(), s.end());
        s.push_back(deg[v]);
        return s;
    };
    std::vector<std::vector<std::size_t>> sg(n), sh(n);
    for (Vertex v = 0; v < n; ++v) {
        sg[v] = signature(cg, dg, v);
        sh[v] = signature(ch, dh, v);
    }
    {
        auto a = sg, b = sh;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b)
            return std::nullopt;
    }

    // Rarest signature first, then by degree, so that early choices are forced.
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    auto rarity = [&](Vertex v) { return std::count(sg.begin(), sg.end(), sg[v]); };
    std::stable_sort(order.begin(), order.end(), [&](Vertex x, Vertex y) {
        auto rx = rarity(x), ry = rarity(y);
        return rx != ry ? rx < ry : dg[x] > dg[y];
    });

    DenseAdjacency ag(g), ah(h);
    std::vector<Vertex> image(n, 0);
    std::vector<bool> used(n, false);

    auto extend = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == n)
            return true;
        const Vertex v = order[depth];
        for (Vertex w = 0; w < n; ++w) {
            if (used[w] || sg[v] != sh[w])
                continue;
            bool ok = true;
            for (std::size_t i = 0; i < depth && ok; ++i) {
                const Vertex u = order[i];
                ok = cg[u * n + v] == ch[image[u] * n + w];
                for (std::size_t j = i + 1; j < depth && ok; ++j) {
                    const Vertex x = order[j];
                    ok = ag(u, x, v) == ah(image[u], image[x], w);
                }
            }
            if (!ok)
                continue;
            image[v] = w;
            used[w] = true;
            if (self(self, depth + 1))
                return true;
            used[w] = false;
        }
        return false;
    };
    if (!extend(extend, 0))
        return std::nullopt;
    return VertexMap::make(n, image, MapKind::bijective);
}

/// Relabels vertices: vertex v of `g` becomes perm[v].
inline ThreeGraph relabel(const ThreeGraph& g, std::span<const Vertex> perm) {
    if (perm.size() != g.order())
        throw Error(ErrorKind::ArityMismatch, "permutation length differs from vertex count");
    std::vector<Triple> out;
    out.reserve(g.size());
    for (Triple t : g.edges())
        out.push_back({perm[t.a], perm[t.b], perm[t.c]});
    return ThreeGraph::build(g.order(), out);
}

/// Subgraph induced on the vertices with keep[v] true, renumbered in order.
inline ThreeGraph induced(const ThreeGraph& g, const std::vector<bool>& keep) {
    std::vector<Vertex> index(g.order(), ~Vertex{0});
    Vertex m = 0;
    for (Vertex v = 0; v < g.order(); ++v)
        if (keep.at(v))
            index[v] = m++;
    std::vector<Triple> out;
    for (Triple t : g.edges())
        if (keep[t.a] && keep[t.b] && keep[t.c])
            out.push_back({index[t.a], index[t.b], index[t.c]});
    return ThreeGraph::build(m, out);
}

// ---------------------------------------------------------------------------
// ".3g" text format: "n m" then m lines "a b c", each triple strictly
// increasing and the lines in strictly increasing lexicographic order.

inline void write_3g(std::ostream& os, const ThreeGraph& g) {
    os << g.order() << ' ' << g.size() << '\n';
    for (Triple t : g.edges())
        os << t.a << ' ' << t.b << ' ' << t.c << '\n';
}

inline std::string to_3g(const ThreeGraph& g) {
    std::ostringstream os;
    write_3g(os, g);
    return os.str();
}

inline ThreeGraph read_3g(std::istream& is) {
    long long n = -1, m = -1;
    if (!(is >> n >> m) || n < 0 || m < 0)
        throw Error(ErrorKind::Parse, "expected header 'n m'");
    if (static_cast<unsigned long long>(n) > max_vertices)
        throw Error(ErrorKind::TooLarge, "vertex count exceeds 2^16");
    std::vector<Triple> triples;
    triples.reserve(static_cast<std::size_t>(m));
    std::uint64_t previous = 0;
    for (long long i = 0; i < m; ++i) {
        long long a, b, c;
        if (!(is >> a >> b >> c))
            throw Error(ErrorKind::Parse, "expected " + std::to_string(m) + " triples, got " + std::to_string(i));
        if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n)
            throw Error(ErrorKind::OutOfRange, "triple on line " + std::to_string(i + 2) + " out of range");
        if (a == b || b == c || a == c)
            throw Error(ErrorKind::Degenerate, "triple on line " + std::to_string(i + 2) + " repeats a vertex");
        if (!(a < b && b < c))
            throw Error(ErrorKind::Parse, "triple on line " + std::to_string(i + 2) + " is not sorted");
        Triple t{static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<Vertex>(c)};
        if (i > 0 && pack(t) <= previous)
            throw Error(ErrorKind::Parse, "triples not in strictly increasing order at line " + std::to_string(i + 2));
        previous = pack(t);
        triples.push_back(t);
    }
    std::string trailing;
    if (is >> trailing)
        throw Error(ErrorKind::Parse, "trailing content after last triple");
    return ThreeGraph::build(static_cast<std::size_t>(n), triples);
}

inline ThreeGraph from_3g(const std::string& text) {
    std::istringstream is(text);
    return read_3g(is);
}

} // namespace hyperstab
