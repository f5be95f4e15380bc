#pragma once

// Named constructions: categorical products, blowups, F2 cut templates,
// crossed blowups of the rank-two template and the fixed catalog of small
// graphs, together with their human-readable vertex labels.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "rational.hpp"

namespace hyperstab {

struct LabelledGraph {
    ThreeGraph graph;
    std::vector<std::string> labels;
};

inline std::vector<std::string> index_labels(std::size_t n, std::string_view prefix = "") {
    std::vector<std::string> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::string(prefix) + std::to_string(i);
    return out;
}

// ---------------------------------------------------------------------------
// Categorical product

/// Vertex (g, h) of G x H is g * |V(H)| + h.
inline LabelledGraph product(const LabelledGraph& g, const LabelledGraph& h) {
    const std::size_t ng = g.graph.order(), nh = h.graph.order();
    if (ng != 0 && nh > max_vertices / ng)
        throw Error(ErrorKind::Overflow, "product has more than 2^16 vertices");
    auto vid = [nh](Vertex x, Vertex y) { return static_cast<Vertex>(x * nh + y); };
    std::vector<Triple> triples;
    triples.reserve(6 * g.graph.size() * h.graph.size());
    for (Triple e : g.graph.edges()) {
        for (Triple f : h.graph.edges()) {
            std::array<Vertex, 3> second{f.a, f.b, f.c};
            std::sort(second.begin(), second.end());
            do {
                triples.push_back({vid(e.a, second[0]), vid(e.b, second[1]), vid(e.c, second[2])});
            } while (std::next_permutation(second.begin(), second.end()));
        }
    }
    LabelledGraph out{ThreeGraph::build(ng * nh, triples), {}};
    out.labels.reserve(ng * nh);
    for (std::size_t x = 0; x < ng; ++x)
        for (std::size_t y = 0; y < nh; ++y)
            out.labels.push_back("(" + g.labels.at(x) + "," + h.labels.at(y) + ")");
    return out;
}

inline LabelledGraph product(const ThreeGraph& g, const ThreeGraph& h) {
    return product(LabelledGraph{g, index_labels(g.order())}, LabelledGraph{h, index_labels(h.order())});
}

/// Coordinate projection of G x H onto G (coordinate 0) or H (coordinate 1).
inline VertexMap product_projection(std::size_t ng, std::size_t nh, int coordinate) {
    std::vector<Vertex> image(ng * nh);
    for (std::size_t x = 0; x < ng; ++x)
        for (std::size_t y = 0; y < nh; ++y)
            image[x * nh + y] = static_cast<Vertex>(coordinate == 0 ? x : y);
    return VertexMap::make(coordinate == 0 ? ng : nh, std::move(image));
}

// ---------------------------------------------------------------------------
// Blowups

inline constexpr std::uint64_t max_blowup_edges = 50'000'000;

struct BlowupSpec {
    ThreeGraph pattern;
    std::vector<std::size_t> sizes;
};

struct Blowup {
    ThreeGraph graph;
    std::vector<Vertex> part_of;  // pattern vertex of each blowup vertex
};

inline std::uint64_t blowup_edge_count(const BlowupSpec& spec) {
    std::uint64_t total = 0;
    for (Triple t : spec.pattern.edges())
        total += std::uint64_t{spec.sizes[t.a]} * spec.sizes[t.b] * spec.sizes[t.c];
    return total;
}

/// Parts are laid out consecutively in pattern-vertex order.
inline Blowup blowup(const BlowupSpec& spec) {
    if (spec.sizes.size() != spec.pattern.order())
        throw Error(ErrorKind::InvalidSpec, "blowup needs one size per pattern vertex");
    std::uint64_t n = 0;
    for (auto s : spec.sizes)
        n += s;
    if (n > max_vertices)
        throw Error(ErrorKind::Overflow, "blowup has more than 2^16 vertices");
    const std::uint64_t m = blowup_edge_count(spec);
    if (m > max_blowup_edges)
        throw Error(ErrorKind::Overflow, "blowup has " + std::to_string(m) + " edges");

    std::vector<Vertex> offset(spec.sizes.size() + 1, 0);
    for (std::size_t i = 0; i < spec.sizes.size(); ++i)
        offset[i + 1] = offset[i] + static_cast<Vertex>(spec.sizes[i]);
    std::vector<Vertex> part_of(n);
    for (Vertex i = 0; i < spec.sizes.size(); ++i)
        std::fill(part_of.begin() + offset[i], part_of.begin() + offset[i + 1], i);

    std::vector<Triple> triples;
    triples.reserve(m);
    for (Triple t : spec.pattern.edges())
        for (Vertex x = offset[t.a]; x < offset[t.a + 1]; ++x)
            for (Vertex y = offset[t.b]; y < offset[t.b + 1]; ++y)
                for (Vertex z = offset[t.c]; z < offset[t.c + 1]; ++z)
                    triples.push_back({x, y, z});
    return {ThreeGraph::build(n, triples), std::move(part_of)};
}

/// Largest-remainder apportionment of rational targets summing to `total`;
/// ties go to the lower index.
inline std::vector<std::size_t> apportion(const std::vector<Rational>& targets, std::size_t total) {
    Rational sum = 0;
    for (const auto& t : targets) {
        if (t < 0)
            throw Error(ErrorKind::InvalidSpec, "negative apportionment target");
        sum += t;
    }
    if (sum != Rational(total))
        throw Error(ErrorKind::InvalidSpec, "apportionment targets do not sum to the total");
    std::vector<std::size_t> sizes(targets.size());
    std::vector<Rational> remainder(targets.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        BigInt fl = numerator(targets[i]) / denominator(targets[i]);
        sizes[i] = fl.convert_to<std::size_t>();
        remainder[i] = targets[i] - Rational(fl);
        assigned += sizes[i];
    }
    std::vector<std::size_t> order(targets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return remainder[x] > remainder[y]; });
    for (std::size_t k = 0; k < total - assigned; ++k)
        ++sizes[order[k]];
    return sizes;
}

// ---------------------------------------------------------------------------
// F2 cut templates
//
// A vector u of F2^d and a linear form c are both d-bit masks; bit i is the
// i-th coordinate. c(u) is the parity of popcount(c & u).

using F2Vector = std::uint32_t;

inline int evaluate_form(F2Vector form, F2Vector u) {
    return std::popcount(form & u) & 1;
}

/// Coordinate string with coordinate 0 first, e.g. "010" has only bit 1 set.
inline std::string coordinates(F2Vector u, unsigned dim) {
    std::string s(dim, '0');
    for (unsigned i = 0; i < dim; ++i)
        if ((u >> i) & 1U)
            s[i] = '1';
    return s;
}

inline F2Vector parse_coordinates(std::string_view s) {
    F2Vector u = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            u |= F2Vector{1} << i;
        else if (s[i] != '0')
            throw Error(ErrorKind::Parse, "bad coordinate string '" + std::string(s) + "'");
    }
    return u;
}

/// "x+y" style names in dimensions 2 and 3, "c:0110" otherwise.
inline std::string form_name(F2Vector form, unsigned dim) {
    static constexpr std::string_view small[] = {"x", "y"};
    static constexpr std::string_view coords3[] = {"X", "Y", "Z"};
    if (dim != 2 && dim != 3)
        return "c:" + coordinates(form, dim);
    std::string out;
    for (unsigned i = 0; i < dim; ++i)
        if ((form >> i) & 1U) {
            if (!out.empty())
                out += '+';
            out += dim == 2 ? small[i] : coords3[i];
        }
    return out;
}

struct CutTemplateSpec {
    unsigned dim = 1;
    std::vector<F2Vector> forms;

    std::size_t apex_count() const { return forms.size(); }
    std::size_t bottom_count() const { return std::size_t{1} << dim; }
    Vertex apex(std::size_t form_index) const { return static_cast<Vertex>(form_index); }
    Vertex bottom(F2Vector u) const { return static_cast<Vertex>(forms.size() + u); }
};

inline void validate(const CutTemplateSpec& spec) {
    if (spec.dim < 1 || spec.dim > 16)
        throw Error(ErrorKind::InvalidSpec, "cut template dimension must be in 1..16");
    const F2Vector limit = F2Vector{1} << spec.dim;
    for (std::size_t i = 0; i < spec.forms.size(); ++i) {
        if (spec.forms[i] == 0 || spec.forms[i] >= limit)
            throw Error(ErrorKind::InvalidSpec, "forms must be nonzero and fit the dimension");
        for (std::size_t j = 0; j < i; ++j)
            if (spec.forms[i] == spec.forms[j])
                throw Error(ErrorKind::InvalidSpec, "forms must be distinct");
    }
}

/// F2 rank of a set of bitmasks by elimination on the leading bit.
inline std::size_t f2_rank(std::vector<F2Vector> vectors) {
    std::size_t rank = 0;
    for (int bit = 31; bit >= 0; --bit) {
        auto pivot = std::find_if(vectors.begin() + static_cast<std::ptrdiff_t>(rank), vectors.end(),
                                  [bit](F2Vector v) { return (v >> bit) & 1U; });
        if (pivot == vectors.end())
            continue;
        std::iter_swap(vectors.begin() + static_cast<std::ptrdiff_t>(rank), pivot);
        for (std::size_t i = 0; i < vectors.size(); ++i)
            if (i != rank && ((vectors[i] >> bit) & 1U))
                vectors[i] ^= vectors[rank];
        ++rank;
    }
    return rank;
}

inline std::size_t cut_rank(const CutTemplateSpec& spec) {
    return f2_rank(spec.forms);
}

/// Apexes first (one per form, in the given order), then the 2^dim bottoms.
inline LabelledGraph cut_template(const CutTemplateSpec& spec) {
    validate(spec);
    const F2Vector bottoms = F2Vector{1} << spec.dim;
    std::vector<Triple> triples;
    for (std::size_t i = 0; i < spec.forms.size(); ++i)
        for (F2Vector u = 0; u < bottoms; ++u)
            for (F2Vector v = u + 1; v < bottoms; ++v)
                if (evaluate_form(spec.forms[i], u ^ v))
                    triples.push_back({spec.apex(i), spec.bottom(u), spec.bottom(v)});
    LabelledGraph out{ThreeGraph::build(spec.forms.size() + bottoms, triples), {}};
    for (F2Vector c : spec.forms)
        out.labels.push_back("apex:" + form_name(c, spec.dim));
    for (F2Vector u = 0; u < bottoms; ++u)
        out.labels.push_back("bottom:" + coordinates(u, spec.dim));
    return out;
}

/// All automorphisms of the template induced by affine maps u -> Au + t of
/// F2^dim whose linear part permutes the form set. Listed as vertex
/// permutations; the identity is included. Limited to dim <= 4.
inline std::vector<std::vector<Vertex>> cut_template_automorphisms(const CutTemplateSpec& spec) {
    validate(spec);
    if (spec.dim > 4)
        throw Error(ErrorKind::TooLarge, "affine automorphism enumeration limited to dim <= 4");
    const unsigned d = spec.dim;
    const F2Vector size = F2Vector{1} << d;
    std::vector<std::vector<Vertex>> out;
    std::vector<F2Vector> columns(d, 1);

    auto apply = [&](F2Vector u) {
        F2Vector r = 0;
        for (unsigned i = 0; i < d; ++i)
            if ((u >> i) & 1U)
                r ^= columns[i];
        return r;
    };
    auto visit = [&](auto&& self, unsigned k) -> void {
        if (k < d) {
            for (F2Vector col = 1; col < size; ++col) {
                columns[k] = col;
                self(self, k + 1);
            }
            return;
        }
        if (f2_rank(columns) != d)
            return;
        // Image form c' is the unique form with c'(Au) = c(u) for all u.
        std::vector<Vertex> apex_image(spec.forms.size());
        for (std::size_t i = 0; i < spec.forms.size(); ++i) {
            std::optional<std::size_t> found;
            for (std::size_t j = 0; j < spec.forms.size() && !found; ++j) {
                bool same = true;
                for (F2Vector u = 0; u < size && same; ++u)
                    same = evaluate_form(spec.forms[j], apply(u)) == evaluate_form(spec.forms[i], u);
                if (same)
                    found = j;
            }
            if (!found)
                return;
            apex_image[i] = spec.apex(*found);
        }
        for (F2Vector t = 0; t < size; ++t) {
            std::vector<Vertex> perm(apex_image);
            for (F2Vector u = 0; u < size; ++u)
                perm.push_back(spec.bottom(apply(u) ^ t));
            out.push_back(std::move(perm));
        }
    };
    visit(visit, 0);
    return out;
}

/// Homomorphism R(F2^3, {X,Y,Z}) -> R(U, C) for a spec of rank >= 3: the
/// first three independent forms c1, c2, c3 receive the apexes, and each
/// bottom w goes to s(w) for a linear right inverse s of u -> (c1(u), c2(u), c3(u)).
inline VertexMap rank3_lift(const CutTemplateSpec& spec) {
    validate(spec);
    std::vector<std::size_t> chosen;
    std::vector<F2Vector> basis;
    for (std::size_t i = 0; i < spec.forms.size() && chosen.size() < 3; ++i) {
        basis.push_back(spec.forms[i]);
        if (f2_rank(basis) == basis.size())
            chosen.push_back(i);
        else
            basis.pop_back();
    }
    if (chosen.size() < 3)
        throw Error(ErrorKind::InvalidSpec, "rank3_lift needs cut-rank at least 3");
    std::array<F2Vector, 3> section{};
    const F2Vector size = F2Vector{1} << spec.dim;
    for (int i = 0; i < 3; ++i) {
        bool found = false;
        for (F2Vector u = 0; u < size && !found; ++u) {
            bool ok = true;
            for (int j = 0; j < 3 && ok; ++j)
                ok = evaluate_form(basis[j], u) == (i == j ? 1 : 0);
            if (ok) {
                section[i] = u;
                found = true;
            }
        }
    }
    std::vector<Vertex> image(3 + 8);
    for (int i = 0; i < 3; ++i)
        image[i] = spec.apex(chosen[i]);
    for (F2Vector w = 0; w < 8; ++w) {
        F2Vector u = 0;
        for (int i = 0; i < 3; ++i)
            if ((w >> i) & 1U)
                u ^= section[i];
        image[3 + w] = spec.bottom(u);
    }
    return VertexMap::make(spec.forms.size() + size, std::move(image));
}

// ---------------------------------------------------------------------------
// Crossed blowups of R(F2^2, {x, y})

struct CrossedBlowupSpec {
    std::size_t n = 0;
    Rational alpha;
};

/// Parts in the order A_x, A_y, B00, B01, B10, B11 (bottom names list the
/// x-coordinate first).
enum class CrossedPart : std::uint8_t { Ax, Ay, B00, B01, B10, B11 };

inline constexpr std::size_t min_crossed_blowup_n = 6;

struct CrossedBlowup {
    ThreeGraph graph;
    std::array<std::size_t, 6> sizes{};
    std::array<Rational, 6> targets;
    std::vector<CrossedPart> part_of;
};

inline void validate(const CrossedBlowupSpec& spec) {
    if (spec.alpha <= 0 || spec.alpha >= Rational(1, 2))
        throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie strictly between 0 and 1/2");
    if (spec.n < min_crossed_blowup_n)
        throw Error(ErrorKind::InvalidSpec, "crossed blowup needs n >= " + std::to_string(min_crossed_blowup_n));
}

inline std::array<Rational, 6> crossed_targets(const CrossedBlowupSpec& spec) {
    const Rational n(spec.n);
    const Rational apex = n / 6, small = spec.alpha * n / 3, large = (1 - spec.alpha) * n / 3;
    return {apex, apex, small, large, large, small};
}

inline std::uint64_t crossed_edge_formula(const std::array<std::size_t, 6>& s) {
    using P = CrossedPart;
    auto at = [&](P p) { return std::uint64_t{s[static_cast<std::size_t>(p)]}; };
    return at(P::Ax) * (at(P::B00) + at(P::B01)) * (at(P::B10) + at(P::B11)) +
           at(P::Ay) * (at(P::B00) + at(P::B10)) * (at(P::B01) + at(P::B11));
}

inline CutTemplateSpec rcross_spec() { return {2, {0b01, 0b10}}; }
inline CutTemplateSpec r2_spec() { return {2, {0b01, 0b10, 0b11}}; }
inline CutTemplateSpec rank3_spec() { return {3, {0b001, 0b010, 0b100}}; }

inline CrossedBlowup crossed_blowup(const CrossedBlowupSpec& spec) {
    validate(spec);
    CrossedBlowup out;
    out.targets = crossed_targets(spec);
    auto sizes = apportion({out.targets.begin(), out.targets.end()}, spec.n);
    std::copy(sizes.begin(), sizes.end(), out.sizes.begin());

    // Template vertex order: apex x, apex y, then bottoms by mask 00,10,01,11
    // (mask bit 0 is the x-coordinate).
    using P = CrossedPart;
    constexpr std::array<P, 6> template_part{P::Ax, P::Ay, P::B00, P::B10, P::B01, P::B11};
    BlowupSpec bs{cut_template(rcross_spec()).graph, {}};
    for (P p : template_part)
        bs.sizes.push_back(out.sizes[static_cast<std::size_t>(p)]);
    Blowup b = blowup(bs);
    out.graph = std::move(b.graph);
    out.part_of.reserve(b.part_of.size());
    for (Vertex t : b.part_of)
        out.part_of.push_back(template_part[t]);
    return out;
}

// ---------------------------------------------------------------------------
// Catalog

inline LabelledGraph single_edge() {
    return {ThreeGraph::build(3, {{0, 1, 2}}), index_labels(3)};
}

inline LabelledGraph k4_minus() {
    return {ThreeGraph::build(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}}), {"a", "b", "c", "d"}};
}

inline LabelledGraph f5() {
    return {ThreeGraph::build(5, {{0, 1, 2}, {0, 1, 3}, {2, 3, 4}}), {"1", "2", "3", "4", "5"}};
}

inline LabelledGraph f_star() {
    return {ThreeGraph::build(7, {{0, 1, 2}, {0, 1, 3}, {2, 3, 4}, {0, 4, 5}, {1, 4, 6}}),
            {"1", "2", "3", "4", "5", "6", "7"}};
}

inline LabelledGraph balanced_tripartite(std::size_t n) {
    const Rational third = Rational(n) / 3;
    BlowupSpec spec{single_edge().graph, apportion({third, third, third}, n)};
    Blowup b = blowup(spec);
    LabelledGraph out{std::move(b.graph), {}};
    for (std::size_t v = 0; v < b.part_of.size(); ++v)
        out.labels.push_back("part" + std::to_string(b.part_of[v]) + ":" + std::to_string(v));
    return out;
}

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"edge", "K4minus", "Fstar", "F5",   "F",
                                                "F5core", "R2",      "Rcross", "Rank3", "S3(n)"};
    return names;
}

/// Fixed graphs by name; "S3(n)" accepts any nonnegative n, e.g. "S3(60)".
/// "F5core" is K4minus x F5, the product restricted to the F5 inside Fstar.
inline LabelledGraph catalog(std::string_view name) {
    if (name == "edge")
        return single_edge();
    if (name == "K4minus")
        return k4_minus();
    if (name == "Fstar")
        return f_star();
    if (name == "F5")
        return f5();
    if (name == "F")
        return product(k4_minus(), f_star());
    if (name == "F5core")
        return product(k4_minus(), f5());
    if (name == "R2")
        return cut_template(r2_spec());
    if (name == "Rcross")
        return cut_template(rcross_spec());
    if (name == "Rank3")
        return cut_template(rank3_spec());
    if (name.starts_with("S3(") && name.ends_with(")")) {
        std::string digits(name.substr(3, name.size() - 4));
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
            return balanced_tripartite(std::stoul(digits));
    }
    throw Error(ErrorKind::UnknownName, "no catalog graph named '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Explicit maps

/// Vertex (r, i) of F = K4minus x Fstar for row r in "abcd" and i in 1..7.
inline Vertex f_vertex(char row, int i) {
    return static_cast<Vertex>((row - 'a') * 7 + (i - 1));
}

/// F5 -> F: 1,2,3,4,5 go to (a,1), (d,2), (c,3), (b,4), (a,5).
inline VertexMap f5_into_f() {
    return VertexMap::make(28, {f_vertex('a', 1), f_vertex('d', 2), f_vertex('c', 3), f_vertex('b', 4), f_vertex('a', 5)},
                           MapKind::injective);
}

struct Rank3Assignment {
    std::array<F2Vector, 7> apex_form;  // d_i as a form mask
    std::array<F2Vector, 7> bottom;     // u_i
};

inline Rank3Assignment rank3_explicit_assignment() {
    constexpr F2Vector X = 0b001, Y = 0b010, Z = 0b100;
    return {{X, X, Y, Y, Z, X, X},
            {parse_coordinates("000"), parse_coordinates("010"), parse_coordinates("100"), parse_coordinates("101"),
             parse_coordinates("110"), parse_coordinates("001"), parse_coordinates("001")}};
}

/// F -> R(F2^3, {X,Y,Z}): (a,i) goes to the apex of d_i, (r,i) to u_i for r in b,c,d.
inline VertexMap rank3_explicit_witness() {
    const auto assignment = rank3_explicit_assignment();
    const CutTemplateSpec spec = rank3_spec();
    std::vector<Vertex> image(28);
    for (int i = 1; i <= 7; ++i) {
        const F2Vector d = assignment.apex_form[i - 1];
        const auto form_index = static_cast<std::size_t>(std::find(spec.forms.begin(), spec.forms.end(), d) - spec.forms.begin());
        image[f_vertex('a', i)] = spec.apex(form_index);
        for (char r : {'b', 'c', 'd'})
            image[f_vertex(r, i)] = spec.bottom(assignment.bottom[i - 1]);
    }
    return VertexMap::make(spec.apex_count() + spec.bottom_count(), std::move(image));
}

} // namespace hyperstab
