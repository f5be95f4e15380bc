#pragma once

// Homomorphism search between small 3-graphs.
//
// One variable per pattern vertex, domains are 64-bit sets of target
// vertices, and every pattern edge is a ternary constraint whose allowed
// tuples are the ordered target edges. Search maintains generalized arc
// consistency, branches on dom/wdeg and tries values in ascending order.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "certificate.hpp"
#include "core.hpp"

namespace hyperstab {

enum class HomMode { general, injective, surjective };

inline std::string_view to_string(HomMode mode) {
    switch (mode) {
    case HomMode::general: return "general";
    case HomMode::injective: return "injective";
    case HomMode::surjective: return "surjective";
    }
    return "general";
}

inline HomMode parse_hom_mode(std::string_view s) {
    if (s == "general")
        return HomMode::general;
    if (s == "injective")
        return HomMode::injective;
    if (s == "surjective")
        return HomMode::surjective;
    throw Error(ErrorKind::Parse, "unknown mode '" + std::string(s) + "'");
}

inline constexpr std::uint64_t default_node_budget = 100'000'000;
inline constexpr std::size_t max_hom_vertices = 64;

struct HomProblem {
    ThreeGraph pattern;
    ThreeGraph target;
    HomMode mode = HomMode::general;
    /// Target automorphisms as vertex permutations. When non-empty, the
    /// first branching variable only tries one value per orbit of the group
    /// they generate.
    std::vector<std::vector<Vertex>> symmetries;
    std::uint64_t budget = default_node_budget;
};

enum class SearchVerdict { witness, exhausted, budget_exceeded };

inline std::string_view to_string(SearchVerdict v) {
    switch (v) {
    case SearchVerdict::witness: return "witness";
    case SearchVerdict::exhausted: return "exhausted";
    case SearchVerdict::budget_exceeded: return "budget_exceeded";
    }
    return "exhausted";
}

struct SearchCertificate {
    SearchVerdict verdict = SearchVerdict::exhausted;
    std::optional<VertexMap> witness;
    std::uint64_t nodes_explored = 0;
    std::uint64_t wipeouts = 0;
    std::uint64_t revisions = 0;
    bool symmetry_breaking = false;
    std::optional<Vertex> root_variable;
    std::vector<Vertex> root_values;
};

/// Checks a candidate map edge by edge, without any solver state.
inline bool verify_map(const HomProblem& p, const VertexMap& m) {
    if (m.image.size() != p.pattern.order() || m.source_n != p.pattern.order() || m.target_n != p.target.order())
        throw Error(ErrorKind::ArityMismatch, "map does not match the problem's vertex counts");
    for (Vertex w : m.image)
        if (w >= p.target.order())
            return false;
    for (Triple e : p.pattern.edges()) {
        const Vertex x = m.image[e.a], y = m.image[e.b], z = m.image[e.c];
        if (x == y || y == z || x == z || !p.target.has_edge(x, y, z))
            return false;
    }
    if (p.mode == HomMode::injective) {
        std::vector<bool> seen(p.target.order(), false);
        for (Vertex w : m.image) {
            if (seen[w])
                return false;
            seen[w] = true;
        }
    }
    if (p.mode == HomMode::surjective) {
        std::vector<bool> hit(p.target.order(), false);
        for (Vertex w : m.image)
            hit[w] = true;
        if (std::find(hit.begin(), hit.end(), false) != hit.end())
            return false;
    }
    return true;
}

inline bool is_automorphism(const ThreeGraph& g, const std::vector<Vertex>& perm) {
    if (perm.size() != g.order())
        return false;
    std::vector<bool> seen(g.order(), false);
    for (Vertex v : perm) {
        if (v >= g.order() || seen[v])
            return false;
        seen[v] = true;
    }
    for (Triple t : g.edges())
        if (!g.has_edge(perm[t.a], perm[t.b], perm[t.c]))
            return false;
    return true;
}

/// Orbit representative (smallest member) of every vertex under the group
/// generated by `perms`.
inline std::vector<Vertex> orbit_representatives(std::size_t n, const std::vector<std::vector<Vertex>>& perms) {
    std::vector<Vertex> parent(n);
    std::iota(parent.begin(), parent.end(), Vertex{0});
    auto find = [&](Vertex x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& perm : perms)
        for (Vertex v = 0; v < n; ++v) {
            Vertex a = find(v), b = find(perm[v]);
            if (a != b)
                parent[std::max(a, b)] = std::min(a, b);
        }
    std::vector<Vertex> rep(n);
    for (Vertex v = 0; v < n; ++v)
        rep[v] = find(v);
    return rep;
}

namespace detail {

class HomSolver {
public:
    using Domain = std::uint64_t;

    explicit HomSolver(const HomProblem& p) : problem_(p), vars_(p.pattern.order()), values_(p.target.order()) {
        if (vars_ > max_hom_vertices || values_ > max_hom_vertices)
            throw Error(ErrorKind::TooLarge, "homomorphism search limited to 64 pattern and 64 target vertices");
        if (p.mode == HomMode::surjective && vars_ < values_)
            throw Error(ErrorKind::InvalidSpec, "surjective mode needs at least as many pattern as target vertices");
        full_ = values_ == 64 ? ~Domain{0} : ((Domain{1} << values_) - 1);
        link_.assign(values_ * values_, 0);
        for (Triple t : p.target.edges()) {
            link_[t.a * values_ + t.b] |= Domain{1} << t.c;
            link_[t.b * values_ + t.a] |= Domain{1} << t.c;
            link_[t.a * values_ + t.c] |= Domain{1} << t.b;
            link_[t.c * values_ + t.a] |= Domain{1} << t.b;
            link_[t.b * values_ + t.c] |= Domain{1} << t.a;
            link_[t.c * values_ + t.b] |= Domain{1} << t.a;
        }
        var_constraints_.resize(vars_);
        for (Triple t : p.pattern.edges()) {
            const auto k = static_cast<std::uint32_t>(constraints_.size());
            constraints_.push_back({t.a, t.b, t.c});
            var_constraints_[t.a].push_back(k);
            var_constraints_[t.b].push_back(k);
            var_constraints_[t.c].push_back(k);
        }
        weight_.assign(constraints_.size(), 1);
        in_queue_.assign(constraints_.size(), false);
        for (const auto& perm : p.symmetries)
            if (!is_automorphism(p.target, perm))
                throw Error(ErrorKind::InvalidSpec, "supplied symmetry is not an automorphism of the target");
    }

    SearchCertificate run() {
        SearchCertificate cert;
        cert.symmetry_breaking = !problem_.symmetries.empty();
        cert_ = &cert;
        std::vector<Domain> dom(vars_, full_);
        for (std::uint32_t k = 0; k < constraints_.size(); ++k)
            enqueue(k);
        std::vector<Vertex> singles;
        if (problem_.mode == HomMode::injective)
            for (Vertex v = 0; v < vars_; ++v)
                if (std::popcount(dom[v]) == 1)
                    singles.push_back(v);
        // With no target vertices there is no total map at all.
        bool ok = vars_ == 0 || values_ > 0;
        if (ok)
            ok = propagate(dom, singles);
        if (ok) {
            try {
                if (search(dom, true)) {
                    cert.verdict = SearchVerdict::witness;
                    cert.witness = VertexMap::make(values_, solution_);
                } else {
                    cert.verdict = SearchVerdict::exhausted;
                }
            } catch (const BudgetHit&) {
                cert.verdict = SearchVerdict::budget_exceeded;
            }
        } else {
            cert.verdict = SearchVerdict::exhausted;
        }
        if (cert.witness && !verify_map(problem_, *cert.witness))
            throw Error(ErrorKind::InvalidSpec, "internal error: solver witness failed re-validation");
        cert_ = nullptr;
        return cert;
    }

private:
    struct BudgetHit {};

    void enqueue(std::uint32_t k) {
        if (!in_queue_[k]) {
            in_queue_[k] = true;
            queue_.push_back(k);
        }
    }

    void clear_queue() {
        for (auto k : queue_)
            in_queue_[k] = false;
        queue_.clear();
    }

    /// Values of `x_dom` that have a supporting (y, z) in the other two domains.
    Domain supported(Domain x_dom, Domain y_dom, Domain z_dom) const {
        Domain keep = 0;
        for (Domain xs = x_dom; xs; xs &= xs - 1) {
            const auto x = static_cast<unsigned>(std::countr_zero(xs));
            const Domain* row = &link_[x * values_];
            for (Domain ys = y_dom; ys; ys &= ys - 1) {
                if (row[std::countr_zero(ys)] & z_dom) {
                    keep |= Domain{1} << x;
                    break;
                }
            }
        }
        return keep;
    }

    bool narrow(std::vector<Domain>& dom, Vertex v, Domain value, std::uint32_t source, std::vector<Vertex>& singles) {
        if (value == dom[v])
            return true;
        dom[v] = value;
        if (value == 0)
            return false;
        for (auto k : var_constraints_[v])
            if (k != source)
                enqueue(k);
        if (problem_.mode == HomMode::injective && std::popcount(value) == 1)
            singles.push_back(v);
        return true;
    }

    bool propagate(std::vector<Domain>& dom, std::vector<Vertex>& singles) {
        constexpr std::uint32_t none = ~std::uint32_t{0};
        for (;;) {
            while (!queue_.empty()) {
                const std::uint32_t k = queue_.back();
                queue_.pop_back();
                in_queue_[k] = false;
                const auto& c = constraints_[k];
                for (int pos = 0; pos < 3; ++pos) {
                    const Vertex x = c[pos], y = c[(pos + 1) % 3], z = c[(pos + 2) % 3];
                    ++cert_->revisions;
                    if (!narrow(dom, x, supported(dom[x], dom[y], dom[z]), k, singles)) {
                        ++weight_[k];
                        ++cert_->wipeouts;
                        clear_queue();
                        return false;
                    }
                }
            }
            if (singles.empty())
                break;
            // All-different: a fixed variable's value leaves every other domain.
            while (!singles.empty()) {
                const Vertex v = singles.back();
                singles.pop_back();
                const Domain bit = dom[v];
                for (Vertex w = 0; w < vars_; ++w) {
                    if (w == v || !(dom[w] & bit))
                        continue;
                    if (!narrow(dom, w, dom[w] & ~bit, none, singles)) {
                        ++cert_->wipeouts;
                        clear_queue();
                        singles.clear();
                        return false;
                    }
                }
            }
        }
        if (problem_.mode == HomMode::injective) {
            Domain all = 0;
            for (Domain d : dom)
                all |= d;
            if (static_cast<std::size_t>(std::popcount(all)) < vars_)
                return false;
        }
        if (problem_.mode == HomMode::surjective) {
            Domain all = 0;
            for (Domain d : dom)
                all |= d;
            if (all != full_)
                return false;
        }
        return true;
    }

    std::optional<Vertex> choose(const std::vector<Domain>& dom) const {
        std::optional<Vertex> best;
        double best_score = 0;
        for (Vertex v = 0; v < vars_; ++v) {
            const int size = std::popcount(dom[v]);
            if (size <= 1)
                continue;
            std::uint64_t wdeg = 0;
            for (auto k : var_constraints_[v]) {
                const auto& c = constraints_[k];
                bool other_open = false;
                for (Vertex u : c)
                    other_open |= u != v && std::popcount(dom[u]) > 1;
                if (other_open)
                    wdeg += weight_[k];
            }
            const double score = static_cast<double>(size) / static_cast<double>(wdeg == 0 ? 1 : wdeg) +
                                 (wdeg == 0 ? 1e6 : 0.0);
            if (!best || score < best_score) {
                best = v;
                best_score = score;
            }
        }
        return best;
    }

    bool search(const std::vector<Domain>& dom, bool root) {
        const auto var = choose(dom);
        if (!var) {
            solution_.assign(vars_, 0);
            for (Vertex v = 0; v < vars_; ++v)
                solution_[v] = static_cast<Vertex>(std::countr_zero(dom[v]));
            return true;
        }
        Domain candidates = dom[*var];
        if (root && !problem_.symmetries.empty()) {
            const auto rep = orbit_representatives(values_, problem_.symmetries);
            // The root domain is a union of orbits; keep the smallest member of each.
            Domain kept = 0;
            std::vector<bool> orbit_seen(values_, false);
            for (Domain xs = candidates; xs; xs &= xs - 1) {
                const auto x = static_cast<Vertex>(std::countr_zero(xs));
                if (!orbit_seen[rep[x]]) {
                    orbit_seen[rep[x]] = true;
                    kept |= Domain{1} << x;
                }
            }
            candidates = kept;
            cert_->root_variable = *var;
            for (Domain xs = kept; xs; xs &= xs - 1)
                cert_->root_values.push_back(static_cast<Vertex>(std::countr_zero(xs)));
        }
        for (Domain xs = candidates; xs; xs &= xs - 1) {
            if (++cert_->nodes_explored > problem_.budget)
                throw BudgetHit{};
            std::vector<Domain> next = dom;
            std::vector<Vertex> singles;
            if (!narrow(next, *var, xs & (~xs + 1), ~std::uint32_t{0}, singles))
                continue;
            if (propagate(next, singles) && search(next, false))
                return true;
        }
        return false;
    }

    const HomProblem& problem_;
    std::size_t vars_, values_;
    Domain full_ = 0;
    std::vector<Domain> link_;
    std::vector<std::array<Vertex, 3>> constraints_;
    std::vector<std::vector<std::uint32_t>> var_constraints_;
    std::vector<std::uint64_t> weight_;
    std::vector<bool> in_queue_;
    std::vector<std::uint32_t> queue_;
    std::vector<Vertex> solution_;
    SearchCertificate* cert_ = nullptr;
};

} // namespace detail

inline SearchCertificate hom_exists(const HomProblem& p) {
    return detail::HomSolver(p).run();
}

inline json to_json(const SearchCertificate& c) {
    json j{{"verdict", std::string(to_string(c.verdict))},
           {"nodes_explored", c.nodes_explored},
           {"propagation", {{"wipeouts", c.wipeouts}, {"revisions", c.revisions}}},
           {"symmetry_breaking", c.symmetry_breaking}};
    if (c.witness)
        j["witness"] = to_json(*c.witness);
    if (c.root_variable) {
        j["root_variable"] = *c.root_variable;
        j["root_values"] = c.root_values;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Homomorphic images

inline constexpr std::size_t max_image_source = 9;

struct ImageFamily {
    std::vector<ThreeGraph> images;  // pairwise non-isomorphic; the source itself first
    std::uint64_t partitions = 0;    // set partitions enumerated
    std::uint64_t admissible = 0;    // partitions that collapse no edge
};

/// Quotients of `g` by every vertex partition that keeps each edge's three
/// vertices in distinct blocks, up to isomorphism.
inline ImageFamily homomorphic_images(const ThreeGraph& g) {
    const std::size_t n = g.order();
    if (n > max_image_source)
        throw Error(ErrorKind::TooLarge, "homomorphic image enumeration limited to 9 vertices");
    ImageFamily family;
    family.images.push_back(g);

    using Key = std::pair<std::size_t, std::vector<std::size_t>>;
    std::map<Key, std::vector<std::size_t>> buckets;
    auto key_of = [](const ThreeGraph& x) {
        auto d = degrees(x);
        std::sort(d.begin(), d.end());
        d.push_back(x.size());
        return Key{x.order(), d};
    };
    buckets[key_of(g)].push_back(0);

    // Restricted growth strings: block[i] <= 1 + max(block[0..i-1]).
    std::vector<Vertex> block(n, 0);
    const auto edges = g.edge_list();
    auto visit = [&](auto&& self, std::size_t i, Vertex blocks) -> void {
        if (i == n) {
            ++family.partitions;
            std::vector<Triple> q;
            q.reserve(edges.size());
            for (Triple t : edges) {
                const Vertex x = block[t.a], y = block[t.b], z = block[t.c];
                if (x == y || y == z || x == z)
                    return;
                q.push_back({x, y, z});
            }
            ++family.admissible;
            ThreeGraph image = ThreeGraph::build(blocks, q);
            auto& bucket = buckets[key_of(image)];
            for (std::size_t idx : bucket)
                if (is_isomorphic(family.images[idx], image, max_image_source))
                    return;
            bucket.push_back(family.images.size());
            family.images.push_back(std::move(image));
            return;
        }
        for (Vertex b = 0; b <= blocks && b < n; ++b) {
            block[i] = b;
            self(self, i + 1, std::max<Vertex>(blocks, b + 1));
        }
    };
    visit(visit, 0, 0);
    return family;
}

/// For every member and every homomorphic image of it, looks for some member
/// as a subgraph of the image (injective homomorphism). The first image that
/// contains no member is reported as a counterexample.
inline Certificate is_blowup_invariant(const std::vector<ThreeGraph>& family,
                                       std::uint64_t budget = default_node_budget) {
    Certificate cert;
    cert.claim_id = "blowup-invariance";
    json members = json::array();
    for (const auto& m : family) {
        if (m.order() > max_image_source)
            throw Error(ErrorKind::TooLarge, "family members limited to 9 vertices");
        members.push_back(to_json(m));
    }
    cert.inputs = {{"family", members}};
    json per_member = json::array();
    bool incomplete = false;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const ImageFamily images = homomorphic_images(family[i]);
        json checked = json::array();
        for (std::size_t j = 0; j < images.images.size(); ++j) {
            const ThreeGraph& image = images.images[j];
            std::optional<std::size_t> found;
            bool budget_hit = false;
            for (std::size_t k = 0; k < family.size() && !found; ++k) {
                if (family[k].order() > image.order() || family[k].size() > image.size())
                    continue;
                auto result = hom_exists({family[k], image, HomMode::injective, {}, budget});
                if (result.verdict == SearchVerdict::witness)
                    found = k;
                else if (result.verdict == SearchVerdict::budget_exceeded)
                    budget_hit = true;
            }
            if (!found && budget_hit) {
                incomplete = true;
                continue;
            }
            if (!found) {
                cert.verdict = verdict::fail;
                cert.payload["counterexample"] = {{"member", i}, {"image", to_json(image)}};
                break;
            }
            checked.push_back({{"image", j}, {"contains_member", *found}});
        }
        per_member.push_back({{"member", i},
                              {"image_count", images.images.size()},
                              {"partitions", images.partitions},
                              {"admissible_partitions", images.admissible},
                              {"checked", checked}});
        if (cert.failed())
            break;
    }
    cert.payload["members"] = per_member;
    if (!cert.failed() && incomplete)
        cert.verdict = verdict::budget;
    return cert;
}

} // namespace hyperstab
