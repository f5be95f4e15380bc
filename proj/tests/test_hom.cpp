#include <gtest/gtest.h>

#include <map>

#include "generators.hpp"
#include "hyperstab/constructions.hpp"
#include "hyperstab/hom.hpp"

using namespace hyperstab;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorKind::Parse;
}

/// Tries all |V(T)|^|V(G)| maps.
bool naive_exists(const ThreeGraph& g, const ThreeGraph& t, HomMode mode) {
    const std::size_t n = g.order(), k = t.order();
    if (k == 0)
        return n == 0;
    std::vector<Vertex> image(n, 0);
    while (true) {
        bool ok = true;
        for (Triple e : g.edges())
            ok &= t.has_edge(image[e.a], image[e.b], image[e.c]);
        if (ok && mode == HomMode::injective) {
            std::vector<Vertex> s = image;
            std::sort(s.begin(), s.end());
            ok = std::adjacent_find(s.begin(), s.end()) == s.end();
        }
        if (ok && mode == HomMode::surjective) {
            std::vector<bool> hit(k, false);
            for (Vertex v : image)
                hit[v] = true;
            ok = std::find(hit.begin(), hit.end(), false) == hit.end();
        }
        if (ok)
            return true;
        std::size_t i = 0;
        while (i < n && ++image[i] == k)
            image[i++] = 0;
        if (i == n)
            return false;
    }
}

/// Independent count of homomorphic images: every map onto a prefix of
/// labels, quotient, then dedupe by brute-force relabelling.
std::size_t naive_image_count(const ThreeGraph& g) {
    const std::size_t n = g.order();
    std::vector<ThreeGraph> found;
    std::vector<Vertex> label(n, 0);
    auto canonical_match = [&](const ThreeGraph& h) {
        for (const auto& x : found) {
            if (x.order() != h.order() || x.size() != h.size())
                continue;
            std::vector<Vertex> perm(h.order());
            std::iota(perm.begin(), perm.end(), Vertex{0});
            do
                if (relabel(h, perm) == x)
                    return true;
            while (std::next_permutation(perm.begin(), perm.end()));
        }
        return false;
    };
    while (true) {
        // Keep only labellings whose used labels are exactly 0..k-1.
        Vertex k = 0;
        for (Vertex v : label)
            k = std::max<Vertex>(k, v + 1);
        std::vector<bool> used(k, false);
        for (Vertex v : label)
            used[v] = true;
        if (std::find(used.begin(), used.end(), false) == used.end()) {
            std::vector<Triple> q;
            bool collapse = false;
            for (Triple e : g.edges()) {
                const Vertex x = label[e.a], y = label[e.b], z = label[e.c];
                collapse |= x == y || y == z || x == z;
                if (!collapse)
                    q.push_back({x, y, z});
            }
            if (!collapse) {
                auto h = ThreeGraph::build(k, q);
                if (!canonical_match(h))
                    found.push_back(std::move(h));
            }
        }
        std::size_t i = 0;
        while (i < n && ++label[i] == n)
            label[i++] = 0;
        if (i == n)
            return found.size();
    }
}

SearchCertificate solve(const ThreeGraph& g, const ThreeGraph& t, HomMode mode = HomMode::general,
                        std::vector<std::vector<Vertex>> symmetries = {}) {
    return hom_exists({g, t, mode, std::move(symmetries), default_node_budget});
}

} // namespace

TEST(HomExists, F5IntoFWithProjections) {
    const auto f = catalog("F").graph;
    const auto f5g = f5().graph;
    const auto r = solve(f5g, f);
    ASSERT_EQ(r.verdict, SearchVerdict::witness);
    const auto& m = *r.witness;
    EXPECT_TRUE(verify_map({f5g, f, HomMode::general, {}, 0}, m));
    EXPECT_TRUE(verify_map({f5g, k4_minus().graph, HomMode::general, {}, 0}, compose(m, product_projection(4, 7, 0))));
    EXPECT_TRUE(verify_map({f5g, f_star().graph, HomMode::general, {}, 0}, compose(m, product_projection(4, 7, 1))));
}

TEST(HomExists, FNotIntoR2) {
    const auto spec = r2_spec();
    const auto r = solve(catalog("F").graph, cut_template(spec).graph, HomMode::general, cut_template_automorphisms(spec));
    EXPECT_EQ(r.verdict, SearchVerdict::exhausted);
    EXPECT_TRUE(r.symmetry_breaking);
    EXPECT_FALSE(r.witness);
}

TEST(HomExists, FIntoRank3) {
    const auto f = catalog("F").graph;
    const auto rank3 = catalog("Rank3").graph;
    const auto r = solve(f, rank3);
    ASSERT_EQ(r.verdict, SearchVerdict::witness);
    EXPECT_TRUE(verify_map({f, rank3, HomMode::general, {}, 0}, *r.witness));
}

TEST(HomExists, BudgetIsAThirdVerdict) {
    const auto r = hom_exists({catalog("F").graph, catalog("R2").graph, HomMode::general, {}, 1});
    EXPECT_EQ(r.verdict, SearchVerdict::budget_exceeded);
    EXPECT_FALSE(r.witness);
}

TEST(HomExists, Errors) {
    EXPECT_EQ(kind_of([] { solve(ThreeGraph::empty(65), ThreeGraph::empty(3)); }), ErrorKind::TooLarge);
    EXPECT_EQ(kind_of([] { solve(ThreeGraph::empty(2), ThreeGraph::empty(3), HomMode::surjective); }),
              ErrorKind::InvalidSpec);
    const auto r2 = catalog("R2").graph;
    const std::vector<Vertex> bad{0, 1, 2, 4, 3, 5, 6};  // swaps two bottoms only, not an automorphism
    EXPECT_EQ(kind_of([&] { solve(f5().graph, r2, HomMode::general, {bad}); }), ErrorKind::InvalidSpec);
}

TEST(HomExists, EmptyTargetAndPattern) {
    EXPECT_EQ(solve(ThreeGraph::empty(0), ThreeGraph::empty(0)).verdict, SearchVerdict::witness);
    EXPECT_EQ(solve(ThreeGraph::empty(2), ThreeGraph::empty(0)).verdict, SearchVerdict::exhausted);
    EXPECT_EQ(solve(ThreeGraph::empty(3), ThreeGraph::empty(1)).verdict, SearchVerdict::witness);
}

TEST(VerifyMap, Examples) {
    const auto f = catalog("F").graph;
    const auto rank3 = catalog("Rank3").graph;
    EXPECT_TRUE(verify_map({f, rank3, HomMode::general, {}, 0}, rank3_explicit_witness()));
    EXPECT_FALSE(verify_map({f, rank3, HomMode::general, {}, 0}, VertexMap::make(11, std::vector<Vertex>(28, 0))));
    std::vector<Vertex> id(28);
    std::iota(id.begin(), id.end(), Vertex{0});
    EXPECT_TRUE(verify_map({f, f, HomMode::injective, {}, 0}, VertexMap::make(28, id)));
    EXPECT_EQ(kind_of([&] { verify_map({f, rank3, HomMode::general, {}, 0}, VertexMap::make(11, {0, 1})); }),
              ErrorKind::ArityMismatch);
}

TEST(HomomorphicImages, SingleEdge) {
    const auto fam = homomorphic_images(single_edge().graph);
    EXPECT_EQ(fam.images.size(), 1u);
    EXPECT_EQ(fam.partitions, 5u);
}

TEST(HomomorphicImages, F5IdentifiesOnlyFiveWithOneOrTwo) {
    const auto f5g = f5().graph;
    const auto fam = homomorphic_images(f5g);
    EXPECT_EQ(fam.partitions, 52u);
    EXPECT_EQ(fam.admissible, 3u);  // identity, 5=1, 5=2
    ASSERT_EQ(fam.images.size(), 2u);
    EXPECT_EQ(fam.images[0], f5g);
    EXPECT_TRUE(is_isomorphic(fam.images[1], k4_minus().graph));
}

TEST(HomomorphicImages, FstarMatchesIndependentCount) {
    const auto fam = homomorphic_images(f_star().graph);
    EXPECT_EQ(fam.partitions, 877u);
    EXPECT_EQ(fam.images.size(), naive_image_count(f_star().graph));
    EXPECT_EQ(fam.images.size(), 7u);
    for (std::size_t i = 0; i < fam.images.size(); ++i)
        for (std::size_t j = i + 1; j < fam.images.size(); ++j)
            EXPECT_FALSE(is_isomorphic(fam.images[i], fam.images[j]));
}

TEST(BlowupInvariance, Examples) {
    std::vector<ThreeGraph> b{k4_minus().graph};
    for (auto& g : homomorphic_images(f_star().graph).images)
        b.push_back(g);
    EXPECT_EQ(is_blowup_invariant(b).verdict, verdict::pass);
    EXPECT_EQ(is_blowup_invariant({single_edge().graph}).verdict, verdict::pass);
    const auto f5_only = is_blowup_invariant({f5().graph});
    EXPECT_EQ(f5_only.verdict, verdict::fail);
    EXPECT_TRUE(f5_only.payload.contains("counterexample"));
}

TEST(Symmetry, OrbitRepresentativesOfR2) {
    const auto reps = orbit_representatives(7, cut_template_automorphisms(r2_spec()));
    EXPECT_EQ(reps, (std::vector<Vertex>{0, 0, 0, 3, 3, 3, 3}));
}

// ---------------------------------------------------------------------------
// Properties

TEST(HomProperty, CompletenessAgainstNaiveOracle) {
    gen::Rng rng(31);
    for (int trial = 0; trial < 600; ++trial) {
        const auto g = gen::graph(rng, gen::uniform(rng, 0, 4), 0.5);
        const auto t = gen::graph(rng, gen::uniform(rng, 0, 4), 0.5);
        for (HomMode mode : {HomMode::general, HomMode::injective, HomMode::surjective}) {
            if (mode == HomMode::surjective && g.order() < t.order())
                continue;
            const auto r = solve(g, t, mode);
            EXPECT_EQ(r.verdict == SearchVerdict::witness, naive_exists(g, t, mode))
                << to_string(mode) << "\n" << to_3g(g) << to_3g(t);
            if (r.witness) {
                EXPECT_TRUE(verify_map({g, t, mode, {}, 0}, *r.witness));
            }
        }
    }
}

TEST(HomProperty, SoundnessOnLargerRandomInstances) {
    gen::Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = gen::graph(rng, gen::uniform(rng, 3, 10), 0.15);
        const auto t = gen::graph(rng, gen::uniform(rng, 3, 8), 0.5);
        const auto r = solve(g, t);
        if (r.witness) {
            EXPECT_TRUE(verify_map({g, t, HomMode::general, {}, 0}, *r.witness));
        }
    }
}

TEST(HomProperty, SymmetryBreakingAgreesOnCatalogProblems) {
    const std::vector<const char*> patterns{"edge", "K4minus", "F5", "Fstar", "F5core", "F"};
    const std::vector<CutTemplateSpec> targets{r2_spec(), rcross_spec(), rank3_spec(), {3, {0b011, 0b101, 0b110}}};
    for (const char* p : patterns)
        for (const auto& spec : targets) {
            const auto g = catalog(p).graph;
            const auto t = cut_template(spec).graph;
            const auto with = solve(g, t, HomMode::general, cut_template_automorphisms(spec));
            const auto without = solve(g, t);
            EXPECT_EQ(with.verdict, without.verdict) << p;
        }
}

TEST(HomProperty, MonotoneUnderAddingTargetEdges) {
    gen::Rng rng(33);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = gen::graph(rng, gen::uniform(rng, 3, 7), 0.3);
        const auto t = gen::graph(rng, gen::uniform(rng, 3, 6), 0.4);
        if (solve(g, t).verdict != SearchVerdict::witness)
            continue;
        auto more = t.edge_list();
        const auto extra = gen::graph(rng, t.order(), 0.3);
        for (Triple e : extra.edges())
            more.push_back(e);
        EXPECT_EQ(solve(g, ThreeGraph::build(t.order(), more)).verdict, SearchVerdict::witness);
    }
}

TEST(HomProperty, RankDichotomy) {
    const auto f = catalog("F").graph;
    const auto witness = rank3_explicit_witness();
    for (unsigned dim = 1; dim <= 3; ++dim) {
        const F2Vector top = F2Vector{1} << dim;
        for (std::uint32_t subset = 1; subset < (1u << (top - 1)); ++subset) {
            if (std::popcount(subset) > 4)
                continue;
            CutTemplateSpec spec{dim, {}};
            for (F2Vector v = 1; v < top; ++v)
                if (subset >> (v - 1) & 1U)
                    spec.forms.push_back(v);
            const auto target = cut_template(spec).graph;
            const auto r = solve(f, target, HomMode::general, cut_template_automorphisms(spec));
            const bool high = cut_rank(spec) >= 3;
            EXPECT_EQ(r.verdict == SearchVerdict::witness, high) << "dim " << dim << " subset " << subset;
            if (high) {
                EXPECT_TRUE(verify_map({f, target, HomMode::general, {}, 0}, compose(witness, rank3_lift(spec))));
            }
        }
    }
}
