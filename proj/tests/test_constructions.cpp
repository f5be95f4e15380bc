#include <gtest/gtest.h>

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

bool is_hom(const ThreeGraph& g, const ThreeGraph& h, const VertexMap& m) {
    return verify_map({g, h, HomMode::general, {}, 0}, m);
}

} // namespace

TEST(Product, FHasTwentyEightVerticesAndNinetyEdges) {
    const auto f = product(k4_minus(), f_star());
    EXPECT_EQ(f.graph.order(), 28u);
    EXPECT_EQ(f.graph.size(), 90u);
    EXPECT_EQ(f.labels[f_vertex('a', 1)], "(a,1)");
    EXPECT_EQ(f.labels[f_vertex('d', 7)], "(d,7)");
}

TEST(Product, WithEmptyGraph) {
    const auto p = product(f5().graph, ThreeGraph::empty(4));
    EXPECT_EQ(p.graph.order(), 20u);
    EXPECT_EQ(p.graph.size(), 0u);
}

TEST(Product, SingleEdgeSquared) {
    const auto e = single_edge().graph;
    const auto p = product(e, e);
    EXPECT_EQ(p.graph.order(), 9u);
    EXPECT_EQ(p.graph.size(), 6u);
}

TEST(Product, Overflow) {
    EXPECT_EQ(kind_of([] { product(ThreeGraph::empty(300), ThreeGraph::empty(300)); }), ErrorKind::Overflow);
}

TEST(Blowup, Examples) {
    const auto e = single_edge().graph;
    EXPECT_EQ(blowup({e, {2, 2, 2}}).graph.size(), 8u);
    const auto f5g = f5().graph;
    EXPECT_EQ(blowup({f5g, {1, 1, 1, 1, 1}}).graph, f5g);
    const auto s3 = catalog("S3(60)").graph;
    EXPECT_EQ(s3.order(), 60u);
    EXPECT_EQ(s3.size(), 8000u);
    EXPECT_EQ(kind_of([&] { blowup({e, {1, 1}}); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([&] { blowup({e, {500, 500, 500}}); }), ErrorKind::Overflow);
}

TEST(Apportion, LargestRemainderWithLowIndexTies) {
    EXPECT_EQ(apportion({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, 1), (std::vector<std::size_t>{1, 0, 0}));
    EXPECT_EQ(apportion({Rational(5, 2), Rational(5, 2), Rational(2)}, 7), (std::vector<std::size_t>{3, 2, 2}));
    EXPECT_EQ(apportion({Rational(7, 4), Rational(9, 4)}, 4), (std::vector<std::size_t>{2, 2}));
    EXPECT_EQ(kind_of([] { apportion({Rational(1), Rational(1)}, 3); }), ErrorKind::InvalidSpec);
}

TEST(CutTemplate, Shapes) {
    EXPECT_EQ(cut_template(r2_spec()).graph.order(), 7u);
    EXPECT_EQ(cut_template(r2_spec()).graph.size(), 12u);
    EXPECT_EQ(cut_template(rcross_spec()).graph.order(), 6u);
    EXPECT_EQ(cut_template(rcross_spec()).graph.size(), 8u);
    EXPECT_EQ(cut_template(rank3_spec()).graph.order(), 11u);
    EXPECT_EQ(cut_template(rank3_spec()).graph.size(), 48u);
}

TEST(CutTemplate, Labels) {
    const auto r2 = cut_template(r2_spec());
    EXPECT_EQ(r2.labels, (std::vector<std::string>{"apex:x", "apex:y", "apex:x+y", "bottom:00", "bottom:10",
                                                   "bottom:01", "bottom:11"}));
    EXPECT_EQ(cut_template(rank3_spec()).labels[2], "apex:Z");
}

TEST(CutTemplate, Rank) {
    EXPECT_EQ(cut_rank(r2_spec()), 2u);
    EXPECT_EQ(cut_rank(rank3_spec()), 3u);
    EXPECT_EQ(cut_rank({2, {0b01}}), 1u);
}

TEST(CutTemplate, Validation) {
    EXPECT_EQ(kind_of([] { cut_template({2, {0}}); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { cut_template({2, {1, 1}}); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { cut_template({2, {4}}); }), ErrorKind::InvalidSpec);
    EXPECT_EQ(kind_of([] { cut_template({0, {}}); }), ErrorKind::InvalidSpec);
}

TEST(CutTemplate, AutomorphismsOfR2) {
    const auto spec = r2_spec();
    const auto g = cut_template(spec).graph;
    const auto autos = cut_template_automorphisms(spec);
    EXPECT_EQ(autos.size(), 24u);
    for (const auto& p : autos)
        EXPECT_TRUE(is_automorphism(g, p));
}

TEST(CrossedBlowup, SixtyQuarter) {
    const auto g = crossed_blowup({60, Rational(1, 4)});
    EXPECT_EQ(g.sizes, (std::array<std::size_t, 6>{10, 10, 5, 15, 15, 5}));
    EXPECT_EQ(g.graph.size(), 8000u);
    EXPECT_EQ(crossed_edge_formula(g.sizes), 8000u);
}

TEST(CrossedBlowup, TwelveQuarter) {
    const auto g = crossed_blowup({12, Rational(1, 4)});
    EXPECT_EQ(g.sizes, (std::array<std::size_t, 6>{2, 2, 1, 3, 3, 1}));
    EXPECT_EQ(g.graph.size(), 64u);
}

TEST(CrossedBlowup, Domain) {
    EXPECT_EQ(kind_of([] { crossed_blowup({60, Rational(1, 2)}); }), ErrorKind::AlphaOutOfRange);
    EXPECT_EQ(kind_of([] { crossed_blowup({60, Rational(0)}); }), ErrorKind::AlphaOutOfRange);
    EXPECT_EQ(kind_of([] { crossed_blowup({60, Rational(3, 4)}); }), ErrorKind::AlphaOutOfRange);
    EXPECT_EQ(kind_of([] { crossed_blowup({5, Rational(1, 4)}); }), ErrorKind::InvalidSpec);
}

TEST(Catalog, Shapes) {
    EXPECT_EQ(catalog("F5").graph.size(), 3u);
    EXPECT_EQ(catalog("F5").graph.order(), 5u);
    EXPECT_EQ(catalog("Fstar").graph.order(), 7u);
    EXPECT_EQ(catalog("Fstar").graph.size(), 5u);
    EXPECT_EQ(catalog("F").graph.order(), 28u);
    EXPECT_EQ(catalog("F").graph.size(), 90u);
    EXPECT_EQ(catalog("F5core").graph.order(), 20u);
    EXPECT_EQ(catalog("F5core").graph.size(), 54u);
    EXPECT_EQ(kind_of([] { catalog("G7"); }), ErrorKind::UnknownName);
    EXPECT_EQ(kind_of([] { catalog("S3(x)"); }), ErrorKind::UnknownName);
    for (const auto& name : catalog_names())
        if (name != "S3(n)") {
            EXPECT_NO_THROW(catalog(name)) << name;
        }
}

TEST(ExplicitMaps, F5IntoF) {
    const auto f = catalog("F").graph;
    EXPECT_TRUE(verify_map({f5().graph, f, HomMode::injective, {}, 0}, f5_into_f()));
}

TEST(ExplicitMaps, Rank3Witness) {
    EXPECT_TRUE(is_hom(catalog("F").graph, catalog("Rank3").graph, rank3_explicit_witness()));
}

// ---------------------------------------------------------------------------
// Properties

TEST(ConstructionProperty, ProductProjectionsAreHomomorphisms) {
    gen::Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = gen::graph(rng, gen::uniform(rng, 3, 6), 0.4);
        const auto h = gen::graph(rng, gen::uniform(rng, 3, 6), 0.4);
        const auto p = product(g, h).graph;
        EXPECT_EQ(p.size(), 6 * g.size() * h.size());
        EXPECT_TRUE(is_hom(p, g, product_projection(g.order(), h.order(), 0)));
        EXPECT_TRUE(is_hom(p, h, product_projection(g.order(), h.order(), 1)));
    }
}

TEST(ConstructionProperty, BlowupEdgeCountIdentity) {
    gen::Rng rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = gen::graph(rng, gen::uniform(rng, 3, 6), 0.5);
        std::vector<std::size_t> sizes(p.order());
        for (auto& s : sizes)
            s = gen::uniform(rng, 0, 5);
        const BlowupSpec spec{p, sizes};
        const auto b = blowup(spec);
        EXPECT_EQ(b.graph.size(), blowup_edge_count(spec));
        EXPECT_TRUE(is_hom(b.graph, p, VertexMap::make(p.order(), b.part_of)));
    }
}

TEST(ConstructionProperty, CutTemplateEdgesHaveOneApexAndCutLinks) {
    gen::Rng rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const unsigned dim = static_cast<unsigned>(gen::uniform(rng, 1, 4));
        CutTemplateSpec spec{dim, {}};
        for (F2Vector c = 1; c < (F2Vector{1} << dim); ++c)
            if (gen::uniform(rng, 0, 2) == 0)
                spec.forms.push_back(c);
        if (spec.forms.empty())
            spec.forms.push_back(1);
        const auto g = cut_template(spec).graph;
        for (Triple t : g.edges()) {
            const int apexes = (t.a < spec.forms.size()) + (t.b < spec.forms.size()) + (t.c < spec.forms.size());
            EXPECT_EQ(apexes, 1);
        }
        for (std::size_t i = 0; i < spec.forms.size(); ++i) {
            const std::size_t half = std::size_t{1} << (dim - 1);
            EXPECT_EQ(link(g, spec.apex(i)).size(), half * half);
            for (auto [u, v] : link(g, spec.apex(i)))
                EXPECT_EQ(evaluate_form(spec.forms[i], (u - spec.forms.size()) ^ (v - spec.forms.size())), 1);
        }
    }
}

TEST(ConstructionProperty, CrossedSizesSumToNAndTrackTargets) {
    for (std::size_t n = 6; n <= 130; n += 7)
        for (int k = 1; k < 20; ++k) {
            const Rational alpha(k, 40);
            const auto spec = CrossedBlowupSpec{n, alpha};
            const auto targets = crossed_targets(spec);
            const auto sizes = apportion({targets.begin(), targets.end()}, n);
            std::size_t sum = 0;
            for (std::size_t i = 0; i < 6; ++i) {
                sum += sizes[i];
                EXPECT_LT(abs(Rational(sizes[i]) - targets[i]), 1);
            }
            EXPECT_EQ(sum, n);
        }
}

TEST(ConstructionProperty, Rank3LiftIsAHomomorphism) {
    gen::Rng rng(24);
    int checked = 0;
    while (checked < 40) {
        const unsigned dim = static_cast<unsigned>(gen::uniform(rng, 3, 5));
        CutTemplateSpec spec{dim, {}};
        for (F2Vector c = 1; c < (F2Vector{1} << dim); ++c)
            if (gen::uniform(rng, 0, 4) == 0)
                spec.forms.push_back(c);
        if (spec.forms.empty() || cut_rank(spec) < 3)
            continue;
        const auto lift = rank3_lift(spec);
        const auto target = cut_template(spec).graph;
        EXPECT_TRUE(is_hom(catalog("Rank3").graph, target, lift));
        EXPECT_TRUE(is_hom(catalog("F").graph, target, compose(rank3_explicit_witness(), lift)));
        ++checked;
    }
    EXPECT_EQ(kind_of([] { rank3_lift(r2_spec()); }), ErrorKind::InvalidSpec);
}
