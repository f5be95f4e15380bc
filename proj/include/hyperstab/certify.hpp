#pragma once

// Runs every finite check in a fixed order and collects the certificates
// into a bundle. Certificates carry no timings, so a bundle is a pure
// function of the options.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "certificate.hpp"
#include "constructions.hpp"
#include "core.hpp"
#include "hom.hpp"
#include "lagrangian.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "stability.hpp"

namespace hyperstab {

struct CertifyOptions {
    std::uint64_t seed = 0;
    std::uint64_t budget = default_node_budget;
    /// Replaces Fstar everywhere it is used; for fault injection.
    std::optional<ThreeGraph> fstar_override;
};

struct Bundle {
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
    std::vector<Certificate> certificates;

    std::optional<std::string> first_failure() const {
        for (const auto& c : certificates)
            if (c.failed())
                return c.claim_id;
        return std::nullopt;
    }

    bool incomplete() const {
        return std::any_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.incomplete(); });
    }

    std::string status() const {
        if (first_failure())
            return "fail";
        return incomplete() ? "incomplete" : "pass";
    }

    int exit_code() const {
        if (first_failure())
            return 1;
        return incomplete() ? 2 : 0;
    }

    std::string file_name(std::size_t index) const {
        std::ostringstream os;
        os << std::setw(2) << std::setfill('0') << index + 1 << '-' << certificates[index].claim_id << ".json";
        return os.str();
    }

    json summary() const {
        json claims = json::array();
        for (std::size_t i = 0; i < certificates.size(); ++i) {
            const auto& c = certificates[i];
            claims.push_back({{"claim_id", c.claim_id},
                              {"verdict", c.verdict},
                              {"content_hash", c.content_hash()},
                              {"file", file_name(i)}});
        }
        json j{{"tool_version", std::string(tool_version)},
               {"generator", CounterRng::name},
               {"seed", seed},
               {"budget", budget},
               {"status", status()},
               {"claims", claims}};
        j["first_failing_claim"] = first_failure() ? json(*first_failure()) : json(nullptr);
        return j;
    }
};

inline void write_bundle(const Bundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::filesystem::path& file, const json& j) {
        std::ofstream os(file, std::ios::binary);
        if (!os)
            throw Error(ErrorKind::InvalidSpec, "cannot write " + file.string());
        os << j.dump(2) << '\n';
    };
    for (std::size_t i = 0; i < bundle.certificates.size(); ++i)
        write(dir / bundle.file_name(i), bundle.certificates[i].to_json());
    write(dir / "bundle.json", bundle.summary());
}

namespace claims {

/// A self-contained witness entry: pattern, target, mode and map.
inline json witness_json(const ThreeGraph& pattern, const ThreeGraph& target, HomMode mode, const VertexMap& m) {
    return json{{"pattern", to_json(pattern)}, {"target", to_json(target)}, {"mode", to_string(mode)}, {"map", to_json(m)}};
}

inline Certificate shape(std::string claim_id, const ThreeGraph& g, std::size_t n, std::size_t m,
                         const std::vector<Triple>& reference = {}) {
    Certificate c;
    c.claim_id = std::move(claim_id);
    c.inputs = {{"expected_vertices", n}, {"expected_edges", m}};
    bool ok = g.order() == n && g.size() == m;
    c.payload = {{"vertices", g.order()}, {"edges", g.size()}};
    if (!reference.empty()) {
        const bool same = g == ThreeGraph::build(n, reference);
        c.payload["matches_reference_edges"] = same;
        ok &= same;
    }
    c.verdict = ok ? verdict::pass : verdict::fail;
    return c;
}

/// Fstar as an independent literal, 0-based.
inline std::vector<Triple> fstar_reference() {
    std::vector<Triple> out;
    for (const auto& e : oracles::fstar_edges())
        out.push_back(Triple{static_cast<Vertex>(e[0] - 1), static_cast<Vertex>(e[1] - 1), static_cast<Vertex>(e[2] - 1)});
    return out;
}

struct Context {
    CertifyOptions options;
    LabelledGraph fstar;
    LabelledGraph f;

    explicit Context(const CertifyOptions& opt) : options(opt) {
        fstar = opt.fstar_override ? LabelledGraph{*opt.fstar_override, index_labels(opt.fstar_override->order())}
                                   : f_star();
        f = product(k4_minus(), fstar);
    }
};

inline Certificate templates_shape() {
    Certificate c;
    c.claim_id = "catalog-template-shapes";
    struct Row {
        const char* name;
        CutTemplateSpec spec;
        std::size_t n, m, rank;
    };
    const Row rows[] = {{"R2", r2_spec(), 7, 12, 2}, {"Rcross", rcross_spec(), 6, 8, 2}, {"Rank3", rank3_spec(), 11, 48, 3}};
    bool ok = true;
    json table = json::array();
    for (const auto& r : rows) {
        const auto g = cut_template(r.spec).graph;
        const auto rank = cut_rank(r.spec);
        ok &= g.order() == r.n && g.size() == r.m && rank == r.rank;
        table.push_back({{"name", r.name},
                         {"vertices", g.order()},
                         {"edges", g.size()},
                         {"cut_rank", rank},
                         {"expected", {r.n, r.m, r.rank}}});
    }
    c.payload = {{"templates", table}};
    c.verdict = ok ? verdict::pass : verdict::fail;
    return c;
}

inline Certificate f_shape(const Context& ctx) {
    Certificate c = shape("catalog-F-shape", ctx.f.graph, 28, 90);
    c.inputs["construction"] = "K4minus x Fstar";
    c.payload["edge_formula"] = "3 * 5 * 3! = 90";
    return c;
}

inline Certificate f5_in_f(const Context& ctx) {
    Certificate c;
    c.claim_id = "F5-subgraph-of-F";
    const ThreeGraph f5g = f5().graph;
    const VertexMap explicit_map = f5_into_f();
    const HomProblem problem{f5g, ctx.f.graph, HomMode::injective, {}, ctx.options.budget};
    const bool explicit_ok = verify_map(problem, explicit_map);
    const auto search = hom_exists(problem);

    // The embedding projects onto an F5 inside Fstar and a map F5 -> K4minus.
    const VertexMap to_fstar = compose(explicit_map, product_projection(4, ctx.fstar.graph.order(), 1));
    const VertexMap to_k4 = compose(explicit_map, product_projection(4, ctx.fstar.graph.order(), 0));
    const bool fstar_ok = verify_map({f5g, ctx.fstar.graph, HomMode::injective, {}, 0}, to_fstar);
    const bool k4_ok = verify_map({f5g, k4_minus().graph, HomMode::general, {}, 0}, to_k4);

    c.inputs = {{"map", to_json(explicit_map)}, {"mode", "injective"}};
    c.payload = {{"explicit_map_valid", explicit_ok},
                 {"projection_to_Fstar", to_json(to_fstar)},
                 {"projection_to_Fstar_valid", fstar_ok},
                 {"projection_to_K4minus", to_json(to_k4)},
                 {"projection_to_K4minus_valid", k4_ok},
                 {"solver", to_json(search)}};
    json witnesses = json::array({witness_json(f5g, ctx.f.graph, HomMode::injective, explicit_map)});
    if (search.witness)
        witnesses.push_back(witness_json(f5g, ctx.f.graph, HomMode::injective, *search.witness));
    c.payload["witnesses"] = witnesses;
    if (!explicit_ok || !fstar_ok || !k4_ok || search.verdict == SearchVerdict::exhausted)
        c.verdict = verdict::fail;
    else
        c.verdict = search.verdict == SearchVerdict::budget_exceeded ? verdict::budget : verdict::witness;
    return c;
}

inline Certificate fstar_images(const Context& ctx, std::vector<ThreeGraph>& images_out) {
    Certificate c;
    c.claim_id = "Fstar-homomorphic-images";
    const ImageFamily family = homomorphic_images(ctx.fstar.graph);
    images_out = family.images;
    json images = json::array();
    for (const auto& g : family.images)
        images.push_back(to_json(g));
    c.inputs = {{"source", to_json(ctx.fstar.graph)}};
    c.payload = {{"partitions", family.partitions},
                 {"admissible_partitions", family.admissible},
                 {"image_count", family.images.size()},
                 {"images", images}};
    c.verdict = verdict::pass;
    return c;
}

inline Certificate blowup_invariance(const Context& ctx, const std::vector<ThreeGraph>& images) {
    std::vector<ThreeGraph> family{k4_minus().graph};
    family.insert(family.end(), images.begin(), images.end());
    Certificate c = is_blowup_invariant(family, ctx.options.budget);
    c.claim_id = "blowup-invariance-K4minus-and-Fstar-images";
    return c;
}

/// {F5} alone is not closed: identifying vertices 1 and 5 gives K4minus.
inline Certificate f5_not_invariant(const Context& ctx) {
    Certificate inner = is_blowup_invariant({f5().graph}, ctx.options.budget);
    Certificate c;
    c.claim_id = "F5-alone-not-blowup-invariant";
    c.inputs = inner.inputs;
    c.payload = {{"invariance_check_verdict", inner.verdict}, {"invariance_check", inner.payload}};
    if (inner.incomplete())
        c.verdict = verdict::budget;
    else
        c.verdict = inner.failed() ? verdict::pass : verdict::fail;
    return c;
}

inline Certificate f_not_hom_r2(const Context& ctx) {
    Certificate c;
    c.claim_id = "F-not-hom-R2";
    const CutTemplateSpec spec = r2_spec();
    const ThreeGraph r2 = cut_template(spec).graph;
    const auto symmetries = cut_template_automorphisms(spec);
    const auto with_sym = hom_exists({ctx.f.graph, r2, HomMode::general, symmetries, ctx.options.budget});
    const auto without = hom_exists({ctx.f.graph, r2, HomMode::general, {}, ctx.options.budget});
    const ThreeGraph core = product(k4_minus(), f5()).graph;
    const auto core_sym = hom_exists({core, r2, HomMode::general, symmetries, ctx.options.budget});
    const auto core_plain = hom_exists({core, r2, HomMode::general, {}, ctx.options.budget});

    c.inputs = {{"pattern", "F"}, {"target", "R2"}, {"budget", ctx.options.budget}, {"symmetry_group_order", symmetries.size()}};
    c.payload = {{"with_symmetry_breaking", to_json(with_sym)},
                 {"without_symmetry_breaking", to_json(without)},
                 {"F5core_with_symmetry_breaking", to_json(core_sym)},
                 {"F5core_without_symmetry_breaking", to_json(core_plain)}};
    const bool budget_hit = with_sym.verdict == SearchVerdict::budget_exceeded ||
                            without.verdict == SearchVerdict::budget_exceeded ||
                            core_sym.verdict == SearchVerdict::budget_exceeded ||
                            core_plain.verdict == SearchVerdict::budget_exceeded;
    const bool agree = with_sym.verdict == without.verdict && core_sym.verdict == core_plain.verdict;
    c.payload["verdicts_agree"] = agree;
    if (with_sym.verdict == SearchVerdict::witness || without.verdict == SearchVerdict::witness)
        c.verdict = verdict::fail;
    else if (budget_hit)
        c.verdict = verdict::budget;
    else
        c.verdict = agree ? verdict::exhausted : verdict::fail;
    return c;
}

inline Certificate f_hom_rank3(const Context& ctx) {
    Certificate c;
    c.claim_id = "F-hom-Rank3";
    const ThreeGraph rank3 = cut_template(rank3_spec()).graph;
    const VertexMap explicit_map = rank3_explicit_witness();
    const HomProblem problem{ctx.f.graph, rank3, HomMode::general, {}, ctx.options.budget};
    const bool explicit_ok = verify_map(problem, explicit_map);
    const auto search = hom_exists(problem);

    // Lift the explicit map into larger templates of rank >= 3.
    const std::vector<CutTemplateSpec> lifts{rank3_spec(),
                                             {3, {0b001, 0b010, 0b100, 0b111}},
                                             {3, {0b011, 0b110, 0b111}},
                                             {4, {0b0001, 0b0010, 0b0100, 0b1000}},
                                             {4, {0b0011, 0b0101, 0b1001}}};
    json samples = json::array();
    bool lifts_ok = true;
    for (const auto& spec : lifts) {
        const VertexMap lift = rank3_lift(spec);
        const ThreeGraph target = cut_template(spec).graph;
        const bool lift_ok = verify_map({rank3, target, HomMode::general, {}, 0}, lift);
        const bool composed_ok = verify_map({ctx.f.graph, target, HomMode::general, {}, 0}, compose(explicit_map, lift));
        lifts_ok &= lift_ok && composed_ok;
        samples.push_back({{"dim", spec.dim}, {"forms", spec.forms}, {"lift_valid", lift_ok}, {"composed_valid", composed_ok}});
    }
    const auto table = rank3_explicit_assignment();
    c.inputs = {{"apex_forms", table.apex_form}, {"bottoms", table.bottom}};
    c.payload = {{"explicit_map", to_json(explicit_map)},
                 {"explicit_map_valid", explicit_ok},
                 {"solver", to_json(search)},
                 {"lift_samples", samples}};
    json witnesses = json::array({witness_json(ctx.f.graph, rank3, HomMode::general, explicit_map)});
    if (search.witness)
        witnesses.push_back(witness_json(ctx.f.graph, rank3, HomMode::general, *search.witness));
    c.payload["witnesses"] = witnesses;
    if (!explicit_ok || !lifts_ok || search.verdict == SearchVerdict::exhausted)
        c.verdict = verdict::fail;
    else
        c.verdict = search.verdict == SearchVerdict::budget_exceeded ? verdict::budget : verdict::witness;
    return c;
}

/// Every set of 1 to 4 distinct nonzero forms on F2^d for d <= 3.
inline std::vector<CutTemplateSpec> sweep_specs() {
    std::vector<CutTemplateSpec> out;
    for (unsigned dim = 1; dim <= 3; ++dim) {
        const F2Vector top = F2Vector{1} << dim;
        for (std::uint32_t subset = 1; subset < (std::uint32_t{1} << (top - 1)); ++subset) {
            if (std::popcount(subset) > 4)
                continue;
            CutTemplateSpec spec{dim, {}};
            for (F2Vector v = 1; v < top; ++v)
                if (subset >> (v - 1) & 1U)
                    spec.forms.push_back(v);
            out.push_back(std::move(spec));
        }
    }
    return out;
}

inline Certificate rank_sweep(const Context& ctx) {
    Certificate c;
    c.claim_id = "rank-dichotomy-sweep";
    json rows = json::array();
    bool ok = true, budget_hit = false;
    std::size_t positives = 0, negatives = 0;
    for (const auto& spec : sweep_specs()) {
        const ThreeGraph target = cut_template(spec).graph;
        const std::size_t rank = cut_rank(spec);
        const auto result = hom_exists({ctx.f.graph, target, HomMode::general, cut_template_automorphisms(spec), ctx.options.budget});
        const bool expected = rank >= 3;
        if (result.verdict == SearchVerdict::budget_exceeded)
            budget_hit = true;
        else if ((result.verdict == SearchVerdict::witness) != expected)
            ok = false;
        (expected ? positives : negatives)++;
        rows.push_back({{"dim", spec.dim},
                        {"forms", spec.forms},
                        {"cut_rank", rank},
                        {"verdict", to_string(result.verdict)},
                        {"nodes", result.nodes_explored}});
    }
    c.inputs = {{"max_dim", 3}, {"forms_per_template", {1, 4}}, {"budget", ctx.options.budget}};
    c.payload = {{"templates", rows.size()}, {"rank_at_least_3", positives}, {"rank_at_most_2", negatives}, {"results", rows}};
    c.verdict = !ok ? verdict::fail : budget_hit ? verdict::budget : verdict::pass;
    return c;
}

/// Proportions of the crossed blowup on the vertices of R_x.
inline std::vector<Rational> rcross_weights(const Rational& alpha) {
    const Rational a = alpha / 3, b = (1 - alpha) / 3, apex(1, 6);
    return {apex, apex, a, b, b, a};
}

inline Certificate lagrangian_checks(const Context& ctx) {
    Certificate c;
    c.claim_id = "lagrangian-values";
    const Rational target(1, 27);
    MaximizeOptions opt;
    opt.seed = ctx.options.seed;
    const auto edge = maximize(single_edge().graph, opt);
    const bool edge_ok = std::abs(edge.value - 1.0 / 27.0) <= 1e-9;

    const ThreeGraph rx = cut_template(rcross_spec()).graph;
    json family = json::array();
    bool family_ok = true;
    for (int k = 1; k <= 20; ++k) {
        const Rational alpha(k, 42);
        const Rational p = lagrange_poly(rx, rcross_weights(alpha));
        family_ok &= p == target;
        family.push_back({{"alpha", to_json(alpha)}, {"value", to_json(p)}});
    }
    MaximizeOptions many = opt;
    many.restarts = 128;
    const auto rx_max = maximize(rx, many);
    const bool lower_ok = rx_max.value >= 1.0 / 27.0 - 1e-9;

    const DensityReport s3 = density_report(balanced_tripartite(60).graph);
    const DensityReport crossed = density_report(crossed_blowup({60, Rational(1, 4)}).graph);
    const std::vector<Rational> third(3, Rational(1, 3));
    const Rational edge_density = asymptotic_density(single_edge().graph, third);
    const bool density_ok = s3.density == Rational(8000, 34220) && crossed.density == s3.density && edge_density == Rational(2, 9);

    c.inputs = {{"seed", ctx.options.seed}, {"generator", CounterRng::name}, {"restarts", opt.restarts}, {"tol", opt.tol}};
    c.payload = {{"single_edge", {{"value", edge.value}, {"weights", edge.weights}, {"within_1e-9_of_1/27", edge_ok}}},
                 {"rcross_exact_family", family},
                 {"rcross_exact_family_all_1/27", family_ok},
                 {"rcross_multistart",
                  {{"value", rx_max.value},
                   {"restarts", rx_max.restarts},
                   {"spread", rx_max.gap_estimate},
                   {"certified_lower_bound", to_json(target)},
                   {"empirical_maximum_at_most_1/27_plus_1e-9", rx_max.value <= 1.0 / 27.0 + 1e-9},
                   {"upper_bound_status", "empirical, not exhaustive"}}},
                 {"densities",
                  {{"S3(60)", to_json(s3.density)},
                   {"crossed_1/4_60", to_json(crossed.density)},
                   {"single_edge_asymptotic", to_json(edge_density)}}}};
    c.verdict = edge_ok && family_ok && lower_ok && density_ok ? verdict::pass : verdict::fail;
    return c;
}

/// Central differences against the analytic gradient on random graphs and weights.
inline Certificate gradient_check(const Context& ctx, std::size_t instances = 100) {
    Certificate c;
    c.claim_id = "lagrangian-gradient";
    const CounterRng base(ctx.options.seed, 0x67726164);  // stream tag "grad"
    double worst = 0;
    for (std::size_t k = 0; k < instances; ++k) {
        CounterRng rng = base.split(k);
        const std::size_t n = 3 + rng.below(8);
        std::vector<Triple> edges;
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = a + 1; b < n; ++b)
                for (Vertex d = b + 1; d < n; ++d)
                    if (rng.below(2))
                        edges.push_back({a, b, d});
        const ThreeGraph g = ThreeGraph::build(n, edges);
        std::vector<double> x(n);
        for (double& xi : x)
            xi = rng.uniform01();
        const auto grad = lagrange_gradient(g, x);
        constexpr double h = 1e-6;
        for (std::size_t i = 0; i < n; ++i) {
            auto up = x, down = x;
            up[i] += h;
            down[i] -= h;
            const double fd = (lagrange_poly(g, std::span<const double>(up)) - lagrange_poly(g, std::span<const double>(down))) / (2 * h);
            worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1.0, std::abs(grad[i])));
        }
    }
    c.inputs = {{"seed", ctx.options.seed}, {"generator", CounterRng::name}, {"instances", instances}, {"step", 1e-6}};
    c.payload = {{"max_relative_error", worst}, {"tolerance", 1e-6}};
    c.verdict = worst <= 1e-6 ? verdict::pass : verdict::fail;
    return c;
}

inline json q_law_json(const QLawReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.n},
                        {"sizes", row.sizes},
                        {"edges", row.edges},
                        {"q", row.q.q_value},
                        {"q_normalized", to_json(row.q.q_normalized)},
                        {"deviation", to_json(row.deviation)},
                        {"share_deviations",
                         {to_json(row.share_deviation[0]), to_json(row.share_deviation[1]), to_json(row.share_deviation[2])}}});
    json j{{"alpha", to_json(r.alpha)},
           {"target", to_json(r.target)},
           {"rows", rows},
           {"decreasing", r.decreasing},
           {"exact_tail", r.exact_tail},
           {"max_scaled_deviation", r.max_scaled_deviation},
           {"pass", r.pass}};
    j["fitted_exponent"] = r.fitted_exponent ? json(*r.fitted_exponent) : json(nullptr);
    return j;
}

/// Ladder where apportionment is exact, plus an off-grid ladder held to an
/// O(1/n) envelope.
inline Certificate q_law() {
    Certificate c;
    c.claim_id = "Q-law-ladder";
    const std::vector<std::size_t> ladder{60, 120, 240}, off_grid{61, 121, 241};
    constexpr double envelope = 0.02;
    json alphas = json::array();
    bool ok = true;
    for (const Rational& alpha : {Rational(1, 10), Rational(1, 4), Rational(2, 5)}) {
        const auto main = q_law_check(alpha, ladder);
        const auto off = q_law_check(alpha, off_grid);
        bool shares_exact = true;
        for (const auto& row : main.rows)
            for (const auto& d : row.share_deviation)
                shares_exact &= d == 0;
        ok &= main.pass && shares_exact && off.max_scaled_deviation <= envelope;
        alphas.push_back({{"ladder", q_law_json(main)}, {"shares_exact", shares_exact}, {"off_grid", q_law_json(off)}});
    }
    c.inputs = {{"ladder", ladder}, {"off_grid_ladder", off_grid}, {"off_grid_envelope", envelope}};
    c.payload = {{"alphas", alphas}};
    c.verdict = ok ? verdict::pass : verdict::fail;
    return c;
}

inline Certificate q_monotone() {
    Certificate c;
    c.claim_id = "Q-monotone-in-alpha";
    std::vector<Rational> alphas;
    for (int k = 1; k <= 9; ++k)
        alphas.emplace_back(k, 20);
    const auto r = monotone_law_check(alphas, 120);
    json values = json::array();
    for (std::size_t i = 0; i < r.alphas.size(); ++i)
        values.push_back({{"alpha", to_json(r.alphas[i])}, {"q", r.q_values[i]}});
    c.inputs = {{"n", r.n}};
    c.payload = {{"values", values}, {"strictly_decreasing", r.strictly_decreasing}};
    c.verdict = r.strictly_decreasing ? verdict::pass : verdict::fail;
    return c;
}

inline Certificate lipschitz(const Context& ctx) {
    Certificate c;
    c.claim_id = "Q-lipschitz-flips";
    json runs = json::array();
    bool ok = true;
    const std::pair<std::size_t, std::size_t> cases[] = {{60, 100}, {300, 10'000}};
    for (std::size_t i = 0; i < 2; ++i) {
        const auto [n, flips] = cases[i];
        const auto g = crossed_blowup({n, Rational(1, 4)});
        const auto r = lipschitz_check(g.graph, flips, CounterRng(ctx.options.seed).split(i).next());
        ok &= r.violations == 0 && r.recount_matches && r.max_single_delta <= r.bound_per_flip;
        runs.push_back({{"n", n},
                        {"flips", flips},
                        {"bound_per_flip", r.bound_per_flip},
                        {"max_single_delta", r.max_single_delta},
                        {"max_prefix_ratio", r.max_prefix_ratio},
                        {"violations", r.violations},
                        {"recount_matches", r.recount_matches},
                        {"q_start", r.q_start},
                        {"q_end", r.q_end}});
    }
    c.inputs = {{"seed", ctx.options.seed}, {"generator", CounterRng::name}, {"graph", "crossed blowup, alpha = 1/4"}};
    c.payload = {{"runs", runs}};
    c.verdict = ok ? verdict::pass : verdict::fail;
    return c;
}

inline json separation_json(const SeparationReport& r) {
    json j{{"alpha", to_json(r.alpha)},
           {"beta", to_json(r.beta)},
           {"n", r.n},
           {"q_alpha", r.q_alpha},
           {"q_beta", r.q_beta},
           {"q_gap", r.q_gap},
           {"q_gap_normalized", to_json(r.q_gap_normalized)},
           {"asymptotic_gap", to_json(r.asymptotic_gap)},
           {"lipschitz_constant", r.lipschitz_constant},
           {"dist_lower_bound", r.dist_lower_bound}};
    j["exact_dist"] = r.exact_dist ? json(*r.exact_dist) : json(nullptr);
    return j;
}

inline Certificate separation_claim() {
    Certificate c;
    c.claim_id = "Q-separation";
    const Rational a(1, 10), b(2, 5);
    const auto large = separation(a, b, 240);
    const auto tiny = separation(a, b, 9);
    const Rational ratio = large.q_gap_normalized / Rational(1, 540);
    const bool within = abs(ratio - 1) <= Rational(1, 5);
    const bool bound_ok = tiny.exact_dist && *tiny.exact_dist >= tiny.dist_lower_bound;
    c.inputs = {{"alpha", to_json(a)}, {"beta", to_json(b)}, {"n", {240, 9}}};
    c.payload = {{"large", separation_json(large)},
                 {"ratio_to_1/540", to_json(ratio)},
                 {"within_20_percent", within},
                 {"tiny", separation_json(tiny)},
                 {"exact_at_least_bound", bound_ok}};
    c.verdict = within && bound_ok ? verdict::pass : verdict::fail;
    return c;
}

inline Certificate pigeonhole() {
    Certificate c;
    c.claim_id = "pigeonhole-separation-matrix";
    const std::vector<Rational> alphas{Rational(1, 10), Rational(1, 5), Rational(3, 10), Rational(2, 5)};
    const auto r = pigeonhole_report(alphas, 120);
    bool positive = true;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        for (std::size_t j = 0; j < alphas.size(); ++j)
            if (i != j)
                positive &= r.lower_bounds[i][j] > 0;
    json as = json::array();
    for (const auto& a : alphas)
        as.push_back(to_json(a));
    c.inputs = {{"alphas", as}, {"n", r.n}};
    c.payload = {{"q_values", r.q_values},
                 {"lower_bounds", r.lower_bounds},
                 {"c", to_json(*r.c)},
                 {"delta_threshold", to_json(*r.delta_threshold)},
                 {"templates_defeated", r.templates_defeated},
                 {"statement",
                  "no list of " + std::to_string(r.templates_defeated) +
                      " templates approximates all of these graphs within delta n^3 edits for delta < " +
                      to_string(*r.delta_threshold)}};
    c.verdict = positive && *r.c > 0 ? verdict::pass : verdict::fail;
    return c;
}

/// G_alpha(n) collapses onto (a subgraph of) R_x; F has no map there.
inline Certificate crossed_f_free(const Context& ctx) {
    Certificate c;
    c.claim_id = "crossed-blowups-F-free";
    json rows = json::array();
    bool ok = true, budget_hit = false;
    for (std::size_t n : {6, 12, 18, 24, 30})
        for (const Rational& alpha : {Rational(1, 10), Rational(1, 4), Rational(2, 5)}) {
            const auto g = crossed_blowup({n, alpha});
            const auto tq = twin_quotient(g.graph);
            const bool projection_ok = verify_map({g.graph, tq.quotient, HomMode::general, {}, 0}, tq.projection);
            const auto result = hom_exists({ctx.f.graph, tq.quotient, HomMode::general, {}, ctx.options.budget});
            ok &= projection_ok && result.verdict != SearchVerdict::witness;
            budget_hit |= result.verdict == SearchVerdict::budget_exceeded;
            rows.push_back({{"n", n},
                            {"alpha", to_json(alpha)},
                            {"sizes", g.sizes},
                            {"quotient_vertices", tq.quotient.order()},
                            {"quotient_edges", tq.quotient.size()},
                            {"projection_valid", projection_ok},
                            {"verdict", to_string(result.verdict)}});
        }
    const auto rx = hom_exists({ctx.f.graph, cut_template(rcross_spec()).graph, HomMode::general, {}, ctx.options.budget});
    ok &= rx.verdict != SearchVerdict::witness;
    budget_hit |= rx.verdict == SearchVerdict::budget_exceeded;
    c.inputs = {{"budget", ctx.options.budget}};
    c.payload = {{"instances", rows}, {"F_to_Rcross", to_json(rx)}};
    c.verdict = !ok ? verdict::fail : budget_hit ? verdict::budget : verdict::exhausted;
    return c;
}

/// Runs `body`; an exception becomes a failing certificate for `claim_id`.
inline Certificate guarded(const std::string& claim_id, const std::function<Certificate()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        Certificate c;
        c.claim_id = claim_id;
        c.verdict = verdict::fail;
        c.payload = {{"error", e.what()}};
        return c;
    }
}

} // namespace claims

struct RecheckResult {
    bool hash_ok = false;
    std::size_t witnesses = 0;
    std::size_t witnesses_valid = 0;
    bool ok() const { return hash_ok && witnesses == witnesses_valid; }
};

/// Re-validates a serialized certificate from its own JSON: the content hash
/// and every stored witness map, with no search.
inline RecheckResult recheck(const json& cert) {
    RecheckResult r;
    r.hash_ok = Certificate::hash_matches(cert);
    if (!cert.contains("payload") || !cert["payload"].contains("witnesses"))
        return r;
    for (const auto& w : cert["payload"]["witnesses"]) {
        ++r.witnesses;
        try {
            const HomProblem p{graph_from_json(w.at("pattern")), graph_from_json(w.at("target")),
                               parse_hom_mode(w.at("mode").get<std::string>()), {}, 0};
            r.witnesses_valid += verify_map(p, map_from_json(w.at("map")));
        } catch (const std::exception&) {
        }
    }
    return r;
}

inline Bundle certify_all(const CertifyOptions& options = {}) {
    using namespace claims;
    Bundle bundle;
    bundle.seed = options.seed;
    bundle.budget = options.budget;
    const Context ctx(options);
    auto run = [&](const std::string& id, const std::function<Certificate()>& body) {
        Certificate c = guarded(id, body);
        c.inputs["rng"] = {{"generator", CounterRng::name}, {"seed", options.seed}};
        bundle.certificates.push_back(std::move(c));
    };

    run("catalog-Fstar-shape", [&] { return shape("catalog-Fstar-shape", ctx.fstar.graph, 7, 5, fstar_reference()); });
    run("catalog-F5-shape", [&] { return shape("catalog-F5-shape", f5().graph, 5, 3); });
    run("catalog-K4minus-shape", [&] { return shape("catalog-K4minus-shape", k4_minus().graph, 4, 3); });
    run("catalog-F-shape", [&] { return f_shape(ctx); });
    run("catalog-template-shapes", [&] { return templates_shape(); });
    run("F5-subgraph-of-F", [&] { return f5_in_f(ctx); });
    std::vector<ThreeGraph> images;
    run("Fstar-homomorphic-images", [&] { return fstar_images(ctx, images); });
    run("blowup-invariance-K4minus-and-Fstar-images", [&] { return blowup_invariance(ctx, images); });
    run("F5-alone-not-blowup-invariant", [&] { return f5_not_invariant(ctx); });

    Certificate matrix, four, labelling;
    run("matrix-diagonal-lemma", [&] { return matrix = oracles::verify_lemma_matrix(); });
    run("four-by-three-lemma", [&] { return four = oracles::verify_lemma_four_by_three(); });
    run("fstar-exactly-one-labelling", [&] { return labelling = oracles::verify_fstar_labelling_infeasible(); });
    run("rank3-evaluation-table", [] { return oracles::verify_rank3_table(); });
    run("column-type-excluded", [&] { return oracles::column_type_excluded(matrix, four, labelling); });

    run("F-not-hom-R2", [&] { return f_not_hom_r2(ctx); });
    run("F-hom-Rank3", [&] { return f_hom_rank3(ctx); });
    run("rank-dichotomy-sweep", [&] { return rank_sweep(ctx); });
    run("lagrangian-values", [&] { return lagrangian_checks(ctx); });
    run("lagrangian-gradient", [&] { return gradient_check(ctx); });
    run("Q-law-ladder", [] { return q_law(); });
    run("Q-monotone-in-alpha", [] { return q_monotone(); });
    run("Q-lipschitz-flips", [&] { return lipschitz(ctx); });
    run("Q-separation", [] { return separation_claim(); });
    run("pigeonhole-separation-matrix", [] { return pigeonhole(); });
    run("crossed-blowups-F-free", [&] { return crossed_f_free(ctx); });
    return bundle;
}

} // namespace hyperstab
