// hyperstab command line: construct graphs, run homomorphism searches, the
// exhaustive lemma checks, Lagrangian and Q-statistic reports, and the full
// certificate bundle.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

#include "hyperstab.hpp"

using namespace hyperstab;

namespace {

constexpr int usage_error = 64;

struct Global {
    std::uint64_t seed = 0;
    std::uint64_t budget = default_node_budget;
    std::string out;
    std::string format = "json";
};

/// Catalog name, "G(n,alpha)" for a crossed blowup, or a path to a .3g file.
LabelledGraph resolve_graph(const std::string& spec) {
    static const std::regex crossed(R"(G\((\d+),\s*([0-9./]+)\))");
    std::smatch m;
    if (std::regex_match(spec, m, crossed)) {
        const auto g = crossed_blowup({std::stoul(m[1]), parse_rational(m[2])});
        static constexpr const char* part_names[] = {"Ax", "Ay", "B00", "B01", "B10", "B11"};
        LabelledGraph out{g.graph, {}};
        for (std::size_t v = 0; v < g.part_of.size(); ++v)
            out.labels.push_back(std::string(part_names[static_cast<int>(g.part_of[v])]) + ":" + std::to_string(v));
        return out;
    }
    if (std::filesystem::is_regular_file(spec)) {
        std::ifstream is(spec);
        auto g = read_3g(is);
        return {g, index_labels(g.order())};
    }
    return catalog(spec);
}

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(parse_rational(item));
    return out;
}

/// "123,124,345,156,257": one digit per vertex, 1-based.
ThreeGraph parse_digit_triples(const std::string& text) {
    std::vector<Triple> triples;
    std::size_t n = 0;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.size() != 3 || !std::all_of(item.begin(), item.end(), [](char c) { return c >= '1' && c <= '9'; }))
            throw Error(ErrorKind::Parse, "expected three digits 1-9, got '" + item + "'");
        Triple t{static_cast<Vertex>(item[0] - '1'), static_cast<Vertex>(item[1] - '1'), static_cast<Vertex>(item[2] - '1')};
        n = std::max<std::size_t>({n, t.a + 1u, t.b + 1u, t.c + 1u});
        triples.push_back(t);
    }
    return ThreeGraph::build(n, triples);
}

void emit(const Global& g, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(g.out, std::ios::binary);
    if (!os)
        throw Error(ErrorKind::InvalidSpec, "cannot write " + g.out);
    os << text;
}

void emit_csv(const Global& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(g.out, std::ios::binary);
    os << text;
}

void require_json(const Global& g, const char* command) {
    if (g.format != "json")
        throw Error(ErrorKind::InvalidSpec, std::string("csv output is not available for ") + command);
}

json q_report_json(const QReport& r) {
    json j{{"n", r.n}, {"q_value", r.q_value}, {"q_normalized", to_json(r.q_normalized)}};
    if (r.breakdown)
        j["breakdown"] = {{"apex_bottom", r.breakdown->apex_bottom},
                          {"one_coordinate", r.breakdown->one_coordinate},
                          {"two_coordinate", r.breakdown->two_coordinate},
                          {"other", r.breakdown->other}};
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite certificates for 3-graph homomorphisms, Lagrangians and codegree statistics"};
    app.require_subcommand(1);
    app.fallthrough();
    Global global;
    app.add_option("--seed", global.seed, "64-bit seed for every random stream")->capture_default_str();
    app.add_option("--budget", global.budget, "node budget per homomorphism search")->capture_default_str();
    app.add_option("--out", global.out, "output file, or bundle directory for certify-all");
    app.add_option("--format", global.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    int exit_code = 0;

    // construct
    auto* construct = app.add_subcommand("construct", "write a graph as .3g plus a .labels.json sidecar");
    std::string construct_graph;
    std::vector<std::size_t> blowup_sizes;
    unsigned template_dim = 0;
    std::vector<std::string> template_forms;
    construct->add_option("--graph", construct_graph, "catalog name, G(n,alpha) or .3g path");
    construct->add_option("--blowup", blowup_sizes, "blow up --graph with these part sizes")->delimiter(',');
    construct->add_option("--template-dim", template_dim, "build R(F2^d, forms) instead");
    construct->add_option("--forms", template_forms, "forms as coordinate strings, e.g. 100,010,110")->delimiter(',');
    construct->callback([&] {
        LabelledGraph g;
        if (template_dim > 0) {
            CutTemplateSpec spec{template_dim, {}};
            for (const auto& f : template_forms)
                spec.forms.push_back(parse_coordinates(f));
            g = cut_template(spec);
        } else {
            if (construct_graph.empty())
                throw Error(ErrorKind::InvalidSpec, "construct needs --graph or --template-dim");
            g = resolve_graph(construct_graph);
        }
        if (!blowup_sizes.empty()) {
            const auto b = blowup({g.graph, blowup_sizes});
            LabelledGraph out{b.graph, {}};
            for (std::size_t v = 0; v < b.part_of.size(); ++v)
                out.labels.push_back(g.labels.at(b.part_of[v]) + "#" + std::to_string(v));
            g = std::move(out);
        }
        if (global.out.empty()) {
            write_3g(std::cout, g.graph);
            return;
        }
        std::ofstream os(global.out, std::ios::binary);
        if (!os)
            throw Error(ErrorKind::InvalidSpec, "cannot write " + global.out);
        write_3g(os, g.graph);
        std::ofstream labels(global.out + ".labels.json", std::ios::binary);
        labels << json{{"n", g.graph.order()}, {"labels", g.labels}}.dump(2) << '\n';
    });

    // hom
    auto* hom = app.add_subcommand("hom", "search for a homomorphism");
    std::string pattern, target, mode = "general";
    bool use_symmetry = false;
    std::vector<std::string> target_forms;
    hom->add_option("--pattern", pattern, "catalog name, G(n,alpha) or .3g path")->required();
    hom->add_option("--target", target, "catalog name, G(n,alpha) or .3g path");
    hom->add_option("--target-forms", target_forms, "target R(F2^d, forms) given as coordinate strings")->delimiter(',');
    hom->add_option("--mode", mode, "general, injective or surjective")->capture_default_str();
    hom->add_flag("--symmetry", use_symmetry, "break symmetry with the template's affine automorphisms");
    hom->callback([&] {
        require_json(global, "hom");
        HomProblem p;
        p.pattern = resolve_graph(pattern).graph;
        p.mode = parse_hom_mode(mode);
        p.budget = global.budget;
        std::optional<CutTemplateSpec> spec;
        if (!target_forms.empty()) {
            spec = CutTemplateSpec{static_cast<unsigned>(target_forms.front().size()), {}};
            for (const auto& f : target_forms)
                spec->forms.push_back(parse_coordinates(f));
        } else if (target == "R2") {
            spec = r2_spec();
        } else if (target == "Rcross") {
            spec = rcross_spec();
        } else if (target == "Rank3") {
            spec = rank3_spec();
        }
        if (spec)
            p.target = cut_template(*spec).graph;
        else if (!target.empty())
            p.target = resolve_graph(target).graph;
        else
            throw Error(ErrorKind::InvalidSpec, "hom needs --target or --target-forms");
        if (use_symmetry) {
            if (!spec)
                throw Error(ErrorKind::InvalidSpec, "--symmetry needs a cut-template target");
            p.symmetries = cut_template_automorphisms(*spec);
        }
        const auto result = hom_exists(p);
        json j = to_json(result);
        j["mode"] = mode;
        j["budget"] = p.budget;
        emit(global, j);
        exit_code = result.verdict == SearchVerdict::budget_exceeded ? 2 : 0;
    });

    // verify-lemmas
    auto* lemmas = app.add_subcommand("verify-lemmas", "run the exhaustive matrix, labelling and table checks");
    lemmas->callback([&] {
        require_json(global, "verify-lemmas");
        const auto m = oracles::verify_lemma_matrix();
        const auto f = oracles::verify_lemma_four_by_three();
        const auto l = oracles::verify_fstar_labelling_infeasible();
        const auto t = oracles::verify_rank3_table();
        const auto c = oracles::column_type_excluded(m, f, l);
        json out = json::array();
        bool ok = true;
        for (const auto* cert : {&m, &f, &l, &t, &c}) {
            out.push_back(cert->to_json());
            ok &= cert->established();
        }
        emit(global, out);
        exit_code = ok ? 0 : 1;
    });

    // lagrangian
    auto* lag = app.add_subcommand("lagrangian", "maximize or evaluate the Lagrange polynomial");
    std::string lag_graph;
    MaximizeOptions lag_opt;
    std::string exact_at;
    lag->add_option("--graph", lag_graph, "catalog name, G(n,alpha) or .3g path")->required();
    lag->add_option("--restarts", lag_opt.restarts)->capture_default_str();
    lag->add_option("--tol", lag_opt.tol)->capture_default_str();
    lag->add_option("--exact-at", exact_at, "comma-separated rational weights to evaluate exactly");
    lag->callback([&] {
        require_json(global, "lagrangian");
        const auto g = resolve_graph(lag_graph).graph;
        json j{{"graph", lag_graph}, {"n", g.order()}, {"edges", g.size()}};
        if (!exact_at.empty()) {
            const auto w = Weights::exact(parse_rational_list(exact_at));
            j["weights"] = exact_at;
            j["value"] = to_json(lagrange_poly(g, w.exact_values()));
        } else {
            lag_opt.seed = global.seed;
            const auto r = maximize(g, lag_opt);
            j.update({{"value", r.value},
                      {"status", "certified lower bound, empirical maximum"},
                      {"weights", r.weights},
                      {"restarts", r.restarts},
                      {"spread", r.gap_estimate},
                      {"no_edges", r.no_edges},
                      {"non_convergence", r.non_convergence},
                      {"seed", global.seed},
                      {"generator", CounterRng::name}});
        }
        emit(global, j);
    });

    // stability
    auto* stab = app.add_subcommand("stability", "codegree-square statistic reports");
    stab->require_subcommand(1);
    std::string stab_graph;
    auto* q = stab->add_subcommand("q", "Q(H) with the crossed breakdown when available");
    q->add_option("--graph", stab_graph, "catalog name, G(n,alpha) or .3g path")->required();
    q->callback([&] {
        static const std::regex crossed(R"(G\((\d+),\s*([0-9./]+)\))");
        std::smatch m;
        QReport r = std::regex_match(stab_graph, m, crossed)
                        ? q_statistic(crossed_blowup({std::stoul(m[1]), parse_rational(m[2])}))
                        : q_statistic(resolve_graph(stab_graph).graph);
        if (global.format == "csv")
            emit_csv(global, "n,q,q_over_n4\n" + std::to_string(r.n) + "," + std::to_string(r.q_value) + "," +
                                 to_string(r.q_normalized) + "\n");
        else
            emit(global, q_report_json(r));
    });

    std::size_t flips = 10'000;
    auto* lip = stab->add_subcommand("lipschitz", "random edge flips against the 3(2n+1) bound");
    lip->add_option("--graph", stab_graph, "catalog name, G(n,alpha) or .3g path")->required();
    lip->add_option("--flips", flips)->capture_default_str();
    lip->callback([&] {
        require_json(global, "stability lipschitz");
        const auto r = lipschitz_check(resolve_graph(stab_graph).graph, flips, global.seed);
        emit(global, {{"n", r.n},
                      {"flips", r.flips},
                      {"bound_per_flip", r.bound_per_flip},
                      {"max_single_delta", r.max_single_delta},
                      {"max_prefix_ratio", r.max_prefix_ratio},
                      {"violations", r.violations},
                      {"recount_matches", r.recount_matches},
                      {"seed", global.seed}});
        exit_code = r.violations == 0 && r.recount_matches ? 0 : 1;
    });

    std::string alpha_text = "1/4", beta_text = "2/5", alphas_text = "1/10,1/5,3/10,2/5";
    std::vector<std::size_t> ladder{60, 120, 240};
    std::size_t n_value = 120;
    auto* law = stab->add_subcommand("law", "Q(G_alpha(n))/n^4 against (3 - alpha + alpha^2)/81");
    law->add_option("--alpha", alpha_text)->capture_default_str();
    law->add_option("--n-values", ladder)->delimiter(',')->capture_default_str();
    law->callback([&] {
        const auto r = q_law_check(parse_rational(alpha_text), ladder);
        if (global.format == "csv") {
            std::string text = "n,q,q_over_n4,deviation\n";
            for (const auto& row : r.rows)
                text += std::to_string(row.n) + "," + std::to_string(row.q.q_value) + "," + to_string(row.q.q_normalized) +
                        "," + to_string(row.deviation) + "\n";
            emit_csv(global, text);
        } else {
            emit(global, claims::q_law_json(r));
        }
        exit_code = r.pass ? 0 : 1;
    });

    auto* sep = stab->add_subcommand("separation", "Q gap and the implied edit-distance bound");
    sep->add_option("--alpha", alpha_text)->capture_default_str();
    sep->add_option("--beta", beta_text)->capture_default_str();
    sep->add_option("--n", n_value)->capture_default_str();
    sep->callback([&] {
        require_json(global, "stability separation");
        emit(global, claims::separation_json(separation(parse_rational(alpha_text), parse_rational(beta_text), n_value)));
    });

    auto* pig = stab->add_subcommand("pigeonhole", "pairwise separation matrix for several alphas");
    pig->add_option("--alphas", alphas_text)->capture_default_str();
    pig->add_option("--n", n_value)->capture_default_str();
    pig->callback([&] {
        require_json(global, "stability pigeonhole");
        const auto alphas = parse_rational_list(alphas_text);
        const auto r = pigeonhole_report(alphas, n_value);
        json as = json::array();
        for (const auto& a : alphas)
            as.push_back(to_json(a));
        json j{{"alphas", as}, {"n", r.n}, {"q_values", r.q_values}, {"lower_bounds", r.lower_bounds},
               {"templates_defeated", r.templates_defeated}};
        j["c"] = r.c ? to_json(*r.c) : json(nullptr);
        j["delta_threshold"] = r.delta_threshold ? to_json(*r.delta_threshold) : json(nullptr);
        if (!r.c)
            j["note"] = "a single parameter has no pairwise bound";
        emit(global, j);
    });

    // certify-all
    auto* certify = app.add_subcommand("certify-all", "run every check and write a certificate bundle");
    bool parallel = false;
    std::string fstar_edges;
    certify->add_flag("--parallel", parallel, "accepted; checks run sequentially");
    certify->add_option("--fstar-edges", fstar_edges, "replace Fstar, e.g. 123,124,345,156,258");
    certify->callback([&] {
        require_json(global, "certify-all");
        CertifyOptions opt;
        opt.seed = global.seed;
        opt.budget = global.budget;
        if (!fstar_edges.empty())
            opt.fstar_override = parse_digit_triples(fstar_edges);
        const Bundle bundle = certify_all(opt);
        const std::string dir = global.out.empty() ? "bundle" : global.out;
        write_bundle(bundle, dir);
        for (const auto& c : bundle.certificates)
            std::cout << c.verdict << "  " << c.claim_id << '\n';
        std::cout << "status: " << bundle.status();
        if (bundle.first_failure())
            std::cout << " (first failing claim: " << *bundle.first_failure() << ")";
        std::cout << "\nbundle: " << dir << '\n';
        exit_code = bundle.exit_code();
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage_error;
    }
    return exit_code;
}
