// One PASS/FAIL line per acceptance criterion, each with its time limit.
// Exit status is nonzero when any line fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "hyperstab.hpp"

using namespace hyperstab;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(int number, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= limit_seconds;
    const bool pass = o.ok && in_time;
    failures += !pass;
    std::printf("%s %2d %-28s %8.3fs (limit %gs)  %s%s\n", pass ? "PASS" : "FAIL", number, name, seconds, limit_seconds,
                o.detail.c_str(), in_time ? "" : "  [time limit exceeded]");
    std::fflush(stdout);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

template <typename... Args>
std::string format(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

} // namespace

int main() {
    const CertifyOptions options;
    const claims::Context ctx(options);
    const ThreeGraph& f = ctx.f.graph;

    criterion(1, "catalog shapes", 1, [&] {
        const auto fs = f_star().graph;
        const auto f5g = f5().graph;
        const bool ok = f.order() == 28 && f.size() == 90 && fs.order() == 7 && fs.size() == 5 && f5g.order() == 5 &&
                        f5g.size() == 3;
        return Outcome{ok, format("F %zu/%zu, Fstar %zu/%zu, F5 %zu/%zu", f.order(), f.size(), fs.order(), fs.size(),
                                  f5g.order(), f5g.size())};
    });

    criterion(2, "F5 inside F", 1, [&] {
        const bool ok = verify_map({f5().graph, f, HomMode::injective, {}, 0}, f5_into_f());
        return Outcome{ok, ok ? "explicit embedding accepted" : "explicit embedding rejected"};
    });

    criterion(3, "matrix lemmas", 1, [&] {
        const auto m = oracles::verify_lemma_matrix();
        const auto k = oracles::verify_lemma_four_by_three();
        const int a = m.payload["satisfying_count"], b = k.payload["satisfying_count"];
        return Outcome{m.established() && k.established() && a == 6 && b == 4,
                       format("512 cases: %d satisfiers, 4096 cases: %d satisfiers", a, b)};
    });

    criterion(4, "Fstar labelling", 1, [&] {
        const auto c = oracles::verify_fstar_labelling_infeasible();
        const int feasible = c.payload["feasible_integer"], total = c.payload["enumerated"];
        return Outcome{c.established() && feasible == 0 && total == 128, format("%d of %d labellings feasible", feasible, total)};
    });

    criterion(5, "rank-3 witness", 1, [&] {
        const auto t = oracles::verify_rank3_table();
        const std::size_t cells = t.payload["cells"];
        const bool map_ok = verify_map({f, cut_template(rank3_spec()).graph, HomMode::general, {}, 0}, rank3_explicit_witness());
        return Outcome{t.established() && cells == 15 && map_ok,
                       format("%zu cells, %zu equal to 1, 28-vertex map %s", cells, cells - t.payload["mismatches"].size(),
                              map_ok ? "accepted" : "rejected")};
    });

    criterion(6, "solver exhausts F -> R2", 600, [&] {
        const auto spec = r2_spec();
        const ThreeGraph r2 = cut_template(spec).graph;
        const auto sym = hom_exists({f, r2, HomMode::general, cut_template_automorphisms(spec), default_node_budget});
        const ThreeGraph core = product(k4_minus(), f5()).graph;
        const auto core_sym = hom_exists({core, r2, HomMode::general, cut_template_automorphisms(spec), default_node_budget});
        const auto core_plain = hom_exists({core, r2, HomMode::general, {}, default_node_budget});
        const bool ok = sym.verdict == SearchVerdict::exhausted && core_sym.verdict == core_plain.verdict;
        return Outcome{ok, format("F: %s in %llu nodes; core: %s / %s without symmetry breaking",
                                  std::string(to_string(sym.verdict)).c_str(),
                                  static_cast<unsigned long long>(sym.nodes_explored),
                                  std::string(to_string(core_sym.verdict)).c_str(),
                                  std::string(to_string(core_plain.verdict)).c_str())};
    });

    criterion(7, "rank dichotomy sweep", 1800, [&] {
        const auto c = claims::rank_sweep(ctx);
        const std::size_t n = c.payload["templates"], hi = c.payload["rank_at_least_3"];
        return Outcome{c.verdict == verdict::pass,
                       format("%zu templates (%zu of rank >= 3), hom exactly when rank >= 3: %s", n, hi,
                              c.verdict == verdict::pass ? "yes" : c.verdict.c_str())};
    });

    criterion(8, "blowup invariance", 60, [&] {
        std::vector<ThreeGraph> images;
        const auto imgs = claims::fstar_images(ctx, images);
        std::vector<ThreeGraph> again;
        claims::fstar_images(ctx, again);
        const auto inv = claims::blowup_invariance(ctx, images);
        const bool stable = images == again;
        return Outcome{imgs.established() && inv.established() && stable,
                       format("|I(Fstar)| = %zu (stable across runs: %s), invariant: %s", images.size(),
                              stable ? "yes" : "no", inv.established() ? "yes" : "no")};
    });

    criterion(9, "Lagrangian", 60, [&] {
        const auto values = claims::lagrangian_checks(ctx);
        const auto grad = claims::gradient_check(ctx);
        const double edge = values.payload["single_edge"]["value"];
        const double err = grad.payload["max_relative_error"];
        return Outcome{values.established() && grad.established(),
                       format("edge %.12f, Rcross family all 1/27: %s, gradient error %.2e", edge,
                              values.payload["rcross_exact_family_all_1/27"].get<bool>() ? "yes" : "no", err)};
    });

    criterion(10, "Q law", 120, [&] {
        bool ok = true;
        std::string detail;
        for (const Rational& alpha : {Rational(1, 10), Rational(1, 4), Rational(2, 5)}) {
            const auto r = q_law_check(alpha, {60, 120, 240});
            ok &= r.pass;
            detail += to_string(alpha) + ": ";
            if (r.exact_tail)
                detail += "deviation 0 at every n; ";
            else if (r.fitted_exponent)
                detail += format("exponent %.3f; ", *r.fitted_exponent);
            else
                detail += "no exponent; ";
        }
        return Outcome{ok, detail};
    });

    criterion(11, "Lipschitz flips", 60, [&] {
        const auto c = claims::lipschitz(ctx);
        const auto& big = c.payload["runs"][1];
        return Outcome{c.established(), format("n=%zu, %zu flips, max |dQ| %llu <= %llu, violations %zu",
                                               big["n"].get<std::size_t>(), big["flips"].get<std::size_t>(),
                                               big["max_single_delta"].get<unsigned long long>(),
                                               big["bound_per_flip"].get<unsigned long long>(),
                                               big["violations"].get<std::size_t>())};
    });

    criterion(12, "separation", 120, [&] {
        const auto c = claims::separation_claim();
        return Outcome{c.established(), "gap/n^4 over 1/540 = " + c.payload["ratio_to_1/540"].get<std::string>() +
                                            format(", n=9 distance %llu >= bound %llu",
                                                   c.payload["tiny"]["exact_dist"].get<unsigned long long>(),
                                                   c.payload["tiny"]["dist_lower_bound"].get<unsigned long long>())};
    });

    criterion(13, "crossed blowups F-free", 60, [&] {
        const auto c = claims::crossed_f_free(ctx);
        return Outcome{c.verdict == verdict::exhausted,
                       format("%zu instances n <= 30 plus F -> Rcross: %s", c.payload["instances"].size(), c.verdict.c_str())};
    });

    criterion(14, "deterministic bundles", 120, [&] {
        const auto root = std::filesystem::temp_directory_path() / "hyperstab-acceptance";
        std::filesystem::remove_all(root);
        write_bundle(certify_all(options), root / "a");
        write_bundle(certify_all(options), root / "b");
        std::size_t files = 0, differing = 0;
        for (const auto& entry : std::filesystem::directory_iterator(root / "a")) {
            ++files;
            differing += slurp(entry.path()) != slurp(root / "b" / entry.path().filename());
        }
        std::size_t files_b = 0;
        for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(root / "b"))
            ++files_b;
        std::filesystem::remove_all(root);
        return Outcome{files > 0 && files == files_b && differing == 0,
                       format("%zu files, %zu differing", files, differing)};
    });

    std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
