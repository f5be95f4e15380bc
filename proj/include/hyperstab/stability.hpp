#pragma once

// The codegree-square statistic Q(H) = sum over pairs of d(u,v)^2 and what
// follows from it for crossed blowups: the (3 - a + a^2)/81 law, edit-distance
// lower bounds through the Lipschitz constant 3(2n+1), and the pairwise
// separation table used by the pigeonhole argument.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_set>
#include <vector>

#include "constructions.hpp"
#include "core.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace hyperstab {

inline constexpr std::size_t max_q_vertices = 2000;

/// Dense n x n table of 32-bit codegree counters (only u < v is used).
class CodegreeTable {
public:
    explicit CodegreeTable(const ThreeGraph& h) : n_(h.order()) {
        if (n_ > max_q_vertices)
            throw Error(ErrorKind::TooLarge, "dense codegree table limited to 2000 vertices");
        table_.assign(n_ * n_, 0);
        for (Triple t : h.edges())
            add(t, +1);
    }

    std::uint32_t operator()(Vertex u, Vertex v) const { return u < v ? table_[u * n_ + v] : table_[v * n_ + u]; }

    /// Adds (+1) or removes (-1) one edge; returns the resulting change of Q.
    std::int64_t add(const Triple& t, int sign) {
        std::int64_t delta = 0;
        for (auto [u, v] : {VertexPair{t.a, t.b}, VertexPair{t.a, t.c}, VertexPair{t.b, t.c}}) {
            auto& d = table_[u * n_ + v];
            const std::int64_t before = d;
            d = static_cast<std::uint32_t>(static_cast<std::int64_t>(d) + sign);
            delta += static_cast<std::int64_t>(d) * d - before * before;
        }
        return delta;
    }

    std::uint64_t q() const {
        std::uint64_t total = 0;
        for (std::size_t u = 0; u < n_; ++u)
            for (std::size_t v = u + 1; v < n_; ++v) {
                const std::uint64_t d = table_[u * n_ + v];
                total += d * d;
            }
        return total;
    }

    std::size_t order() const { return n_; }

private:
    std::size_t n_;
    std::vector<std::uint32_t> table_;
};

struct QBreakdown {
    std::uint64_t apex_bottom = 0;
    std::uint64_t one_coordinate = 0;  // bottom pairs differing in exactly one coordinate
    std::uint64_t two_coordinate = 0;  // bottom pairs differing in both
    std::uint64_t other = 0;           // apex-apex and same-class pairs
};

struct QReport {
    std::size_t n = 0;
    std::uint64_t q_value = 0;
    Rational q_normalized;  // Q / n^4
    std::optional<QBreakdown> breakdown;
};

inline Rational normalize_quartic(std::uint64_t q, std::size_t n) {
    if (n == 0)
        return 0;
    BigInt n4 = BigInt(n) * n * n * n;
    return Rational(BigInt(q), n4);
}

inline QReport q_statistic(const ThreeGraph& h) {
    CodegreeTable table(h);
    QReport r;
    r.n = h.order();
    r.q_value = table.q();
    r.q_normalized = normalize_quartic(r.q_value, r.n);
    return r;
}

/// Bottom classes as (x, y) coordinate masks, bit 0 = x.
inline int crossed_bottom_mask(CrossedPart p) {
    switch (p) {
    case CrossedPart::B00: return 0b00;
    case CrossedPart::B10: return 0b01;
    case CrossedPart::B01: return 0b10;
    case CrossedPart::B11: return 0b11;
    default: return -1;
    }
}

inline QReport q_statistic(const CrossedBlowup& g) {
    CodegreeTable table(g.graph);
    QReport r;
    r.n = g.graph.order();
    QBreakdown b;
    for (Vertex u = 0; u < r.n; ++u)
        for (Vertex v = u + 1; v < r.n; ++v) {
            const std::uint64_t d = table(u, v);
            const std::uint64_t sq = d * d;
            r.q_value += sq;
            const int mu = crossed_bottom_mask(g.part_of[u]), mv = crossed_bottom_mask(g.part_of[v]);
            if ((mu < 0) != (mv < 0))
                b.apex_bottom += sq;
            else if (mu >= 0 && std::popcount(static_cast<unsigned>(mu ^ mv)) == 1)
                b.one_coordinate += sq;
            else if (mu >= 0 && std::popcount(static_cast<unsigned>(mu ^ mv)) == 2)
                b.two_coordinate += sq;
            else
                b.other += sq;
        }
    r.q_normalized = normalize_quartic(r.q_value, r.n);
    r.breakdown = b;
    return r;
}

// ---------------------------------------------------------------------------
// Lipschitz behaviour under single-edge flips

inline std::uint64_t lipschitz_constant(std::size_t n) {
    return 3 * (2 * std::uint64_t{n} + 1);
}

struct LipschitzReport {
    std::size_t n = 0;
    std::size_t flips = 0;
    std::uint64_t bound_per_flip = 0;     // 3(2n+1)
    std::uint64_t max_single_delta = 0;   // largest |dQ| of one flip
    double max_prefix_ratio = 0;          // max over k of |Q_k - Q_0| / (3(2n+1) k)
    std::size_t violations = 0;           // prefixes where the bound failed
    bool recount_matches = true;          // incremental Q agrees with periodic full recounts
    std::uint64_t q_start = 0, q_end = 0;
};

/// Applies `flips` random single-edge additions or deletions and checks
/// |Q_k - Q_0| <= 3(2n+1) k after every prefix.
inline LipschitzReport lipschitz_check(const ThreeGraph& h, std::size_t flips, std::uint64_t seed,
                                       std::size_t recount_every = 1000) {
    LipschitzReport r;
    r.n = h.order();
    r.flips = flips;
    r.bound_per_flip = lipschitz_constant(r.n);
    if (flips == 0 || r.n < 3) {
        r.q_start = r.q_end = q_statistic(h).q_value;
        return r;
    }
    CodegreeTable table(h);
    std::unordered_set<std::uint64_t> present(h.packed().begin(), h.packed().end());
    CounterRng rng(seed);
    const auto q0 = static_cast<std::int64_t>(table.q());
    std::int64_t q = q0;
    r.q_start = static_cast<std::uint64_t>(q0);
    for (std::size_t k = 1; k <= flips; ++k) {
        Triple t;
        do {
            t = {static_cast<Vertex>(rng.below(r.n)), static_cast<Vertex>(rng.below(r.n)),
                 static_cast<Vertex>(rng.below(r.n))};
        } while (t.a == t.b || t.b == t.c || t.a == t.c);
        t = t.sorted();
        const std::uint64_t key = pack(t);
        std::int64_t delta;
        if (present.erase(key)) {
            delta = table.add(t, -1);
        } else {
            present.insert(key);
            delta = table.add(t, +1);
        }
        q += delta;
        r.max_single_delta = std::max<std::uint64_t>(r.max_single_delta, static_cast<std::uint64_t>(std::llabs(delta)));
        const auto drift = static_cast<std::uint64_t>(std::llabs(q - q0));
        const std::uint64_t bound = r.bound_per_flip * k;
        if (drift > bound)
            ++r.violations;
        r.max_prefix_ratio = std::max(r.max_prefix_ratio, static_cast<double>(drift) / static_cast<double>(bound));
        if (recount_every && (k % recount_every == 0 || k == flips))
            r.recount_matches &= table.q() == static_cast<std::uint64_t>(q);
    }
    r.q_end = static_cast<std::uint64_t>(q);
    return r;
}

// ---------------------------------------------------------------------------
// The Q law for crossed blowups

/// (3 - a + a^2) / 81
inline Rational q_law_target(const Rational& alpha) {
    return (3 - alpha + alpha * alpha) / 81;
}

struct QLawShares {
    Rational apex_bottom = Rational(2, 81);
    Rational one_coordinate;
    Rational two_coordinate;
};

inline QLawShares q_law_shares(const Rational& alpha) {
    QLawShares s;
    s.one_coordinate = alpha * (1 - alpha) / 81;
    s.two_coordinate = (alpha * alpha + (1 - alpha) * (1 - alpha)) / 81;
    return s;
}

struct QLawRow {
    std::size_t n = 0;
    std::array<std::size_t, 6> sizes{};
    std::uint64_t edges = 0;
    QReport q;
    Rational deviation;  // Q/n^4 - target
    std::array<Rational, 3> share_deviation;  // apex-bottom, one-, two-coordinate terms minus their shares
};

struct QLawReport {
    Rational alpha;
    Rational target;
    std::vector<QLawRow> rows;
    bool decreasing = false;          // |deviation| strictly decreases until it reaches 0, then stays 0
    bool exact_tail = false;          // the last deviation is exactly 0
    std::optional<double> fitted_exponent;  // -slope of log|dev| against log n, nonzero rows only
    double max_scaled_deviation = 0;  // max of n |deviation|, the O(1/n) envelope constant
    double min_exponent = 0.8;
    bool pass = false;
};

/// Least-squares slope of log y against log x.
inline std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2)
        return std::nullopt;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        mx += std::log(x[i]), my += std::log(y[i]);
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0)
        return std::nullopt;
    return sxy / sxx;
}

inline QLawReport q_law_check(const Rational& alpha, const std::vector<std::size_t>& n_values) {
    if (alpha <= 0 || alpha >= Rational(1, 2))
        throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie strictly between 0 and 1/2");
    QLawReport report;
    report.alpha = alpha;
    report.target = q_law_target(alpha);
    const QLawShares shares = q_law_shares(alpha);
    for (std::size_t n : n_values) {
        const CrossedBlowup g = crossed_blowup({n, alpha});
        QLawRow row;
        row.n = n;
        row.sizes = g.sizes;
        row.edges = g.graph.size();
        row.q = q_statistic(g);
        row.deviation = row.q.q_normalized - report.target;
        const auto& b = *row.q.breakdown;
        row.share_deviation = {normalize_quartic(b.apex_bottom, n) - shares.apex_bottom,
                               normalize_quartic(b.one_coordinate, n) - shares.one_coordinate,
                               normalize_quartic(b.two_coordinate, n) - shares.two_coordinate};
        report.rows.push_back(std::move(row));
    }

    report.decreasing = !report.rows.empty();
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const Rational prev = abs(report.rows[i - 1].deviation), cur = abs(report.rows[i].deviation);
        report.decreasing &= prev == 0 ? cur == 0 : cur < prev;
    }
    report.exact_tail = !report.rows.empty() && report.rows.back().deviation == 0;

    std::vector<double> xs, ys;
    for (const auto& row : report.rows)
        if (row.deviation != 0) {
            xs.push_back(static_cast<double>(row.n));
            ys.push_back(std::abs(to_double(row.deviation)));
        }
    for (const auto& row : report.rows)
        report.max_scaled_deviation =
            std::max(report.max_scaled_deviation, static_cast<double>(row.n) * std::abs(to_double(row.deviation)));
    if (auto slope = loglog_slope(xs, ys))
        report.fitted_exponent = -*slope;
    const bool rate_ok = report.exact_tail || (report.fitted_exponent && *report.fitted_exponent >= report.min_exponent);
    report.pass = report.decreasing && rate_ok;
    return report;
}

// ---------------------------------------------------------------------------
// Edit distance

inline constexpr std::size_t max_exact_distance_n = 9;

/// min over bijections psi of |psi(G) symmetric-difference H|, by
/// branch and bound on the cost of triples inside the assigned prefix.
inline std::uint64_t exact_edit_distance(const ThreeGraph& g, const ThreeGraph& h,
                                         std::size_t limit = max_exact_distance_n) {
    if (g.order() != h.order())
        throw Error(ErrorKind::InvalidSpec, "edit distance needs equal vertex counts");
    if (g.order() > limit)
        throw Error(ErrorKind::TooLarge, "exact edit distance limited to " + std::to_string(limit) + " vertices");
    const std::size_t n = g.order();
    DenseAdjacency ag(g), ah(h);
    std::uint64_t best = g.size() + h.size();
    std::vector<Vertex> image(n);
    std::vector<bool> used(n, false);
    auto extend = [&](auto&& self, std::size_t k, std::uint64_t cost) -> void {
        if (cost >= best)
            return;
        if (k == n) {
            best = cost;
            return;
        }
        for (Vertex w = 0; w < n; ++w) {
            if (used[w])
                continue;
            std::uint64_t added = 0;
            for (Vertex i = 0; i < k; ++i)
                for (Vertex j = i + 1; j < k; ++j)
                    added += ag(i, j, static_cast<Vertex>(k)) != ah(image[i], image[j], w);
            image[k] = w;
            used[w] = true;
            self(self, k + 1, cost + added);
            used[w] = false;
        }
    };
    extend(extend, 0, 0);
    return best;
}

// ---------------------------------------------------------------------------
// Separation and pigeonhole

struct SeparationReport {
    Rational alpha, beta;
    std::size_t n = 0;
    std::uint64_t q_alpha = 0, q_beta = 0;
    std::uint64_t q_gap = 0;
    Rational q_gap_normalized;   // q_gap / n^4
    Rational asymptotic_gap;     // |target(alpha) - target(beta)|
    std::uint64_t lipschitz_constant = 0;
    std::uint64_t dist_lower_bound = 0;  // ceil(q_gap / 3(2n+1))
    std::optional<std::uint64_t> exact_dist;
};

inline void check_alpha(const Rational& a) {
    if (a <= 0 || a >= Rational(1, 2))
        throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie strictly between 0 and 1/2");
}

inline SeparationReport separation(const Rational& alpha, const Rational& beta, std::size_t n) {
    check_alpha(alpha);
    check_alpha(beta);
    if (alpha == beta)
        throw Error(ErrorKind::EqualParameters, "separation needs distinct parameters");
    SeparationReport r;
    r.alpha = alpha;
    r.beta = beta;
    r.n = n;
    const CrossedBlowup ga = crossed_blowup({n, alpha});
    const CrossedBlowup gb = crossed_blowup({n, beta});
    r.q_alpha = q_statistic(ga.graph).q_value;
    r.q_beta = q_statistic(gb.graph).q_value;
    r.q_gap = r.q_alpha > r.q_beta ? r.q_alpha - r.q_beta : r.q_beta - r.q_alpha;
    r.q_gap_normalized = normalize_quartic(r.q_gap, n);
    r.asymptotic_gap = abs(q_law_target(alpha) - q_law_target(beta));
    r.lipschitz_constant = lipschitz_constant(n);
    r.dist_lower_bound = (r.q_gap + r.lipschitz_constant - 1) / r.lipschitz_constant;
    if (n <= max_exact_distance_n)
        r.exact_dist = exact_edit_distance(ga.graph, gb.graph);
    return r;
}

struct PigeonholeReport {
    std::vector<Rational> alphas;
    std::size_t n = 0;
    std::vector<std::uint64_t> q_values;
    std::vector<std::vector<std::uint64_t>> lower_bounds;  // symmetric, zero diagonal
    std::optional<Rational> c;                             // min off-diagonal bound / n^3
    std::optional<Rational> delta_threshold;               // c / 3
    std::size_t templates_defeated = 0;                    // t = (number of alphas) - 1
};

/// For t + 1 crossed blowups, every pair is at least c n^3 edits apart, so no
/// list of t templates can serve all of them within delta n^3 for delta < c/3.
inline PigeonholeReport pigeonhole_report(const std::vector<Rational>& alphas, std::size_t n) {
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        check_alpha(alphas[i]);
        for (std::size_t j = 0; j < i; ++j)
            if (alphas[i] == alphas[j])
                throw Error(ErrorKind::EqualParameters, "duplicate parameter " + to_string(alphas[i]));
    }
    PigeonholeReport r;
    r.alphas = alphas;
    r.n = n;
    for (const auto& a : alphas)
        r.q_values.push_back(q_statistic(crossed_blowup({n, a}).graph).q_value);
    const std::uint64_t lc = lipschitz_constant(n);
    r.lower_bounds.assign(alphas.size(), std::vector<std::uint64_t>(alphas.size(), 0));
    std::optional<std::uint64_t> least;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        for (std::size_t j = 0; j < alphas.size(); ++j) {
            if (i == j)
                continue;
            const std::uint64_t gap = r.q_values[i] > r.q_values[j] ? r.q_values[i] - r.q_values[j]
                                                                     : r.q_values[j] - r.q_values[i];
            r.lower_bounds[i][j] = (gap + lc - 1) / lc;
            if (!least || r.lower_bounds[i][j] < *least)
                least = r.lower_bounds[i][j];
        }
    if (least) {
        r.c = Rational(BigInt(*least), BigInt(n) * n * n);
        r.delta_threshold = *r.c / 3;
    }
    r.templates_defeated = alphas.empty() ? 0 : alphas.size() - 1;
    return r;
}

// ---------------------------------------------------------------------------
// Monotonicity of Q in alpha at fixed n

struct MonotoneReport {
    std::size_t n = 0;
    std::vector<Rational> alphas;  // increasing
    std::vector<std::uint64_t> q_values;
    bool strictly_decreasing = false;
};

inline MonotoneReport monotone_law_check(std::vector<Rational> alphas, std::size_t n) {
    std::sort(alphas.begin(), alphas.end());
    MonotoneReport r;
    r.n = n;
    r.alphas = alphas;
    for (const auto& a : alphas)
        r.q_values.push_back(q_statistic(crossed_blowup({n, a}).graph).q_value);
    r.strictly_decreasing = true;
    for (std::size_t i = 1; i < r.q_values.size(); ++i)
        r.strictly_decreasing &= r.q_values[i] < r.q_values[i - 1];
    return r;
}

} // namespace hyperstab
