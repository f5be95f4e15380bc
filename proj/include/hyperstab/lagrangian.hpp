#pragma once

// Lagrange polynomials p_G(x) = sum over edges ijk of x_i x_j x_k, evaluated
// exactly or in floating point, and maximized over the simplex by a
// multistart replicator ascent.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "constructions.hpp"
#include "core.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace hyperstab {

namespace detail {
template <typename T>
void check_weights(const ThreeGraph& g, std::span<const T> x) {
    if (x.size() != g.order())
        throw Error(ErrorKind::LengthMismatch,
                    "expected " + std::to_string(g.order()) + " weights, got " + std::to_string(x.size()));
    for (const auto& xi : x)
        if (xi < 0)
            throw Error(ErrorKind::NegativeWeight, "weights must be nonnegative");
}
} // namespace detail

inline Rational lagrange_poly(const ThreeGraph& g, std::span<const Rational> x) {
    detail::check_weights(g, x);
    Rational p = 0;
    for (Triple t : g.edges())
        p += x[t.a] * x[t.b] * x[t.c];
    return p;
}

inline double lagrange_poly(const ThreeGraph& g, std::span<const double> x) {
    detail::check_weights(g, x);
    double p = 0;
    for (Triple t : g.edges())
        p += x[t.a] * x[t.b] * x[t.c];
    return p;
}

/// Partial derivatives: component i is the sum of x_j x_k over edges ijk.
inline std::vector<double> lagrange_gradient(const ThreeGraph& g, std::span<const double> x) {
    detail::check_weights(g, x);
    std::vector<double> grad(g.order(), 0.0);
    for (Triple t : g.edges()) {
        grad[t.a] += x[t.b] * x[t.c];
        grad[t.b] += x[t.a] * x[t.c];
        grad[t.c] += x[t.a] * x[t.b];
    }
    return grad;
}

/// A point of the simplex, exact or approximate.
class Weights {
public:
    static constexpr double float_tolerance = 1e-12;

    static Weights exact(std::vector<Rational> x) {
        Rational sum = 0;
        for (const auto& xi : x) {
            if (xi < 0)
                throw Error(ErrorKind::NegativeWeight, "weights must be nonnegative");
            sum += xi;
        }
        if (sum != 1)
            throw Error(ErrorKind::InvalidSpec, "exact weights must sum to 1");
        Weights w;
        w.exact_ = std::move(x);
        return w;
    }

    static Weights approx(std::vector<double> x) {
        double sum = 0;
        for (double xi : x) {
            if (xi < 0)
                throw Error(ErrorKind::NegativeWeight, "weights must be nonnegative");
            sum += xi;
        }
        if (std::abs(sum - 1.0) > float_tolerance)
            throw Error(ErrorKind::InvalidSpec, "weights must sum to 1 within 1e-12");
        Weights w;
        w.approx_ = std::move(x);
        return w;
    }

    bool is_exact() const { return exact_.has_value(); }
    const std::vector<Rational>& exact_values() const { return *exact_; }
    const std::vector<double>& float_values() const { return *approx_; }
    std::size_t size() const { return exact_ ? exact_->size() : approx_->size(); }

private:
    Weights() = default;
    std::optional<std::vector<Rational>> exact_;
    std::optional<std::vector<double>> approx_;
};

struct MaximizeOptions {
    std::size_t restarts = 64;
    double tol = 1e-10;
    std::size_t max_iterations = 100'000;
    std::uint64_t seed = 0;
};

struct LagrangianResult {
    double value = 0;
    std::vector<double> weights;
    std::size_t restarts = 0;     // runs performed, barycenter included
    double gap_estimate = 0;      // spread of the converged run values
    bool no_edges = false;
    bool non_convergence = false;
    double max_step_decrease = 0; // largest drop of p between consecutive steps over all runs
    std::vector<double> run_values;
};

namespace detail {

struct AscentRun {
    std::vector<double> x;
    double value = 0;
    bool converged = false;
    double max_decrease = 0;
};

/// x_i <- x_i * (dp/dx_i) / (3 p). Since sum_i x_i dp/dx_i = 3p the step
/// stays on the simplex, and p never decreases along it.
inline AscentRun replicator_ascent(const ThreeGraph& g, std::vector<double> x, const MaximizeOptions& opt) {
    AscentRun run;
    double value = lagrange_poly(g, std::span<const double>(x));
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        if (value <= 0) {
            run.converged = true;
            break;
        }
        const auto grad = lagrange_gradient(g, std::span<const double>(x));
        double sum = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] *= grad[i] / (3.0 * value);
            sum += x[i];
        }
        for (double& xi : x)
            xi /= sum;
        const double next = lagrange_poly(g, std::span<const double>(x));
        run.max_decrease = std::max(run.max_decrease, value - next);
        const bool done = std::abs(next - value) < opt.tol;
        value = next;
        if (done) {
            run.converged = true;
            break;
        }
    }
    run.x = std::move(x);
    run.value = value;
    return run;
}

} // namespace detail

/// Best value of p_G over the barycenter and `restarts` random simplex points.
/// The result is an empirical maximum: a certified lower bound on the
/// Lagrangian, never a proven upper bound.
inline LagrangianResult maximize(const ThreeGraph& g, const MaximizeOptions& opt = {}) {
    if (g.order() > 64)
        throw Error(ErrorKind::TooLarge, "Lagrangian maximization limited to 64 vertices");
    LagrangianResult result;
    const std::size_t n = g.order();
    if (g.size() == 0) {
        result.no_edges = true;
        result.weights.assign(n, n ? 1.0 / static_cast<double>(n) : 0.0);
        return result;
    }
    std::vector<std::vector<double>> starts;
    starts.emplace_back(n, 1.0 / static_cast<double>(n));
    const CounterRng base(opt.seed);
    for (std::size_t r = 0; r < opt.restarts; ++r) {
        // Uniform on the simplex: normalized unit exponentials, one stream per restart.
        CounterRng rng = base.split(r);
        std::vector<double> x(n);
        double sum = 0;
        for (double& xi : x)
            sum += (xi = -std::log(rng.uniform01()));
        for (double& xi : x)
            xi /= sum;
        starts.push_back(std::move(x));
    }

    double lo = 0, hi = 0;
    bool any_converged = false;
    for (auto& start : starts) {
        auto run = detail::replicator_ascent(g, std::move(start), opt);
        result.max_step_decrease = std::max(result.max_step_decrease, run.max_decrease);
        result.run_values.push_back(run.value);
        if (run.converged) {
            if (!any_converged)
                lo = hi = run.value;
            lo = std::min(lo, run.value);
            hi = std::max(hi, run.value);
            any_converged = true;
        } else {
            result.non_convergence = true;
        }
        if (result.weights.empty() || run.value > result.value) {
            result.weights = std::move(run.x);
            result.value = lagrange_poly(g, std::span<const double>(result.weights));
        }
    }
    result.restarts = starts.size();
    result.gap_estimate = hi - lo;
    return result;
}

// ---------------------------------------------------------------------------
// Densities

inline BigInt binomial3(std::size_t n) {
    if (n < 3)
        return 0;
    BigInt b = n;
    b *= n - 1;
    b *= n - 2;
    return b / 6;
}

struct DensityReport {
    std::size_t n = 0;
    std::uint64_t edges = 0;
    Rational density;                   // edges / C(n,3); zero when n < 3
    std::optional<Rational> asymptotic; // 6 p(pattern, proportions) for blowups
};

inline DensityReport density_report(const ThreeGraph& g) {
    DensityReport r;
    r.n = g.order();
    r.edges = g.size();
    const BigInt total = binomial3(r.n);
    r.density = total == 0 ? Rational(0) : Rational(BigInt(r.edges), total);
    return r;
}

/// Limit density of blowups of `pattern` with part proportions `x`.
inline Rational asymptotic_density(const ThreeGraph& pattern, std::span<const Rational> x) {
    return 6 * lagrange_poly(pattern, x);
}

/// Exact finite count and the asymptotic density for the spec's proportions.
inline DensityReport density_report(const BlowupSpec& spec) {
    if (spec.sizes.size() != spec.pattern.order())
        throw Error(ErrorKind::InvalidSpec, "blowup needs one size per pattern vertex");
    DensityReport r;
    for (auto s : spec.sizes)
        r.n += s;
    r.edges = blowup_edge_count(spec);
    const BigInt total = binomial3(r.n);
    r.density = total == 0 ? Rational(0) : Rational(BigInt(r.edges), total);
    if (r.n > 0) {
        std::vector<Rational> x;
        for (auto s : spec.sizes)
            x.emplace_back(BigInt(s), BigInt(r.n));
        r.asymptotic = asymptotic_density(spec.pattern, x);
    }
    return r;
}

} // namespace hyperstab
