#include "jetsolve/holder.hpp"

#include "jetsolve/errors.hpp"

#include <algorithm>
#include <cmath>

namespace jetsolve {

namespace {

// Rounding slack for inequalities that hold exactly in real arithmetic.
constexpr double kRelSlack = 1e-12;
constexpr double kAbsSlack = 1e-14;

void record(InequalityCheck& c, double lhs, double rhs) {
    ++c.instances;
    const bool ok = lhs <= rhs * (1 + kRelSlack) + kAbsSlack;
    if (!ok) {
        ++c.violations;
        c.holds = false;
    }
    const double ratio = rhs > 0 ? lhs / rhs : lhs - rhs;
    if (c.instances == 1 || ratio > c.worst) {
        c.worst = ratio;
        c.lhs = lhs;
        c.rhs = rhs;
    }
}

} // namespace

void validate_alpha(double alpha) {
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("alpha must lie in (0, 1)", "alpha");
}

double holder_seminorm(std::span<const double> values, const PairSet& pairs,
                       std::span<const double> powers) {
    const auto& list = pairs.pairs();
    double best = 0;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const double q = std::abs(values[list[k].first] - values[list[k].second]) / powers[k];
        best = std::max(best, q);
    }
    return best;
}

HolderReport holder_norm(const ScalarField& f, double alpha, const PairSet& pairs) {
    validate_alpha(alpha);
    if (pairs.size() == 0) throw ConfigError("pair set is empty");
    const auto powers = pairs.distance_power(alpha);
    HolderReport r;
    r.alpha = alpha;
    r.pair_count = pairs.size();
    r.sup_norm = f.sup_abs();
    r.seminorm = holder_seminorm(f.values(), pairs, powers);
    r.weighted = r.sup_norm + std::pow(2 * f.grid().radius(), alpha) * r.seminorm;
    return r;
}

namespace {

double weighted_from(std::span<const double> values, double radius, double alpha,
                     const PairSet& pairs, std::span<const double> powers) {
    double sup = 0;
    for (double v : values) sup = std::max(sup, std::abs(v));
    return sup + std::pow(2 * radius, alpha) * holder_seminorm(values, pairs, powers);
}

} // namespace

JetNormReport jet_norm(const ScalarField& f, double alpha, const PairSet& pairs) {
    validate_alpha(alpha);
    if (pairs.size() == 0) throw ConfigError("pair set is empty");
    const auto powers = pairs.distance_power(alpha);
    const int n = f.grid().dim();
    const double R = f.grid().radius();
    JetNormReport r;
    r.alpha = alpha;
    r.pair_count = pairs.size();
    for (int l = 0; l <= 2; ++l) {
        double best = 0;
        for (const auto& beta : multi_indices(n, l)) {
            const auto d = fd_derivative(f, beta);
            best = std::max(best, weighted_from(d.values(), R, alpha, pairs, powers));
        }
        r.order[l] = best;
    }
    return r;
}

JetNormReport jet_norm(const VectorField& f, double alpha, const PairSet& pairs) {
    JetNormReport r = jet_norm(f[0], alpha, pairs);
    for (int k = 1; k < f.components(); ++k) {
        const auto c = jet_norm(f[k], alpha, pairs);
        for (int l = 0; l <= 2; ++l) r.order[l] = std::max(r.order[l], c.order[l]);
    }
    return r;
}

double second_order_norm(const ScalarField& f, double alpha, const PairSet& pairs) {
    validate_alpha(alpha);
    const auto powers = pairs.distance_power(alpha);
    double best = 0;
    for (const auto& beta : multi_indices(f.grid().dim(), 2)) {
        const auto d = fd_derivative(f, beta);
        best = std::max(best, weighted_from(d.values(), f.grid().radius(), alpha, pairs, powers));
    }
    return best;
}

double second_order_norm(const VectorField& f, double alpha, const PairSet& pairs) {
    double best = 0;
    for (int k = 0; k < f.components(); ++k) best = std::max(best, second_order_norm(f[k], alpha, pairs));
    return best;
}

InequalityCheck check_banach_algebra(const ScalarField& f, const ScalarField& g, double alpha,
                                     const PairSet& pairs) {
    InequalityCheck c;
    const double fg = holder_norm(f.pointwise_product(g), alpha, pairs).weighted;
    const double rhs = holder_norm(f, alpha, pairs).weighted * holder_norm(g, alpha, pairs).weighted;
    record(c, fg, rhs);
    return c;
}

InequalityCheck check_taylor_remainder(const ScalarField& f, double alpha, const PairSet& pairs) {
    validate_alpha(alpha);
    if (!f.analytic_derivs()) throw ConfigError("Taylor remainder check needs analytic derivatives");
    const auto& oracle = *f.analytic_derivs();
    const auto& g = f.grid();
    const int n = g.dim();
    const auto powers = pairs.distance_power(alpha);

    double h_sum = 0;
    for (const auto& beta : multi_indices(n, 2)) {
        const auto d = fd_derivative(f, beta);
        h_sum += holder_seminorm(d.values(), pairs, powers);
    }

    // Oracle values per node, so each pair costs O(n²) arithmetic.
    const std::size_t N = g.size();
    std::vector<double> val(N), grad(N * n), hess(N * n * n);
    for (std::size_t i = 0; i < N; ++i) {
        const auto& x = g.node(i);
        val[i] = oracle(x, {0, 0, 0});
        for (int a = 0; a < n; ++a) {
            grad[i * n + a] = oracle(x, unit_index(a));
            for (int b = 0; b < n; ++b) hess[(i * n + a) * n + b] = oracle(x, pair_index(a, b));
        }
    }

    InequalityCheck c;
    auto one_way = [&](std::size_t a, std::size_t b) {
        const auto& x = g.node(a);
        const auto& y = g.node(b);
        double hv[3] = {0, 0, 0};
        double dist2 = 0;
        for (int d = 0; d < n; ++d) {
            hv[d] = y[d] - x[d];
            dist2 += hv[d] * hv[d];
        }
        double taylor = val[a];
        for (int i = 0; i < n; ++i) {
            taylor += grad[a * n + i] * hv[i];
            for (int j = 0; j < n; ++j) taylor += 0.5 * hess[(a * n + i) * n + j] * hv[i] * hv[j];
        }
        const double lhs = std::abs(val[b] - taylor);
        const double rhs = 0.5 * h_sum * std::pow(std::sqrt(dist2), 2 + alpha);
        record(c, lhs, rhs);
    };
    for (const auto& [a, b] : pairs.pairs()) {
        one_way(a, b);
        one_way(b, a);
    }
    return c;
}

InequalityCheck check_norm_comparison(const ScalarField& f, double alpha, const PairSet& pairs) {
    const auto& g = f.grid();
    const int n = g.dim();
    const std::size_t o = g.origin();
    const double scale = std::max(1.0, f.sup_abs());
    double jet = std::abs(f[o]);
    for (int i = 0; i < n; ++i) jet = std::max(jet, std::abs(fd_derivative(f, unit_index(i))[o]));
    if (jet > 1e-10 * scale) throw ConfigError("field does not vanish to first order at the origin");

    const auto norms = jet_norm(f, alpha, pairs);
    const double k = 3.0 * n * g.radius();
    InequalityCheck c;
    record(c, norms.order[0], k * k * norms.order[2]);
    record(c, norms.order[1], k * norms.order[2]);
    return c;
}

} // namespace jetsolve
