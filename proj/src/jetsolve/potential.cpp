#include "jetsolve/potential.hpp"

#include "jetsolve/errors.hpp"
#include "jetsolve/parallel.hpp"

#include <cmath>
#include <numbers>

namespace jetsolve {

KernelSpec::KernelSpec(int n) : n_(n) {
    if (n < 2) throw ConfigError("kernel dimension must be at least 2", "n");
    omega_ = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1);
    surface_ = n * omega_;
}

namespace {

double norm2(const Point& z, int n) {
    double s = 0;
    for (int d = 0; d < n; ++d) s += z[d] * z[d];
    return s;
}

} // namespace

double KernelSpec::gamma(const Point& z) const {
    const double r2 = norm2(z, n_);
    if (r2 == 0) throw ConfigError("fundamental solution is singular at z = 0");
    if (n_ == 2) return -0.5 * std::log(r2) / (2 * std::numbers::pi);
    return std::pow(r2, (2.0 - n_) / 2) / (n_ * (n_ - 2) * omega_);
}

double KernelSpec::gradient(const Point& z, int i) const {
    const double r2 = norm2(z, n_);
    return -z[i] * std::pow(r2, -n_ / 2.0) / surface_;
}

double KernelSpec::hessian(const Point& z, int i, int j) const {
    const double r2 = norm2(z, n_);
    const double delta = i == j ? 1.0 : 0.0;
    return (n_ * z[i] * z[j] / r2 - delta) * std::pow(r2, -n_ / 2.0) / surface_;
}

double KernelSpec::singular_ball_integral(double eps) const {
    if (n_ == 2) return eps * eps / 4 - eps * eps / 2 * std::log(eps);
    // ∫₀^ε r^(2-n)/(n(n-2)ωₙ) · nωₙ r^(n-1) dr = ε²/(2(n-2))
    return eps * eps / (2.0 * (n_ - 2));
}

double gamma(const Point& z, const KernelSpec& kernel) { return kernel.gamma(z); }

namespace {

struct Sums {
    std::vector<double> value;
    std::vector<std::vector<double>> grad;
    std::vector<std::vector<double>> hess;  // packed upper triangle, index via tri()
};

int tri(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    int k = 0;
    for (int a = 0; a < i; ++a) k += n - a;
    return k + (j - i);
}

// One O(N²) sweep producing whichever of value / gradient / Hessian is asked for.
Sums sweep(const ScalarField& f, bool want_value, bool want_grad, bool want_hess) {
    const auto& g = f.grid();
    const int n = g.dim();
    const KernelSpec kernel(n);
    const std::size_t N = g.size();
    const double V = g.cell_volume();
    const double eps = std::pow(V / kernel.unit_ball_volume(), 1.0 / n);
    const double self = kernel.singular_ball_integral(eps);
    const double surface = n * kernel.unit_ball_volume();
    const int ntri = n * (n + 1) / 2;
    if (n > 3) throw ConfigError("potential sweep supports n = 2, 3", "n");
    // Γ = -ln r²/(4π) for n = 2 and 1/(4πr) for n = 3
    const double value_scale = 1 / (4 * std::numbers::pi);

    Sums s;
    if (want_value) s.value.assign(N, 0);
    if (want_grad) s.grad.assign(n, std::vector<double>(N, 0));
    if (want_hess) s.hess.assign(ntri, std::vector<double>(N, 0));
    const auto fv = f.values();

    parallel_for(N, [&](std::size_t xi) {
        const Point& x = g.node(xi);
        const double fx = fv[xi];
        double val = 0;
        double gr[3] = {0, 0, 0};
        double he[6] = {0, 0, 0, 0, 0, 0};
        for (std::size_t yi = 0; yi < N; ++yi) {
            if (yi == xi) continue;
            const Point& y = g.node(yi);
            Point z{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
            const double r2 = norm2(z, n);
            const double fy = fv[yi];
            double rn;
            if (n == 2) {
                if (want_value) val += -std::log(r2) * fy;
                rn = 1 / r2;
            } else {
                const double inv_r = 1 / std::sqrt(r2);
                if (want_value) val += inv_r * fy;
                rn = inv_r * inv_r * inv_r;
            }
            if (want_grad || want_hess) {
                if (want_grad)
                    for (int i = 0; i < n; ++i) gr[i] -= z[i] * rn * fy;
                if (want_hess) {
                    const double df = fy - fx;
                    const double inv_r2 = 1 / r2;
                    int k = 0;
                    for (int i = 0; i < n; ++i)
                        for (int j = i; j < n; ++j, ++k)
                            he[k] += (n * z[i] * z[j] * inv_r2 - (i == j ? 1.0 : 0.0)) * rn * df;
                }
            }
        }
        if (want_value) s.value[xi] = val * value_scale * V + self * fx;
        if (want_grad)
            for (int i = 0; i < n; ++i) s.grad[i][xi] = gr[i] * V / surface;
        if (want_hess) {
            int k = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j, ++k) s.hess[k][xi] = he[k] * V / surface - (i == j ? fx / n : 0.0);
        }
    });
    return s;
}

std::vector<std::vector<ScalarField>> unpack_hessian(const ScalarField& f, Sums& s) {
    const int n = f.grid().dim();
    std::vector<std::vector<ScalarField>> out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i].emplace_back(f.grid_ptr(), s.hess[tri(n, i, j)]);
    return out;
}

} // namespace

ScalarField newtonian_potential(const ScalarField& f) {
    auto s = sweep(f, true, false, false);
    return ScalarField(f.grid_ptr(), std::move(s.value));
}

std::vector<ScalarField> potential_gradient(const ScalarField& f) {
    auto s = sweep(f, false, true, false);
    std::vector<ScalarField> out;
    for (auto& gi : s.grad) out.emplace_back(f.grid_ptr(), std::move(gi));
    return out;
}

std::vector<std::vector<ScalarField>> potential_hessian(const ScalarField& f) {
    auto s = sweep(f, false, false, true);
    return unpack_hessian(f, s);
}

PotentialField potential_field(const ScalarField& f) {
    auto s = sweep(f, true, true, true);
    PotentialField p{ScalarField(f.grid_ptr(), std::move(s.value)), {}, {}, f.grid().spacing(),
                     "equal-volume ball for N, self cell dropped for derivatives"};
    for (auto& gi : s.grad) p.gradient.emplace_back(f.grid_ptr(), std::move(gi));
    p.hessian = unpack_hessian(f, s);
    return p;
}

double potential_hessian_at(const ScalarField& f, std::size_t node, int i, int j) {
    const auto& g = f.grid();
    const int n = g.dim();
    const KernelSpec kernel(n);
    const Point& x = g.node(node);
    const double fx = f[node];
    double acc = 0;
    for (std::size_t yi = 0; yi < g.size(); ++yi) {
        if (yi == node) continue;
        const Point& y = g.node(yi);
        acc += kernel.hessian({x[0] - y[0], x[1] - y[1], x[2] - y[2]}, i, j) * (f[yi] - fx);
    }
    return acc * g.cell_volume() - (i == j ? fx / n : 0.0);
}

double check_truncated_kernel_bound(const BallGrid& grid, std::size_t node, double rho, int i, int j) {
    if (!(rho > 0)) throw ConfigError("truncation radius must be positive");
    const KernelSpec kernel(grid.dim());
    const Point& x = grid.node(node);
    const double cut = rho * (1 + 1e-12);
    double acc = 0;
    for (std::size_t yi = 0; yi < grid.size(); ++yi) {
        const Point& y = grid.node(yi);
        Point z{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
        if (std::sqrt(norm2(z, grid.dim())) <= cut) continue;
        acc += kernel.hessian(z, i, j);
    }
    return acc * grid.cell_volume();
}

std::vector<Probe> default_probes() {
    return {
        {"1", [](const Point&) { return 1.0; }},
        {"x1", [](const Point& x) { return x[0]; }},
        {"sin(x1)", [](const Point& x) { return std::sin(x[0]); }},
        {"|x|^2", [](const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }},
    };
}

NormBoundReport check_potential_norm_bound(const std::vector<Probe>& probes, const GridPtr& grid,
                                           double alpha, const PairSet& pairs) {
    validate_alpha(alpha);
    NormBoundReport rep;
    rep.radius = grid->radius();
    rep.alpha = alpha;
    rep.pair_count = pairs.size();
    const auto powers = pairs.distance_power(alpha);
    const double weight = std::pow(2 * grid->radius(), alpha);
    const int n = grid->dim();

    for (const auto& probe : probes) {
        const auto f = ScalarField::sample(grid, probe.f);
        ProbeRatio pr;
        pr.name = probe.name;
        pr.source_norm = holder_norm(f, alpha, pairs).weighted;
        if (pr.source_norm == 0) {
            pr.skipped = true;
            rep.probes.push_back(pr);
            continue;
        }
        const auto hess = potential_hessian(f);
        double best = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const auto& h = hess[i][j];
                best = std::max(best, h.sup_abs() + weight * holder_seminorm(h.values(), pairs, powers));
            }
        pr.potential_norm = best;
        pr.ratio = best / pr.source_norm;
        rep.max_ratio = std::max(rep.max_ratio, pr.ratio);
        rep.probes.push_back(pr);
    }
    return rep;
}

} // namespace jetsolve
