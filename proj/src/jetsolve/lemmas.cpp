#include "jetsolve/lemmas.hpp"

#include "jetsolve/errors.hpp"
#include "jetsolve/holder.hpp"
#include "jetsolve/potential.hpp"

#include <cmath>

namespace jetsolve {

Jet2 operator+(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.v = a.v + b.v;
    for (int i = 0; i < 3; ++i) {
        r.g[i] = a.g[i] + b.g[i];
        for (int j = 0; j < 3; ++j) r.h[i][j] = a.h[i][j] + b.h[i][j];
    }
    return r;
}

Jet2 operator-(const Jet2& a) { return (-1.0) * a; }
Jet2 operator-(const Jet2& a, const Jet2& b) { return a + (-b); }

Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.v = a.v * b.v;
    for (int i = 0; i < 3; ++i) {
        r.g[i] = a.v * b.g[i] + b.v * a.g[i];
        for (int j = 0; j < 3; ++j)
            r.h[i][j] = a.v * b.h[i][j] + b.v * a.h[i][j] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    }
    return r;
}

Jet2 operator+(const Jet2& a, double c) {
    Jet2 r = a;
    r.v += c;
    return r;
}

Jet2 operator*(double c, const Jet2& a) {
    Jet2 r;
    r.v = c * a.v;
    for (int i = 0; i < 3; ++i) {
        r.g[i] = c * a.g[i];
        for (int j = 0; j < 3; ++j) r.h[i][j] = c * a.h[i][j];
    }
    return r;
}

namespace {

// Chain rule for a scalar function with derivatives d0, d1, d2 at a.v.
Jet2 compose(const Jet2& a, double d0, double d1, double d2) {
    Jet2 r;
    r.v = d0;
    for (int i = 0; i < 3; ++i) {
        r.g[i] = d1 * a.g[i];
        for (int j = 0; j < 3; ++j) r.h[i][j] = d2 * a.g[i] * a.g[j] + d1 * a.h[i][j];
    }
    return r;
}

} // namespace

Jet2 operator/(const Jet2& a, const Jet2& b) {
    const double inv = 1 / b.v;
    return a * compose(b, inv, -inv * inv, 2 * inv * inv * inv);
}

Jet2 sin(const Jet2& a) { return compose(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
Jet2 cos(const Jet2& a) { return compose(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.v);
    return compose(a, e, e, e);
}
Jet2 sqrt(const Jet2& a) {
    const double s = std::sqrt(a.v);
    return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}
Jet2 atan(const Jet2& a) {
    const double d = 1 + a.v * a.v;
    return compose(a, std::atan(a.v), 1 / d, -2 * a.v / (d * d));
}
Jet2 sinh(const Jet2& a) { return compose(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v)); }
Jet2 cosh(const Jet2& a) { return compose(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v)); }

const std::vector<BatteryFunction>& lemma_battery() {
    using X = std::array<Jet2, 3>;
    static const std::vector<BatteryFunction> battery = {
        {"1", [](const X&) { return Jet2::constant(1); }},
        {"x1", [](const X& x) { return x[0]; }},
        {"x2", [](const X& x) { return x[1]; }},
        {"x1^2", [](const X& x) { return x[0] * x[0]; }},
        {"x1*x2", [](const X& x) { return x[0] * x[1]; }},
        {"x1^2-x2^2", [](const X& x) { return x[0] * x[0] - x[1] * x[1]; }},
        {"|x|^2", [](const X& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }},
        {"x1^3", [](const X& x) { return x[0] * x[0] * x[0]; }},
        {"x1^2*x2", [](const X& x) { return x[0] * x[0] * x[1]; }},
        {"sin(x1)", [](const X& x) { return sin(x[0]); }},
        {"cos(x2)", [](const X& x) { return cos(x[1]); }},
        {"exp(x1)", [](const X& x) { return exp(x[0]); }},
        {"exp(x1+x2)", [](const X& x) { return exp(x[0] + x[1]); }},
        {"sin(x1)*cos(x2)", [](const X& x) { return sin(x[0]) * cos(x[1]); }},
        {"1/(1+|x|^2)",
         [](const X& x) { return Jet2::constant(1) / (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + 1.0); }},
        {"sqrt(1+|x|^2)", [](const X& x) { return sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + 1.0); }},
        {"sin(2*x1+x2)", [](const X& x) { return sin(2.0 * x[0] + x[1]); }},
        {"exp(-|x|^2)", [](const X& x) { return exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); }},
        {"x1*exp(x2)", [](const X& x) { return x[0] * exp(x[1]); }},
        {"cosh(x1)*x2", [](const X& x) { return cosh(x[0]) * x[1]; }},
        {"atan(x1)", [](const X& x) { return atan(x[0]); }},
        {"x1^4-6x1^2x2^2+x2^4",
         [](const X& x) {
             const Jet2 a = x[0] * x[0];
             const Jet2 b = x[1] * x[1];
             return a * a - 6.0 * (a * b) + b * b;
         }},
        {"sin(x1)*sinh(x2)", [](const X& x) { return sin(x[0]) * sinh(x[1]); }},
        {"(x1+2x2)^3/6",
         [](const X& x) {
             const Jet2 s = x[0] + 2.0 * x[1];
             return (1.0 / 6) * (s * s * s);
         }},
        {"x3*cos(x1)", [](const X& x) { return x[2] * cos(x[0]); }},
    };
    return battery;
}

namespace {

Jet2 evaluate(const BatteryFunction& f, const Point& p) {
    return f.f({Jet2::variable(p[0], 0), Jet2::variable(p[1], 1), Jet2::variable(p[2], 2)});
}

double pick(const Jet2& j, const MultiIndex& beta) {
    const int k = order(beta);
    if (k == 0) return j.v;
    int idx[2] = {0, 0};
    int c = 0;
    for (int d = 0; d < 3; ++d)
        for (int r = 0; r < beta[d]; ++r) idx[c++] = d;
    if (k == 1) return j.g[idx[0]];
    if (k == 2) return j.h[idx[0]][idx[1]];
    throw ConfigError("battery derivatives are available up to order 2");
}

} // namespace

ScalarField battery_field(const GridPtr& grid, const BatteryFunction& f, bool zero_jet) {
    const int n = grid->dim();
    if (!zero_jet)
        return ScalarField::analytic(grid, [f](const Point& x, const MultiIndex& b) { return pick(evaluate(f, x), b); });
    const Jet2 at0 = evaluate(f, {0, 0, 0});
    return ScalarField::analytic(grid, [f, at0, n](const Point& x, const MultiIndex& b) {
        const Jet2 j = evaluate(f, x);
        const int k = order(b);
        if (k == 0) {
            double v = j.v - at0.v;
            for (int d = 0; d < n; ++d) v -= at0.g[d] * x[d];
            return v;
        }
        if (k == 1) {
            int d = b[0] ? 0 : (b[1] ? 1 : 2);
            return j.g[d] - at0.g[d];
        }
        return pick(j, b);
    });
}

namespace {

struct Accumulator {
    bool pass = true;
    std::size_t instances = 0;
    std::size_t violations = 0;
    double worst = 0;
    std::string worst_case;

    void add(const InequalityCheck& c, const std::string& label) {
        pass = pass && c.holds;
        instances += c.instances;
        violations += c.violations;
        if (c.worst > worst || worst_case.empty()) {
            worst = std::max(worst, c.worst);
            worst_case = label;
        }
    }
    nlohmann::json json() const {
        return {{"instances", instances}, {"violations", violations}, {"worst_ratio", worst}, {"worst_case", worst_case}};
    }
};

} // namespace

LemmaSuiteReport run_lemma_suite(const LemmaSuiteConfig& cfg) {
    validate_alpha(cfg.alpha);
    if (!(cfg.R > 0) || !std::isfinite(cfg.R)) throw ConfigError("R must be positive", "R0");
    const auto& battery = lemma_battery();
    LemmaSuiteReport rep;
    rep.battery_size = battery.size();

    Accumulator exact, taylor, banach, comparison;
    nlohmann::json exact_cases = nlohmann::json::array();
    double exact_err = 0;
    for (int n : {2, 3}) {
        const GridPtr grid = std::make_shared<const BallGrid>(BallGrid::build(n, cfg.R, n == 2 ? cfg.res2 : cfg.res3));
        const PairSet pairs = PairSet::build(*grid);
        const std::string dim = "n=" + std::to_string(n);

        for (int i = 0; i < n; ++i) {
            const auto xi = ScalarField::sample(grid, [i](const Point& x) { return x[i]; });
            const double norm = holder_norm(xi, cfg.alpha, pairs).weighted;
            const double err = std::abs(norm - 3 * cfg.R);
            exact_err = std::max(exact_err, err);
            exact_cases.push_back({{"n", n}, {"i", i + 1}, {"norm", norm}, {"expected", 3 * cfg.R}});
        }

        std::vector<ScalarField> fields;
        for (const auto& f : battery) fields.push_back(battery_field(grid, f));
        for (std::size_t k = 0; k < battery.size(); ++k) {
            taylor.add(check_taylor_remainder(fields[k], cfg.alpha, pairs), dim + " " + battery[k].name);
            comparison.add(check_norm_comparison(battery_field(grid, battery[k], true), cfg.alpha, pairs),
                           dim + " " + battery[k].name + " (1-jet removed)");
            for (std::size_t l = k; l < battery.size(); ++l)
                banach.add(check_banach_algebra(fields[k], fields[l], cfg.alpha, pairs),
                           dim + " " + battery[k].name + " * " + battery[l].name);
        }
    }
    const double exact_tol = 1e-12 * std::max(1.0, 3 * cfg.R);
    rep.lemmas.push_back({"norm_exactness", exact_err <= exact_tol,
                          {{"max_abs_error", exact_err}, {"tolerance", exact_tol}, {"cases", exact_cases}}});
    rep.lemmas.push_back({"taylor_remainder", taylor.pass, taylor.json()});
    rep.lemmas.push_back({"banach_algebra", banach.pass, banach.json()});
    rep.lemmas.push_back({"norm_comparison", comparison.pass, comparison.json()});

    // ΔN(f) = -f: the Hessian trace gives -f by construction, so compare the
    // finite-difference Laplacian of N(f) against -f on interior nodes.
    {
        const GridPtr grid = std::make_shared<const BallGrid>(BallGrid::build(2, cfg.R, cfg.res2));
        nlohmann::json probes = nlohmann::json::array();
        double worst = 0;
        for (const auto& probe : default_probes()) {
            if (probe.name == "|x|^2") continue;
            const auto f = ScalarField::sample(grid, probe.f);
            const auto pot = potential_field(f);
            const auto lap = laplacian(pot.value);
            double trace_err = 0, fd_err = 0, scale = 0;
            for (std::size_t i = 0; i < grid->size(); ++i) {
                if (!grid->interior(i)) continue;
                const double trace = pot.hessian[0][0][i] + pot.hessian[1][1][i];
                trace_err = std::max(trace_err, std::abs(trace + f[i]));
                fd_err = std::max(fd_err, std::abs(lap[i] - trace));
                scale = std::max(scale, std::abs(f[i]));
            }
            const double rel = scale > 0 ? fd_err / scale : fd_err;
            worst = std::max(worst, rel);
            probes.push_back({{"probe", probe.name}, {"relative_error", rel}, {"trace_error", trace_err}});
        }
        rep.lemmas.push_back({"potential_laplacian_consistency", worst <= 0.05,
                              {{"max_relative_error", worst}, {"tolerance", 0.05}, {"res", cfg.res2}, {"probes", probes}}});
    }

    // ‖N(f)‖^(2,α)/‖f‖_α should not depend on R.
    {
        nlohmann::json radii = nlohmann::json::array();
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (double scale : {1.0, 0.5, 0.25, 0.125}) {
            const double R = cfg.R * scale;
            const GridPtr grid = std::make_shared<const BallGrid>(BallGrid::build(2, R, cfg.res2));
            const PairSet pairs = PairSet::build(*grid);
            const auto nb = check_potential_norm_bound(default_probes(), grid, cfg.alpha, pairs);
            lo = std::min(lo, nb.max_ratio);
            hi = std::max(hi, nb.max_ratio);
            radii.push_back({{"R", R}, {"max_ratio", nb.max_ratio}});
        }
        rep.lemmas.push_back({"potential_norm_bound", hi < 3 * lo,
                              {{"spread", hi / lo}, {"limit", 3.0}, {"radii", radii}}});
    }

    for (const auto& l : rep.lemmas) rep.all_pass = rep.all_pass && l.pass;
    return rep;
}

} // namespace jetsolve
