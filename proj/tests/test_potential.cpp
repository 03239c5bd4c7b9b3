#include "jetsolve/errors.hpp"
#include "jetsolve/potential.hpp"
#include "oracle/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace jetsolve;

namespace {

GridPtr make(int n, double R, int res) { return std::make_shared<const BallGrid>(BallGrid::build(n, R, res)); }

double ball_error(int n, double R, int res, bool inner_half = false) {
    const auto g = make(n, R, res);
    const auto pot = newtonian_potential(ScalarField::sample(g, [](const Point&) { return 1.0; }));
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        const auto& x = g->node(i);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (inner_half && r > R / 2) continue;
        const double exact = oracle::uniform_ball_potential(n, R, std::span<const double>(x.data(), 3));
        err = std::max(err, std::abs(pot[i] - exact));
        scale = std::max(scale, std::abs(exact));
    }
    return err / scale;
}

} // namespace

TEST_CASE("fundamental solution values") {
    const KernelSpec k3(3), k2(2);
    CHECK(k3.gamma({1, 0, 0}) == doctest::Approx(1 / (4 * std::numbers::pi)));
    CHECK(k3.gamma({0, 2, 0}) == doctest::Approx(1 / (8 * std::numbers::pi)));
    CHECK(k2.gamma({1, 0, 0}) == doctest::Approx(0.0));
    CHECK(k2.gamma({2, 0, 0}) == doctest::Approx(-std::log(2.0) / (2 * std::numbers::pi)));
    CHECK_THROWS_AS(gamma({0, 0, 0}, k3), ConfigError);
    CHECK(k3.unit_ball_volume() == doctest::Approx(4 * std::numbers::pi / 3));
    CHECK(k2.unit_ball_volume() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("kernel derivatives match finite differences and are trace free") {
    for (int n : {2, 3}) {
        const KernelSpec k(n);
        const Point z{0.4, -0.3, n == 3 ? 0.25 : 0.0};
        const double h = 1e-5;
        for (int i = 0; i < n; ++i) {
            Point a = z, b = z;
            a[i] += h;
            b[i] -= h;
            CHECK(k.gradient(z, i) == doctest::Approx((k.gamma(a) - k.gamma(b)) / (2 * h)).epsilon(1e-7));
            for (int j = 0; j < n; ++j)
                CHECK(k.hessian(z, i, j) == doctest::Approx((k.gradient(a, j) - k.gradient(b, j)) / (2 * h)).epsilon(1e-6));
        }
        double trace = 0;
        for (int i = 0; i < n; ++i) trace += k.hessian(z, i, i);
        CHECK(std::abs(trace) < 1e-12);
    }
}

TEST_CASE("singular ball integral") {
    CHECK(KernelSpec(3).singular_ball_integral(0.2) == doctest::Approx(0.02));
    const double eps = 0.1;
    // 2D radial quadrature of -ln r/(2π) · 2πr
    double acc = 0;
    const int steps = 100000;
    for (int i = 0; i < steps; ++i) {
        const double r = (i + 0.5) * eps / steps;
        acc += -std::log(r) * r * eps / steps;
    }
    CHECK(KernelSpec(2).singular_ball_integral(eps) == doctest::Approx(acc).epsilon(1e-7));
}

TEST_CASE("potential of f = 1 against the closed form") {
    const double e17 = ball_error(3, 1.0, 17);
    const double e25 = ball_error(3, 1.0, 25);
    CHECK(e17 <= 0.03);
    CHECK(e25 < e17);
    const double d21 = ball_error(2, 1.0, 21);
    const double d41 = ball_error(2, 1.0, 41);
    CHECK(d21 <= 0.03);
    CHECK(d41 < d21);
    CHECK(ball_error(2, 0.3, 21) <= 0.03);
}

TEST_CASE("potential is linear") {
    const auto g = make(2, 1.0, 15);
    const auto f = ScalarField::sample(g, [](const Point& x) { return std::sin(x[0]); });
    const auto h = ScalarField::sample(g, [](const Point& x) { return x[1] * x[1]; });
    const auto lhs = newtonian_potential(f * 2.0 + h * -3.0);
    const auto rhs = newtonian_potential(f) * 2.0 + newtonian_potential(h) * -3.0;
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
}

TEST_CASE("Hessian trace is -f and matches the finite-difference route") {
    const auto g = make(2, 1.0, 21);
    for (const auto& probe : default_probes()) {
        const auto f = ScalarField::sample(g, probe.f);
        const auto pf = potential_field(f);
        const auto lap = laplacian(pf.value);
        double trace_err = 0, fd_err = 0, scale = 0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            const double trace = pf.hessian[0][0][i] + pf.hessian[1][1][i];
            trace_err = std::max(trace_err, std::abs(trace + f[i]));
            if (!g->interior(i)) continue;
            fd_err = std::max(fd_err, std::abs(lap[i] + f[i]));
            scale = std::max(scale, std::abs(f[i]));
        }
        CHECK(trace_err < 1e-12 * std::max(1.0, scale));
        CHECK_MESSAGE(fd_err <= 0.05 * scale, probe.name);
    }
}

TEST_CASE("finite-difference Laplacian of N(f) improves with resolution on the inner half ball") {
    auto err = [](int res) {
        const double R = 1.0;
        const auto g = make(2, R, res);
        const auto f = ScalarField::sample(g, [](const Point& x) { return std::sin(x[0]) + 1; });
        const auto lap = laplacian(newtonian_potential(f));
        double e = 0;
        for (std::size_t i = 0; i < g->size(); ++i) {
            const auto& x = g->node(i);
            if (std::hypot(x[0], x[1]) <= R / 2) e = std::max(e, std::abs(lap[i] + f[i]));
        }
        return e;
    };
    const double coarse = err(21), fine = err(41);
    CHECK(fine < coarse);
    CHECK(coarse < 0.01);
}

TEST_CASE("one-sweep field equals the separate operators") {
    const auto g = make(3, 0.5, 9);
    const auto f = ScalarField::sample(g, [](const Point& x) { return std::cos(x[0] + 2 * x[2]); });
    const auto pf = potential_field(f);
    const auto v = newtonian_potential(f);
    const auto gr = potential_gradient(f);
    const auto he = potential_hessian(f);
    for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(pf.value[i] == v[i]);
        for (int a = 0; a < 3; ++a) {
            CHECK(pf.gradient[a][i] == gr[a][i]);
            for (int b = 0; b < 3; ++b) {
                CHECK(pf.hessian[a][b][i] == he[a][b][i]);
                CHECK(he[a][b][i] == he[b][a][i]);
            }
        }
    }
    const auto o = g->origin();
    CHECK(potential_hessian_at(f, o, 0, 2) == doctest::Approx(he[0][2][o]).epsilon(1e-12));
}

TEST_CASE("gradient of N(f) matches finite differences of N(f) inside") {
    const auto g = make(2, 1.0, 31);
    const auto f = ScalarField::sample(g, [](const Point& x) { return 1 + x[0] * x[1]; });
    const auto pf = potential_field(f);
    const auto fd = fd_derivative(pf.value, {1, 0, 0});
    double worst = 0, scale = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        const auto& x = g->node(i);
        if (std::hypot(x[0], x[1]) > 0.5) continue;
        worst = std::max(worst, std::abs(fd[i] - pf.gradient[0][i]));
        scale = std::max(scale, std::abs(fd[i]));
    }
    CHECK(worst <= 0.02 * std::max(scale, 0.1));
}

TEST_CASE("truncated kernel integrals stay bounded") {
    for (int n : {2, 3}) {
        const auto g = BallGrid::build(n, 1.0, n == 2 ? 41 : 17);
        // Centred annuli cancel by symmetry.
        for (double rho : {0.1, 0.3, 0.6}) {
            CHECK(std::abs(check_truncated_kernel_bound(g, g.origin(), rho, 0, 0)) < 1e-10);
            CHECK(std::abs(check_truncated_kernel_bound(g, g.origin(), rho, 0, 1)) < 1e-10);
        }
        std::array<int, 3> k{(g.res() - 1) / 4, 0, 0};
        const auto node = static_cast<std::size_t>(g.find(k));
        for (double rho : {0.05, 0.1, 0.2, 0.4})
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) CHECK(std::abs(check_truncated_kernel_bound(g, node, rho, i, j)) < 2.0);
        CHECK_THROWS_AS(check_truncated_kernel_bound(g, node, 0.0, 0, 0), ConfigError);
    }
}

TEST_CASE("norm-bound ratio is insensitive to R") {
    double lo = 1e300, hi = 0;
    for (double R : {1.0, 0.5, 0.25, 0.125}) {
        const auto g = make(2, R, 21);
        const auto pairs = PairSet::build(*g);
        const auto rep = check_potential_norm_bound(default_probes(), g, 0.5, pairs);
        CHECK(rep.probes.size() == 4);
        CHECK(rep.max_ratio > 0);
        lo = std::min(lo, rep.max_ratio);
        hi = std::max(hi, rep.max_ratio);
    }
    CHECK(hi < 3 * lo);
}

TEST_CASE("zero probes are skipped") {
    const auto g = make(2, 1.0, 9);
    const auto pairs = PairSet::build(*g);
    const auto rep = check_potential_norm_bound({{"0", [](const Point&) { return 0.0; }}}, g, 0.5, pairs);
    REQUIRE(rep.probes.size() == 1);
    CHECK(rep.probes[0].skipped);
    CHECK(rep.max_ratio == 0.0);
}
