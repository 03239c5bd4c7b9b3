#include "jetsolve/errors.hpp"
#include "jetsolve/kobayashi.hpp"

#include <doctest.h>

#include <cmath>

using namespace jetsolve;

namespace {

Vector vec(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("orthogonal partner") {
    const auto e = euclidean_target(2);
    const Vector Y = orthogonal_partner(e, vec(0, 0), vec(0.3, 0));
    CHECK(std::abs(Y[0]) < 1e-15);
    CHECK(std::abs(Y[1]) == doctest::Approx(0.3));

    for (const auto& t : {sphere_target(), hyperbolic_target()}) {
        const Vector p = vec(0.2, -0.1);
        const Vector X = vec(0.3, 0.4);
        const Vector Yt = orthogonal_partner(t, p, X);
        CHECK(conformality_defect(t, p, X, Yt) < 1e-14);
    }

    const auto e3 = euclidean_target(3);
    Vector X3(3);
    X3 << 1, 2, 0;
    const Vector Y3 = orthogonal_partner(e3, Vector::Zero(3), X3);
    CHECK(std::abs(Y3.dot(X3)) < 1e-14);
    CHECK(Y3.norm() == doctest::Approx(X3.norm()));

    CHECK_THROWS_AS(orthogonal_partner(euclidean_target(1), Vector::Zero(1), Vector::Ones(1)), ConfigError);
    CHECK_THROWS_AS(orthogonal_partner(e, vec(0, 0), vec(0, 0)), ConfigError);
    CHECK_THROWS_AS(orthogonal_partner(hyperbolic_target(), vec(1.2, 0), vec(1, 0)), ConfigError);
}

TEST_CASE("conformality defect") {
    const auto e = euclidean_target(2);
    CHECK(conformality_defect(e, vec(0, 0), vec(1, 0), vec(0, 1)) == 0);
    CHECK(conformality_defect(e, vec(0, 0), vec(1, 0), vec(0, 2)) == doctest::Approx(3));
    CHECK(conformality_defect(e, vec(0, 0), vec(1, 0), vec(1, 1)) == doctest::Approx(2));
}

TEST_CASE("zero vector and flat targets") {
    KobayashiQuery q;
    q.target = hyperbolic_target();
    q.p = vec(0, 0);
    q.X = vec(0, 0);
    const auto z = estimate_kobayashi(q);
    CHECK(z.status == KobayashiStatus::ZeroVector);
    CHECK(*z.upper_bound == 0);
    CHECK(z.steps.empty());

    q.target = euclidean_target(2);
    q.X = vec(0.3, 0.1);
    q.solve.res = 17;
    const auto flat = estimate_kobayashi(q);
    CHECK(flat.status == KobayashiStatus::LinearCertificate);
    CHECK(*flat.upper_bound == 0);
    CHECK(flat.steps.size() == 1);
}

TEST_CASE("non-conformal jets are rejected without solving") {
    SolveConfig cfg;
    cfg.res = 17;
    const auto step = evaluate_candidate(hyperbolic_target(), vec(0, 0), vec(0.3, 0), vec(0, 0.1), 1.0, cfg);
    CHECK_FALSE(step.success);
    CHECK(step.outcome == "u is not conformal at 0");
    CHECK(step.iterations == 0);
}

TEST_CASE("hyperbolic disk bound") {
    KobayashiQuery q;
    q.target = hyperbolic_target();
    q.p = vec(0, 0);
    q.X = vec(0.3, 0);
    q.max_steps = 6;
    q.solve.res = 17;
    const auto est = estimate_kobayashi(q);
    REQUIRE(est.status == KobayashiStatus::UpperBound);
    CHECK(est.monotone);
    CHECK(std::isfinite(*est.upper_bound));
    // The disk's Kobayashi metric at the origin is |X|; every bound sits above it.
    CHECK(*est.upper_bound >= 0.3);
    CHECK(*est.upper_bound == doctest::Approx(1 / est.R_best));
    CHECK(est.steps.front().success);
}

TEST_CASE("query validation") {
    KobayashiQuery q;
    q.target = sphere_target();
    q.p = vec(0, 0);
    q.X = vec(0.1, 0);
    q.growth = 1;
    CHECK_THROWS_AS(estimate_kobayashi(q), ConfigError);
    q.growth = 1.5;
    q.R_start = 0;
    CHECK_THROWS_AS(estimate_kobayashi(q), ConfigError);
}
