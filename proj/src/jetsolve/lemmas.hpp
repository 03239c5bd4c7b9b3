#pragma once

#include "jetsolve/field.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace jetsolve {

// Value, gradient and Hessian of a scalar expression, propagated forward.
struct Jet2 {
    double v = 0;
    std::array<double, 3> g{0, 0, 0};
    std::array<std::array<double, 3>, 3> h{};

    static Jet2 constant(double c) {
        Jet2 j;
        j.v = c;
        return j;
    }
    static Jet2 variable(double x, int i) {
        Jet2 j;
        j.v = x;
        j.g[i] = 1;
        return j;
    }
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator+(const Jet2& a, double c);
Jet2 operator*(double c, const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 atan(const Jet2& a);
Jet2 sinh(const Jet2& a);
Jet2 cosh(const Jet2& a);

struct BatteryFunction {
    std::string name;
    std::function<Jet2(const std::array<Jet2, 3>& x)> f;
};

// The fixed battery of smooth test functions (at least 20).
const std::vector<BatteryFunction>& lemma_battery();

// f as a field with exact derivatives. With `zero_jet`, f - f(0) - ∇f(0)·x.
ScalarField battery_field(const GridPtr& grid, const BatteryFunction& f, bool zero_jet = false);

struct LemmaSuiteConfig {
    double alpha = 0.5;
    double R = 1.0;
    int res2 = 21;  // n = 2 grid
    int res3 = 11;  // n = 3 grid
};

struct LemmaOutcome {
    std::string name;
    bool pass = false;
    nlohmann::json detail;
};

struct LemmaSuiteReport {
    std::vector<LemmaOutcome> lemmas;
    bool all_pass = true;
    std::size_t battery_size = 0;
};

// Norm exactness for coordinate functions, the Taylor remainder bound, the
// Banach-algebra inequality and the two norm comparisons on the battery in
// n = 2 and 3, plus the potential Laplacian consistency and norm-bound checks.
LemmaSuiteReport run_lemma_suite(const LemmaSuiteConfig& config);

} // namespace jetsolve
