#pragma once

#include "jetsolve/field.hpp"

#include <array>
#include <cstddef>

namespace jetsolve {

// Discrete weighted Hölder norm ‖f‖_α = sup|f| + (2R)^α H_α[f], with H_α taken
// as a max over a PairSet. R is the grid's nominal radius.
struct HolderReport {
    double sup_norm = 0;
    double seminorm = 0;
    double weighted = 0;
    double alpha = 0;
    std::size_t pair_count = 0;
};

// ‖f‖^(l,α) for l = 0, 1, 2; for vector fields the max over components.
struct JetNormReport {
    std::array<double, 3> order{0, 0, 0};
    double alpha = 0;
    std::size_t pair_count = 0;
};

HolderReport holder_norm(const ScalarField& f, double alpha, const PairSet& pairs);

// Seminorm of raw node values; `powers` is pairs.distance_power(alpha).
double holder_seminorm(std::span<const double> values, const PairSet& pairs,
                       std::span<const double> powers);

JetNormReport jet_norm(const ScalarField& f, double alpha, const PairSet& pairs);
JetNormReport jet_norm(const VectorField& f, double alpha, const PairSet& pairs);

// ‖f‖^(2,α) alone; the solver's metric on iterates.
double second_order_norm(const ScalarField& f, double alpha, const PairSet& pairs);
double second_order_norm(const VectorField& f, double alpha, const PairSet& pairs);

// Outcome of an executable inequality check: `worst` is the largest observed
// lhs/rhs ratio (or lhs - rhs when rhs is zero).
struct InequalityCheck {
    bool holds = true;
    double lhs = 0;
    double rhs = 0;
    double worst = 0;
    std::size_t instances = 0;
    std::size_t violations = 0;
};

// ‖fg‖_α <= ‖f‖_α ‖g‖_α for the discrete norms.
InequalityCheck check_banach_algebra(const ScalarField& f, const ScalarField& g, double alpha,
                                     const PairSet& pairs);

// Second-order Taylor remainder bound at every pair, in both orientations.
// Requires an analytic derivative oracle on f.
InequalityCheck check_taylor_remainder(const ScalarField& f, double alpha, const PairSet& pairs);

// ‖f‖_α <= (3nR)²‖f‖^(2,α) and ‖f‖^(1,α) <= 3nR‖f‖^(2,α) for f with vanishing
// 1-jet at the origin. Throws ConfigError when f(0) or ∇f(0) is not zero.
InequalityCheck check_norm_comparison(const ScalarField& f, double alpha, const PairSet& pairs);

void validate_alpha(double alpha);

} // namespace jetsolve
