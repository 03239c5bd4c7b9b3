#pragma once

#include "jetsolve/field.hpp"
#include "jetsolve/holder.hpp"

#include <functional>
#include <string>
#include <vector>

namespace jetsolve {

// Fundamental solution of the Laplacian in R^n:
//   n = 2:  Γ(z) = -ln|z| / (2π)
//   n >= 3: Γ(z) = |z|^(2-n) / (n(n-2)ωₙ)
// with ωₙ the volume of the unit n-ball. Δ(Γ * f) = -f.
class KernelSpec {
public:
    explicit KernelSpec(int n);

    int dim() const { return n_; }
    bool logarithmic() const { return n_ == 2; }
    double unit_ball_volume() const { return omega_; }

    double gamma(const Point& z) const;
    // ∂ᵢΓ(z)
    double gradient(const Point& z, int i) const;
    // ∂ᵢ∂ⱼΓ(z)
    double hessian(const Point& z, int i, int j) const;
    // ∫ Γ over the ball of radius eps centred at the singularity.
    double singular_ball_integral(double eps) const;

private:
    int n_;
    double omega_;
    double surface_;  // n·ωₙ
};

// Closed-form Γ(z); throws ConfigError at z = 0.
double gamma(const Point& z, const KernelSpec& kernel);

struct PotentialField {
    ScalarField value;
    std::vector<ScalarField> gradient;               // ∂ᵢN(f)
    std::vector<std::vector<ScalarField>> hessian;   // ∂ᵢⱼN(f), symmetric
    double spacing = 0;
    std::string singular_rule;
};

// N(f)(x) = Σ_{y≠x} Γ(x-y) f(y) hⁿ + f(x)·∫_{B_ε} Γ, where B_ε is the ball with
// the volume of one cell. Plain midpoint rule over grid cells.
ScalarField newtonian_potential(const ScalarField& f);

// ∂ᵢN(f): midpoint rule on ∂ᵢΓ(x-y) f(y) with the self cell dropped.
std::vector<ScalarField> potential_gradient(const ScalarField& f);

// ∂ᵢⱼN(f)(x) = ∫ ∂ᵢⱼΓ(x-y)(f(y)-f(x)) dy - δᵢⱼ f(x)/n, midpoint rule with the
// self cell dropped (its contribution is O(h^α)).
std::vector<std::vector<ScalarField>> potential_hessian(const ScalarField& f);

// Value, gradient and Hessian in one sweep over the node pairs.
PotentialField potential_field(const ScalarField& f);

// ∂ᵢⱼN(f) at a single node, same rule as potential_hessian.
double potential_hessian_at(const ScalarField& f, std::size_t node, int i, int j);

// Quadrature of ∫_{B_R \ B_ρ(x)} ∂ᵢⱼΓ(x-y) dy with x = grid.node(node).
double check_truncated_kernel_bound(const BallGrid& grid, std::size_t node, double rho, int i, int j);

struct Probe {
    std::string name;
    std::function<double(const Point&)> f;
};

// {1, x₁, sin x₁, |x|²}.
std::vector<Probe> default_probes();

struct ProbeRatio {
    std::string name;
    double potential_norm = 0;  // ‖N(f)‖^(2,α)
    double source_norm = 0;     // ‖f‖_α
    double ratio = 0;
    bool skipped = false;       // f ≡ 0
};

struct NormBoundReport {
    double radius = 0;
    double alpha = 0;
    std::size_t pair_count = 0;
    std::vector<ProbeRatio> probes;
    double max_ratio = 0;
};

// max over probes of ‖N(f)‖^(2,α) / ‖f‖_α on one grid, Hessians by the
// kernel formula.
NormBoundReport check_potential_norm_bound(const std::vector<Probe>& probes, const GridPtr& grid,
                                           double alpha, const PairSet& pairs);

} // namespace jetsolve
