#pragma once

#include "jetsolve/field.hpp"
#include "jetsolve/grid.hpp"
#include "jetsolve/holder.hpp"
#include "jetsolve/potential.hpp"
#include "jetsolve/reduce.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jetsolve {

// A polynomial of degree <= 3 in the solver's coordinates, validated harmonic.
class HarmonicPolynomial {
public:
    struct Term {
        double coef = 0;
        MultiIndex exponent{0, 0, 0};
    };

    HarmonicPolynomial() = default;
    // Throws ConfigError when the degree exceeds 3 or Δh ≠ 0.
    HarmonicPolynomial(int n, std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    // Exact ∂^β h(x) for any β.
    double derivative(const Point& x, const MultiIndex& beta) const;
    double value(const Point& x) const { return derivative(x, {0, 0, 0}); }

private:
    int n_ = 0;
    std::vector<Term> terms_;
};

// One polynomial per component; empty means h = 0.
using HarmonicSeed = std::vector<HarmonicPolynomial>;

struct SolveConfig {
    double R0 = 0.5;
    double R_min = 0;  // 0 selects R0/64
    double alpha = 0.5;
    double tol = 1e-9;
    int max_iter = 60;
    double contraction_threshold = 0.9;
    double gamma0_floor = 1.0;
    int max_gamma_doublings = 3;
    int res = 21;
    std::size_t pair_cap = PairSet::kDefaultCap;
    std::uint64_t seed = PairSet::kDefaultSeed;
    std::size_t c_samples = 2000;
    HarmonicSeed harmonic_seed;

    double resolved_R_min() const { return R_min > 0 ? R_min : R0 / 64; }
    void validate(int n, int m) const;
};

// Ψ = -ψ(x, f, Df) - Σ b^{ij}(x, f, Df) Dᵢⱼf at every node, finite-difference
// derivatives of f. Throws OracleFailure naming the node on oracle errors.
VectorField assemble_Psi(const PoissonSystem& system, const VectorField& f);

// ωⁱ(f) = N(Ψⁱ(f)) with kernel-formula gradient and Hessian.
struct OmegaResult {
    VectorField psi;
    std::vector<PotentialField> potential;
};
OmegaResult omega(const PoissonSystem& system, const VectorField& f);

// w - w(0) - ∇w(0)·x - ½Σ_{k≠l} H_{kl} xₖxₗ. The gradient is the central
// difference at the origin node, so the result has zero discrete 1-jet there.
// `offdiag` holds H_{kl} for k < l in row-major order.
ScalarField subtract_origin_jet(const ScalarField& w, std::span<const double> offdiag);

struct ThetaResult {
    VectorField theta;
    VectorField psi;
    VectorField omega;
};

// Θ(f) = ω(f) + h minus its value, gradient and off-diagonal Hessian at the
// origin. Off-diagonal Hessian entries of ω at 0 come from the kernel formula.
ThetaResult theta(const PoissonSystem& system, const VectorField& f, const HarmonicSeed& seed = {});

// max |b^{kl}| over samples of |x| <= R, |p| <= R²γ, |q| <= Rγ. The normalised
// sample set depends only on (samples, seed), so estimates at different R use
// the same draws rescaled.
double estimate_c_r_gamma(const PoissonSystem& system, double R, double gamma, std::size_t samples,
                          std::uint64_t seed);

// γ₀ = max(4Ĉ maxᵢ|Ψⁱ(0,0,0,0)| + 2‖h‖^(2,α), floor).
double choose_gamma0(const PoissonSystem& system, double c_hat, double seed_norm, double floor);

struct ResidualReport {
    double sup_residual = 0;  // interior sup of |Δu + Ψ(x,u,Du,D²u)|
    double sup_psi = 0;
};
ResidualReport residual_check(const PoissonSystem& system, const VectorField& u);

// max ‖Θ(f+δ) - Θ(f)‖^(2,α) / ‖δ‖^(2,α) over quadratic and cubic perturbations
// δ with zero 1-jet, scaled to ‖δ‖^(2,α) = scale.
double probe_contraction(const PoissonSystem& system, const VectorField& f, const HarmonicSeed& seed,
                         double alpha, const PairSet& pairs, double scale);

enum class SolveStatus { Converged, NoConvergence, IterateEscaped, OracleFailure };
const char* to_string(SolveStatus s);

struct IterationRecord {
    int iteration = 0;
    double increment_norm = 0;
    double iterate_norm = 0;
    std::optional<double> ratio;
    double laplacian_consistency = 0;  // interior sup |Δ_h Θ(f) + Ψ(f)|
    double origin_value = 0;           // max |Θ(f)(0)|
    double origin_gradient = 0;        // max |∇_h Θ(f)(0)|
};

struct RadiusAttempt {
    double R = 0;
    double gamma0 = 0;
    double gamma = 0;  // after doublings
    int doublings = 0;
    double c_hat = 0;
    double c_r_gamma = 0;
    std::string outcome;
    int iterations = 0;
};

struct SolveReport {
    SolveStatus status = SolveStatus::NoConvergence;
    std::string message;
    GridPtr grid;
    std::optional<VectorField> solution;  // zero-jet solution in solver coordinates
    double final_R = 0;
    double gamma = 0;
    int iterations = 0;
    std::vector<IterationRecord> history;  // final radius only
    std::vector<double> increments;
    std::vector<double> contraction_ratios;
    std::vector<RadiusAttempt> attempts;
    std::vector<double> c_r_gamma_history;
    ResidualReport residual;
    double solution_norm = 0;
    double probed_contraction = 0;
    double origin_value = 0;
    double origin_gradient = 0;
    std::size_t pair_count = 0;

    // Geometric mean of the successive increment ratios, when any exist.
    std::optional<double> mean_contraction() const;
};

// Fixed-point iteration f_{k+1} = Θ(f_k) from f₀ = 0 with radius halving.
SolveReport picard_solve(const PoissonSystem& system, const SolveConfig& config);

// Full pipeline: ellipticity sampling, jet shift, diagonalisation, Picard
// iteration, and reconstruction of u = v + c₀ + c₁x in the original coordinates.
struct SystemSolve {
    PoissonSystem poisson;
    SolveReport report;
    std::vector<Point> physical_nodes;       // x = P⁻¹x̃
    std::vector<std::vector<double>> u;      // [component][node]
    std::vector<double> residual;            // per node, max over components; 0 off-interior
    Vector u0;                               // u(0)
    Matrix du0;                              // Du(0), m×n
    double target_sup = 0;                   // sup |u|
};

SystemSolve solve_system(const SystemDef& system, const JetSpec& jet, const SolveConfig& config);

} // namespace jetsolve
