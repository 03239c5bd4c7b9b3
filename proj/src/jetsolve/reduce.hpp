#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>

namespace jetsolve {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Leading coefficients a^{ij}(x, p, q): x ∈ Rⁿ, p ∈ Rᵐ, q ∈ R^{m×n} (row k is
// the gradient of component k). Must be pure and reentrant.
using CoefficientOracle = std::function<Matrix(const Vector& x, const Vector& p, const Matrix& q)>;
// Right-hand side φ(x, p, q) ∈ Rᵐ.
using SourceOracle = std::function<Vector(const Vector& x, const Vector& p, const Matrix& q)>;

// Box on which ellipticity is documented: |x| <= x_max, |p| <= p_max, |q| <= q_max.
struct SampleBox {
    double x_max = 1;
    double p_max = 1;
    double q_max = 1;
};

// Σᵢⱼ a^{ij}(x, u, Du) Dᵢⱼuᵏ = φᵏ(x, u, Du), k = 1..m.
struct SystemDef {
    std::string name;
    int n = 2;
    int m = 1;
    CoefficientOracle a;
    SourceOracle phi;
    double lambda = 1;
    SampleBox box;
    // Radius R' of the target ball B'_{R'} the solution must stay inside.
    double target_radius = std::numeric_limits<double>::infinity();
};

struct JetSpec {
    Vector c0;  // u(0), length m
    Matrix c1;  // Du(0), m×n

    static JetSpec zero(int n, int m) { return {Vector::Zero(m), Matrix::Zero(m, n)}; }
};

// Δu = ψ(x, u, Du) + Σ b^{ij}(x, u, Du) Dᵢⱼu on the ball in x̃ = Px coordinates.
struct PoissonSystem {
    int n = 2;
    int m = 1;
    SourceOracle psi;
    CoefficientOracle b;
    Matrix P;      // x̃ = P x
    Matrix P_inv;
    Matrix A0;     // a(0, 0, 0) of the jet-shifted system
    std::shared_ptr<const SystemDef> source;  // jet-shifted system
    JetSpec jet;
    double target_radius = std::numeric_limits<double>::infinity();
};

// a'(x, p, q) = a(x, p + c₀ + c₁x, q + c₁) and likewise for φ. Solving the
// result with zero jet and adding c₀ + c₁x solves the original problem.
SystemDef shift_jet(const SystemDef& system, const JetSpec& jet);

// P = A₀^{-1/2} from the symmetric eigendecomposition of A₀ = a(0,0,0), so that
// P A₀ Pᵀ = I. ψ(x̃,p,q̃) = φ(P⁻¹x̃, p, q̃P) and
// b(x̃,p,q̃) = P (A₀ - a(P⁻¹x̃, p, q̃P)) Pᵀ, hence b(0,0,0) = 0.
// Throws EllipticityError when A₀ is not symmetric positive definite.
PoissonSystem diagonalize(const SystemDef& system, const JetSpec& jet = {});

struct EllipticityReport {
    bool ok = true;
    std::size_t samples = 0;
    double min_ratio = std::numeric_limits<double>::infinity();  // min ξᵀaξ / |ξ|²
};

// Draws (x, p, q, ξ) from the system's SampleBox and checks ξᵀaξ >= λ|ξ|².
EllipticityReport check_ellipticity(const SystemDef& system, std::size_t samples = 1000,
                                    std::uint64_t seed = 7);

// Validates the jet shape and |c₀| < R'.
void validate_jet(const SystemDef& system, const JetSpec& jet);

} // namespace jetsolve
