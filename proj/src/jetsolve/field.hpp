#pragma once

#include "jetsolve/grid.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace jetsolve {

using GridPtr = std::shared_ptr<const BallGrid>;

// Exact partial derivatives ∂^β f(x) for |β| <= 2 (β = 0 gives f itself).
using DerivativeOracle = std::function<double(const Point&, const MultiIndex&)>;

// Node values of a real function on a BallGrid.
class ScalarField {
public:
    ScalarField(GridPtr grid, std::vector<double> values);

    static ScalarField zeros(GridPtr grid);
    static ScalarField sample(GridPtr grid, const std::function<double(const Point&)>& f);
    // Values from oracle(x, 0); fd_derivative returns exact oracle values.
    static ScalarField analytic(GridPtr grid, DerivativeOracle oracle);

    const BallGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }
    const std::optional<DerivativeOracle>& analytic_derivs() const { return analytic_; }

    double sup_abs() const;

    // Arithmetic drops any analytic oracle.
    ScalarField operator+(const ScalarField& o) const;
    ScalarField operator-(const ScalarField& o) const;
    ScalarField operator*(double s) const;
    ScalarField pointwise_product(const ScalarField& o) const;

private:
    GridPtr grid_;
    std::vector<double> values_;
    std::optional<DerivativeOracle> analytic_;
};

// m components sharing one grid.
class VectorField {
public:
    explicit VectorField(std::vector<ScalarField> components);
    static VectorField zeros(GridPtr grid, int m);

    int components() const { return static_cast<int>(comps_.size()); }
    const ScalarField& operator[](int k) const { return comps_[k]; }
    const std::vector<ScalarField>& data() const { return comps_; }
    const BallGrid& grid() const { return comps_.front().grid(); }
    const GridPtr& grid_ptr() const { return comps_.front().grid_ptr(); }

    VectorField operator+(const VectorField& o) const;
    VectorField operator-(const VectorField& o) const;

private:
    std::vector<ScalarField> comps_;
};

// ∂^β f for |β| <= 2. Central differences where the stencil fits, one-sided
// second-order stencils near the boundary, quadratic least squares at the few
// nodes with neither. Analytic oracles, when attached, are used instead.
ScalarField fd_derivative(const ScalarField& f, const MultiIndex& beta);

// Σᵢ ∂ᵢᵢ f. Only values at grid.interior() nodes come from central stencils.
ScalarField laplacian(const ScalarField& f);

// All first and second derivatives of f in one pass.
struct DerivativeSet {
    std::vector<std::vector<double>> gradient;               // [i][node]
    std::vector<std::vector<std::vector<double>>> hessian;   // [i][j][node], symmetric
};
DerivativeSet all_derivatives(const ScalarField& f);

} // namespace jetsolve
