#include "jetsolve/field.hpp"

#include "jetsolve/errors.hpp"

#include <cmath>

namespace jetsolve {

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw Error("field without grid");
    if (values_.size() != grid_->size()) throw Error("field size does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw NonFiniteError("field contains a non-finite value");
}

ScalarField ScalarField::zeros(GridPtr grid) {
    const auto n = grid->size();
    return ScalarField(std::move(grid), std::vector<double>(n, 0.0));
}

ScalarField ScalarField::sample(GridPtr grid, const std::function<double(const Point&)>& f) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
    return ScalarField(std::move(grid), std::move(v));
}

ScalarField ScalarField::analytic(GridPtr grid, DerivativeOracle oracle) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = oracle(grid->node(i), {0, 0, 0});
    ScalarField f(std::move(grid), std::move(v));
    f.analytic_ = std::move(oracle);
    return f;
}

double ScalarField::sup_abs() const {
    double s = 0;
    for (double v : values_) s = std::max(s, std::abs(v));
    return s;
}

namespace {

void check_same_grid(const ScalarField& a, const ScalarField& b) {
    if (a.size() != b.size()) throw Error("fields live on different grids");
}

} // namespace

ScalarField ScalarField::operator+(const ScalarField& o) const {
    check_same_grid(*this, o);
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.values_[i];
    return ScalarField(grid_, std::move(v));
}

ScalarField ScalarField::operator-(const ScalarField& o) const {
    check_same_grid(*this, o);
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.values_[i];
    return ScalarField(grid_, std::move(v));
}

ScalarField ScalarField::operator*(double s) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= s;
    return ScalarField(grid_, std::move(v));
}

ScalarField ScalarField::pointwise_product(const ScalarField& o) const {
    check_same_grid(*this, o);
    std::vector<double> v(values_);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= o.values_[i];
    return ScalarField(grid_, std::move(v));
}

VectorField::VectorField(std::vector<ScalarField> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw Error("vector field needs at least one component");
    for (const auto& c : comps_)
        if (c.grid_ptr() != comps_.front().grid_ptr()) throw Error("vector field components on different grids");
}

VectorField VectorField::zeros(GridPtr grid, int m) {
    std::vector<ScalarField> c;
    for (int k = 0; k < m; ++k) c.push_back(ScalarField::zeros(grid));
    return VectorField(std::move(c));
}

VectorField VectorField::operator+(const VectorField& o) const {
    std::vector<ScalarField> c;
    for (int k = 0; k < components(); ++k) c.push_back(comps_[k] + o.comps_[k]);
    return VectorField(std::move(c));
}

VectorField VectorField::operator-(const VectorField& o) const {
    std::vector<ScalarField> c;
    for (int k = 0; k < components(); ++k) c.push_back(comps_[k] - o.comps_[k]);
    return VectorField(std::move(c));
}

ScalarField fd_derivative(const ScalarField& f, const MultiIndex& beta) {
    const int l = order(beta);
    if (l < 0 || l > 2) throw ConfigError("derivative order |beta| must be at most 2");
    if (l == 0) return f;
    const auto& g = f.grid();
    std::vector<double> out(g.size());
    if (f.analytic_derivs()) {
        const auto& oracle = *f.analytic_derivs();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = oracle(g.node(i), beta);
    } else {
        g.stencil(beta).apply(f.values(), out);
    }
    return ScalarField(f.grid_ptr(), std::move(out));
}

ScalarField laplacian(const ScalarField& f) {
    const int n = f.grid().dim();
    std::vector<double> acc(f.size(), 0.0);
    for (int d = 0; d < n; ++d) {
        auto dd = fd_derivative(f, pair_index(d, d));
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += dd[i];
    }
    return ScalarField(f.grid_ptr(), std::move(acc));
}

DerivativeSet all_derivatives(const ScalarField& f) {
    const int n = f.grid().dim();
    DerivativeSet s;
    s.gradient.resize(n);
    s.hessian.assign(n, std::vector<std::vector<double>>(n));
    for (int i = 0; i < n; ++i) {
        const auto di = fd_derivative(f, unit_index(i));
        s.gradient[i].assign(di.values().begin(), di.values().end());
        for (int j = i; j < n; ++j) {
            const auto dij = fd_derivative(f, pair_index(i, j));
            s.hessian[i][j].assign(dij.values().begin(), dij.values().end());
            if (j != i) s.hessian[j][i] = s.hessian[i][j];
        }
    }
    return s;
}

} // namespace jetsolve
