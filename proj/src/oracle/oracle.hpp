#pragma once

// Reference computations for tests. Nothing here includes or links the solver
// core; inputs are plain arrays.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace jetsolve::oracle {

// N(1) on the ball of radius R, evaluated at |x| <= R.
//   n = 3:  R²/2 - |x|²/6
//   n = 2:  R²(1 - 2 ln R)/4 - |x|²/4
// For n = 2 the circle average of ln|x - y| over |y| = r is ln max(r, |x|), so
//   N(1)(x) = -(1/2π)[∫₀^|x| 2πr ln|x| dr + ∫_|x|^R 2πr ln r dr]
// which integrates to the expression above. Both satisfy Δ = -1.
// Throws std::domain_error for n outside {2, 3} or |x| > R.
double uniform_ball_potential(int n, double R, std::span<const double> x);

// sup over sample pairs of |f(s) - f(t)| / |s - t|^alpha with s, t on a
// uniform grid of `resolution` points in [a, b]. Full O(N²) scan.
double exhaustive_holder(const std::function<double(double)>& f, double a, double b, double alpha,
                         int resolution);

// Discrete Laplacian on an integer lattice with spacing h: the (2n+1)-point
// stencil wherever all 2n axis neighbours are present, NaN elsewhere.
std::vector<double> fd_laplacian_reference(int n, double h, std::span<const std::array<int, 3>> lattice,
                                           std::span<const double> values);

// Number of k ∈ Zⁿ with |k|² <= half², by enumeration.
std::size_t ball_lattice_count(int n, int half);

} // namespace jetsolve::oracle
