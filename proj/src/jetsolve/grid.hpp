#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace jetsolve {

// Coordinates in R^n, n <= 3. Unused trailing entries are zero.
using Point = std::array<double, 3>;

// Derivative multi-index β = (β₁, β₂, β₃); entries past the dimension are zero.
using MultiIndex = std::array<int, 3>;

inline int order(const MultiIndex& beta) { return beta[0] + beta[1] + beta[2]; }

// All β with |β| = order in dimension n, in lexicographically descending order
// (so (2,0) precedes (1,1) precedes (0,2)).
std::vector<MultiIndex> multi_indices(int n, int order);

inline MultiIndex unit_index(int i) {
    MultiIndex b{0, 0, 0};
    b[i] = 1;
    return b;
}

inline MultiIndex pair_index(int i, int j) {
    MultiIndex b{0, 0, 0};
    b[i] += 1;
    b[j] += 1;
    return b;
}

// Sparse linear operator on node values; row i holds the weights that produce
// the derivative at node i.
struct Stencil {
    std::vector<std::uint32_t> row_start;
    std::vector<std::uint32_t> column;
    std::vector<double> weight;

    void apply(std::span<const double> in, std::span<double> out) const;
};

// Cartesian lattice of spacing h = 2R/(res-1) clipped to the closed ball B_R.
// res is odd, so the origin and the 2n axis points ±R·eᵢ are nodes.
class BallGrid {
public:
    static BallGrid build(int n, double radius, int res);

    int dim() const { return n_; }
    double radius() const { return radius_; }
    int res() const { return res_; }
    double spacing() const { return h_; }
    double cell_volume() const { return cell_volume_; }
    std::size_t size() const { return lattice_.size(); }
    std::size_t origin() const { return origin_; }

    const Point& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Point>& nodes() const { return nodes_; }
    const std::array<int, 3>& lattice(std::size_t i) const { return lattice_[i]; }

    // All 3ⁿ lattice neighbours present, so every central stencil fits.
    bool interior(std::size_t i) const { return interior_[i] != 0; }
    std::size_t interior_count() const;

    // Node index at lattice coordinates k, or -1 when k is outside the ball.
    std::ptrdiff_t find(const std::array<int, 3>& k) const;
    std::ptrdiff_t neighbor(std::size_t i, const std::array<int, 3>& offset) const;

    // Derivative operator for 1 <= |β| <= 2.
    const Stencil& stencil(const MultiIndex& beta) const;

    // How the derivative at node i was formed for operator β.
    enum class StencilKind : std::uint8_t { Central, OneSided, LeastSquares };
    StencilKind stencil_kind(const MultiIndex& beta, std::size_t i) const;

private:
    BallGrid() = default;
    std::size_t slot(const MultiIndex& beta) const;
    void build_stencils();

    int n_ = 0;
    double radius_ = 0;
    int res_ = 0;
    int half_ = 0;
    double h_ = 0;
    double cell_volume_ = 0;
    std::size_t origin_ = 0;
    std::vector<Point> nodes_;
    std::vector<std::array<int, 3>> lattice_;
    std::vector<std::uint8_t> interior_;
    std::vector<std::int32_t> lookup_;
    std::vector<MultiIndex> operator_index_;
    std::vector<Stencil> stencils_;
    std::vector<std::vector<StencilKind>> kinds_;
};

// Node index pairs over which discrete Hölder quotients are maximised.
// Always contains every (node, origin) pair and every antipodal pair (x, -x)
// of non-interior nodes; the rest are drawn from a seeded mt19937_64 stream up
// to `cap`. When all N(N-1)/2 pairs fit under the cap the set is exhaustive.
// With a fixed seed a smaller cap yields a prefix of a larger one.
class PairSet {
public:
    static constexpr std::uint64_t kDefaultSeed = 20240611;
    static constexpr std::size_t kDefaultCap = 200000;

    static PairSet build(const BallGrid& grid, std::uint64_t seed = kDefaultSeed,
                         std::size_t cap = kDefaultCap);
    static PairSet from_pairs(const BallGrid& grid,
                              std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs);

    std::size_t size() const { return pairs_.size(); }
    bool exhaustive() const { return exhaustive_; }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs() const { return pairs_; }
    double distance(std::size_t k) const { return distance_[k]; }

    // |x - x'|^alpha for every pair.
    std::vector<double> distance_power(double alpha) const;

private:
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
    std::vector<double> distance_;
    bool exhaustive_ = false;
};

} // namespace jetsolve
