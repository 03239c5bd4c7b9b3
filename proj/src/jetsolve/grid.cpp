#include "jetsolve/grid.hpp"

#include "jetsolve/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace jetsolve {

std::vector<MultiIndex> multi_indices(int n, int order) {
    std::vector<MultiIndex> out;
    for (int a = order; a >= 0; --a) {
        if (n == 1) {
            if (a == order) out.push_back({a, 0, 0});
            continue;
        }
        for (int b = order - a; b >= 0; --b) {
            const int c = order - a - b;
            if (n == 2 && c != 0) continue;
            out.push_back({a, b, n == 3 ? c : 0});
        }
    }
    return out;
}

void Stencil::apply(std::span<const double> in, std::span<double> out) const {
    const std::size_t rows = row_start.size() - 1;
    for (std::size_t i = 0; i < rows; ++i) {
        double acc = 0;
        for (std::uint32_t k = row_start[i]; k < row_start[i + 1]; ++k) acc += weight[k] * in[column[k]];
        out[i] = acc;
    }
}

BallGrid BallGrid::build(int n, double radius, int res) {
    if (n != 2 && n != 3) throw ConfigError("grid dimension must be 2 or 3", "n");
    if (!(radius > 0) || !std::isfinite(radius)) throw ConfigError("grid radius must be positive", "R0");
    if (res < 5 || res % 2 == 0) throw ConfigError("res must be odd and at least 5", "res");

    BallGrid g;
    g.n_ = n;
    g.radius_ = radius;
    g.res_ = res;
    g.half_ = (res - 1) / 2;
    g.h_ = 2.0 * radius / (res - 1);
    g.cell_volume_ = std::pow(g.h_, n);

    const int half = g.half_;
    const int half2 = half * half;
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(res);
    g.lookup_.assign(total, -1);

    const int kz_lo = n == 3 ? -half : 0;
    const int kz_hi = n == 3 ? half : 0;
    for (int kx = -half; kx <= half; ++kx) {
        for (int ky = -half; ky <= half; ++ky) {
            for (int kz = kz_lo; kz <= kz_hi; ++kz) {
                // Exact integer test: x = k·h and R = half·h.
                if (kx * kx + ky * ky + kz * kz > half2) continue;
                std::array<int, 3> k{kx, ky, kz};
                std::size_t flat = 0;
                for (int d = 0; d < n; ++d) flat = flat * res + static_cast<std::size_t>(k[d] + half);
                g.lookup_[flat] = static_cast<std::int32_t>(g.lattice_.size());
                if (kx == 0 && ky == 0 && kz == 0) g.origin_ = g.lattice_.size();
                g.lattice_.push_back(k);
                g.nodes_.push_back({kx * g.h_, ky * g.h_, kz * g.h_});
            }
        }
    }

    g.interior_.assign(g.size(), 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (int a = -1; a <= 1 && g.interior_[i]; ++a)
            for (int b = -1; b <= 1 && g.interior_[i]; ++b)
                for (int c = (n == 3 ? -1 : 0); c <= (n == 3 ? 1 : 0); ++c)
                    if (g.neighbor(i, {a, b, c}) < 0) {
                        g.interior_[i] = 0;
                        break;
                    }
    }
    g.build_stencils();
    return g;
}

std::size_t BallGrid::interior_count() const {
    return static_cast<std::size_t>(std::count(interior_.begin(), interior_.end(), 1));
}

std::ptrdiff_t BallGrid::find(const std::array<int, 3>& k) const {
    std::size_t flat = 0;
    for (int d = 0; d < n_; ++d) {
        if (k[d] < -half_ || k[d] > half_) return -1;
        flat = flat * res_ + static_cast<std::size_t>(k[d] + half_);
    }
    for (int d = n_; d < 3; ++d)
        if (k[d] != 0) return -1;
    return lookup_[flat];
}

std::ptrdiff_t BallGrid::neighbor(std::size_t i, const std::array<int, 3>& offset) const {
    const auto& k = lattice_[i];
    return find({k[0] + offset[0], k[1] + offset[1], k[2] + offset[2]});
}

std::size_t BallGrid::slot(const MultiIndex& beta) const {
    for (std::size_t s = 0; s < operator_index_.size(); ++s)
        if (operator_index_[s] == beta) return s;
    throw ConfigError("derivative order |beta| must be 1 or 2");
}

const Stencil& BallGrid::stencil(const MultiIndex& beta) const { return stencils_[slot(beta)]; }

BallGrid::StencilKind BallGrid::stencil_kind(const MultiIndex& beta, std::size_t i) const {
    return kinds_[slot(beta)][i];
}

namespace {

struct Entry {
    std::uint32_t node;
    double weight;
};

// Quadratic least-squares fit over the in-ball nodes of a lattice block around
// node i; returns the weights that reproduce ∂^β of the fitted polynomial at
// node i. Exact for polynomials of degree <= 2.
std::vector<Entry> least_squares_weights(const BallGrid& g, std::size_t i, const MultiIndex& beta) {
    const int n = g.dim();
    std::vector<MultiIndex> basis;
    for (int l = 0; l <= 2; ++l)
        for (const auto& b : multi_indices(n, l)) basis.push_back(b);
    const int m = static_cast<int>(basis.size());

    for (int reach = 2; reach <= 4; ++reach) {
        std::vector<std::uint32_t> nbrs;
        for (int a = -reach; a <= reach; ++a)
            for (int b = -reach; b <= reach; ++b)
                for (int c = (n == 3 ? -reach : 0); c <= (n == 3 ? reach : 0); ++c) {
                    auto j = g.neighbor(i, {a, b, c});
                    if (j >= 0) nbrs.push_back(static_cast<std::uint32_t>(j));
                }
        if (static_cast<int>(nbrs.size()) < m) continue;

        const auto& k0 = g.lattice(i);
        Eigen::MatrixXd A(nbrs.size(), m);
        for (std::size_t r = 0; r < nbrs.size(); ++r) {
            const auto& k = g.lattice(nbrs[r]);
            for (int c = 0; c < m; ++c) {
                double v = 1;
                for (int d = 0; d < n; ++d) v *= std::pow(double(k[d] - k0[d]), basis[c][d]);
                A(r, c) = v;
            }
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        if (qr.rank() < m) continue;

        int target = -1;
        for (int c = 0; c < m; ++c)
            if (basis[c] == beta) target = c;
        // Coefficient of (k - k0)^β is ∂^β f · h^|β| / β!.
        Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(nbrs.size(), nbrs.size()));
        double factorial = 1;
        for (int d = 0; d < n; ++d)
            for (int t = 2; t <= beta[d]; ++t) factorial *= t;
        const double scale = factorial / std::pow(g.spacing(), order(beta));
        std::vector<Entry> out;
        for (std::size_t r = 0; r < nbrs.size(); ++r) {
            const double w = pinv(target, r) * scale;
            if (w != 0) out.push_back({nbrs[r], w});
        }
        return out;
    }
    throw Error("least-squares derivative stencil is rank deficient");
}

} // namespace

void BallGrid::build_stencils() {
    for (int l = 1; l <= 2; ++l)
        for (const auto& b : multi_indices(n_, l)) operator_index_.push_back(b);

    const double h = h_;
    for (const auto& beta : operator_index_) {
        Stencil st;
        std::vector<StencilKind> kinds(size());
        st.row_start.push_back(0);
        int d1 = -1, d2 = -1;
        for (int d = 0; d < n_; ++d) {
            for (int t = 0; t < beta[d]; ++t) (d1 < 0 ? d1 : d2) = d;
        }
        auto at = [&](std::size_t i, int dir, int step, int dir2 = -1, int step2 = 0) {
            std::array<int, 3> off{0, 0, 0};
            off[dir] += step;
            if (dir2 >= 0) off[dir2] += step2;
            return neighbor(i, off);
        };

        for (std::size_t i = 0; i < size(); ++i) {
            std::vector<Entry> row;
            StencilKind kind = StencilKind::Central;
            auto idx = [](std::ptrdiff_t j) { return static_cast<std::uint32_t>(j); };

            if (order(beta) == 1) {
                const auto p1 = at(i, d1, 1), m1 = at(i, d1, -1);
                const auto p2 = at(i, d1, 2), m2 = at(i, d1, -2);
                if (p1 >= 0 && m1 >= 0) {
                    row = {{idx(p1), 0.5 / h}, {idx(m1), -0.5 / h}};
                } else if (p1 >= 0 && p2 >= 0) {
                    kind = StencilKind::OneSided;
                    row = {{static_cast<std::uint32_t>(i), -1.5 / h}, {idx(p1), 2.0 / h}, {idx(p2), -0.5 / h}};
                } else if (m1 >= 0 && m2 >= 0) {
                    kind = StencilKind::OneSided;
                    row = {{static_cast<std::uint32_t>(i), 1.5 / h}, {idx(m1), -2.0 / h}, {idx(m2), 0.5 / h}};
                } else {
                    kind = StencilKind::LeastSquares;
                    row = least_squares_weights(*this, i, beta);
                }
            } else if (d2 == d1) {
                const double h2 = h * h;
                const auto p1 = at(i, d1, 1), m1 = at(i, d1, -1);
                const auto p2 = at(i, d1, 2), m2 = at(i, d1, -2);
                const auto p3 = at(i, d1, 3), m3 = at(i, d1, -3);
                const auto self = static_cast<std::uint32_t>(i);
                if (p1 >= 0 && m1 >= 0) {
                    row = {{idx(p1), 1 / h2}, {self, -2 / h2}, {idx(m1), 1 / h2}};
                } else if (p1 >= 0 && p2 >= 0 && p3 >= 0) {
                    kind = StencilKind::OneSided;
                    row = {{self, 2 / h2}, {idx(p1), -5 / h2}, {idx(p2), 4 / h2}, {idx(p3), -1 / h2}};
                } else if (m1 >= 0 && m2 >= 0 && m3 >= 0) {
                    kind = StencilKind::OneSided;
                    row = {{self, 2 / h2}, {idx(m1), -5 / h2}, {idx(m2), 4 / h2}, {idx(m3), -1 / h2}};
                } else if (p1 >= 0 && p2 >= 0) {
                    kind = StencilKind::OneSided;
                    row = {{self, 1 / h2}, {idx(p1), -2 / h2}, {idx(p2), 1 / h2}};
                } else if (m1 >= 0 && m2 >= 0) {
                    kind = StencilKind::OneSided;
                    row = {{self, 1 / h2}, {idx(m1), -2 / h2}, {idx(m2), 1 / h2}};
                } else {
                    kind = StencilKind::LeastSquares;
                    row = least_squares_weights(*this, i, beta);
                }
            } else {
                const double w = 0.25 / (h * h);
                const auto pp = at(i, d1, 1, d2, 1), pm = at(i, d1, 1, d2, -1);
                const auto mp = at(i, d1, -1, d2, 1), mm = at(i, d1, -1, d2, -1);
                if (pp >= 0 && pm >= 0 && mp >= 0 && mm >= 0) {
                    row = {{idx(pp), w}, {idx(pm), -w}, {idx(mp), -w}, {idx(mm), w}};
                } else {
                    kind = StencilKind::LeastSquares;
                    row = least_squares_weights(*this, i, beta);
                }
            }
            for (const auto& e : row) {
                st.column.push_back(e.node);
                st.weight.push_back(e.weight);
            }
            st.row_start.push_back(static_cast<std::uint32_t>(st.column.size()));
            kinds[i] = kind;
        }
        stencils_.push_back(std::move(st));
        kinds_.push_back(std::move(kinds));
    }
}

// ---------------------------------------------------------------------------

namespace {

double node_distance(const BallGrid& g, std::uint32_t a, std::uint32_t b) {
    const auto& x = g.node(a);
    const auto& y = g.node(b);
    double s = 0;
    for (int d = 0; d < g.dim(); ++d) s += (x[d] - y[d]) * (x[d] - y[d]);
    return std::sqrt(s);
}

} // namespace

PairSet PairSet::from_pairs(const BallGrid& grid,
                            std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs) {
    PairSet ps;
    for (const auto& [a, b] : pairs) {
        if (a >= grid.size() || b >= grid.size()) throw ConfigError("pair index out of range");
        const double d = node_distance(grid, a, b);
        if (d == 0) throw ConfigError("pair with zero separation");
        ps.pairs_.emplace_back(a, b);
        ps.distance_.push_back(d);
    }
    return ps;
}

PairSet PairSet::build(const BallGrid& grid, std::uint64_t seed, std::size_t cap) {
    const auto count = static_cast<std::uint32_t>(grid.size());
    const std::uint64_t all = std::uint64_t(count) * (count - 1) / 2;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;

    if (all <= cap) {
        pairs.reserve(all);
        for (std::uint32_t a = 0; a < count; ++a)
            for (std::uint32_t b = a + 1; b < count; ++b) pairs.emplace_back(a, b);
        PairSet ps = from_pairs(grid, std::move(pairs));
        ps.exhaustive_ = true;
        return ps;
    }

    std::unordered_set<std::uint64_t> seen;
    auto key = [count](std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        return std::uint64_t(a) * count + b;
    };
    auto add = [&](std::uint32_t a, std::uint32_t b) {
        if (a == b) return;
        if (seen.insert(key(a, b)).second) pairs.emplace_back(std::min(a, b), std::max(a, b));
    };

    const auto origin = static_cast<std::uint32_t>(grid.origin());
    for (std::uint32_t a = 0; a < count; ++a) add(a, origin);
    for (std::uint32_t a = 0; a < count; ++a) {
        if (grid.interior(a)) continue;
        const auto& k = grid.lattice(a);
        const auto b = grid.find({-k[0], -k[1], -k[2]});
        if (b >= 0) add(a, static_cast<std::uint32_t>(b));
    }

    std::mt19937_64 rng(seed);
    while (pairs.size() < cap) {
        // Plain modulo reduction keeps the stream identical across standard libraries.
        const auto a = static_cast<std::uint32_t>(rng() % count);
        const auto b = static_cast<std::uint32_t>(rng() % count);
        add(a, b);
    }
    return from_pairs(grid, std::move(pairs));
}

std::vector<double> PairSet::distance_power(double alpha) const {
    std::vector<double> out(distance_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::pow(distance_[k], alpha);
    return out;
}

} // namespace jetsolve
