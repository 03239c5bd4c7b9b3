#include "oracle/oracle.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace jetsolve::oracle {

double uniform_ball_potential(int n, double R, std::span<const double> x) {
    if (n != 2 && n != 3) throw std::domain_error("uniform_ball_potential: n must be 2 or 3");
    if (static_cast<int>(x.size()) < n) throw std::domain_error("uniform_ball_potential: x too short");
    double r2 = 0;
    for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
    if (std::sqrt(r2) > R * (1 + 1e-12)) throw std::domain_error("uniform_ball_potential: |x| > R");
    if (n == 3) return R * R / 2 - r2 / 6;
    return R * R * (1 - 2 * std::log(R)) / 4 - r2 / 4;
}

double exhaustive_holder(const std::function<double(double)>& f, double a, double b, double alpha,
                         int resolution) {
    if (resolution < 2) throw std::domain_error("exhaustive_holder: resolution must be at least 2");
    std::vector<double> t(resolution), v(resolution);
    for (int i = 0; i < resolution; ++i) {
        t[i] = a + (b - a) * i / (resolution - 1);
        v[i] = f(t[i]);
    }
    double best = 0;
    for (int i = 0; i < resolution; ++i)
        for (int j = i + 1; j < resolution; ++j)
            best = std::max(best, std::abs(v[i] - v[j]) / std::pow(std::abs(t[i] - t[j]), alpha));
    return best;
}

std::vector<double> fd_laplacian_reference(int n, double h, std::span<const std::array<int, 3>> lattice,
                                           std::span<const double> values) {
    std::map<std::array<int, 3>, double> at;
    for (std::size_t i = 0; i < lattice.size(); ++i) at[lattice[i]] = values[i];
    std::vector<double> out(lattice.size(), std::nan(""));
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        double sum = 0;
        bool complete = true;
        for (int d = n - 1; d >= 0 && complete; --d) {
            auto lo = lattice[i];
            auto hi = lattice[i];
            --lo[d];
            ++hi[d];
            const auto a = at.find(lo);
            const auto b = at.find(hi);
            if (a == at.end() || b == at.end()) {
                complete = false;
                break;
            }
            sum += (a->second - values[i]) + (b->second - values[i]);
        }
        if (complete) out[i] = sum / (h * h);
    }
    return out;
}

std::size_t ball_lattice_count(int n, int half) {
    std::size_t count = 0;
    const int zr = n == 3 ? half : 0;
    for (int i = -half; i <= half; ++i)
        for (int j = -half; j <= half; ++j)
            for (int k = -zr; k <= zr; ++k)
                if (i * i + j * j + k * k <= half * half) ++count;
    return count;
}

} // namespace jetsolve::oracle
