#include "jetsolve/reduce.hpp"

#include "jetsolve/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace jetsolve {

void validate_jet(const SystemDef& system, const JetSpec& jet) {
    if (jet.c0.size() != system.m) throw ConfigError("jet c0 must have m entries", "jet.c0");
    if (jet.c1.rows() != system.m || jet.c1.cols() != system.n)
        throw ConfigError("jet c1 must be an m x n array", "jet.c1");
    if (!jet.c0.allFinite() || !jet.c1.allFinite()) throw ConfigError("jet must be finite", "jet");
    if (!(jet.c0.norm() < system.target_radius))
        throw ConfigError("jet value c0 lies outside the target ball", "jet.c0");
}

SystemDef shift_jet(const SystemDef& system, const JetSpec& jet) {
    validate_jet(system, jet);
    if (jet.c0.isZero(0) && jet.c1.isZero(0)) return system;

    SystemDef out = system;
    out.name = system.name;
    const Vector c0 = jet.c0;
    const Matrix c1 = jet.c1;
    auto a = system.a;
    auto phi = system.phi;
    out.a = [a, c0, c1](const Vector& x, const Vector& p, const Matrix& q) {
        return a(x, p + c0 + c1 * x, q + c1);
    };
    out.phi = [phi, c0, c1](const Vector& x, const Vector& p, const Matrix& q) {
        return phi(x, p + c0 + c1 * x, q + c1);
    };
    return out;
}

PoissonSystem diagonalize(const SystemDef& system, const JetSpec& jet) {
    const int n = system.n;
    const int m = system.m;
    const Matrix A0 = system.a(Vector::Zero(n), Vector::Zero(m), Matrix::Zero(m, n));
    if (A0.rows() != n || A0.cols() != n || !A0.allFinite())
        throw EllipticityError("a(0,0,0) is not a finite n x n matrix");
    if ((A0 - A0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A0.cwiseAbs().maxCoeff()))
        throw EllipticityError("a(0,0,0) is not symmetric");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(A0);
    const Vector ev = eig.eigenvalues();
    if (ev.minCoeff() <= 0) {
        std::ostringstream msg;
        msg << "a(0,0,0) is not positive definite; eigenvalues:";
        for (int i = 0; i < n; ++i) msg << ' ' << ev[i];
        throw EllipticityError(msg.str());
    }
    const Matrix V = eig.eigenvectors();
    const Matrix P = V * ev.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
    const Matrix P_inv = V * ev.cwiseSqrt().asDiagonal() * V.transpose();

    PoissonSystem ps;
    ps.n = n;
    ps.m = m;
    ps.P = P;
    ps.P_inv = P_inv;
    ps.A0 = A0;
    ps.source = std::make_shared<SystemDef>(system);
    ps.jet = jet.c0.size() == 0 ? JetSpec::zero(n, m) : jet;
    ps.target_radius = system.target_radius;

    auto a = system.a;
    auto phi = system.phi;
    ps.psi = [phi, P, P_inv](const Vector& xt, const Vector& p, const Matrix& qt) {
        return phi(P_inv * xt, p, qt * P);
    };
    ps.b = [a, A0, P, P_inv](const Vector& xt, const Vector& p, const Matrix& qt) {
        return Matrix(P * (A0 - a(P_inv * xt, p, qt * P)) * P.transpose());
    };
    return ps;
}

namespace {

// Uniform point in the closed ball of radius r in R^d.
Vector sample_ball(std::mt19937_64& rng, int d, double r) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = normal(rng);
    const double len = v.norm();
    if (len == 0) return Vector::Zero(d);
    return v * (r * std::pow(unit(rng), 1.0 / d) / len);
}

} // namespace

EllipticityReport check_ellipticity(const SystemDef& system, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    EllipticityReport rep;
    const int n = system.n;
    const int m = system.m;
    for (std::size_t s = 0; s < samples; ++s) {
        const Vector x = sample_ball(rng, n, system.box.x_max);
        const Vector p = sample_ball(rng, m, system.box.p_max);
        const Vector qv = sample_ball(rng, m * n, system.box.q_max);
        const Matrix q = Eigen::Map<const Matrix>(qv.data(), m, n);
        Vector xi = sample_ball(rng, n, 1.0);
        if (xi.norm() == 0) xi = Vector::Unit(n, 0);
        const Matrix a = system.a(x, p, q);
        const double ratio = xi.dot(a * xi) / xi.squaredNorm();
        ++rep.samples;
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        if (!(ratio >= system.lambda * (1 - 1e-12))) rep.ok = false;
    }
    return rep;
}

} // namespace jetsolve
