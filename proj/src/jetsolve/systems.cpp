#include "jetsolve/systems.hpp"

#include "jetsolve/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace jetsolve {

namespace {

// Christoffel symbols of a conformally flat metric h = e^{2σ} δ:
// Γ^k_{ij} = δ_{ki} ∂ⱼσ + δ_{kj} ∂ᵢσ - δ_{ij} ∂ₖσ.
Christoffel conformal_christoffel(const Vector& dsigma) {
    const int m = static_cast<int>(dsigma.size());
    Christoffel G(m, Matrix::Zero(m, m));
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double v = 0;
                if (k == i) v += dsigma[j];
                if (k == j) v += dsigma[i];
                if (i == j) v -= dsigma[k];
                G[k](i, j) = v;
            }
    return G;
}

} // namespace

TargetManifold euclidean_target(int m) {
    TargetManifold t;
    t.name = "euclidean";
    t.dim = m;
    t.metric = [m](const Vector&) { return Matrix(Matrix::Identity(m, m)); };
    t.christoffel = [m](const Vector&) { return Christoffel(m, Matrix::Zero(m, m)); };
    t.flat = true;
    return t;
}

TargetManifold sphere_target() {
    TargetManifold t;
    t.name = "sphere";
    t.dim = 2;
    t.metric = [](const Vector& u) {
        const double s = 2.0 / (1.0 + u.squaredNorm());
        return Matrix(s * s * Matrix::Identity(2, 2));
    };
    // σ = ln 2 - ln(1 + |u|²)
    t.christoffel = [](const Vector& u) {
        return conformal_christoffel(-2.0 * u / (1.0 + u.squaredNorm()));
    };
    return t;
}

TargetManifold hyperbolic_target() {
    TargetManifold t;
    t.name = "hyperbolic";
    t.dim = 2;
    t.metric = [](const Vector& u) {
        const double s = 2.0 / (1.0 - u.squaredNorm());
        return Matrix(s * s * Matrix::Identity(2, 2));
    };
    // σ = ln 2 - ln(1 - |u|²)
    t.christoffel = [](const Vector& u) {
        return conformal_christoffel(2.0 * u / (1.0 - u.squaredNorm()));
    };
    t.chart_radius = 1.0;
    return t;
}

TargetManifold target_by_name(const std::string& name, int m) {
    if (name == "euclidean") return euclidean_target(m);
    if (name == "sphere") return sphere_target();
    if (name == "hyperbolic") return hyperbolic_target();
    throw ConfigError("unknown target manifold '" + name + "'", "system.params.target");
}

SystemDef poisson_system(int n, int m, std::function<Vector(const Vector& x)> g) {
    SystemDef s;
    s.name = "poisson";
    s.n = n;
    s.m = m;
    s.a = [n](const Vector&, const Vector&, const Matrix&) { return Matrix(Matrix::Identity(n, n)); };
    s.phi = [g = std::move(g)](const Vector& x, const Vector&, const Matrix&) { return g(x); };
    s.lambda = 1;
    return s;
}

SystemDef poisson_constant_system(int n, const Vector& c) {
    return poisson_system(n, static_cast<int>(c.size()), [c](const Vector&) { return c; });
}

SystemDef minimal_surface_system(int n, double q_max) {
    SystemDef s;
    s.name = "minimal_surface";
    s.n = n;
    s.m = 1;
    s.a = [n](const Vector&, const Vector&, const Matrix& q) {
        const Vector g = q.row(0).transpose();
        return Matrix(Matrix::Identity(n, n) - g * g.transpose() / (1.0 + g.squaredNorm()));
    };
    s.phi = [](const Vector&, const Vector&, const Matrix&) { return Vector(Vector::Zero(1)); };
    s.lambda = 1.0 / (1.0 + q_max * q_max);
    s.box = {1.0, 1.0, q_max};
    return s;
}

SystemDef prescribed_mean_curvature_system(int n, std::function<double(const Vector& x, double z)> H,
                                           double q_max) {
    SystemDef s = minimal_surface_system(n, q_max);
    s.name = "prescribed_mean_curvature";
    s.phi = [H = std::move(H)](const Vector& x, const Vector& p, const Matrix&) {
        Vector v(1);
        v[0] = H(x, p[0]);
        return v;
    };
    return s;
}

SystemDef harmonic_map_system(int n, const TargetManifold& target,
                              std::function<Matrix(const Vector& x)> source_inverse_metric) {
    const int m = target.dim;
    if (!source_inverse_metric)
        source_inverse_metric = [n](const Vector&) { return Matrix(Matrix::Identity(n, n)); };

    // The source metric must be SPD where the solver will evaluate it.
    for (double r : {0.0, 0.5, 1.0}) {
        for (int d = 0; d < n; ++d) {
            Vector x = Vector::Zero(n);
            x[d] = r;
            const Matrix g = source_inverse_metric(x);
            Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
            if (g.rows() != n || eig.eigenvalues().minCoeff() <= 0)
                throw EllipticityError("source metric is not positive definite");
        }
    }

    SystemDef s;
    s.name = "harmonic_map:" + target.name;
    s.n = n;
    s.m = m;
    s.a = [ginv = source_inverse_metric](const Vector& x, const Vector&, const Matrix&) { return ginv(x); };
    s.phi = [ginv = source_inverse_metric, G = target.christoffel, m, n](const Vector& x, const Vector& p,
                                                                           const Matrix& q) {
        const Matrix gi = ginv(x);
        const Christoffel C = G(p);
        // q is m×n: q(β, i) = ∂ᵢu^β. Σᵢⱼ g^{ij} q(β,i) q(γ,j) = (q g⁻¹ qᵀ)(β,γ).
        const Matrix Q = q * gi * q.transpose();
        Vector out(m);
        for (int a = 0; a < m; ++a) out[a] = -(C[a].cwiseProduct(Q)).sum();
        (void)n;
        return out;
    };
    s.lambda = 1;
    if (n > 0) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(source_inverse_metric(Vector::Zero(n)));
        s.lambda = eig.eigenvalues().minCoeff();
    }
    const double chart = target.chart_radius;
    s.box = {1.0, std::isfinite(chart) ? 0.9 * chart : 2.0, 2.0};
    s.target_radius = chart;
    return s;
}

// ---------------------------------------------------------------------------

namespace {

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

Vector json_vector(const nlohmann::json& j, int m, const std::string& key) {
    Vector v(m);
    if (j.is_number()) {
        v.setConstant(j.get<double>());
        return v;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != m)
        throw ConfigError(key + " must be a number or an array of m numbers", key);
    for (int k = 0; k < m; ++k) v[k] = j[k].get<double>();
    return v;
}

std::map<std::string, SystemFactory>& registry() {
    static std::map<std::string, SystemFactory> r = [] {
        std::map<std::string, SystemFactory> b;
        b["laplace"] = [](int n, int m, const nlohmann::json&) {
            auto s = poisson_constant_system(n, Vector::Zero(m));
            s.name = "laplace";
            return s;
        };
        b["poisson"] = [](int n, int m, const nlohmann::json& p) {
            const auto c = json_vector(p.value("constant", nlohmann::json(0.0)), m, "system.params.constant");
            return poisson_constant_system(n, c);
        };
        b["minimal_surface"] = [](int n, int m, const nlohmann::json& p) {
            if (m != 1) throw ConfigError("minimal_surface requires m = 1", "m");
            return minimal_surface_system(n, p.value("q_max", 2.0));
        };
        b["prescribed_mean_curvature"] = [](int n, int m, const nlohmann::json& p) {
            if (m != 1) throw ConfigError("prescribed_mean_curvature requires m = 1", "m");
            const double H = p.value("H", 0.0);
            return prescribed_mean_curvature_system(n, [H](const Vector&, double) { return H; },
                                                    p.value("q_max", 2.0));
        };
        b["harmonic_map"] = [](int n, int m, const nlohmann::json& p) {
            const auto target = target_by_name(p.value("target", std::string("sphere")), m);
            if (target.dim != m) throw ConfigError("m must equal the target dimension", "m");
            return harmonic_map_system(n, target);
        };
        return b;
    }();
    return r;
}

} // namespace

void register_system(const std::string& name, SystemFactory factory) {
    std::lock_guard lock(registry_mutex());
    registry()[name] = std::move(factory);
}

bool has_system(const std::string& name) {
    std::lock_guard lock(registry_mutex());
    return registry().count(name) != 0;
}

std::vector<std::string> system_names() {
    std::lock_guard lock(registry_mutex());
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

SystemDef make_system(const std::string& name, int n, int m, const nlohmann::json& params) {
    SystemFactory f;
    {
        std::lock_guard lock(registry_mutex());
        auto it = registry().find(name);
        if (it == registry().end()) throw ConfigError("unknown system '" + name + "'", "system.name");
        f = it->second;
    }
    if (!params.is_null() && !params.is_object()) throw ConfigError("system parameters must be an object", "system.params");
    try {
        return f(n, m, params.is_null() ? nlohmann::json::object() : params);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad system parameter: ") + e.what(), "system.params");
    }
}

} // namespace jetsolve
