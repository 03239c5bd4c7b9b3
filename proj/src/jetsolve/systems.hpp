#pragma once

#include "jetsolve/reduce.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace jetsolve {

// Christoffel symbols Γ^α_{βγ}(u) stored as gamma[α](β, γ).
using Christoffel = std::vector<Matrix>;

// A Riemannian target given in one chart. The chart domain is the open ball of
// radius chart_radius (infinite when the chart covers all of Rᵐ).
struct TargetManifold {
    std::string name;
    int dim = 2;
    std::function<Matrix(const Vector& u)> metric;
    std::function<Christoffel(const Vector& u)> christoffel;
    double chart_radius = std::numeric_limits<double>::infinity();
    // Christoffel symbols vanish identically (flat chart).
    bool flat = false;
};

TargetManifold euclidean_target(int m);
// Unit sphere in the stereographic chart: h = 4/(1+|u|²)² δ.
TargetManifold sphere_target();
// Hyperbolic plane in the Poincaré disk chart: h = 4/(1-|u|²)² δ, |u| < 1.
TargetManifold hyperbolic_target();

TargetManifold target_by_name(const std::string& name, int m = 2);

// a = I, φ = g(x).
SystemDef poisson_system(int n, int m, std::function<Vector(const Vector& x)> g);
SystemDef poisson_constant_system(int n, const Vector& c);

// a^{ij} = δᵢⱼ - qᵢqⱼ/(1+|q|²), φ = 0. Ellipticity constant 1/(1+q_max²) on
// |q| <= q_max.
SystemDef minimal_surface_system(int n, double q_max = 2.0);

// Same leading part, φ = H(x, u).
SystemDef prescribed_mean_curvature_system(int n, std::function<double(const Vector& x, double z)> H,
                                           double q_max = 2.0);

// a^{ij} = g^{ij}(x), φ^α = -Σ g^{ij} Γ^α_{βγ}(u) ∂ᵢu^β ∂ⱼu^γ.
// An empty source metric means the Euclidean g^{ij} = δᵢⱼ.
SystemDef harmonic_map_system(int n, const TargetManifold& target,
                              std::function<Matrix(const Vector& x)> source_inverse_metric = {});

// Builds a SystemDef from a name and JSON parameters.
using SystemFactory = std::function<SystemDef(int n, int m, const nlohmann::json& params)>;

void register_system(const std::string& name, SystemFactory factory);
bool has_system(const std::string& name);
std::vector<std::string> system_names();
SystemDef make_system(const std::string& name, int n, int m, const nlohmann::json& params);

} // namespace jetsolve
