#pragma once

#include "jetsolve/picard.hpp"
#include "jetsolve/systems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jetsolve {

struct KobayashiQuery {
    TargetManifold target;
    Vector p;
    Vector X;
    double R_start = 0.25;
    double growth = 1.5;
    int max_steps = 10;
    double conformal_tol = 1e-8;
    SolveConfig solve;  // R0 and R_min are overwritten per probe
};

// Y with h(p)(Y,Y) = h(p)(X,X) and h(p)(X,Y) = 0, from metric Gram-Schmidt on
// the coordinate vector least parallel to X. Throws ConfigError for m = 1 or X = 0.
Vector orthogonal_partner(const TargetManifold& target, const Vector& p, const Vector& X);

// |h(uₓ,uₓ) - h(u_y,u_y)| + |h(uₓ,u_y)| with h evaluated at p.
double conformality_defect(const TargetManifold& target, const Vector& p, const Vector& ux, const Vector& uy);

struct KobayashiStep {
    double R = 0;
    bool success = false;
    std::string outcome;
    double jet_defect = 0;     // defect of the prescribed jet [X | Y]
    double solved_defect = 0;  // defect of Du(0) of the computed map
    double residual = 0;
    double target_sup = 0;
    int iterations = 0;
};

// Solves the harmonic map problem on D_R with u(0) = p, Du(0) = [X | Y] and no
// radius halving. A jet that is not conformal is rejected before solving.
KobayashiStep evaluate_candidate(const TargetManifold& target, const Vector& p, const Vector& X, const Vector& Y,
                                 double R, const SolveConfig& solve, double conformal_tol = 1e-8);

enum class KobayashiStatus { ZeroVector, LinearCertificate, UpperBound, Inconclusive };
const char* to_string(KobayashiStatus s);

struct KobayashiEstimate {
    KobayashiStatus status = KobayashiStatus::Inconclusive;
    std::optional<double> upper_bound;  // absent when inconclusive
    double R_best = 0;
    Vector Y;
    std::vector<KobayashiStep> steps;
    // Every success is preceded only by successes in the increasing schedule.
    bool monotone = true;
    std::string note;
};

// Upper bound 1/R_best on K(p, X) over a geometric radius schedule. Values are
// upper bounds only; the infimum over all maps is not computed.
KobayashiEstimate estimate_kobayashi(const KobayashiQuery& query);

} // namespace jetsolve
