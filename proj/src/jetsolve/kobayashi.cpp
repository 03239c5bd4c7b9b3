#include "jetsolve/kobayashi.hpp"

#include "jetsolve/errors.hpp"

#include <cmath>

namespace jetsolve {

namespace {

double inner(const Matrix& h, const Vector& a, const Vector& b) { return a.dot(h * b); }

void check_point(const TargetManifold& target, const Vector& p, const Vector& X) {
    if (p.size() != target.dim || X.size() != target.dim)
        throw ConfigError("p and X must have the target dimension", "kobayashi.p");
    if (!p.allFinite()) throw ConfigError("p must be finite", "kobayashi.p");
    if (!X.allFinite()) throw ConfigError("X must be finite", "kobayashi.X");
    if (!(p.norm() < target.chart_radius)) throw ConfigError("p lies outside the chart", "kobayashi.p");
}

} // namespace

Vector orthogonal_partner(const TargetManifold& target, const Vector& p, const Vector& X) {
    check_point(target, p, X);
    if (target.dim < 2) throw ConfigError("a one-dimensional target has no orthogonal partner", "target");
    if (X.norm() == 0) throw ConfigError("X = 0 has no orthogonal partner", "kobayashi.X");
    const Matrix h = target.metric(p);
    const double xx = inner(h, X, X);

    // Coordinate vector with the smallest normalised overlap with X.
    int best = 0;
    double best_overlap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < target.dim; ++i) {
        const Vector e = Vector::Unit(target.dim, i);
        const double overlap = std::abs(inner(h, X, e)) / std::sqrt(inner(h, e, e));
        if (overlap < best_overlap) {
            best_overlap = overlap;
            best = i;
        }
    }
    const Vector e = Vector::Unit(target.dim, best);
    Vector Y = e - (inner(h, X, e) / xx) * X;
    return Y * std::sqrt(xx / inner(h, Y, Y));
}

double conformality_defect(const TargetManifold& target, const Vector& p, const Vector& ux, const Vector& uy) {
    const Matrix h = target.metric(p);
    return std::abs(inner(h, ux, ux) - inner(h, uy, uy)) + std::abs(inner(h, ux, uy));
}

KobayashiStep evaluate_candidate(const TargetManifold& target, const Vector& p, const Vector& X, const Vector& Y,
                                 double R, const SolveConfig& solve, double conformal_tol) {
    check_point(target, p, X);
    KobayashiStep step;
    step.R = R;
    step.jet_defect = conformality_defect(target, p, X, Y);
    if (!(step.jet_defect <= conformal_tol)) {
        step.outcome = "u is not conformal at 0";
        return step;
    }

    SolveConfig cfg = solve;
    cfg.R0 = R;
    cfg.R_min = 0.75 * R;
    JetSpec jet{p, Matrix(target.dim, 2)};
    jet.c1.col(0) = X;
    jet.c1.col(1) = Y;
    const SystemSolve s = solve_system(harmonic_map_system(2, target), jet, cfg);
    const auto& rep = s.report;
    step.iterations = rep.iterations;
    if (rep.status != SolveStatus::Converged) {
        step.outcome = rep.attempts.empty() ? std::string(to_string(rep.status)) : rep.attempts.back().outcome;
        return step;
    }
    step.residual = rep.residual.sup_residual;
    step.target_sup = s.target_sup;
    step.solved_defect = conformality_defect(target, s.u0, s.du0.col(0), s.du0.col(1));
    step.success = step.solved_defect <= conformal_tol;
    step.outcome = step.success ? "converged" : "solved map not conformal at 0";
    return step;
}

const char* to_string(KobayashiStatus s) {
    switch (s) {
    case KobayashiStatus::ZeroVector: return "zero_vector";
    case KobayashiStatus::LinearCertificate: return "linear_certificate";
    case KobayashiStatus::UpperBound: return "upper_bound";
    case KobayashiStatus::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

KobayashiEstimate estimate_kobayashi(const KobayashiQuery& q) {
    check_point(q.target, q.p, q.X);
    if (!(q.R_start > 0)) throw ConfigError("R_start must be positive", "kobayashi.R_start");
    if (!(q.growth > 1)) throw ConfigError("growth must exceed 1", "kobayashi.growth");
    if (q.max_steps < 1) throw ConfigError("max_steps must be at least 1", "kobayashi.max_steps");
    if (!(q.conformal_tol > 0)) throw ConfigError("conformal_tol must be positive", "kobayashi.conformal_tol");

    KobayashiEstimate est;
    if (q.X.norm() == 0) {
        est.status = KobayashiStatus::ZeroVector;
        est.upper_bound = 0.0;
        est.note = "K(p, 0) = 0 by definition";
        return est;
    }
    est.Y = orthogonal_partner(q.target, q.p, q.X);

    if (q.target.flat && std::isinf(q.target.chart_radius)) {
        // u = p + xX + yY is harmonic and conformal on every disk; confirm on one.
        const KobayashiStep step = evaluate_candidate(q.target, q.p, q.X, est.Y, q.R_start, q.solve, q.conformal_tol);
        est.steps.push_back(step);
        if (step.success) {
            est.status = KobayashiStatus::LinearCertificate;
            est.upper_bound = 0.0;
            est.R_best = std::numeric_limits<double>::infinity();
            est.note = "linear map is harmonic and conformal for every R";
            return est;
        }
    }

    bool failed = false;
    double R = q.R_start;
    for (int k = 0; k < q.max_steps; ++k, R *= q.growth) {
        const KobayashiStep step = evaluate_candidate(q.target, q.p, q.X, est.Y, R, q.solve, q.conformal_tol);
        est.steps.push_back(step);
        if (step.success) {
            if (failed) est.monotone = false;
            est.R_best = std::max(est.R_best, R);
        } else {
            failed = true;
        }
    }
    if (est.R_best > 0) {
        est.status = KobayashiStatus::UpperBound;
        est.upper_bound = 1 / est.R_best;
        est.note = "upper bound only: 1/R for the largest radius with a conformal harmonic map";
    } else {
        est.status = KobayashiStatus::Inconclusive;
        est.note = "no scheduled radius produced a map; this is a solver failure, not K = infinity";
    }
    return est;
}

} // namespace jetsolve
