#include "jetsolve/picard.hpp"

#include "jetsolve/errors.hpp"
#include "jetsolve/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace jetsolve {

HarmonicPolynomial::HarmonicPolynomial(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
    double scale = 0;
    std::map<MultiIndex, double> lap;
    for (const auto& t : terms_) {
        for (int d = 0; d < 3; ++d) {
            if (t.exponent[d] < 0) throw ConfigError("harmonic seed exponents must be non-negative", "harmonic_seed");
            if (d >= n && t.exponent[d] != 0)
                throw ConfigError("harmonic seed uses a coordinate beyond n", "harmonic_seed");
        }
        if (order(t.exponent) > 3) throw ConfigError("harmonic seed degree must be at most 3", "harmonic_seed");
        if (!std::isfinite(t.coef)) throw ConfigError("harmonic seed coefficient is not finite", "harmonic_seed");
        scale = std::max(scale, std::abs(t.coef));
        for (int d = 0; d < n; ++d) {
            const int e = t.exponent[d];
            if (e < 2) continue;
            MultiIndex r = t.exponent;
            r[d] -= 2;
            lap[r] += t.coef * e * (e - 1);
        }
    }
    for (const auto& [mono, c] : lap)
        if (std::abs(c) > 1e-12 * std::max(1.0, scale))
            throw ConfigError("harmonic seed is not harmonic", "harmonic_seed");
}

double HarmonicPolynomial::derivative(const Point& x, const MultiIndex& beta) const {
    double total = 0;
    for (const auto& t : terms_) {
        double v = t.coef;
        for (int d = 0; d < 3 && v != 0; ++d) {
            const int e = t.exponent[d];
            const int b = beta[d];
            if (b > e) {
                v = 0;
                break;
            }
            for (int k = 0; k < b; ++k) v *= e - k;
            for (int k = 0; k < e - b; ++k) v *= x[d];
        }
        total += v;
    }
    return total;
}

void SolveConfig::validate(int n, int m) const {
    if (!(R0 > 0) || !std::isfinite(R0)) throw ConfigError("R0 must be positive", "R0");
    if (R_min < 0 || !(resolved_R_min() < R0)) throw ConfigError("R_min must lie in (0, R0)", "R_min");
    validate_alpha(alpha);
    if (!(tol > 0)) throw ConfigError("tol must be positive", "tol");
    if (max_iter < 1) throw ConfigError("max_iter must be at least 1", "max_iter");
    if (!(contraction_threshold > 0 && contraction_threshold < 1))
        throw ConfigError("contraction_threshold must lie in (0, 1)", "contraction_threshold");
    if (!(gamma0_floor > 0)) throw ConfigError("gamma0_floor must be positive", "gamma0_floor");
    if (max_gamma_doublings < 0) throw ConfigError("max_gamma_doublings must be non-negative", "max_gamma_doublings");
    if (res < 5 || res % 2 == 0) throw ConfigError("res must be odd and at least 5", "res");
    if (c_samples == 0) throw ConfigError("c_samples must be positive", "c_samples");
    if (n < 2 || n > 3) throw ConfigError("n must be 2 or 3", "n");
    if (!harmonic_seed.empty() && static_cast<int>(harmonic_seed.size()) != m)
        throw ConfigError("harmonic_seed needs one polynomial per component", "harmonic_seed");
}

namespace {

double stencil_at(const Stencil& s, std::span<const double> v, std::size_t row) {
    double acc = 0;
    for (auto k = s.row_start[row]; k < s.row_start[row + 1]; ++k) acc += s.weight[k] * v[s.column[k]];
    return acc;
}

Vector to_vector(const Point& x, int n) {
    Vector v(n);
    for (int d = 0; d < n; ++d) v[d] = x[d];
    return v;
}

std::string describe_node(const Point& x, int n) {
    std::ostringstream os;
    os << '(';
    for (int d = 0; d < n; ++d) os << (d ? ", " : "") << x[d];
    os << ')';
    return os.str();
}

std::vector<double> seed_values(const GridPtr& grid, const HarmonicPolynomial& h) {
    std::vector<double> out(grid->size(), 0);
    if (h.empty()) return out;
    for (std::size_t i = 0; i < grid->size(); ++i) out[i] = h.value(grid->node(i));
    return out;
}

} // namespace

VectorField assemble_Psi(const PoissonSystem& system, const VectorField& f) {
    const int n = system.n;
    const int m = system.m;
    if (f.components() != m) throw ConfigError("iterate has the wrong number of components");
    const auto& grid = f.grid();
    if (grid.dim() != n) throw ConfigError("iterate lives on a grid of the wrong dimension");
    const std::size_t N = grid.size();

    std::vector<DerivativeSet> ds;
    ds.reserve(m);
    for (int k = 0; k < m; ++k) ds.push_back(all_derivatives(f[k]));

    std::vector<std::vector<double>> out(m, std::vector<double>(N, 0));
    parallel_for(N, [&](std::size_t i) {
        const Point& node = grid.node(i);
        const Vector x = to_vector(node, n);
        Vector p(m);
        Matrix q(m, n);
        for (int k = 0; k < m; ++k) {
            p[k] = f[k][i];
            for (int j = 0; j < n; ++j) q(k, j) = ds[k].gradient[j][i];
        }
        Vector psi;
        Matrix b;
        try {
            psi = system.psi(x, p, q);
            b = system.b(x, p, q);
        } catch (const std::exception& e) {
            throw OracleFailure("coefficient oracle failed at x = " + describe_node(node, n) + ": " + e.what());
        }
        if (psi.size() != m || b.rows() != n || b.cols() != n)
            throw OracleFailure("coefficient oracle returned the wrong shape at x = " + describe_node(node, n));
        if (!psi.allFinite() || !b.allFinite())
            throw NonFiniteError("coefficient oracle returned a non-finite value at x = " + describe_node(node, n));
        for (int k = 0; k < m; ++k) {
            double acc = -psi[k];
            for (int a = 0; a < n; ++a)
                for (int c = 0; c < n; ++c) acc -= b(a, c) * ds[k].hessian[a][c][i];
            out[k][i] = acc;
        }
    });

    std::vector<ScalarField> comps;
    for (int k = 0; k < m; ++k) comps.emplace_back(f.grid_ptr(), std::move(out[k]));
    return VectorField(std::move(comps));
}

OmegaResult omega(const PoissonSystem& system, const VectorField& f) {
    OmegaResult r{assemble_Psi(system, f), {}};
    for (const auto& c : r.psi.data()) r.potential.push_back(potential_field(c));
    return r;
}

ScalarField subtract_origin_jet(const ScalarField& w, std::span<const double> offdiag) {
    const auto& g = w.grid();
    const int n = g.dim();
    if (offdiag.size() != static_cast<std::size_t>(n * (n - 1) / 2))
        throw ConfigError("off-diagonal Hessian needs n(n-1)/2 entries");
    const std::size_t o = g.origin();
    const auto v = w.values();
    const double c = v[o];
    double grad[3] = {0, 0, 0};
    for (int j = 0; j < n; ++j) grad[j] = stencil_at(g.stencil(unit_index(j)), v, o);

    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point& x = g.node(i);
        double poly = c;
        for (int j = 0; j < n; ++j) poly += grad[j] * x[j];
        int idx = 0;
        for (int k = 0; k < n; ++k)
            for (int l = k + 1; l < n; ++l) poly += offdiag[idx++] * x[k] * x[l];
        out[i] = v[i] - poly;
    }
    out[o] = 0;
    return ScalarField(w.grid_ptr(), std::move(out));
}

ThetaResult theta(const PoissonSystem& system, const VectorField& f, const HarmonicSeed& seed) {
    const int n = system.n;
    const int m = system.m;
    const auto grid = f.grid_ptr();
    const std::size_t o = grid->origin();
    const Point zero{0, 0, 0};
    VectorField psi = assemble_Psi(system, f);

    std::vector<ScalarField> th;
    std::vector<ScalarField> om;
    for (int k = 0; k < m; ++k) {
        const HarmonicPolynomial empty;
        const HarmonicPolynomial& h = seed.empty() ? empty : seed[k];
        ScalarField w = newtonian_potential(psi[k]);
        om.push_back(w);
        if (!h.empty()) w = w + ScalarField(grid, seed_values(grid, h));
        std::vector<double> offdiag;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                offdiag.push_back(potential_hessian_at(psi[k], o, a, b) + h.derivative(zero, pair_index(a, b)));
        th.push_back(subtract_origin_jet(w, offdiag));
    }
    return {VectorField(std::move(th)), std::move(psi), VectorField(std::move(om))};
}

namespace {

// Uniform point in the closed unit ball of R^d.
Vector unit_ball_sample(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = normal(rng);
    const double len = v.norm();
    const double r = std::pow(unit(rng), 1.0 / d);
    if (len == 0) return Vector::Zero(d);
    return v * (r / len);
}

} // namespace

double estimate_c_r_gamma(const PoissonSystem& system, double R, double gamma, std::size_t samples,
                          std::uint64_t seed) {
    if (samples == 0) throw ConfigError("sample budget must be positive", "c_samples");
    const int n = system.n;
    const int m = system.m;
    std::mt19937_64 rng(seed);
    double best = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const Vector x = unit_ball_sample(rng, n) * R;
        const Vector p = unit_ball_sample(rng, m) * (R * R * gamma);
        const Vector qv = unit_ball_sample(rng, m * n) * (R * gamma);
        const Matrix q = Eigen::Map<const Matrix>(qv.data(), m, n);
        const Matrix b = system.b(x, p, q);
        if (!b.allFinite()) continue;
        best = std::max(best, b.cwiseAbs().maxCoeff());
    }
    return best;
}

double choose_gamma0(const PoissonSystem& system, double c_hat, double seed_norm, double floor) {
    const Vector psi0 = system.psi(Vector::Zero(system.n), Vector::Zero(system.m), Matrix::Zero(system.m, system.n));
    if (!psi0.allFinite()) throw OracleFailure("source oracle is not finite at the origin");
    const double psi_max = psi0.size() ? psi0.cwiseAbs().maxCoeff() : 0.0;
    return std::max(4 * c_hat * psi_max + 2 * seed_norm, floor);
}

namespace {

struct ResidualField {
    std::vector<double> per_node;
    double sup_residual = 0;
    double sup_psi = 0;
};

ResidualField residual_field(const PoissonSystem& system, const VectorField& u) {
    const VectorField psi = assemble_Psi(system, u);
    const auto& g = u.grid();
    ResidualField r;
    r.per_node.assign(g.size(), 0);
    for (int k = 0; k < u.components(); ++k) {
        const ScalarField lap = laplacian(u[k]);
        for (std::size_t i = 0; i < g.size(); ++i) {
            r.sup_psi = std::max(r.sup_psi, std::abs(psi[k][i]));
            if (!g.interior(i)) continue;
            const double res = std::abs(lap[i] + psi[k][i]);
            r.per_node[i] = std::max(r.per_node[i], res);
            r.sup_residual = std::max(r.sup_residual, res);
        }
    }
    return r;
}

double laplacian_consistency(const VectorField& th, const VectorField& psi) {
    const auto& g = th.grid();
    double worst = 0;
    for (int k = 0; k < th.components(); ++k) {
        const ScalarField lap = laplacian(th[k]);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.interior(i)) worst = std::max(worst, std::abs(lap[i] + psi[k][i]));
    }
    return worst;
}

std::pair<double, double> origin_jet(const VectorField& f) {
    const auto& g = f.grid();
    const std::size_t o = g.origin();
    double value = 0;
    double grad = 0;
    for (int k = 0; k < f.components(); ++k) {
        value = std::max(value, std::abs(f[k][o]));
        for (int j = 0; j < g.dim(); ++j)
            grad = std::max(grad, std::abs(stencil_at(g.stencil(unit_index(j)), f[k].values(), o)));
    }
    return {value, grad};
}

} // namespace

ResidualReport residual_check(const PoissonSystem& system, const VectorField& u) {
    const auto r = residual_field(system, u);
    return {r.sup_residual, r.sup_psi};
}

double probe_contraction(const PoissonSystem& system, const VectorField& f, const HarmonicSeed& seed,
                         double alpha, const PairSet& pairs, double scale) {
    const auto grid = f.grid_ptr();
    const int n = system.n;
    const int m = system.m;
    std::vector<std::function<double(const Point&)>> shapes;
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) shapes.push_back([k, l](const Point& x) { return x[k] * x[l]; });
    shapes.push_back([](const Point& x) { return x[0] * x[0] * x[0]; });

    const VectorField base = theta(system, f, seed).theta;
    double worst = 0;
    for (int c = 0; c < m; ++c) {
        for (const auto& shape : shapes) {
            const ScalarField raw = ScalarField::sample(grid, shape);
            const double norm = second_order_norm(raw, alpha, pairs);
            if (norm == 0) continue;
            std::vector<ScalarField> comps;
            for (int k = 0; k < m; ++k) comps.push_back(k == c ? raw * (scale / norm) : ScalarField::zeros(grid));
            const VectorField delta(std::move(comps));
            const VectorField moved = theta(system, f + delta, seed).theta;
            const double dn = second_order_norm(delta, alpha, pairs);
            worst = std::max(worst, second_order_norm(moved - base, alpha, pairs) / dn);
        }
    }
    return worst;
}

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::NoConvergence: return "no_convergence";
    case SolveStatus::IterateEscaped: return "iterate_escaped";
    case SolveStatus::OracleFailure: return "oracle_failure";
    }
    return "unknown";
}

std::optional<double> SolveReport::mean_contraction() const {
    if (contraction_ratios.empty()) return std::nullopt;
    double logsum = 0;
    for (double r : contraction_ratios) {
        if (r <= 0) return 0.0;
        logsum += std::log(r);
    }
    return std::exp(logsum / contraction_ratios.size());
}

namespace {

struct RunResult {
    std::string outcome;  // converged, escaped, contraction_failure, max_iter
    std::optional<VectorField> solution;
    std::vector<IterationRecord> history;
    std::vector<double> ratios;
};

RunResult iterate(const PoissonSystem& system, const GridPtr& grid, const PairSet& pairs, double gamma,
                  const SolveConfig& cfg) {
    RunResult run;
    VectorField f = VectorField::zeros(grid, system.m);
    std::optional<double> prev;
    int above = 0;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        ThetaResult th = [&] {
            try {
                return theta(system, f, cfg.harmonic_seed);
            } catch (const NonFiniteError& e) {
                if (k == 1) throw OracleFailure(e.what());
                throw;
            }
        }();
        IterationRecord rec;
        rec.iteration = k;
        rec.iterate_norm = second_order_norm(th.theta, cfg.alpha, pairs);
        rec.increment_norm = second_order_norm(th.theta - f, cfg.alpha, pairs);
        rec.laplacian_consistency = laplacian_consistency(th.theta, th.psi);
        std::tie(rec.origin_value, rec.origin_gradient) = origin_jet(th.theta);
        if (prev && *prev > 0) rec.ratio = rec.increment_norm / *prev;
        run.history.push_back(rec);
        if (rec.ratio) run.ratios.push_back(*rec.ratio);

        if (!std::isfinite(rec.iterate_norm) || rec.iterate_norm > gamma) {
            run.outcome = "escaped";
            return run;
        }
        above = rec.ratio && *rec.ratio > cfg.contraction_threshold ? above + 1 : 0;
        f = std::move(th.theta);
        if (rec.increment_norm < cfg.tol) {
            run.outcome = "converged";
            run.solution = std::move(f);
            return run;
        }
        if (above >= 3) {
            run.outcome = "contraction_failure";
            return run;
        }
        prev = rec.increment_norm;
    }
    run.outcome = "max_iter";
    return run;
}

// sup over nodes of |c₀ + c₁P⁻¹x̃ + v(x̃)|.
double target_sup(const PoissonSystem& system, const VectorField& v) {
    const auto& g = v.grid();
    const Matrix c1p = system.jet.c1 * system.P_inv;
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Vector u = system.jet.c0 + c1p * to_vector(g.node(i), system.n);
        for (int k = 0; k < system.m; ++k) u[k] += v[k][i];
        worst = std::max(worst, u.norm());
    }
    return worst;
}

double seed_norm(const GridPtr& grid, const HarmonicSeed& seed, double alpha, const PairSet& pairs) {
    double best = 0;
    for (const auto& h : seed) {
        if (h.empty()) continue;
        const auto field = ScalarField::analytic(grid, [h](const Point& x, const MultiIndex& b) {
            return h.derivative(x, b);
        });
        best = std::max(best, second_order_norm(field, alpha, pairs));
    }
    return best;
}

} // namespace

SolveReport picard_solve(const PoissonSystem& system, const SolveConfig& cfg) {
    cfg.validate(system.n, system.m);
    SolveReport rep;
    const double R_min = cfg.resolved_R_min();
    const bool bounded_target = std::isfinite(system.target_radius);
    const double c1_norm = system.jet.c1.size() ? (system.jet.c1 * system.P_inv).operatorNorm() : 0.0;
    const double c0_norm = system.jet.c0.size() ? system.jet.c0.norm() : 0.0;
    std::string last = "none";

    for (double R = cfg.R0; R >= R_min * (1 - 1e-12); R /= 2) {
        RadiusAttempt attempt;
        attempt.R = R;
        if (bounded_target && !(c0_norm + c1_norm * R < system.target_radius)) {
            attempt.outcome = "jet_outside_target";
            rep.attempts.push_back(attempt);
            last = attempt.outcome;
            continue;
        }
        const GridPtr grid = std::make_shared<const BallGrid>(BallGrid::build(system.n, R, cfg.res));
        const PairSet pairs = PairSet::build(*grid, cfg.seed, cfg.pair_cap);
        attempt.c_hat = check_potential_norm_bound(default_probes(), grid, cfg.alpha, pairs).max_ratio;
        const double hs = seed_norm(grid, cfg.harmonic_seed, cfg.alpha, pairs);
        double gamma = choose_gamma0(system, attempt.c_hat, hs, cfg.gamma0_floor);
        attempt.gamma0 = gamma;

        RunResult run;
        for (int d = 0;; ++d) {
            run = iterate(system, grid, pairs, gamma, cfg);
            attempt.doublings = d;
            if (run.outcome == "escaped" && d < cfg.max_gamma_doublings) {
                gamma *= 2;
                continue;
            }
            break;
        }
        attempt.gamma = gamma;
        attempt.c_r_gamma = estimate_c_r_gamma(system, R, gamma, cfg.c_samples, cfg.seed);
        attempt.iterations = static_cast<int>(run.history.size());
        rep.c_r_gamma_history.push_back(attempt.c_r_gamma);

        if (run.outcome == "converged" && bounded_target &&
            !(target_sup(system, *run.solution) < system.target_radius))
            run.outcome = "left_target";

        attempt.outcome = run.outcome;
        rep.attempts.push_back(attempt);
        last = run.outcome;
        rep.history = run.history;
        rep.contraction_ratios = run.ratios;
        rep.increments.clear();
        for (const auto& h : run.history) rep.increments.push_back(h.increment_norm);
        rep.final_R = R;
        rep.gamma = gamma;
        rep.iterations = attempt.iterations;
        rep.grid = grid;
        rep.pair_count = pairs.size();

        if (run.outcome != "converged") continue;

        rep.status = SolveStatus::Converged;
        rep.solution = std::move(run.solution);
        rep.residual = residual_check(system, *rep.solution);
        rep.solution_norm = second_order_norm(*rep.solution, cfg.alpha, pairs);
        std::tie(rep.origin_value, rep.origin_gradient) = origin_jet(*rep.solution);
        rep.probed_contraction =
            probe_contraction(system, *rep.solution, cfg.harmonic_seed, cfg.alpha, pairs, 0.25 * gamma);
        rep.message = "converged at R = " + std::to_string(R);
        return rep;
    }

    rep.status = last == "escaped" ? SolveStatus::IterateEscaped : SolveStatus::NoConvergence;
    rep.message = "no convergence down to R_min = " + std::to_string(R_min) + " (last outcome: " + last + ")";
    return rep;
}

SystemSolve solve_system(const SystemDef& system, const JetSpec& jet_in, const SolveConfig& cfg) {
    const JetSpec jet = jet_in.c0.size() == 0 && jet_in.c1.size() == 0 ? JetSpec::zero(system.n, system.m) : jet_in;
    validate_jet(system, jet);
    cfg.validate(system.n, system.m);
    const auto ell = check_ellipticity(system);
    if (!ell.ok) {
        std::ostringstream msg;
        msg << "ellipticity check failed: min xi^T a xi / |xi|^2 = " << ell.min_ratio << " < lambda = "
            << system.lambda;
        throw EllipticityError(msg.str());
    }

    SystemSolve out;
    out.poisson = diagonalize(shift_jet(system, jet), jet);
    out.report = picard_solve(out.poisson, cfg);
    out.u0 = jet.c0;
    out.du0 = jet.c1;
    if (!out.report.grid) return out;

    const auto& g = *out.report.grid;
    const int n = system.n;
    const int m = system.m;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vector x = out.poisson.P_inv * to_vector(g.node(i), n);
        Point p{0, 0, 0};
        for (int d = 0; d < n; ++d) p[d] = x[d];
        out.physical_nodes.push_back(p);
    }
    if (!out.report.solution) return out;

    const auto& v = *out.report.solution;
    out.u.assign(m, std::vector<double>(g.size(), 0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vector x = to_vector(out.physical_nodes[i], n);
        const Vector base = jet.c0 + jet.c1 * x;
        double norm2 = 0;
        for (int k = 0; k < m; ++k) {
            out.u[k][i] = base[k] + v[k][i];
            norm2 += out.u[k][i] * out.u[k][i];
        }
        out.target_sup = std::max(out.target_sup, std::sqrt(norm2));
    }
    out.residual = residual_field(out.poisson, v).per_node;

    const std::size_t o = g.origin();
    Matrix dv(m, n);
    for (int k = 0; k < m; ++k) {
        out.u0[k] += v[k][o];
        for (int j = 0; j < n; ++j) dv(k, j) = stencil_at(g.stencil(unit_index(j)), v[k].values(), o);
    }
    out.du0 = jet.c1 + dv * out.poisson.P;
    return out;
}

} // namespace jetsolve
