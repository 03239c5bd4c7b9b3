#include "jetsolve/run.hpp"

#include "jetsolve/errors.hpp"
#include "jetsolve/kobayashi.hpp"
#include "jetsolve/lemmas.hpp"
#include "jetsolve/parallel.hpp"
#include "jetsolve/systems.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace jetsolve {

using nlohmann::json;

namespace {

// Non-finite numbers become null in JSON; keep them visible as strings.
json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json matrix_json(const Matrix& a) {
    json rows = json::array();
    for (int i = 0; i < a.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < a.cols(); ++j) r.push_back(number(a(i, j)));
        rows.push_back(r);
    }
    return rows;
}

json vector_json(const Vector& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
    return out;
}

json history_json(const std::vector<IterationRecord>& hist) {
    json out = json::array();
    for (const auto& h : hist)
        out.push_back({{"iteration", h.iteration},
                       {"increment_norm", number(h.increment_norm)},
                       {"iterate_norm", number(h.iterate_norm)},
                       {"ratio", h.ratio ? number(*h.ratio) : json()},
                       {"laplacian_consistency", number(h.laplacian_consistency)},
                       {"origin_value", number(h.origin_value)},
                       {"origin_gradient", number(h.origin_gradient)}});
    return out;
}

json attempts_json(const std::vector<RadiusAttempt>& attempts) {
    json out = json::array();
    for (const auto& a : attempts)
        out.push_back({{"R", a.R},
                       {"gamma0", number(a.gamma0)},
                       {"gamma", number(a.gamma)},
                       {"doublings", a.doublings},
                       {"c_hat", number(a.c_hat)},
                       {"c_r_gamma", number(a.c_r_gamma)},
                       {"outcome", a.outcome},
                       {"iterations", a.iterations}});
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void execute_solve(const RunConfig& cfg, RunOutput& out) {
    const SystemDef def = make_system(cfg.system, cfg.n, cfg.m, cfg.system_params);
    const SystemSolve s = solve_system(def, cfg.jet(), cfg.solve);
    const auto& rep = s.report;

    json& r = out.report;
    r["status"] = to_string(rep.status);
    r["message"] = rep.message;
    if (rep.grid) {
        const auto& g = *rep.grid;
        r["grid"] = {{"n", g.dim()},
                     {"R", g.radius()},
                     {"res", g.res()},
                     {"spacing", g.spacing()},
                     {"nodes", g.size()},
                     {"interior_nodes", g.interior_count()},
                     {"pair_count", rep.pair_count}};
    }
    json solver = {{"final_R", rep.final_R},
                   {"gamma", number(rep.gamma)},
                   {"iterations", rep.iterations},
                   {"increments", json::array()},
                   {"contraction_ratios", json::array()},
                   {"history", history_json(rep.history)},
                   {"attempts", attempts_json(rep.attempts)},
                   {"c_r_gamma_history", json::array()},
                   {"solution_norm", number(rep.solution_norm)},
                   {"probed_contraction", number(rep.probed_contraction)}};
    for (double v : rep.increments) solver["increments"].push_back(number(v));
    for (double v : rep.contraction_ratios) solver["contraction_ratios"].push_back(number(v));
    for (double v : rep.c_r_gamma_history) solver["c_r_gamma_history"].push_back(number(v));
    const auto mc = rep.mean_contraction();
    solver["mean_contraction"] = mc ? number(*mc) : json();
    r["solver"] = solver;
    r["residual"] = {{"sup_residual", number(rep.residual.sup_residual)}, {"sup_psi", number(rep.residual.sup_psi)}};
    r["jet"] = {{"u0", vector_json(s.u0)},
                {"du0", matrix_json(s.du0)},
                {"origin_value", number(rep.origin_value)},
                {"origin_gradient", number(rep.origin_gradient)}};
    r["coordinates"] = {{"A0", matrix_json(s.poisson.A0)},
                        {"P", matrix_json(s.poisson.P)},
                        {"P_inv", matrix_json(s.poisson.P_inv)}};
    r["target_sup"] = number(s.target_sup);

    if (rep.status == SolveStatus::Converged) {
        std::string csv;
        for (int d = 0; d < cfg.n; ++d) csv += "x" + std::to_string(d + 1) + ",";
        for (int k = 0; k < cfg.m; ++k) csv += "u" + std::to_string(k + 1) + ",";
        csv += "residual\n";
        for (std::size_t i = 0; i < s.physical_nodes.size(); ++i) {
            for (int d = 0; d < cfg.n; ++d) csv += fmt(s.physical_nodes[i][d]) + ",";
            for (int k = 0; k < cfg.m; ++k) csv += fmt(s.u[k][i]) + ",";
            csv += fmt(s.residual[i]) + "\n";
        }
        out.field_csv = std::move(csv);
        out.exit_code = kExitOk;
    } else if (rep.status == SolveStatus::OracleFailure) {
        out.exit_code = kExitOracleFailure;
    } else {
        out.exit_code = kExitNoConvergence;
    }
}

void execute_lemmas(const RunConfig& cfg, RunOutput& out) {
    LemmaSuiteConfig lc;
    lc.alpha = cfg.solve.alpha;
    lc.R = cfg.solve.R0;
    const auto rep = run_lemma_suite(lc);
    json lemmas = json::array();
    for (const auto& l : rep.lemmas) lemmas.push_back({{"name", l.name}, {"pass", l.pass}, {"detail", l.detail}});
    json names = json::array();
    for (const auto& f : lemma_battery()) names.push_back(f.name);
    out.report["status"] = rep.all_pass ? "pass" : "fail";
    out.report["lemmas"] = lemmas;
    out.report["battery"] = names;
    out.exit_code = rep.all_pass ? kExitOk : kExitLemmaFailure;
}

void execute_kobayashi(const RunConfig& cfg, RunOutput& out) {
    const auto& ks = cfg.kobayashi;
    KobayashiQuery q;
    q.target = target_by_name(ks.target, static_cast<int>(ks.X.size()));
    q.p = Eigen::Map<const Vector>(ks.p.data(), static_cast<Eigen::Index>(ks.p.size()));
    q.X = Eigen::Map<const Vector>(ks.X.data(), static_cast<Eigen::Index>(ks.X.size()));
    q.R_start = ks.R_start;
    q.growth = ks.growth;
    q.max_steps = ks.max_steps;
    q.conformal_tol = ks.conformal_tol;
    q.solve = cfg.solve;
    const auto est = estimate_kobayashi(q);

    json steps = json::array();
    for (const auto& s : est.steps)
        steps.push_back({{"R", s.R},
                         {"success", s.success},
                         {"outcome", s.outcome},
                         {"jet_defect", number(s.jet_defect)},
                         {"solved_defect", number(s.solved_defect)},
                         {"residual", number(s.residual)},
                         {"target_sup", number(s.target_sup)},
                         {"iterations", s.iterations}});
    json& r = out.report;
    r["status"] = to_string(est.status);
    r["upper_bound"] = est.upper_bound ? number(*est.upper_bound) : json();
    r["R_best"] = number(est.R_best);
    r["Y"] = vector_json(est.Y);
    r["monotone"] = est.monotone;
    r["note"] = est.note;
    r["steps"] = steps;
    out.exit_code = est.status == KobayashiStatus::Inconclusive ? kExitNoConvergence : kExitOk;
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void fail(RunOutput& out, int code, const std::string& what, const std::string& field) {
    out.exit_code = code;
    out.error = what;
    out.error_field = field;
    out.report["status"] = code == kExitConfigError ? "config_error"
                           : code == kExitOracleFailure ? "oracle_failure"
                                                        : "internal_error";
    out.report["error"] = {{"message", what}, {"field", field}};
    out.field_csv.clear();
}

} // namespace

RunOutput run(const RunConfig& cfg) {
    RunOutput out;
    out.timestamp = utc_now();
    out.report = {{"schema", 1}, {"command", cfg.command}, {"config", config_to_json(cfg)}};
    if (cfg.threads > 0) set_thread_count(cfg.threads);
    try {
        if (cfg.command == "solve")
            execute_solve(cfg, out);
        else if (cfg.command == "verify-lemmas")
            execute_lemmas(cfg, out);
        else
            execute_kobayashi(cfg, out);
    } catch (const ConfigError& e) {
        fail(out, kExitConfigError, e.what(), e.field());
    } catch (const EllipticityError& e) {
        fail(out, kExitConfigError, e.what(), "system");
    } catch (const OracleFailure& e) {
        fail(out, kExitOracleFailure, e.what(), "");
    } catch (const NonFiniteError& e) {
        fail(out, kExitOracleFailure, e.what(), "");
    } catch (const std::exception& e) {
        fail(out, kExitInternal, e.what(), "");
    }
    return out;
}

RunOutput run(const json& doc) {
    try {
        return run(parse_config(doc));
    } catch (const ConfigError& e) {
        RunOutput out;
        out.timestamp = utc_now();
        out.report = {{"schema", 1}, {"command", doc.is_object() ? doc.value("command", "solve") : "solve"}};
        fail(out, kExitConfigError, e.what(), e.field());
        return out;
    }
}

std::string report_text(const RunOutput& out) {
    json doc = out.report;
    doc["metadata"] = {{"timestamp", out.timestamp}};
    return doc.dump(2) + "\n";
}

void write_outputs(const RunOutput& out, const std::string& report_path, const std::string& field_path) {
    {
        std::ofstream f(report_path, std::ios::binary);
        if (!f) throw ConfigError("cannot open report path for writing", "output.report");
        f << report_text(out);
    }
    if (!out.field_csv.empty() && !field_path.empty()) {
        std::ofstream f(field_path, std::ios::binary);
        if (!f) throw ConfigError("cannot open field path for writing", "output.field");
        f << out.field_csv;
    }
}

} // namespace jetsolve
