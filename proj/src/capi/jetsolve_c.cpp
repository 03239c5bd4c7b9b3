#include "jetsolve.h"

#include "jetsolve/errors.hpp"
#include "jetsolve/field.hpp"
#include "jetsolve/holder.hpp"
#include "jetsolve/parallel.hpp"
#include "jetsolve/potential.hpp"
#include "jetsolve/run.hpp"

#include <memory>
#include <string>

struct jetsolve_run {
    nlohmann::json doc;
    jetsolve::RunOutput output;
    std::string report;
    std::string error;
    std::string error_field;
    bool invalid_document = false;
    std::string report_path = "report.json";
    std::string field_path = "field.csv";
};

struct jetsolve_grid {
    std::shared_ptr<const jetsolve::BallGrid> grid;
    std::unique_ptr<const jetsolve::PairSet> pairs;
};

namespace {

thread_local std::string g_last_error;

jetsolve_status fail_with(jetsolve_status s, const std::string& what) {
    g_last_error = what;
    return s;
}

jetsolve::ScalarField field_from(const jetsolve_grid* grid, const double* f) {
    return jetsolve::ScalarField(grid->grid, std::vector<double>(f, f + grid->grid->size()));
}

} // namespace

extern "C" {

const char* jetsolve_version(void) { return "0.1.0"; }

void jetsolve_set_threads(int threads) { jetsolve::set_thread_count(threads < 0 ? 0 : threads); }

jetsolve_status jetsolve_run_create(const char* config_json, jetsolve_run** out) {
    if (!out) return JETSOLVE_INVALID_ARGUMENT;
    *out = nullptr;
    try {
        auto run = std::make_unique<jetsolve_run>();
        jetsolve_status status = JETSOLVE_OK;
        try {
            run->doc = nlohmann::json::parse(config_json ? config_json : "{}");
            if (!run->doc.is_object()) {
                run->error = "configuration must be a JSON object";
                run->invalid_document = true;
                status = JETSOLVE_CONFIG_ERROR;
            }
        } catch (const nlohmann::json::parse_error& e) {
            run->error = std::string("configuration is not valid JSON: ") + e.what();
            run->doc = nlohmann::json::object();
            run->invalid_document = true;
            status = JETSOLVE_CONFIG_ERROR;
        }
        *out = run.release();
        return status;
    } catch (const std::exception& e) {
        return fail_with(JETSOLVE_INTERNAL_ERROR, e.what());
    }
}

jetsolve_status jetsolve_run_set(jetsolve_run* run, const char* key, const char* value) {
    if (!run || !key || !value) return JETSOLVE_INVALID_ARGUMENT;
    try {
        jetsolve::apply_override(run->doc, key, value);
        return JETSOLVE_OK;
    } catch (const jetsolve::ConfigError& e) {
        run->error = e.what();
        run->error_field = e.field();
        return JETSOLVE_CONFIG_ERROR;
    }
}

jetsolve_status jetsolve_run_execute(jetsolve_run* run) {
    if (!run) return JETSOLVE_INVALID_ARGUMENT;
    if (run->invalid_document) {
        run->output.exit_code = JETSOLVE_CONFIG_ERROR;
        run->output.report = {{"schema", 1}, {"status", "config_error"}, {"error", {{"message", run->error}, {"field", run->error_field}}}};
        run->report = jetsolve::report_text(run->output);
        return JETSOLVE_CONFIG_ERROR;
    }
    try {
        run->output = jetsolve::run(run->doc);
        run->report = jetsolve::report_text(run->output);
        run->error = run->output.error;
        run->error_field = run->output.error_field;
        const auto& out = run->output.report;
        if (out.contains("config")) {
            run->report_path = out["config"]["output"]["report"].get<std::string>();
            run->field_path = out["config"]["output"]["field"].get<std::string>();
        }
        return static_cast<jetsolve_status>(run->output.exit_code);
    } catch (const std::exception& e) {
        run->error = e.what();
        return JETSOLVE_INTERNAL_ERROR;
    }
}

const char* jetsolve_run_report_json(const jetsolve_run* run) { return run ? run->report.c_str() : ""; }
const char* jetsolve_run_field_csv(const jetsolve_run* run) { return run ? run->output.field_csv.c_str() : ""; }
const char* jetsolve_run_report_path(const jetsolve_run* run) { return run ? run->report_path.c_str() : ""; }
const char* jetsolve_run_field_path(const jetsolve_run* run) { return run ? run->field_path.c_str() : ""; }

jetsolve_status jetsolve_run_write(jetsolve_run* run, const char* report_path, const char* field_path) {
    if (!run) return JETSOLVE_INVALID_ARGUMENT;
    if (run->report.empty()) {
        run->error = "nothing to write: the run has not been executed";
        return JETSOLVE_INVALID_ARGUMENT;
    }
    try {
        jetsolve::write_outputs(run->output, report_path ? report_path : run->report_path,
                                field_path ? field_path : run->field_path);
        return JETSOLVE_OK;
    } catch (const jetsolve::ConfigError& e) {
        run->error = e.what();
        run->error_field = e.field();
        return JETSOLVE_CONFIG_ERROR;
    } catch (const std::exception& e) {
        run->error = e.what();
        return JETSOLVE_INTERNAL_ERROR;
    }
}

const char* jetsolve_run_last_error(const jetsolve_run* run) { return run ? run->error.c_str() : ""; }
const char* jetsolve_run_error_field(const jetsolve_run* run) { return run ? run->error_field.c_str() : ""; }

void jetsolve_run_destroy(jetsolve_run* run) { delete run; }

jetsolve_status jetsolve_grid_create(int n, double R, int res, jetsolve_grid** out) {
    if (!out) return JETSOLVE_INVALID_ARGUMENT;
    *out = nullptr;
    try {
        auto g = std::make_unique<jetsolve_grid>();
        g->grid = std::make_shared<const jetsolve::BallGrid>(jetsolve::BallGrid::build(n, R, res));
        g->pairs = std::make_unique<const jetsolve::PairSet>(jetsolve::PairSet::build(*g->grid));
        *out = g.release();
        return JETSOLVE_OK;
    } catch (const jetsolve::ConfigError& e) {
        return fail_with(JETSOLVE_CONFIG_ERROR, e.what());
    } catch (const std::exception& e) {
        return fail_with(JETSOLVE_INTERNAL_ERROR, e.what());
    }
}

size_t jetsolve_grid_size(const jetsolve_grid* grid) { return grid ? grid->grid->size() : 0; }
int jetsolve_grid_dim(const jetsolve_grid* grid) { return grid ? grid->grid->dim() : 0; }

jetsolve_status jetsolve_grid_nodes(const jetsolve_grid* grid, double* out) {
    if (!grid || !out) return fail_with(JETSOLVE_INVALID_ARGUMENT, "null argument");
    const int n = grid->grid->dim();
    for (std::size_t i = 0; i < grid->grid->size(); ++i)
        for (int d = 0; d < n; ++d) out[i * n + d] = grid->grid->node(i)[d];
    return JETSOLVE_OK;
}

void jetsolve_grid_destroy(jetsolve_grid* grid) { delete grid; }

jetsolve_status jetsolve_newtonian_potential(const jetsolve_grid* grid, const double* f, double* out) {
    if (!grid || !f || !out) return fail_with(JETSOLVE_INVALID_ARGUMENT, "null argument");
    try {
        const auto pot = jetsolve::newtonian_potential(field_from(grid, f));
        std::copy(pot.values().begin(), pot.values().end(), out);
        return JETSOLVE_OK;
    } catch (const jetsolve::NonFiniteError& e) {
        return fail_with(JETSOLVE_CONFIG_ERROR, e.what());
    } catch (const std::exception& e) {
        return fail_with(JETSOLVE_INTERNAL_ERROR, e.what());
    }
}

jetsolve_status jetsolve_holder_norm(const jetsolve_grid* grid, const double* f, double alpha, double* out) {
    if (!grid || !f || !out) return fail_with(JETSOLVE_INVALID_ARGUMENT, "null argument");
    try {
        *out = jetsolve::holder_norm(field_from(grid, f), alpha, *grid->pairs).weighted;
        return JETSOLVE_OK;
    } catch (const jetsolve::ConfigError& e) {
        return fail_with(JETSOLVE_CONFIG_ERROR, e.what());
    } catch (const jetsolve::NonFiniteError& e) {
        return fail_with(JETSOLVE_CONFIG_ERROR, e.what());
    } catch (const std::exception& e) {
        return fail_with(JETSOLVE_INTERNAL_ERROR, e.what());
    }
}

const char* jetsolve_last_error(void) { return g_last_error.c_str(); }

} // extern "C"
