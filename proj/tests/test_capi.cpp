#include "jetsolve.h"
#include "oracle/oracle.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

TEST_CASE("run lifecycle") {
    jetsolve_run* run = nullptr;
    REQUIRE(jetsolve_run_create(R"({"res": 11, "output": {"report": "capi_report.json", "field": "capi_field.csv"}})",
                                &run) == JETSOLVE_OK);
    CHECK(jetsolve_run_set(run, "alpha", "0.4") == JETSOLVE_OK);
    CHECK(jetsolve_run_write(run, nullptr, nullptr) == JETSOLVE_INVALID_ARGUMENT);
    CHECK(jetsolve_run_execute(run) == JETSOLVE_OK);
    const auto report = nlohmann::json::parse(jetsolve_run_report_json(run));
    CHECK(report["status"] == "converged");
    CHECK(report["config"]["alpha"] == 0.4);
    CHECK(std::string(jetsolve_run_field_csv(run)).rfind("x1,x2,u1,residual\n", 0) == 0);
    CHECK(std::string(jetsolve_run_report_path(run)) == "capi_report.json");
    CHECK(jetsolve_run_write(run, nullptr, nullptr) == JETSOLVE_OK);
    CHECK(std::string(jetsolve_run_last_error(run)).empty());
    jetsolve_run_destroy(run);
}

TEST_CASE("configuration errors") {
    jetsolve_run* run = nullptr;
    CHECK(jetsolve_run_create("{not json", &run) == JETSOLVE_CONFIG_ERROR);
    REQUIRE(run != nullptr);
    CHECK(jetsolve_run_execute(run) == JETSOLVE_CONFIG_ERROR);
    CHECK(std::string(jetsolve_run_last_error(run)).find("not valid JSON") != std::string::npos);
    CHECK(nlohmann::json::parse(jetsolve_run_report_json(run))["status"] == "config_error");
    jetsolve_run_destroy(run);

    REQUIRE(jetsolve_run_create(R"({"alpha": 1.5})", &run) == JETSOLVE_OK);
    CHECK(jetsolve_run_execute(run) == JETSOLVE_CONFIG_ERROR);
    CHECK(std::string(jetsolve_run_error_field(run)) == "alpha");
    CHECK(std::string(jetsolve_run_field_csv(run)).empty());
    jetsolve_run_destroy(run);

    CHECK(jetsolve_run_create("{}", nullptr) == JETSOLVE_INVALID_ARGUMENT);
    CHECK(jetsolve_run_execute(nullptr) == JETSOLVE_INVALID_ARGUMENT);
    jetsolve_run_destroy(nullptr);
}

TEST_CASE("grid and field functions") {
    jetsolve_grid* grid = nullptr;
    CHECK(jetsolve_grid_create(2, 1.0, 10, &grid) == JETSOLVE_CONFIG_ERROR);
    CHECK(std::string(jetsolve_last_error()).size() > 0);
    REQUIRE(jetsolve_grid_create(3, 1.0, 17, &grid) == JETSOLVE_OK);
    CHECK(jetsolve_grid_dim(grid) == 3);
    const std::size_t N = jetsolve_grid_size(grid);
    CHECK(N == jetsolve::oracle::ball_lattice_count(3, 8));

    std::vector<double> nodes(3 * N);
    REQUIRE(jetsolve_grid_nodes(grid, nodes.data()) == JETSOLVE_OK);

    // N(1) against the closed form
    std::vector<double> ones(N, 1.0), pot(N);
    REQUIRE(jetsolve_newtonian_potential(grid, ones.data(), pot.data()) == JETSOLVE_OK);
    double err = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const double ref = jetsolve::oracle::uniform_ball_potential(3, 1.0, std::span<const double>(&nodes[3 * i], 3));
        err = std::max(err, std::abs(pot[i] - ref));
    }
    CHECK(err / 0.5 < 0.03);

    // ‖x₁‖ = sup|x₁| + (2R)^α [x₁]_α = R + (2R)^α (2R)^{1-α} = 3R
    std::vector<double> x1(N);
    for (std::size_t i = 0; i < N; ++i) x1[i] = nodes[3 * i];
    double norm = 0;
    REQUIRE(jetsolve_holder_norm(grid, x1.data(), 0.5, &norm) == JETSOLVE_OK);
    CHECK(norm == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(jetsolve_holder_norm(grid, x1.data(), 1.5, &norm) == JETSOLVE_CONFIG_ERROR);
    CHECK(jetsolve_newtonian_potential(grid, nullptr, pot.data()) == JETSOLVE_INVALID_ARGUMENT);

    jetsolve_grid_destroy(grid);
}

TEST_CASE("version") { CHECK(std::string(jetsolve_version()) == "0.1.0"); }
