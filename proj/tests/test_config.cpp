#include "jetsolve/config.hpp"
#include "jetsolve/errors.hpp"
#include "jetsolve/run.hpp"

#include <doctest.h>

#include <sstream>

using namespace jetsolve;
using nlohmann::json;

namespace {

std::string error_field(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

} // namespace

TEST_CASE("defaults") {
    const auto c = parse_config(json::object());
    CHECK(c.command == "solve");
    CHECK(c.system == "laplace");
    CHECK(c.n == 2);
    CHECK(c.m == 1);
    CHECK(c.solve.R0 == 0.5);
    CHECK(c.solve.alpha == 0.5);
    CHECK(c.solve.res == 21);
    CHECK(c.report_path == "report.json");
    CHECK(c.field_path == "field.csv");
    CHECK(c.jet().c1.isZero(0));

    CHECK(parse_config({{"command", "verify-lemmas"}}).solve.R0 == 1.0);
}

TEST_CASE("invalid values name their key") {
    CHECK(error_field({{"alpha", 1.5}}) == "alpha");
    CHECK(error_field({{"res", 20}}) == "res");
    CHECK(error_field({{"n", 4}}) == "n");
    CHECK(error_field({{"R0", "big"}}) == "R0");
    CHECK(error_field({{"colour", 1}}) == "colour");
    CHECK(error_field({{"output", {{"reprot", "x"}}}}) == "output.reprot");
    CHECK(error_field({{"jet", {{"c0", {1, 2}}}}}) == "jet.c0");
    CHECK(error_field({{"jet", {{"c1", {{1, 2, 3}}}}}}) == "jet.c1");
    CHECK(error_field({{"command", "plot"}}) == "command");
    CHECK(error_field({{"schema", 2}}) == "schema");
    CHECK(error_field({{"command", "kobayashi"}}) == "kobayashi.X");
    CHECK(error_field({{"command", "kobayashi"}, {"kobayashi", {{"X", {0.1, 0}}, {"target", "torus"}}}}) ==
          "kobayashi.target");
    CHECK(error_field({{"command", "verify-lemmas"}, {"alpha", 0}}) == "alpha");
    CHECK(error_field(json::parse(R"({"harmonic_seed": [[{"coef": 1, "exponent": [2, 0]}]]})")) == "harmonic_seed[0]");
    CHECK(error_field(json::parse(R"({"harmonic_seed": [[{"coef": 1, "exponent": [2]}]]})")) == "harmonic_seed[0].exponent");
    CHECK(error_field({{"system", {{"name", "minimal_surface"}, {"params", 3}}}}) == "system.params");
}

TEST_CASE("harmonic seed parsing") {
    const auto seed = json::parse(R"([[{"coef": 0.5, "exponent": [2, 0]}, {"coef": -0.5, "exponent": [0, 2]}]])");
    const auto h = parse_harmonic_seed(seed, 2, 1);
    REQUIRE(h.size() == 1);
    CHECK(h[0].terms().size() == 2);
    CHECK(h[0].value({1, 0.5, 0}) == doctest::Approx(0.5 * (1 - 0.25)));
    CHECK(parse_harmonic_seed(json::array(), 2, 1).empty());
}

TEST_CASE("overrides") {
    json doc = {{"alpha", 0.3}};
    apply_override(doc, "alpha", "0.7");
    CHECK(doc["alpha"] == 0.7);
    apply_override(doc, "kobayashi.growth", "2");
    CHECK(doc["kobayashi"]["growth"] == 2);
    apply_override(doc, "system", "minimal_surface");
    CHECK(doc["system"] == "minimal_surface");
    apply_override(doc, "jet.c1", "[[0.3, 0]]");
    CHECK(doc["jet"]["c1"][0][0] == 0.3);
    CHECK_THROWS_AS(apply_override(doc, "alpha.x", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "a..b", "1"), ConfigError);
}

TEST_CASE("the resolved configuration round-trips") {
    const json doc = {{"system", {{"name", "harmonic_map"}, {"params", {{"target", "sphere"}}}}},
                      {"m", 2},
                      {"jet", {{"c1", {{0.2, 0}, {0, 0.1}}}}},
                      {"res", 17}};
    const auto echo = config_to_json(parse_config(doc));
    CHECK(config_to_json(parse_config(echo)) == echo);
    CHECK(echo["system"]["params"]["target"] == "sphere");
}

TEST_CASE("running the Laplace equation yields zero") {
    const auto out = run(json{{"res", 11}});
    CHECK(out.exit_code == kExitOk);
    CHECK(out.report["status"] == "converged");
    std::istringstream csv(out.field_csv);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "x1,x2,u1,residual");
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        const auto u = line.substr(0, line.rfind(','));
        CHECK(std::stod(u.substr(u.rfind(',') + 1)) == 0);
    }
    CHECK(rows == out.report["grid"]["nodes"].get<std::size_t>());
    CHECK(out.report["config"]["res"] == 11);
    CHECK(out.report["schema"] == 1);
}

TEST_CASE("run reports configuration errors without throwing") {
    const auto out = run(json{{"alpha", 1.5}});
    CHECK(out.exit_code == kExitConfigError);
    CHECK(out.error_field == "alpha");
    CHECK(out.report["error"]["field"] == "alpha");
    CHECK(out.field_csv.empty());

    CHECK(run(json{{"system", "unknown"}}).error_field == "system.name");
}

TEST_CASE("report text carries a timestamp outside the deterministic part") {
    const auto out = run(json{{"res", 7}});
    const auto doc = json::parse(report_text(out));
    CHECK(doc["metadata"]["timestamp"].get<std::string>().size() == 20);
    CHECK_FALSE(out.report.contains("metadata"));
}
