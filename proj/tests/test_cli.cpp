// Drives the installed command-line tool as a subprocess.

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Workdir {
    fs::path dir;
    Workdir() {
        dir = fs::temp_directory_path() / ("jetsolve_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workdir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name) << text;
        return dir / name;
    }
    std::string read(const std::string& name) const {
        std::ifstream f(dir / name);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
};

int cli(const Workdir& w, const std::string& args) {
    const std::string cmd = "cd '" + w.dir.string() + "' && '" JETSOLVE_CLI "' " + args + " > out.txt 2> err.txt";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

} // namespace

TEST_CASE("solve writes report and field") {
    Workdir w;
    w.write("laplace.json", R"({"system": "laplace", "res": 11})");
    CHECK(cli(w, "solve laplace.json") == 0);
    const auto report = nlohmann::json::parse(w.read("report.json"));
    CHECK(report["status"] == "converged");
    CHECK(report.contains("metadata"));
    CHECK(w.read("field.csv").rfind("x1,x2,u1,residual\n", 0) == 0);
    CHECK(w.read("out.txt").find("solve: converged") != std::string::npos);
}

TEST_CASE("overrides and threads") {
    Workdir w;
    w.write("cfg.json", R"({"res": 11})");
    CHECK(cli(w, "--threads 1 solve cfg.json --alpha 0.25 --output.report=r.json") == 0);
    const auto report = nlohmann::json::parse(w.read("r.json"));
    CHECK(report["config"]["alpha"] == 0.25);
}

TEST_CASE("configuration errors exit with code 3") {
    Workdir w;
    w.write("bad.json", R"({"alpha": 1.5})");
    CHECK(cli(w, "solve bad.json") == 3);
    CHECK(w.read("err.txt").find("'alpha'") != std::string::npos);
    CHECK(nlohmann::json::parse(w.read("report.json"))["status"] == "config_error");
    CHECK_FALSE(fs::exists(w.dir / "field.csv"));

    CHECK(cli(w, "solve missing.json") == 3);
    CHECK(cli(w, "solve") == 3);
    CHECK(cli(w, "frobnicate") == 3);
    w.write("syntax.json", "{");
    CHECK(cli(w, "solve syntax.json") == 3);
}

TEST_CASE("verify-lemmas") {
    Workdir w;
    CHECK(cli(w, "verify-lemmas --alpha 0.5 --R 1") == 0);
    const auto report = nlohmann::json::parse(w.read("report.json"));
    CHECK(report["status"] == "pass");
    CHECK(report["lemmas"].size() >= 6);
    CHECK(cli(w, "verify-lemmas --alpha 1.5") == 3);
}

TEST_CASE("kobayashi of the zero vector") {
    Workdir w;
    w.write("k.json", R"({"command": "kobayashi", "kobayashi": {"target": "hyperbolic", "X": [0, 0]}})");
    CHECK(cli(w, "kobayashi k.json") == 0);
    const auto report = nlohmann::json::parse(w.read("report.json"));
    CHECK(report["status"] == "zero_vector");
    CHECK(report["upper_bound"] == 0.0);
    CHECK_FALSE(fs::exists(w.dir / "field.csv"));
}
