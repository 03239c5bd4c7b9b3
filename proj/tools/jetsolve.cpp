// Command-line front end. Talks to the solver only through the C API.

#include "jetsolve.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

struct RunHandle {
    jetsolve_run* run = nullptr;
    ~RunHandle() { jetsolve_run_destroy(run); }
};

// "--key value" and "--key=value" pairs left over after CLI11 parsing.
bool collect_overrides(const std::vector<std::string>& extras, std::vector<std::pair<std::string, std::string>>& out) {
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& a = extras[i];
        if (a.rfind("--", 0) != 0 || a.size() < 3) {
            std::cerr << "jetsolve: unexpected argument '" << a << "'\n";
            return false;
        }
        const auto eq = a.find('=');
        if (eq != std::string::npos) {
            out.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
        } else if (i + 1 < extras.size()) {
            out.emplace_back(a.substr(2), extras[++i]);
        } else {
            std::cerr << "jetsolve: option '" << a << "' needs a value\n";
            return false;
        }
    }
    return true;
}

bool read_file(const std::string& path, std::string& text) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
    return true;
}

void print_summary(const std::string& command, const char* report_json) {
    const auto doc = nlohmann::json::parse(report_json, nullptr, false);
    if (doc.is_discarded()) return;
    std::cout << command << ": " << doc.value("status", "unknown");
    if (command == "solve" && doc.contains("solver")) {
        const auto& s = doc["solver"];
        std::cout << "  R=" << s.value("final_R", 0.0) << "  iterations=" << s.value("iterations", 0);
        if (doc.contains("residual")) std::cout << "  residual=" << doc["residual"].value("sup_residual", 0.0);
    } else if (command == "kobayashi" && doc.contains("upper_bound")) {
        std::cout << "  upper_bound=" << doc["upper_bound"].dump() << "  R_best=" << doc["R_best"].dump();
    } else if (command == "verify-lemmas" && doc.contains("lemmas")) {
        for (const auto& l : doc["lemmas"]) std::cout << "\n  " << (l.value("pass", false) ? "pass" : "FAIL") << "  " << l.value("name", "");
    }
    std::cout << '\n';
}

int execute(const std::string& command, const std::string& config_text,
            const std::vector<std::pair<std::string, std::string>>& overrides) {
    RunHandle h;
    jetsolve_status st = jetsolve_run_create(config_text.c_str(), &h.run);
    if (!h.run) {
        std::cerr << "jetsolve: " << jetsolve_last_error() << '\n';
        return JETSOLVE_INTERNAL_ERROR;
    }
    if (st == JETSOLVE_OK) st = jetsolve_run_set(h.run, "command", ("\"" + command + "\"").c_str());
    for (const auto& [key, value] : overrides) {
        if (st != JETSOLVE_OK) break;
        st = jetsolve_run_set(h.run, key.c_str(), value.c_str());
    }
    if (st != JETSOLVE_OK) {
        std::cerr << "jetsolve: config error";
        if (*jetsolve_run_error_field(h.run)) std::cerr << " at '" << jetsolve_run_error_field(h.run) << "'";
        std::cerr << ": " << jetsolve_run_last_error(h.run) << '\n';
        return st;
    }

    const jetsolve_status result = jetsolve_run_execute(h.run);
    const jetsolve_status wrote = jetsolve_run_write(h.run, nullptr, nullptr);
    if (wrote != JETSOLVE_OK) {
        std::cerr << "jetsolve: cannot write outputs: " << jetsolve_run_last_error(h.run) << '\n';
        return wrote;
    }
    if (result == JETSOLVE_CONFIG_ERROR) {
        std::cerr << "jetsolve: config error";
        if (*jetsolve_run_error_field(h.run)) std::cerr << " at '" << jetsolve_run_error_field(h.run) << "'";
        std::cerr << ": " << jetsolve_run_last_error(h.run) << '\n';
    } else if (result == JETSOLVE_ORACLE_FAILURE || result == JETSOLVE_INTERNAL_ERROR) {
        std::cerr << "jetsolve: " << jetsolve_run_last_error(h.run) << '\n';
    }
    print_summary(command, jetsolve_run_report_json(h.run));
    return result;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local solutions of quasi-linear elliptic systems with a prescribed 1-jet"};
    app.require_subcommand(1);
    int threads = -1;
    app.add_option("--threads", threads, "worker threads, 0 = auto (default: JETSOLVE_THREADS or auto)");

    std::string solve_config;
    auto* solve = app.add_subcommand("solve", "solve a system and write report.json and field.csv");
    solve->add_option("config", solve_config, "configuration JSON file")->required();
    solve->allow_extras();

    double lemma_alpha = 0.5;
    double lemma_R = 1.0;
    auto* lemmas = app.add_subcommand("verify-lemmas", "run the norm and potential inequality suite");
    lemmas->add_option("--alpha", lemma_alpha, "Hölder exponent in (0, 1)");
    lemmas->add_option("--R", lemma_R, "ball radius");
    lemmas->allow_extras();

    std::string kob_config;
    auto* kob = app.add_subcommand("kobayashi", "upper bound on the Kobayashi metric of a target");
    kob->add_option("config", kob_config, "configuration JSON file")->required();
    kob->allow_extras();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return JETSOLVE_CONFIG_ERROR;
    }

    if (threads >= 0) jetsolve_set_threads(threads);

    CLI::App* sub = app.get_subcommands().front();
    std::vector<std::pair<std::string, std::string>> overrides;
    if (!collect_overrides(sub->remaining(), overrides)) return JETSOLVE_CONFIG_ERROR;

    std::string text;
    if (sub == lemmas) {
        nlohmann::json doc = {{"alpha", lemma_alpha}, {"R0", lemma_R}};
        text = doc.dump();
        return execute("verify-lemmas", text, overrides);
    }
    const std::string& path = sub == solve ? solve_config : kob_config;
    if (!read_file(path, text)) {
        std::cerr << "jetsolve: cannot read configuration file '" << path << "'\n";
        return JETSOLVE_CONFIG_ERROR;
    }
    if (threads < 0) {
        // A threads key in the file applies only when --threads was not given.
        const auto doc = nlohmann::json::parse(text, nullptr, false);
        if (!doc.is_discarded() && doc.is_object() && doc.contains("threads") && doc["threads"].is_number_integer())
            jetsolve_set_threads(doc["threads"].get<int>());
    }
    return execute(sub->get_name(), text, overrides);
}
