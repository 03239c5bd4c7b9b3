#include "jetsolve/config.hpp"

#include "jetsolve/errors.hpp"

#include <cmath>
#include <set>

namespace jetsolve {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown configuration key", prefix + key);
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& field, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        const json& v = obj.at(key);
        if constexpr (std::is_same_v<T, double>) {
            if (!v.is_number()) throw ConfigError("expected a number", field);
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError("expected an integer", field);
            if constexpr (std::is_unsigned_v<T>)
                if (v.is_number_integer() && v.get<std::int64_t>() < 0)
                    throw ConfigError("expected a non-negative integer", field);
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError("expected a string", field);
        }
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("value has the wrong type", field);
    }
}

std::vector<double> number_array(const json& v, const std::string& field) {
    if (!v.is_array()) throw ConfigError("expected an array of numbers", field);
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError("expected an array of numbers", field);
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace

JetSpec RunConfig::jet() const {
    JetSpec j = JetSpec::zero(n, m);
    for (std::size_t k = 0; k < c0.size(); ++k) j.c0[k] = c0[k];
    for (std::size_t k = 0; k < c1.size(); ++k)
        for (std::size_t i = 0; i < c1[k].size(); ++i) j.c1(k, i) = c1[k][i];
    return j;
}

HarmonicSeed parse_harmonic_seed(const json& seed, int n, int m) {
    if (seed.is_null() || (seed.is_array() && seed.empty())) return {};
    if (!seed.is_array() || static_cast<int>(seed.size()) != m)
        throw ConfigError("harmonic_seed needs one term list per component", "harmonic_seed");
    HarmonicSeed out;
    for (int k = 0; k < m; ++k) {
        const std::string field = "harmonic_seed[" + std::to_string(k) + "]";
        const json& terms = seed[k];
        if (!terms.is_array()) throw ConfigError("expected an array of terms", field);
        std::vector<HarmonicPolynomial::Term> parsed;
        for (const auto& t : terms) {
            if (!t.is_object()) throw ConfigError("term must be an object with coef and exponent", field);
            reject_unknown(t, {"coef", "exponent"}, field + ".");
            HarmonicPolynomial::Term term;
            term.coef = get<double>(t, "coef", field + ".coef", 0.0);
            if (!t.contains("exponent")) throw ConfigError("term needs an exponent", field + ".exponent");
            const auto e = number_array(t.at("exponent"), field + ".exponent");
            if (static_cast<int>(e.size()) != n) throw ConfigError("exponent needs n entries", field + ".exponent");
            for (int d = 0; d < n; ++d) {
                if (e[d] != std::floor(e[d])) throw ConfigError("exponents must be integers", field + ".exponent");
                term.exponent[d] = static_cast<int>(e[d]);
            }
            parsed.push_back(term);
        }
        try {
            out.emplace_back(n, std::move(parsed));
        } catch (const ConfigError& e) {
            throw ConfigError(e.what(), field);
        }
    }
    return out;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object", "");
    reject_unknown(doc, {"schema", "command", "system", "n", "m", "jet", "R0", "R_min", "res", "alpha", "tol",
                         "max_iter", "gamma0_floor", "contraction_threshold", "max_gamma_doublings", "pair_cap",
                         "seed", "c_samples", "harmonic_seed", "output", "threads", "kobayashi"},
                   "");
    if (doc.contains("schema") && doc.at("schema") != 1) throw ConfigError("unsupported schema version", "schema");

    RunConfig c;
    c.command = get<std::string>(doc, "command", "command", c.command);
    if (c.command != "solve" && c.command != "verify-lemmas" && c.command != "kobayashi")
        throw ConfigError("command must be solve, verify-lemmas or kobayashi", "command");

    if (doc.contains("system")) {
        const json& s = doc.at("system");
        if (s.is_string()) {
            c.system = s.get<std::string>();
        } else if (s.is_object()) {
            reject_unknown(s, {"name", "params"}, "system.");
            c.system = get<std::string>(s, "name", "system.name", c.system);
            if (s.contains("params")) {
                if (!s.at("params").is_object()) throw ConfigError("params must be an object", "system.params");
                c.system_params = s.at("params");
            }
        } else {
            throw ConfigError("system must be a name or {name, params}", "system");
        }
    }

    c.n = get<int>(doc, "n", "n", c.n);
    if (c.n != 2 && c.n != 3) throw ConfigError("n must be 2 or 3", "n");
    c.m = get<int>(doc, "m", "m", c.m);
    if (c.m < 1 || c.m > 8) throw ConfigError("m must lie in 1..8", "m");

    if (doc.contains("jet") && !doc.at("jet").is_null()) {
        const json& j = doc.at("jet");
        if (!j.is_object()) throw ConfigError("jet must be an object", "jet");
        reject_unknown(j, {"c0", "c1"}, "jet.");
        if (j.contains("c0")) {
            c.c0 = number_array(j.at("c0"), "jet.c0");
            if (static_cast<int>(c.c0.size()) != c.m) throw ConfigError("c0 needs m entries", "jet.c0");
        }
        if (j.contains("c1")) {
            const json& rows = j.at("c1");
            if (!rows.is_array() || static_cast<int>(rows.size()) != c.m)
                throw ConfigError("c1 must be an m x n array", "jet.c1");
            for (const auto& r : rows) {
                c.c1.push_back(number_array(r, "jet.c1"));
                if (static_cast<int>(c.c1.back().size()) != c.n)
                    throw ConfigError("c1 must be an m x n array", "jet.c1");
            }
        }
        for (double v : c.c0)
            if (!std::isfinite(v)) throw ConfigError("jet must be finite", "jet.c0");
    }

    auto& s = c.solve;
    const bool lemmas = c.command == "verify-lemmas";
    s.R0 = get<double>(doc, "R0", "R0", lemmas ? 1.0 : s.R0);
    s.R_min = get<double>(doc, "R_min", "R_min", s.R_min);
    s.res = get<int>(doc, "res", "res", s.res);
    s.alpha = get<double>(doc, "alpha", "alpha", s.alpha);
    s.tol = get<double>(doc, "tol", "tol", s.tol);
    s.max_iter = get<int>(doc, "max_iter", "max_iter", s.max_iter);
    s.gamma0_floor = get<double>(doc, "gamma0_floor", "gamma0_floor", s.gamma0_floor);
    s.contraction_threshold = get<double>(doc, "contraction_threshold", "contraction_threshold", s.contraction_threshold);
    s.max_gamma_doublings = get<int>(doc, "max_gamma_doublings", "max_gamma_doublings", s.max_gamma_doublings);
    s.pair_cap = get<std::size_t>(doc, "pair_cap", "pair_cap", s.pair_cap);
    if (s.pair_cap == 0) throw ConfigError("pair_cap must be positive", "pair_cap");
    s.seed = get<std::uint64_t>(doc, "seed", "seed", s.seed);
    s.c_samples = get<std::size_t>(doc, "c_samples", "c_samples", s.c_samples);
    c.threads = get<int>(doc, "threads", "threads", c.threads);
    if (c.threads < 0) throw ConfigError("threads must be non-negative", "threads");

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        if (!o.is_object()) throw ConfigError("output must be an object", "output");
        reject_unknown(o, {"report", "field"}, "output.");
        c.report_path = get<std::string>(o, "report", "output.report", c.report_path);
        c.field_path = get<std::string>(o, "field", "output.field", c.field_path);
    }

    if (doc.contains("kobayashi")) {
        const json& k = doc.at("kobayashi");
        if (!k.is_object()) throw ConfigError("kobayashi must be an object", "kobayashi");
        reject_unknown(k, {"target", "p", "X", "R_start", "growth", "max_steps", "conformal_tol"}, "kobayashi.");
        auto& ks = c.kobayashi;
        ks.target = get<std::string>(k, "target", "kobayashi.target", ks.target);
        if (k.contains("p")) ks.p = number_array(k.at("p"), "kobayashi.p");
        if (k.contains("X")) ks.X = number_array(k.at("X"), "kobayashi.X");
        ks.R_start = get<double>(k, "R_start", "kobayashi.R_start", ks.R_start);
        ks.growth = get<double>(k, "growth", "kobayashi.growth", ks.growth);
        ks.max_steps = get<int>(k, "max_steps", "kobayashi.max_steps", ks.max_steps);
        ks.conformal_tol = get<double>(k, "conformal_tol", "kobayashi.conformal_tol", ks.conformal_tol);
    }

    if (c.command == "kobayashi") {
        if (c.n != 2) throw ConfigError("kobayashi queries use a two-dimensional source disk", "n");
        auto& ks = c.kobayashi;
        if (ks.target != "euclidean" && ks.target != "sphere" && ks.target != "hyperbolic")
            throw ConfigError("target must be euclidean, sphere or hyperbolic", "kobayashi.target");
        if (ks.X.empty()) throw ConfigError("kobayashi.X is required", "kobayashi.X");
        if (ks.p.empty()) ks.p.assign(ks.X.size(), 0.0);
        if (ks.p.size() != ks.X.size()) throw ConfigError("p and X must have the same length", "kobayashi.p");
        if (ks.target != "euclidean" && ks.X.size() != 2)
            throw ConfigError("sphere and hyperbolic targets are two-dimensional", "kobayashi.X");
        c.m = static_cast<int>(ks.X.size());
        if (!(ks.R_start > 0)) throw ConfigError("R_start must be positive", "kobayashi.R_start");
        if (!(ks.growth > 1)) throw ConfigError("growth must exceed 1", "kobayashi.growth");
        if (ks.max_steps < 1 || ks.max_steps > 64) throw ConfigError("max_steps must lie in 1..64", "kobayashi.max_steps");
        if (!(ks.conformal_tol > 0)) throw ConfigError("conformal_tol must be positive", "kobayashi.conformal_tol");
        SolveConfig probe = s;
        probe.R0 = ks.R_start;
        probe.R_min = 0.75 * ks.R_start;
        probe.validate(2, c.m);
    } else if (lemmas) {
        validate_alpha(s.alpha);
        if (!(s.R0 > 0) || !std::isfinite(s.R0)) throw ConfigError("R0 must be positive", "R0");
    } else {
        s.harmonic_seed = parse_harmonic_seed(doc.value("harmonic_seed", json::array()), c.n, c.m);
        s.validate(c.n, c.m);
    }
    if (doc.contains("harmonic_seed")) c.harmonic_seed = doc.at("harmonic_seed");
    return c;
}

json config_to_json(const RunConfig& c) {
    const auto& s = c.solve;
    json doc = {
        {"schema", 1},
        {"command", c.command},
        {"system", {{"name", c.system}, {"params", c.system_params}}},
        {"n", c.n},
        {"m", c.m},
        {"R0", s.R0},
        {"R_min", s.resolved_R_min()},
        {"res", s.res},
        {"alpha", s.alpha},
        {"tol", s.tol},
        {"max_iter", s.max_iter},
        {"gamma0_floor", s.gamma0_floor},
        {"contraction_threshold", s.contraction_threshold},
        {"max_gamma_doublings", s.max_gamma_doublings},
        {"pair_cap", s.pair_cap},
        {"seed", s.seed},
        {"c_samples", s.c_samples},
        {"harmonic_seed", c.harmonic_seed},
        {"output", {{"report", c.report_path}, {"field", c.field_path}}},
        {"threads", c.threads},
    };
    if (c.command != "kobayashi") {
        const JetSpec j = c.jet();
        json c1 = json::array();
        for (int k = 0; k < c.m; ++k) {
            json row = json::array();
            for (int i = 0; i < c.n; ++i) row.push_back(j.c1(k, i));
            c1.push_back(row);
        }
        doc["jet"] = {{"c0", std::vector<double>(j.c0.data(), j.c0.data() + j.c0.size())}, {"c1", c1}};
    } else {
        const auto& k = c.kobayashi;
        doc["kobayashi"] = {{"target", k.target},   {"p", k.p},
                            {"X", k.X},             {"R_start", k.R_start},
                            {"growth", k.growth},   {"max_steps", k.max_steps},
                            {"conformal_tol", k.conformal_tol}};
    }
    return doc;
}

void apply_override(json& doc, const std::string& key, const std::string& value) {
    if (key.empty()) throw ConfigError("empty override key", "");
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("malformed override key", key);
        if (!node->is_object()) throw ConfigError("override path crosses a non-object value", key);
        if (dot == std::string::npos) {
            (*node)[part] = parsed;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

} // namespace jetsolve
