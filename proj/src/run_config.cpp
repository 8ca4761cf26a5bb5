#include "qbfcs/run_config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qbfcs/errors.hpp"

namespace qbfcs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (allowed.count(item.key()) == 0) {
            fail("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double number_at(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) fail(where + " is missing required key '" + key + "'");
    const json& value = obj.at(key);
    if (!value.is_number()) fail(where + "." + key + " must be a number");
    return value.get<double>();
}

int integer_at(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) fail(where + " is missing required key '" + key + "'");
    const json& value = obj.at(key);
    if (!value.is_number_integer()) fail(where + "." + key + " must be an integer");
    return value.get<int>();
}

cdouble complex_at(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) fail(where + " is missing required key '" + key + "'");
    const json& value = obj.at(key);
    if (value.is_number()) return cdouble(value.get<double>(), 0.0);
    if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
        return cdouble(value[0].get<double>(), value[1].get<double>());
    }
    fail(where + "." + key + " must be a number or a [re, im] pair");
}

CavityStateSpec parse_state(const json& obj, std::size_t index, double omega_cav) {
    const std::string where = "states[" + std::to_string(index) + "]";
    if (!obj.is_object()) fail(where + " must be an object");
    if (!obj.contains("kind") || !obj.at("kind").is_string()) {
        fail(where + " needs a string 'kind'");
    }
    const std::string kind = obj.at("kind").get<std::string>();
    try {
        if (kind == "fock") {
            check_keys(obj, where, {"kind", "n"});
            return CavityStateSpec::fock(integer_at(obj, where, "n"));
        }
        if (kind == "coherent") {
            check_keys(obj, where, {"kind", "alpha"});
            return CavityStateSpec::coherent(complex_at(obj, where, "alpha"));
        }
        if (kind == "thermal") {
            check_keys(obj, where, {"kind", "nbar", "beta"});
            const bool has_nbar = obj.contains("nbar");
            const bool has_beta = obj.contains("beta");
            if (has_nbar == has_beta) {
                fail(where + " needs exactly one of 'nbar' or 'beta'");
            }
            if (has_nbar) {
                return CavityStateSpec::thermal_from_nbar(number_at(obj, where, "nbar"));
            }
            return CavityStateSpec::thermal_from_beta(number_at(obj, where, "beta"), omega_cav);
        }
        if (kind == "squeezed") {
            check_keys(obj, where, {"kind", "zeta", "alpha_tilde"});
            return CavityStateSpec::squeezed_coherent(complex_at(obj, where, "zeta"),
                                                      complex_at(obj, where, "alpha_tilde"));
        }
    } catch (const std::invalid_argument& e) {
        fail(where + ": " + e.what());
    }
    fail(where + ".kind must be one of fock, coherent, thermal, squeezed (got '" + kind + "')");
}

std::vector<std::string> unique_labels(const std::vector<CavityStateSpec>& states) {
    std::vector<std::string> labels;
    labels.reserve(states.size());
    std::map<std::string, int> seen;
    for (const CavityStateSpec& spec : states) {
        const std::string base = spec.kind_name();
        const int count = ++seen[base];
        labels.push_back(count == 1 ? base : base + "_" + std::to_string(count));
    }
    return labels;
}

} // namespace

battery::CurvesRequest RunConfig::curves_request() const {
    return battery::CurvesRequest{params(), states, labels, grid, truncation, workers};
}

RunConfig parse_run_config(const json& doc) {
    if (!doc.is_object()) fail("configuration root must be a JSON object");
    check_keys(doc, "configuration",
               {"omega_qub", "omega_cav", "detuning_ratio", "g_ratio", "states", "tau_grid",
                "truncation", "n_order", "workers", "output"});

    RunConfig config;
    config.omega_qub = number_at(doc, "configuration", "omega_qub");
    if (!(config.omega_qub > 0.0)) fail("omega_qub must be > 0");

    const bool has_cav = doc.contains("omega_cav");
    const bool has_ratio = doc.contains("detuning_ratio");
    if (has_cav == has_ratio) {
        fail("configuration needs exactly one of 'omega_cav' or 'detuning_ratio'");
    }
    if (has_cav) {
        config.omega_cav = number_at(doc, "configuration", "omega_cav");
    } else {
        const double ratio = number_at(doc, "configuration", "detuning_ratio");
        config.omega_cav = config.omega_qub * (1.0 - ratio);
    }
    if (!(config.omega_cav > 0.0)) fail("resolved omega_cav must be > 0");

    const double g_ratio = number_at(doc, "configuration", "g_ratio");
    if (!(g_ratio >= 0.0)) fail("g_ratio must be >= 0");
    config.g = g_ratio * config.omega_qub;

    if (!doc.contains("states") || !doc.at("states").is_array() || doc.at("states").empty()) {
        fail("configuration needs a non-empty 'states' array");
    }
    config.states.clear();
    for (std::size_t i = 0; i < doc.at("states").size(); ++i) {
        config.states.push_back(parse_state(doc.at("states")[i], i, config.omega_cav));
    }
    config.labels = unique_labels(config.states);

    if (doc.contains("tau_grid")) {
        const json& grid = doc.at("tau_grid");
        if (!grid.is_object()) fail("tau_grid must be an object");
        check_keys(grid, "tau_grid", {"gtau_min", "gtau_max", "points"});
        config.grid.gtau_min = number_at(grid, "tau_grid", "gtau_min");
        config.grid.gtau_max = number_at(grid, "tau_grid", "gtau_max");
        config.grid.points = integer_at(grid, "tau_grid", "points");
        try {
            config.grid.validate();
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    if (doc.contains("truncation")) {
        const json& trunc = doc.at("truncation");
        if (!trunc.is_object()) fail("truncation must be an object");
        check_keys(trunc, "truncation", {"tail_tol", "n_max"});
        if (trunc.contains("tail_tol")) {
            config.truncation.tail_tol = number_at(trunc, "truncation", "tail_tol");
            if (!(config.truncation.tail_tol > 0.0) || config.truncation.tail_tol > 1e-6) {
                fail("truncation.tail_tol must lie in (0, 1e-6]");
            }
        }
        if (trunc.contains("n_max")) {
            const int n_max = integer_at(trunc, "truncation", "n_max");
            if (n_max < 1) fail("truncation.n_max must be >= 1");
            config.truncation.n_max = n_max;
        }
    }

    if (doc.contains("n_order")) {
        config.n_order = integer_at(doc, "configuration", "n_order");
        if (config.n_order < 1 || config.n_order > 8) fail("n_order must lie in [1, 8]");
    }

    if (doc.contains("workers")) {
        config.workers = integer_at(doc, "configuration", "workers");
        if (config.workers < 0 || config.workers > 256) {
            fail("workers must lie in [0, 256] (0 = hardware concurrency)");
        }
    }

    if (doc.contains("output")) {
        const json& output = doc.at("output");
        if (!output.is_object()) fail("output must be an object");
        check_keys(output, "output", {"path", "format"});
        if (output.contains("path")) {
            if (!output.at("path").is_string() || output.at("path").get<std::string>().empty()) {
                fail("output.path must be a non-empty string");
            }
            config.output_path = output.at("path").get<std::string>();
        }
        if (output.contains("format")) {
            if (!output.at("format").is_string()) fail("output.format must be a string");
            const std::string format = output.at("format").get<std::string>();
            if (format == "csv") {
                config.output_format = OutputFormat::Csv;
            } else if (format == "json") {
                config.output_format = OutputFormat::Json;
            } else {
                fail("output.format must be 'csv' or 'json' (got '" + format + "')");
            }
        }
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open configuration file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail("configuration file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc);
}

RunConfig default_run_config() {
    // Four state families at matched mean photon number 5, weak coupling,
    // half-percent detuning. The squeezed displacement is chosen so that
    // alpha_tilde^2 exp(-2 zeta) + sinh^2(zeta) = 5 exactly at zeta = 0.6.
    RunConfig config;
    config.omega_qub = 1.0;
    config.omega_cav = 0.995;
    config.g = 0.01;
    config.states = {
        CavityStateSpec::fock(5),
        CavityStateSpec::coherent(std::sqrt(5.0)),
        CavityStateSpec::thermal_from_nbar(5.0),
        CavityStateSpec::squeezed_coherent(0.6, 3.9057456368650803),
    };
    config.labels = unique_labels(config.states);
    config.grid = battery::TauGrid{0.01, 3.0, 300};
    config.truncation = TruncationRequest{std::nullopt, 1e-10};
    config.n_order = 4;
    config.workers = 0;
    config.output_path = "curves.csv";
    config.output_format = OutputFormat::Csv;
    return config;
}

} // namespace qbfcs
