#ifndef QBFCS_RUN_CONFIG_HPP
#define QBFCS_RUN_CONFIG_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "qbfcs/battery.hpp"
#include "qbfcs/dynamics.hpp"
#include "qbfcs/fockspace.hpp"

namespace qbfcs {

enum class OutputFormat { Csv, Json };

/// Parsed run configuration. Frequencies are in units of omega_qub when
/// given as ratios; everything is stored resolved (hbar = 1).
struct RunConfig {
    double omega_qub = 1.0;
    double omega_cav = 1.0;
    double g = 0.01;

    std::vector<CavityStateSpec> states;
    std::vector<std::string> labels; // unique, parallel to states

    battery::TauGrid grid;
    TruncationRequest truncation;
    int n_order = 4;
    int workers = 0;

    std::string output_path = "curves.csv";
    OutputFormat output_format = OutputFormat::Csv;

    JCParams params() const { return JCParams(omega_qub, omega_cav, g); }
    battery::CurvesRequest curves_request() const;
};

/// Strict parser: unknown keys, missing required keys, or out-of-range
/// values raise ConfigError with the offending key in the message.
///
/// Schema (top level):
///   omega_qub: number > 0                          [required]
///   omega_cav: number > 0  XOR  detuning_ratio: number   [exactly one]
///   g_ratio: number >= 0                           [required]
///   states: non-empty array of state objects       [required]
///   tau_grid: {gtau_min, gtau_max, points}         [optional]
///   truncation: {tail_tol, n_max?}                 [optional]
///   n_order: integer in [1, 8]                     [optional, default 4]
///   workers: integer >= 0                          [optional, default 0]
///   output: {path, format: "csv"|"json"}           [optional]
///
/// State objects: {"kind": "fock", "n": int >= 0}
///   {"kind": "coherent", "alpha": number | [re, im]}
///   {"kind": "thermal", "nbar": number >= 0}  or  {"kind": "thermal", "beta": number > 0}
///   {"kind": "squeezed", "zeta": number | [re, im], "alpha_tilde": number | [re, im]}
RunConfig parse_run_config(const nlohmann::json& doc);

/// Loads and parses a JSON file; file errors raise ConfigError.
RunConfig load_run_config(const std::string& path);

/// Built-in default: the weakly detuned, weakly coupled comparison of the
/// four state families at matched mean photon number 5.
RunConfig default_run_config();

} // namespace qbfcs

#endif
