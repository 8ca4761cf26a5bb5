#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbfcs/battery.hpp"
#include "qbfcs/errors.hpp"
#include "qbfcs/reports.hpp"
#include "qbfcs/run_config.hpp"
#include "qbfcs/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitTruncationError = 3;

struct CurvesArgs {
    std::string config_path;
    std::string out_path;
    std::string format;
    int workers = -1;
};

struct MomentsArgs {
    std::string config_path;
    std::string state_label;
    double g_tau = 0.0;
    int order = 4;
};

struct ValidateArgs {
    std::string config_path;
    std::vector<std::string> cases;
};

qbfcs::RunConfig load_or_default(const std::string& path) {
    return path.empty() ? qbfcs::default_run_config() : qbfcs::load_run_config(path);
}

int run_curves(const CurvesArgs& args) {
    qbfcs::RunConfig config = load_or_default(args.config_path);
    if (!args.out_path.empty()) config.output_path = args.out_path;
    if (!args.format.empty()) {
        if (args.format == "csv") {
            config.output_format = qbfcs::OutputFormat::Csv;
        } else if (args.format == "json") {
            config.output_format = qbfcs::OutputFormat::Json;
        } else {
            throw qbfcs::ConfigError("--format must be 'csv' or 'json'");
        }
    }
    if (args.workers >= 0) config.workers = args.workers;

    const std::vector<qbfcs::battery::StateCurve> curves =
        qbfcs::battery::charging_curves(config.curves_request());
    const std::string rendered = config.output_format == qbfcs::OutputFormat::Csv
                                     ? qbfcs::curves_to_csv(curves)
                                     : qbfcs::curves_to_json(curves);
    std::ofstream out(config.output_path);
    if (!out) {
        throw qbfcs::ConfigError("cannot open output file '" + config.output_path + "'");
    }
    out << rendered;
    out.close();
    if (!out) {
        throw qbfcs::ConfigError("failed writing output file '" + config.output_path + "'");
    }

    std::size_t rows = 0;
    for (const auto& curve : curves) rows += curve.points.size();
    std::cout << "wrote " << rows << " rows across " << curves.size() << " states to "
              << config.output_path << "\n";
    return kExitOk;
}

int run_moments(const MomentsArgs& args) {
    const qbfcs::RunConfig config = load_or_default(args.config_path);
    std::cout << qbfcs::moments_report(config, args.state_label, args.g_tau, args.order);
    return kExitOk;
}

int run_validate(const ValidateArgs& args) {
    const qbfcs::RunConfig config = load_or_default(args.config_path);
    const qbfcs::ValidationReport report = qbfcs::run_validation(config, args.cases);
    std::cout << report.render();
    return report.all_passed() ? kExitOk : kExitValidationFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Full counting statistics of a qubit battery charged by a single cavity mode"};
    app.require_subcommand(1);

    CurvesArgs curves_args;
    CLI::App* curves = app.add_subcommand(
        "curves", "Sweep g*tau and write per-state charging curves (csv or json)");
    curves->add_option("--config", curves_args.config_path,
                       "JSON run configuration (omitted: built-in default)");
    curves->add_option("--out", curves_args.out_path, "Output path (overrides config)");
    curves->add_option("--format", curves_args.format, "Output format: csv or json");
    curves->add_option("--workers", curves_args.workers,
                       "Worker threads (0 = hardware concurrency)")
        ->check(CLI::Range(0, 256));

    MomentsArgs moments_args;
    CLI::App* moments = app.add_subcommand(
        "moments", "Print moments and cumulants for one state at a fixed g*tau");
    moments->add_option("--config", moments_args.config_path,
                        "JSON run configuration (omitted: built-in default)");
    moments->add_option("--state", moments_args.state_label, "State label from the configuration")
        ->required();
    moments->add_option("--gtau", moments_args.g_tau, "Dimensionless time g*tau")->required();
    moments->add_option("--order", moments_args.order, "Highest moment order (1-8)")
        ->check(CLI::Range(1, 8));

    ValidateArgs validate_args;
    CLI::App* validate = app.add_subcommand(
        "validate", "Cross-check fast paths against dense reference implementations");
    validate->add_option("--config", validate_args.config_path,
                         "JSON run configuration (omitted: built-in default)");
    validate->add_option("--cases", validate_args.cases,
                         "Subset of cases (comma separated): propagator, tilted-gf, tpm, "
                         "finite-diff, scaling")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    try {
        if (curves->parsed()) return run_curves(curves_args);
        if (moments->parsed()) return run_moments(moments_args);
        if (validate->parsed()) return run_validate(validate_args);
        std::cerr << "no subcommand selected\n";
        return kExitConfigError;
    } catch (const qbfcs::TruncationError& e) {
        std::cerr << "truncation error: " << e.what() << "\n";
        return kExitTruncationError;
    } catch (const qbfcs::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}
