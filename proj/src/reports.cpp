#include "qbfcs/reports.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "qbfcs/errors.hpp"

namespace qbfcs {

namespace {

std::string fixed_width(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "% .9e", x);
    return buf;
}

} // namespace

std::string curves_to_csv(const std::vector<battery::StateCurve>& curves) {
    std::ostringstream out;
    out << "state,g_tau,mean_dU_over_hw,var_dU_over_hw2,snr,power_over_hw2,fidelity\n";
    for (const battery::StateCurve& curve : curves) {
        for (const battery::ChargingCurvePoint& point : curve.points) {
            out << curve.label << ',' << format_double(point.g_tau) << ','
                << format_double(point.mean_du) << ',' << format_double(point.var_du) << ','
                << format_double(point.snr) << ',' << format_double(point.power) << ','
                << format_double(point.fidelity) << '\n';
        }
    }
    return out.str();
}

std::string curves_to_json(const std::vector<battery::StateCurve>& curves) {
    nlohmann::ordered_json doc;
    doc["columns"] = {"state",           "g_tau", "mean_dU_over_hw", "var_dU_over_hw2",
                      "snr",             "power_over_hw2", "fidelity"};
    doc["rows"] = nlohmann::ordered_json::array();
    for (const battery::StateCurve& curve : curves) {
        for (const battery::ChargingCurvePoint& point : curve.points) {
            nlohmann::ordered_json row;
            row["state"] = curve.label;
            row["g_tau"] = point.g_tau;
            row["mean_dU_over_hw"] = point.mean_du;
            row["var_dU_over_hw2"] = point.var_du;
            if (std::isinf(point.snr)) {
                row["snr"] = "inf";
            } else {
                row["snr"] = point.snr;
            }
            row["power_over_hw2"] = point.power;
            row["fidelity"] = point.fidelity;
            doc["rows"].push_back(std::move(row));
        }
    }
    return doc.dump(2) + "\n";
}

std::string moments_report(const RunConfig& config, const std::string& state_label, double g_tau,
                           int order) {
    if (!(g_tau > 0.0)) throw ConfigError("g_tau must be > 0");
    if (!(config.g > 0.0)) throw ConfigError("moments need coupling g > 0");

    std::size_t found = config.states.size();
    for (std::size_t i = 0; i < config.labels.size(); ++i) {
        if (config.labels[i] == state_label) {
            found = i;
            break;
        }
    }
    if (found == config.states.size()) {
        std::ostringstream msg;
        msg << "state '" << state_label << "' not in configuration; available:";
        for (const std::string& label : config.labels) msg << ' ' << label;
        throw ConfigError(msg.str());
    }

    const CavityStateSpec& spec = config.states[found];
    const JCParams params = config.params();
    const TruncationPolicy policy = resolve(config.truncation, spec);
    const CavityDensity cavity = build_cavity_state(spec, policy);
    const TimeWindow window(g_tau / params.g);
    const PhasePolynomial gf =
        generating_function(QubitDensity::ground(), cavity, params, window);
    const MomentTable table = cumulant_table(gf, order);

    std::ostringstream out;
    out << "state: " << state_label << "  g_tau: " << format_double(g_tau)
        << "  tau: " << format_double(window.tau) << "  cutoff n_max: " << policy.n_max << "\n";
    out << "moments up to order " << order
        << " (energy units hbar*omega_qub = " << format_double(params.omega_qub) << ")\n\n";

    auto print_series = [&](const char* name, const MomentSeries& series) {
        out << name << "\n";
        out << "  order        raw                central            cumulant\n";
        for (int n = 1; n <= order; ++n) {
            out << "  " << n << "    " << fixed_width(series.raw[static_cast<std::size_t>(n)])
                << "  " << fixed_width(series.central[static_cast<std::size_t>(n)]) << "  "
                << fixed_width(series.cumulant[static_cast<std::size_t>(n)]) << "\n";
        }
    };
    print_series("qubit energy change dU", table.energy_change);
    print_series("cavity energy released Q", table.heat);
    print_series("coupling work W = dU - Q", table.work);

    const double ratio = params.omega_cav / params.omega_qub;
    out << "\nfrequency-ratio scaling checks (expected exact):\n";
    for (int n = 1; n <= order; ++n) {
        const double du = table.energy_change.raw[static_cast<std::size_t>(n)];
        const double q = table.heat.raw[static_cast<std::size_t>(n)];
        const double w = table.work.raw[static_cast<std::size_t>(n)];
        out << "  n=" << n << "  Q/dU: ";
        if (du != 0.0) {
            out << format_double(q / du) << " vs (omega_cav/omega_qub)^n = "
                << format_double(std::pow(ratio, n));
        } else {
            out << "n/a (dU moment is 0)";
        }
        out << "   W/dU: ";
        if (du != 0.0) {
            out << format_double(w / du) << " vs (1 - omega_cav/omega_qub)^n = "
                << format_double(std::pow(1.0 - ratio, n));
        } else {
            out << "n/a";
        }
        out << "\n";
    }
    out << "\nnormalization residue: " << format_double(gf.normalization_residue())
        << "   max imaginary residue: " << format_double(table.max_imag_residue) << "\n";
    return out.str();
}

} // namespace qbfcs
