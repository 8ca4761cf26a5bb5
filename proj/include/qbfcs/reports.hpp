#ifndef QBFCS_REPORTS_HPP
#define QBFCS_REPORTS_HPP

#include <string>
#include <vector>

#include "qbfcs/battery.hpp"
#include "qbfcs/fcs.hpp"
#include "qbfcs/run_config.hpp"

namespace qbfcs {

/// CSV rendering of charging curves. Header:
///   state,g_tau,mean_dU_over_hw,var_dU_over_hw2,snr,power_over_hw2,fidelity
/// Numbers use shortest round-trip formatting; infinities print as "inf".
std::string curves_to_csv(const std::vector<battery::StateCurve>& curves);

/// JSON rendering: {"columns": [...], "rows": [{...}, ...]} with the same
/// row order and values as the CSV (infinite snr becomes the string "inf").
std::string curves_to_json(const std::vector<battery::StateCurve>& curves);

/// Human-readable moment/cumulant report for one state of a run
/// configuration at a fixed g*tau, including the frequency-ratio scaling
/// checks between heat, work, and qubit-energy moments.
std::string moments_report(const RunConfig& config, const std::string& state_label, double g_tau,
                           int order);

} // namespace qbfcs

#endif
