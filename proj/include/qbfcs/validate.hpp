#ifndef QBFCS_VALIDATE_HPP
#define QBFCS_VALIDATE_HPP

#include <string>
#include <vector>

#include "qbfcs/run_config.hpp"

namespace qbfcs {

struct ValidationCase {
    std::string name;
    bool passed = false;
    std::string detail; // worst residual and tolerance, human readable
};

struct ValidationReport {
    std::vector<ValidationCase> cases;

    bool all_passed() const;
    std::string render() const; // one [PASS]/[FAIL] line per case + summary
};

/// Names accepted by run_validation's filter:
///   propagator  - sector amplitudes vs dense matrix exponential
///   tilted-gf   - characteristic function vs dense dressed propagator
///   tpm         - moments vs the explicit two-point measurement scheme
///   finite-diff - exact moment derivatives vs finite differences
///   scaling     - heat/work moments as frequency-ratio rescalings of dU
const std::vector<std::string>& validation_case_names();

/// Cross-checks the fast paths against the dense reference implementations
/// on the configuration's parameters and states. Empty filter = all cases.
/// Unknown names in the filter raise ConfigError.
ValidationReport run_validation(const RunConfig& config,
                                const std::vector<std::string>& case_filter = {});

} // namespace qbfcs

#endif
