#ifndef QBFCS_BATTERY_HPP
#define QBFCS_BATTERY_HPP

#include <string>
#include <vector>

#include "qbfcs/dynamics.hpp"
#include "qbfcs/fcs.hpp"
#include "qbfcs/fockspace.hpp"

namespace qbfcs {
namespace battery {

/// mean^2 / variance. Returns 0 when the mean is 0, +infinity when the
/// variance is smaller than 1e-15 * mean^2 (noiseless transfer), and clamps
/// tiny negative variances (>= -1e-12) to that threshold test first.
double snr(double mean, double variance);

/// Average charging power mean_energy / tau. Requires tau > 0.
double charging_power(double mean_energy, double tau);

/// Probability of finding the qubit excited; for the pure excited target
/// this is the charging fidelity.
double fidelity_to_excited(const QubitDensity& qubit);

struct TauOptOptions {
    int grid_points = 600;      // coarse scan resolution over (0, gtau_max]
    double gtau_max = 3.14159265358979323846;
    double rel_tol = 1e-6;      // golden-section stopping width, relative
    double tail_tol = 1e-10;    // cutoff selection for non-Fock states
    bool force_numeric = false; // scan even when a closed form exists
};

/// Earliest time maximizing the signal-to-noise ratio of the qubit energy
/// gain, for the battery starting in the ground state.
/// Fock inputs use tau_opt = pi / (2 sqrt(g^2 N + (detuning/2)^2)) unless
/// force_numeric is set; other states are scanned on a grid over
/// g*tau in (0, gtau_max] and refined by golden-section search.
/// Throws std::invalid_argument when no energy can flow (g = 0, or a Fock
/// state with N = 0).
double tau_opt(const JCParams& params, const CavityStateSpec& spec,
               const TauOptOptions& opts = {});

/// Closed-form charging power at the optimal time for a Fock input:
///   P = 2 g^2 N omega_qub / (pi sqrt(g^2 N + (detuning/2)^2)).
double fock_power_at_tau_opt(const JCParams& params, int photons);

/// One sampled point of a charging curve. Energies are reported in units of
/// the qubit quantum: mean_du is <dU>/omega_qub, var_du is <dU^2>_c/omega_qub^2,
/// power is P/omega_qub^2 (hbar = 1).
struct ChargingCurvePoint {
    double g_tau = 0.0;
    double mean_du = 0.0;
    double var_du = 0.0;
    double snr = 0.0;
    double power = 0.0;
    double fidelity = 0.0;
};

struct StateCurve {
    std::string label;
    std::vector<ChargingCurvePoint> points;
};

/// Inclusive uniform grid over g*tau. Requires 0 < gtau_min < gtau_max and
/// points >= 2.
struct TauGrid {
    double gtau_min = 0.01;
    double gtau_max = 3.0;
    int points = 300;

    void validate() const;
    double at(int i) const {
        return gtau_min + (gtau_max - gtau_min) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
    }
};

struct CurvesRequest {
    JCParams params;
    std::vector<CavityStateSpec> states;
    std::vector<std::string> labels; // parallel to states; empty -> kind names
    TauGrid grid;
    TruncationRequest truncation;
    int workers = 0; // 0 = hardware concurrency
};

/// Charging curves for every requested state over the grid, battery starting
/// in the ground state. Grid points are evaluated in parallel; results are
/// deterministic (each point writes only its own slot).
std::vector<StateCurve> charging_curves(const CurvesRequest& request);

} // namespace battery
} // namespace qbfcs

#endif
