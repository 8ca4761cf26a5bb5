#include "qbfcs/battery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qbfcs/parallel.hpp"

namespace qbfcs {
namespace battery {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGoldenRatio = 0.6180339887498949; // (sqrt(5) - 1) / 2

/// Golden-section maximization on [lo, hi]; stops when the bracket is
/// narrower than rel_tol relative to its midpoint.
template <typename Fn>
double golden_max(Fn f, double lo, double hi, double rel_tol) {
    double a = lo;
    double b = hi;
    double c = b - kGoldenRatio * (b - a);
    double d = a + kGoldenRatio * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 200; ++iter) {
        if (b - a <= rel_tol * std::max(1e-12, 0.5 * (a + b))) break;
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGoldenRatio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGoldenRatio * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

void require_charging_possible(const JCParams& params, const CavityStateSpec& spec) {
    if (!(params.g > 0.0)) {
        throw std::invalid_argument("no charging possible: coupling g is zero");
    }
    if (spec.is_fock() && spec.as_fock().n == 0) {
        throw std::invalid_argument("no charging possible: empty cavity (fock n = 0)");
    }
}

} // namespace

double snr(double mean, double variance) {
    if (mean == 0.0) return 0.0;
    if (variance < -1e-12) {
        throw std::invalid_argument("variance must be >= -1e-12, got " +
                                    format_double(variance));
    }
    if (variance <= 1e-15 * mean * mean) {
        return std::numeric_limits<double>::infinity();
    }
    return mean * mean / variance;
}

double charging_power(double mean_energy, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("charging power needs tau > 0");
    return mean_energy / tau;
}

double fidelity_to_excited(const QubitDensity& qubit) {
    return qubit.excited_population();
}

void TauGrid::validate() const {
    if (!(gtau_min > 0.0)) throw std::invalid_argument("tau_grid.gtau_min must be > 0");
    if (!(gtau_max > gtau_min)) {
        throw std::invalid_argument("tau_grid.gtau_max must exceed gtau_min");
    }
    if (points < 2) throw std::invalid_argument("tau_grid.points must be >= 2");
}

double tau_opt(const JCParams& params, const CavityStateSpec& spec, const TauOptOptions& opts) {
    require_charging_possible(params, spec);
    const double g = params.g;
    const double half_det = 0.5 * params.detuning();

    if (spec.is_fock() && !opts.force_numeric) {
        const double phi =
            g * g * static_cast<double>(spec.as_fock().n) + half_det * half_det;
        return 0.5 * kPi / std::sqrt(phi);
    }

    if (opts.grid_points < 2) throw std::invalid_argument("grid_points must be >= 2");
    if (!(opts.gtau_max > 0.0)) throw std::invalid_argument("gtau_max must be > 0");
    if (!(opts.rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be > 0");

    const TruncationPolicy policy{required_cutoff(spec, opts.tail_tol), opts.tail_tol};
    const CavityDensity cavity = build_cavity_state(spec, policy);
    const QubitDensity ground = QubitDensity::ground();

    auto snr_at = [&](double g_tau) {
        const PhasePolynomial gf =
            generating_function(ground, cavity, params, TimeWindow(g_tau / g));
        const double m1 = gf.joint_moment(1, 0);
        const double m2 = gf.joint_moment(2, 0);
        return snr(m1, m2 - m1 * m1);
    };

    // Coarse scan over (0, gtau_max], keeping the earliest maximum, then a
    // golden-section refinement inside the neighboring bracket.
    const int points = opts.grid_points;
    const double step = opts.gtau_max / static_cast<double>(points);
    int best = 1;
    double best_snr = -1.0;
    for (int i = 1; i <= points; ++i) {
        const double value = snr_at(step * static_cast<double>(i));
        if (value > best_snr) {
            best_snr = value;
            best = i;
        }
    }
    const double lo = best > 1 ? step * static_cast<double>(best - 1) : 0.5 * step;
    const double hi = best < points ? step * static_cast<double>(best + 1) : opts.gtau_max;
    const double g_tau_best = golden_max(snr_at, lo, hi, opts.rel_tol);
    return g_tau_best / g;
}

double fock_power_at_tau_opt(const JCParams& params, int photons) {
    require_charging_possible(params, CavityStateSpec::fock(photons));
    const double g = params.g;
    const double half_det = 0.5 * params.detuning();
    const double phi = g * g * static_cast<double>(photons) + half_det * half_det;
    return 2.0 * g * g * static_cast<double>(photons) * params.omega_qub /
           (kPi * std::sqrt(phi));
}

std::vector<StateCurve> charging_curves(const CurvesRequest& request) {
    request.grid.validate();
    if (request.states.empty()) throw std::invalid_argument("no states requested");
    if (!(request.params.g > 0.0)) {
        throw std::invalid_argument("charging curves need coupling g > 0");
    }
    if (!request.labels.empty() && request.labels.size() != request.states.size()) {
        throw std::invalid_argument("labels must be empty or match states");
    }

    const std::size_t n_states = request.states.size();
    const std::size_t n_points = static_cast<std::size_t>(request.grid.points);

    std::vector<StateCurve> curves(n_states);
    std::vector<CavityDensity> cavities;
    std::vector<JointState> initial_states;
    cavities.reserve(n_states);
    initial_states.reserve(n_states);
    const QubitDensity ground = QubitDensity::ground();
    for (std::size_t s = 0; s < n_states; ++s) {
        const TruncationPolicy policy = resolve(request.truncation, request.states[s]);
        cavities.push_back(build_cavity_state(request.states[s], policy));
        initial_states.push_back(JointState::product(ground, cavities.back()));
        curves[s].label =
            request.labels.empty() ? request.states[s].kind_name() : request.labels[s];
        curves[s].points.resize(n_points);
    }

    const double g = request.params.g;
    const double omega_qub = request.params.omega_qub;
    auto evaluate_point = [&](std::size_t flat) {
        const std::size_t s = flat / n_points;
        const std::size_t i = flat % n_points;
        const double g_tau = request.grid.at(static_cast<int>(i));
        const TimeWindow window(g_tau / g);

        const PhasePolynomial gf =
            generating_function(ground, cavities[s], request.params, window);
        const double m1 = gf.joint_moment(1, 0);
        const double m2 = gf.joint_moment(2, 0);
        const double var = m2 - m1 * m1;

        const PropagatorBlocks prop(request.params, window, cavities[s].n_max());
        const QubitDensity evolved = reduced_qubit(evolve_joint(prop, initial_states[s]));

        ChargingCurvePoint& point = curves[s].points[i];
        point.g_tau = g_tau;
        point.mean_du = m1 / omega_qub;
        point.var_du = var / (omega_qub * omega_qub);
        point.snr = snr(m1, var);
        point.power = charging_power(m1, window.tau) / (omega_qub * omega_qub);
        point.fidelity = fidelity_to_excited(evolved);
    };

    parallel_for(n_states * n_points, resolve_worker_count(request.workers), evaluate_point);
    return curves;
}

} // namespace battery
} // namespace qbfcs
