#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qbfcs/battery.hpp"

using namespace qbfcs;

namespace {

JCParams detuned_params() { return JCParams(1.0, 0.995, 0.01); }
JCParams resonant_params() { return JCParams(1.0, 1.0, 0.01); }

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

/// Independent Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(sigma) rho
/// sqrt(sigma)))^2 for 2x2 density matrices, via eigendecomposition.
double uhlmann_fidelity(const Eigen::Matrix2cd& rho, const Eigen::Matrix2cd& sigma) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> sig_eig(sigma);
    Eigen::Vector2d sig_roots = sig_eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix2cd sqrt_sigma = sig_eig.eigenvectors() *
                                        sig_roots.asDiagonal().toDenseMatrix().cast<cdouble>() *
                                        sig_eig.eigenvectors().adjoint();
    const Eigen::Matrix2cd inner = sqrt_sigma * rho * sqrt_sigma;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> inner_eig(inner);
    const Eigen::Vector2d roots = inner_eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const double trace = roots.sum();
    return trace * trace;
}

} // namespace

TEST_CASE("signal-to-noise ratio handles the edge regimes", "[battery]") {
    REQUIRE(battery::snr(0.0, 0.5) == 0.0);
    REQUIRE(battery::snr(3.0, 2.0) == 4.5);
    REQUIRE(std::isinf(battery::snr(1.0, 0.0)));
    // A tiny negative variance from floating-point cancellation still counts
    // as noiseless transfer.
    REQUIRE(std::isinf(battery::snr(2e-8, -1e-13)));
    REQUIRE(std::isinf(battery::snr(1.0, 9e-16)));
    REQUIRE(battery::snr(1.0, 2e-15) == Catch::Approx(5e14));
    REQUIRE_THROWS_AS(battery::snr(1.0, -1e-11), std::invalid_argument);
}

TEST_CASE("charging power is mean energy over time", "[battery]") {
    REQUIRE(battery::charging_power(5.0, 2.0) == 2.5);
    REQUIRE(battery::charging_power(0.0, 1.0) == 0.0);
    REQUIRE_THROWS_AS(battery::charging_power(1.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(battery::charging_power(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("fidelity to the charged state is the excited population", "[battery]") {
    REQUIRE(battery::fidelity_to_excited(QubitDensity::ground()) == 0.0);
    REQUIRE(battery::fidelity_to_excited(QubitDensity::excited()) == 1.0);

    // Cross-check against the general Uhlmann fidelity for mixed states.
    Eigen::Matrix2cd target = Eigen::Matrix2cd::Zero();
    target(0, 0) = 1.0;
    const std::vector<Eigen::Matrix2cd> probes = [] {
        std::vector<Eigen::Matrix2cd> list;
        Eigen::Matrix2cd m;
        m << cdouble(0.67, 0.0), cdouble(0.21, -0.13), cdouble(0.21, 0.13), cdouble(0.33, 0.0);
        list.push_back(m);
        m << cdouble(0.5, 0.0), cdouble(0.0, 0.5), cdouble(0.0, -0.5), cdouble(0.5, 0.0);
        list.push_back(m);
        m << cdouble(0.08, 0.0), cdouble(0.0, 0.0), cdouble(0.0, 0.0), cdouble(0.92, 0.0);
        list.push_back(m);
        return list;
    }();
    for (const Eigen::Matrix2cd& m : probes) {
        const QubitDensity rho = QubitDensity::from_matrix(m);
        REQUIRE(std::abs(battery::fidelity_to_excited(rho) - uhlmann_fidelity(m, target)) <
                1e-12);
    }
}

TEST_CASE("optimal charging time closed form pins the photon-number input", "[battery]") {
    const double detuned_gtau = 0.01 * battery::tau_opt(detuned_params(),
                                                        CavityStateSpec::fock(5));
    REQUIRE(rel_diff(detuned_gtau, 0.6981317007977319) < 1e-12);

    const double resonant_gtau = 0.01 * battery::tau_opt(resonant_params(),
                                                         CavityStateSpec::fock(5));
    REQUIRE(rel_diff(resonant_gtau, 0.7024814731040726) < 1e-12);

    // More photons charge faster.
    REQUIRE(battery::tau_opt(resonant_params(), CavityStateSpec::fock(20)) <
            battery::tau_opt(resonant_params(), CavityStateSpec::fock(5)));
}

TEST_CASE("numeric optimal-time search agrees with the closed form", "[battery]") {
    // 602 scan points place the first ratio peak 0.22 steps from a sample and
    // the equal-height second peak 0.33 steps away, so the earliest-maximum
    // rule settles on the first peak with a clear margin.
    battery::TauOptOptions opts;
    opts.grid_points = 602;
    opts.force_numeric = true;

    const double closed = battery::tau_opt(detuned_params(), CavityStateSpec::fock(5));
    const double numeric = battery::tau_opt(detuned_params(), CavityStateSpec::fock(5), opts);
    REQUIRE(rel_diff(numeric, closed) < 2e-6);
}

TEST_CASE("optimal-time search validates its inputs", "[battery]") {
    REQUIRE_THROWS_AS(battery::tau_opt(JCParams(1.0, 1.0, 0.0), CavityStateSpec::fock(5)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(battery::tau_opt(resonant_params(), CavityStateSpec::fock(0)),
                      std::invalid_argument);

    battery::TauOptOptions bad_grid;
    bad_grid.grid_points = 1;
    bad_grid.force_numeric = true;
    REQUIRE_THROWS_AS(battery::tau_opt(resonant_params(), CavityStateSpec::fock(5), bad_grid),
                      std::invalid_argument);

    battery::TauOptOptions bad_span;
    bad_span.gtau_max = 0.0;
    bad_span.force_numeric = true;
    REQUIRE_THROWS_AS(battery::tau_opt(resonant_params(), CavityStateSpec::fock(5), bad_span),
                      std::invalid_argument);

    battery::TauOptOptions bad_tol;
    bad_tol.rel_tol = 0.0;
    bad_tol.force_numeric = true;
    REQUIRE_THROWS_AS(battery::tau_opt(resonant_params(), CavityStateSpec::fock(5), bad_tol),
                      std::invalid_argument);
}

TEST_CASE("peak charging power for photon-number inputs", "[battery]") {
    REQUIRE(rel_diff(battery::fock_power_at_tau_opt(detuned_params(), 5),
                     0.014147106052612919) < 1e-12);
    REQUIRE(rel_diff(battery::fock_power_at_tau_opt(resonant_params(), 5),
                     0.014235250868343543) < 1e-12);
    REQUIRE_THROWS_AS(battery::fock_power_at_tau_opt(resonant_params(), 0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(battery::fock_power_at_tau_opt(JCParams(1.0, 1.0, 0.0), 5),
                      std::invalid_argument);

    // Power at the optimum equals mean energy over the optimal time.
    const double tau = battery::tau_opt(resonant_params(), CavityStateSpec::fock(5));
    const FockGroundStats stats =
        fock_ground_closed_form(resonant_params(), 5, TimeWindow(tau));
    REQUIRE(rel_diff(battery::fock_power_at_tau_opt(resonant_params(), 5),
                     battery::charging_power(stats.mean, tau)) < 1e-12);
}

TEST_CASE("time grid validation and endpoints", "[battery]") {
    battery::TauGrid grid{0.25, 2.0, 8};
    grid.validate();
    REQUIRE(grid.at(0) == 0.25);
    REQUIRE(std::abs(grid.at(7) - 2.0) < 1e-12);
    REQUIRE(std::abs(grid.at(4) - 1.25) < 1e-15);

    REQUIRE_THROWS_AS((battery::TauGrid{0.0, 2.0, 8}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((battery::TauGrid{0.5, 0.5, 8}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((battery::TauGrid{0.5, 2.0, 1}.validate()), std::invalid_argument);
}

TEST_CASE("charging curves are deterministic and internally consistent", "[battery]") {
    battery::CurvesRequest request{
        detuned_params(),
        {CavityStateSpec::fock(3), CavityStateSpec::coherent(1.2)},
        {},
        battery::TauGrid{0.3, 1.5, 7},
        TruncationRequest{std::nullopt, 1e-10},
        1,
    };
    const std::vector<battery::StateCurve> serial = battery::charging_curves(request);
    request.workers = 4;
    const std::vector<battery::StateCurve> threaded = battery::charging_curves(request);

    REQUIRE(serial.size() == 2);
    REQUIRE(serial[0].label == "fock");
    REQUIRE(serial[1].label == "coherent");

    const double g = request.params.g;
    for (std::size_t s = 0; s < serial.size(); ++s) {
        REQUIRE(serial[s].points.size() == 7);
        for (std::size_t i = 0; i < serial[s].points.size(); ++i) {
            const battery::ChargingCurvePoint& point = serial[s].points[i];
            const battery::ChargingCurvePoint& twin = threaded[s].points[i];
            // Determinism: every field identical regardless of worker count.
            REQUIRE(point.g_tau == twin.g_tau);
            REQUIRE(point.mean_du == twin.mean_du);
            REQUIRE(point.var_du == twin.var_du);
            REQUIRE(point.snr == twin.snr);
            REQUIRE(point.power == twin.power);
            REQUIRE(point.fidelity == twin.fidelity);

            REQUIRE(point.g_tau == Catch::Approx(request.grid.at(static_cast<int>(i))));
            // power = mean energy / tau in qubit-quantum units.
            REQUIRE(rel_diff(point.power, point.mean_du * g / point.g_tau) < 1e-12);
            REQUIRE(point.fidelity >= -1e-12);
            REQUIRE(point.fidelity <= 1.0 + 1e-12);
            // The battery starts uncharged, so its mean energy gain equals
            // the excited population reached by the evolved state.
            REQUIRE(std::abs(point.mean_du - point.fidelity) < 1e-8);
            if (std::isfinite(point.snr) && point.var_du > 1e-12) {
                REQUIRE(rel_diff(point.snr, point.mean_du * point.mean_du / point.var_du) <
                        1e-9);
            }
        }
    }
}

TEST_CASE("charging curves accept custom labels and reject bad requests", "[battery]") {
    battery::CurvesRequest request{
        resonant_params(),
        {CavityStateSpec::fock(2)},
        {"two-photon"},
        battery::TauGrid{0.5, 1.0, 2},
        TruncationRequest{std::nullopt, 1e-10},
        1,
    };
    const std::vector<battery::StateCurve> curves = battery::charging_curves(request);
    REQUIRE(curves.size() == 1);
    REQUIRE(curves[0].label == "two-photon");

    battery::CurvesRequest no_states = request;
    no_states.states.clear();
    no_states.labels.clear();
    REQUIRE_THROWS_AS(battery::charging_curves(no_states), std::invalid_argument);

    battery::CurvesRequest label_mismatch = request;
    label_mismatch.labels = {"a", "b"};
    REQUIRE_THROWS_AS(battery::charging_curves(label_mismatch), std::invalid_argument);

    battery::CurvesRequest no_coupling = request;
    no_coupling.params = JCParams(1.0, 1.0, 0.0);
    REQUIRE_THROWS_AS(battery::charging_curves(no_coupling), std::invalid_argument);

    battery::CurvesRequest bad_grid = request;
    bad_grid.grid.points = 1;
    REQUIRE_THROWS_AS(battery::charging_curves(bad_grid), std::invalid_argument);
}
