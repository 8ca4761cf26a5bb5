#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "qbfcs/dynamics.hpp"
#include "qbfcs/fockspace.hpp"

using namespace qbfcs;

namespace {

constexpr double kPi = 3.14159265358979323846;

JCParams detuned_params() { return JCParams(1.0, 0.995, 0.01); }
JCParams resonant_params() { return JCParams(1.0, 1.0, 0.01); }

// Excitation count q-dependent: |e,n> holds n+1 quanta, |g,n> holds n.
Eigen::MatrixXcd excitation_operator(int fdim) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(2 * fdim, 2 * fdim);
    for (int n = 0; n < fdim; ++n) {
        op(JointState::index(0, n, fdim), JointState::index(0, n, fdim)) = n + 1.0;
        op(JointState::index(1, n, fdim), JointState::index(1, n, fdim)) = n;
    }
    return op;
}

} // namespace

TEST_CASE("parameter and time validation", "[dynamics]") {
    REQUIRE_THROWS_AS(JCParams(0.0, 1.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(JCParams(1.0, -1.0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(JCParams(1.0, 1.0, -0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(TimeWindow(-1.0), std::invalid_argument);
    REQUIRE(JCParams(1.0, 0.995, 0.01).detuning() == Catch::Approx(0.005));
    REQUIRE_FALSE(JCParams(1.0, 1.0, 0.05).rwa_suspect());
    REQUIRE(JCParams(1.0, 1.0, 0.2).rwa_suspect());
}

TEST_CASE("zero time gives the identity propagator", "[dynamics]") {
    const PropagatorBlocks prop(detuned_params(), TimeWindow(0.0), 8);
    const Eigen::MatrixXcd u = prop.assemble_dense();
    REQUIRE((u - Eigen::MatrixXcd::Identity(18, 18)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("zero coupling leaves populations frozen", "[dynamics]") {
    const JCParams params(1.0, 0.9, 0.0);
    const PropagatorBlocks prop(params, TimeWindow(2.7), 6);
    for (int n = 0; n <= 6; ++n) {
        REQUIRE(std::abs(std::abs(prop.stay_excited(n)) - 1.0) < 1e-14);
        REQUIRE(std::abs(std::abs(prop.stay_ground(n)) - 1.0) < 1e-14);
    }
    for (int n = 0; n < 6; ++n) {
        REQUIRE(std::abs(prop.emit(n)) == 0.0);
        REQUIRE(std::abs(prop.absorb(n)) == 0.0);
    }
}

TEST_CASE("vacuum plus ground qubit is stationary", "[dynamics]") {
    const JCParams params = detuned_params();
    const PropagatorBlocks prop(params, TimeWindow(37.0), 4);
    // |g,0> only picks up the free phase exp(+i omega_qub tau / 2).
    const cdouble expected = std::exp(imag_unit * 0.5 * params.omega_qub * 37.0);
    REQUIRE(std::abs(prop.stay_ground(0) - expected) < 1e-13);

    const CavityDensity vacuum =
        build_cavity_state(CavityStateSpec::fock(0), TruncationPolicy{4, 1e-10});
    const JointState initial = JointState::product(QubitDensity::ground(), vacuum);
    const JointState evolved = evolve_joint(prop, initial);
    REQUIRE((evolved.matrix() - initial.matrix()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("resonant pi/2 sector swap has unit magnitude", "[dynamics]") {
    // In the one-excitation sector the swap |g,1> -> |e,0> completes at
    // g*tau = pi/2 on resonance.
    const JCParams params = resonant_params();
    const double tau = 0.5 * kPi / params.g;
    const PropagatorBlocks prop(params, TimeWindow(tau), 3);
    REQUIRE(std::abs(std::abs(prop.absorb(0)) - 1.0) < 1e-12);
    REQUIRE(std::abs(std::abs(prop.emit(0)) - 1.0) < 1e-12);
    REQUIRE(std::abs(prop.stay_ground(1)) < 1e-12);
    REQUIRE(std::abs(prop.stay_excited(0)) < 1e-12);
}

TEST_CASE("assembled propagator is unitary away from the cutoff sector", "[dynamics]") {
    for (const JCParams& params : {detuned_params(), resonant_params()}) {
        const int n_max = 9;
        const int fdim = n_max + 1;
        const PropagatorBlocks prop(params, TimeWindow(1.3 / params.g), n_max);
        const Eigen::MatrixXcd u = prop.assemble_dense();
        Eigen::MatrixXcd gram = u.adjoint() * u - Eigen::MatrixXcd::Identity(2 * fdim, 2 * fdim);

        // The only defect sits at |e,n_max>, whose partner |g,n_max+1> is
        // beyond the cutoff; its size is the missing transfer probability.
        const int edge = JointState::index(0, n_max, fdim);
        const double phi = params.g * params.g * static_cast<double>(n_max + 1) +
                           0.25 * params.detuning() * params.detuning();
        const double s = sin_over_root(prop.tau(), phi);
        const double missing =
            params.g * params.g * static_cast<double>(n_max + 1) * s * s;
        REQUIRE(std::abs(gram(edge, edge) + missing) < 1e-12);
        gram(edge, edge) = 0.0;
        REQUIRE(gram.cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("propagator commutes with the excitation number", "[dynamics]") {
    for (const JCParams& params : {detuned_params(), resonant_params()}) {
        const int n_max = 7;
        const PropagatorBlocks prop(params, TimeWindow(0.9 / params.g), n_max);
        const Eigen::MatrixXcd u = prop.assemble_dense();
        const Eigen::MatrixXcd op = excitation_operator(n_max + 1);
        REQUIRE((u * op - op * u).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("propagators compose over consecutive windows", "[dynamics]") {
    // Every complete sector composes exactly. The lone |e,n_max> level keeps
    // the untruncated amplitude, whose composition runs through the absent
    // |g,n_max+1> partner, so its row and column are excluded; state builders
    // guarantee one level of headroom, so that level never holds population.
    const JCParams params = detuned_params();
    const int n_max = 8;
    const double tau1 = 0.4 / params.g;
    const double tau2 = 1.1 / params.g;
    const Eigen::MatrixXcd u1 = PropagatorBlocks(params, TimeWindow(tau1), n_max).assemble_dense();
    const Eigen::MatrixXcd u2 = PropagatorBlocks(params, TimeWindow(tau2), n_max).assemble_dense();
    const Eigen::MatrixXcd u12 =
        PropagatorBlocks(params, TimeWindow(tau1 + tau2), n_max).assemble_dense();
    Eigen::MatrixXcd diff = u2 * u1 - u12;
    const int top = JointState::index(0, n_max, n_max + 1);
    diff.row(top).setZero();
    diff.col(top).setZero();
    REQUIRE(diff.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("a fock-loaded cavity charges the qubit completely at the swap time", "[dynamics]") {
    // Ground qubit with exactly 5 photons on resonance: full transfer to
    // |e,4> at tau = pi / (2 g sqrt(5)), full return at twice that.
    const JCParams params = resonant_params();
    const double tau_swap = 0.5 * kPi / (params.g * std::sqrt(5.0));
    const CavityDensity cavity =
        build_cavity_state(CavityStateSpec::fock(5), TruncationPolicy{6, 1e-10});
    const JointState initial = JointState::product(QubitDensity::ground(), cavity);

    const JointState charged =
        evolve_joint(PropagatorBlocks(params, TimeWindow(tau_swap), 6), initial);
    const int fdim = 7;
    const int target = JointState::index(0, 4, fdim);
    REQUIRE(std::abs(charged.matrix()(target, target) - cdouble(1.0, 0.0)) < 1e-10);
    REQUIRE(reduced_qubit(charged).excited_population() == Catch::Approx(1.0).margin(1e-10));

    const JointState returned =
        evolve_joint(PropagatorBlocks(params, TimeWindow(2.0 * tau_swap), 6), initial);
    const int start = JointState::index(1, 5, fdim);
    REQUIRE(std::abs(returned.matrix()(start, start) - cdouble(1.0, 0.0)) < 1e-10);
    REQUIRE(reduced_qubit(returned).excited_population() < 1e-10);
}

TEST_CASE("evolution preserves trace and hermiticity for mixed states", "[dynamics]") {
    const JCParams params = detuned_params();
    const CavityDensity cavity = build_cavity_state(
        CavityStateSpec::thermal_from_nbar(1.5), resolve(TruncationRequest{std::nullopt, 1e-10},
                                                         CavityStateSpec::thermal_from_nbar(1.5)));
    Eigen::Matrix2cd mixed;
    mixed << cdouble(0.35, 0.0), cdouble(0.2, 0.1), cdouble(0.2, -0.1), cdouble(0.65, 0.0);
    const JointState initial =
        JointState::product(QubitDensity::from_matrix(mixed), cavity);

    const JointState evolved =
        evolve_joint(PropagatorBlocks(params, TimeWindow(1.7 / params.g), cavity.n_max()),
                     initial);
    // The excited slice of the top level can leak into the truncated sector,
    // so trace preservation holds to the tail tolerance, not exactly.
    REQUIRE(std::abs(evolved.matrix().trace().real() - 1.0) < 1e-10);
    REQUIRE((evolved.matrix() - evolved.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-13);

    // Free phases cancel in U rho U^dag when nothing can exchange energy:
    // with g = 0 the evolved populations match the initial ones.
    const JCParams frozen(params.omega_qub, params.omega_cav, 0.0);
    const JointState still =
        evolve_joint(PropagatorBlocks(frozen, TimeWindow(1.7 / params.g), cavity.n_max()),
                     initial);
    for (int j = 0; j < still.dim(); ++j) {
        REQUIRE(std::abs(still.matrix()(j, j) - initial.matrix()(j, j)) < 1e-14);
    }
}

TEST_CASE("partial trace inverts the product construction", "[dynamics]") {
    Eigen::Matrix2cd mixed;
    mixed << cdouble(0.7, 0.0), cdouble(0.1, -0.2), cdouble(0.1, 0.2), cdouble(0.3, 0.0);
    const QubitDensity qubit = QubitDensity::from_matrix(mixed);
    const CavityDensity cavity = build_cavity_state(
        CavityStateSpec::coherent(1.1),
        resolve(TruncationRequest{std::nullopt, 1e-10}, CavityStateSpec::coherent(1.1)));
    const QubitDensity recovered = reduced_qubit(JointState::product(qubit, cavity));
    REQUIRE((recovered.matrix() - qubit.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial trace of a maximally entangled sector is maximally mixed", "[dynamics]") {
    // (|e,0> + |g,1>)/sqrt(2) on a two-level cavity space.
    const int fdim = 2;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2 * fdim);
    psi(JointState::index(0, 0, fdim)) = 1.0 / std::sqrt(2.0);
    psi(JointState::index(1, 1, fdim)) = 1.0 / std::sqrt(2.0);
    const JointState state = JointState::from_matrix(psi * psi.adjoint());
    const QubitDensity reduced = reduced_qubit(state);
    REQUIRE(std::abs(reduced.entry(0, 0) - cdouble(0.5, 0.0)) < 1e-14);
    REQUIRE(std::abs(reduced.entry(1, 1) - cdouble(0.5, 0.0)) < 1e-14);
    REQUIRE(std::abs(reduced.entry(0, 1)) < 1e-14);
}

TEST_CASE("joint state validation catches dimension and positivity faults", "[dynamics]") {
    REQUIRE_THROWS_AS(JointState::from_matrix(Eigen::MatrixXcd::Identity(5, 5)),
                      std::invalid_argument);
    Eigen::MatrixXcd negative = Eigen::MatrixXcd::Zero(4, 4);
    negative(0, 0) = 1.2;
    negative(3, 3) = -0.2;
    REQUIRE_THROWS_AS(JointState::from_matrix(negative), std::invalid_argument);

    const CavityDensity cavity =
        build_cavity_state(CavityStateSpec::fock(0), TruncationPolicy{3, 1e-10});
    const JointState state = JointState::product(QubitDensity::ground(), cavity);
    const PropagatorBlocks wrong(detuned_params(), TimeWindow(1.0), 7);
    REQUIRE_THROWS_AS(evolve_joint(wrong, state), std::invalid_argument);
}
