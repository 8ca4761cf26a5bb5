#ifndef QBFCS_ORACLE_HPP
#define QBFCS_ORACLE_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qbfcs/dynamics.hpp"
#include "qbfcs/fockspace.hpp"
#include "qbfcs/numeric.hpp"

namespace qbfcs {
namespace oracle {

/// Brute-force reference implementations used to validate the fast paths.
/// Everything here is built from dense matrices and eigendecompositions and
/// shares no evolution or counting code with the production modules.
/// Dense work is capped at n_max <= 160 to keep runs under a second.

/// Dense Hamiltonian matrix in the JointState basis layout.
Eigen::MatrixXcd dense_hamiltonian(const JCParams& params, int n_max);

/// Dense coupling term g (sigma_+ a + sigma_- a^dag) alone.
Eigen::MatrixXcd dense_interaction(const JCParams& params, int n_max);

/// exp(-i H tau) through the eigendecomposition of the Hermitian H.
Eigen::MatrixXcd dense_propagator(const Eigen::MatrixXcd& hamiltonian, double tau);

/// Characteristic function from the counting-field-dressed propagator:
/// dress U with exp(+/- i chi . (H_qub, -H_cav) / 2) on either side and
/// trace against the initial state. All operators dense.
cdouble dense_tilted_gf(const JointState& initial, const JCParams& params, TimeWindow window,
                        double chi1, double chi2);

/// Same contraction with a caller-supplied dense propagator, for sweeping
/// many counting vectors without re-deriving U each time.
cdouble dense_tilted_trace(const Eigen::MatrixXcd& propagator, const JointState& initial,
                           const JCParams& params, double chi1, double chi2);

/// Tr[H_int rho].
double mean_interaction_energy(const JointState& state, const JCParams& params);

/// One outcome of the two-point projective measurement scheme: joint energy
/// changes with their probability.
struct TpmAtom {
    double energy_change = 0.0; // qubit energy gain
    double heat = 0.0;          // cavity energy released
    double probability = 0.0;
};

struct TpmDistribution {
    std::vector<TpmAtom> atoms; // sorted by (energy_change, heat)

    double total_probability() const;
    double moment(int alpha, int beta) const; // < dU^alpha Q^beta >
};

/// Explicit two-point measurement distribution: project onto energy
/// eigenstates, evolve with the dense propagator, project again. Requires a
/// diagonal cavity state (off-diagonal magnitudes <= 1e-12) and a diagonal
/// qubit state, since the first measurement would destroy coherences.
TpmDistribution tpm_distribution(const QubitDensity& qubit, const CavityDensity& cavity,
                                 const JCParams& params, TimeWindow window);

/// Central finite-difference derivative of a characteristic function slice:
/// order 1 returns Im g'(0) ~ first moment, order 2 returns -Re g''(0) ~
/// second moment. `slice` maps one counting field to G.
double finite_diff_moment(const std::function<cdouble(double)>& slice, int order, double step);

} // namespace oracle
} // namespace qbfcs

#endif
