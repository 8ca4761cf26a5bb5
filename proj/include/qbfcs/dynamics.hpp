#ifndef QBFCS_DYNAMICS_HPP
#define QBFCS_DYNAMICS_HPP

#include <vector>

#include <Eigen/Dense>

#include "qbfcs/fockspace.hpp"
#include "qbfcs/numeric.hpp"

namespace qbfcs {

/// Qubit-cavity model parameters (hbar = 1 throughout):
///   H = omega_qub * sigma_z / 2 + omega_cav * a^dag a
///     + g * (sigma_+ a + sigma_- a^dag).
/// Valid within the rotating-wave approximation, g << omega_qub; the
/// constructor accepts any g >= 0 and rwa_suspect() flags g > 0.1 omega_qub.
struct JCParams {
    JCParams(double omega_qub, double omega_cav, double g);

    double omega_qub;
    double omega_cav;
    double g;

    double detuning() const { return omega_qub - omega_cav; }
    bool rwa_suspect() const { return g > 0.1 * omega_qub; }
};

/// Non-negative evolution time.
struct TimeWindow {
    explicit TimeWindow(double tau);
    double tau;
};

/// 2x2 qubit density matrix; basis index 0 = excited, 1 = ground.
class QubitDensity {
public:
    static QubitDensity ground();
    static QubitDensity excited();
    static QubitDensity from_matrix(const Eigen::Matrix2cd& matrix);

    const Eigen::Matrix2cd& matrix() const { return matrix_; }
    cdouble entry(int i, int j) const { return matrix_(i, j); }
    double excited_population() const { return matrix_(0, 0).real(); }

private:
    explicit QubitDensity(Eigen::Matrix2cd matrix) : matrix_(std::move(matrix)) {}

    Eigen::Matrix2cd matrix_;
};

/// Joint qubit-cavity density matrix on the truncated space. Basis index is
/// q * (n_max + 1) + n with q = 0 the excited qubit level, q = 1 the ground
/// level, and n the photon number.
class JointState {
public:
    static JointState product(const QubitDensity& qubit, const CavityDensity& cavity);
    static JointState from_matrix(Eigen::MatrixXcd matrix);

    int fock_dim() const { return static_cast<int>(matrix_.rows()) / 2; }
    int n_max() const { return fock_dim() - 1; }
    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }

    static int index(int qubit_level, int photon, int fock_dim) {
        return qubit_level * fock_dim + photon;
    }

private:
    friend JointState evolve_joint(const class PropagatorBlocks& prop, const JointState& state);

    explicit JointState(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {}

    Eigen::MatrixXcd matrix_;
};

/// Closed-form propagator exp(-i H tau) on the truncated space, stored as
/// the four excitation-sector amplitude vectors instead of a dense matrix.
/// The dynamics couple |e,n> only to |g,n+1>, so the matrix is sector
/// bidiagonal:
///   stay_excited(n) = <e,n|U|e,n>      emit(n) = <g,n+1|U|e,n>
///   stay_ground(n)  = <g,n|U|g,n>      absorb(n) = <e,n|U|g,n+1>
class PropagatorBlocks {
public:
    PropagatorBlocks(const JCParams& params, TimeWindow window, int n_max);

    int n_max() const { return n_max_; }
    int fock_dim() const { return n_max_ + 1; }
    double tau() const { return tau_; }

    cdouble stay_excited(int n) const { return stay_excited_.at(n); }
    cdouble stay_ground(int n) const { return stay_ground_.at(n); }
    /// <g,n+1|U|e,n>, defined for 0 <= n <= n_max - 1.
    cdouble emit(int n) const { return emit_.at(n); }
    /// <e,n|U|g,n+1>, defined for 0 <= n <= n_max - 1.
    cdouble absorb(int n) const { return absorb_.at(n); }

    /// Dense 2(n_max+1) x 2(n_max+1) matrix in the JointState basis layout.
    Eigen::MatrixXcd assemble_dense() const;

private:
    int n_max_;
    double tau_;
    std::vector<cdouble> stay_excited_; // n = 0..n_max
    std::vector<cdouble> stay_ground_;  // n = 0..n_max
    std::vector<cdouble> emit_;         // n = 0..n_max-1
    std::vector<cdouble> absorb_;       // n = 0..n_max-1
};

inline PropagatorBlocks propagator_blocks(const JCParams& params, TimeWindow window, int n_max) {
    return PropagatorBlocks(params, window, n_max);
}

/// U rho U^dag using the sector structure (O(dim^2) per application).
/// Populations within two levels of the cutoff can couple to states the
/// truncation cannot represent; keep initial support at least two levels
/// below n_max for exact trace preservation.
JointState evolve_joint(const PropagatorBlocks& prop, const JointState& state);

/// Partial trace over the cavity mode.
QubitDensity reduced_qubit(const JointState& state);

} // namespace qbfcs

#endif
