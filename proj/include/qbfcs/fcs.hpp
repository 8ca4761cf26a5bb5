#ifndef QBFCS_FCS_HPP
#define QBFCS_FCS_HPP

#include <vector>

#include "qbfcs/dynamics.hpp"
#include "qbfcs/fockspace.hpp"
#include "qbfcs/numeric.hpp"

namespace qbfcs {

/// Counting fields conjugate to the qubit energy change (chi1) and to the
/// energy released by the cavity (chi2).
struct CountingVector {
    double chi1 = 0.0;
    double chi2 = 0.0;
};

/// One exponential term of the characteristic function. The phase factor is
/// exp(i * (k1_half/2) * chi1 * omega_qub) * exp(i * (k2_half/2) * chi2 * omega_cav),
/// so k*_half = 2 counts one full quantum. Exchange via the coupling moves
/// quanta between qubit and cavity together, which forces k2_half = k1_half.
struct PhaseTerm {
    cdouble coeff;
    int k1_half = 0;
    int k2_half = 0;
};

/// Characteristic function of the joint (energy change, released cavity
/// energy) distribution after one evolution window:
///   G(chi) = sum_t coeff_t * exp(i chi . energies_t).
/// Finite because the dynamics exchange at most one quantum per window.
/// Invariants: sum of coefficients = 1 (G(0,0) = 1) within 1e-10, and every
/// stored coefficient is nonzero.
class PhasePolynomial {
public:
    PhasePolynomial(std::vector<PhaseTerm> terms, double omega_qub, double omega_cav);

    const std::vector<PhaseTerm>& terms() const { return terms_; }
    double omega_qub() const { return omega_qub_; }
    double omega_cav() const { return omega_cav_; }

    cdouble evaluate(CountingVector chi) const;

    /// < dU^alpha * Q^beta > taken as the exact chi-derivative of G at 0:
    /// sum_t coeff_t * (k1_t omega_qub / 2)^alpha * (k2_t omega_cav / 2)^beta.
    /// Real part of the sum; imag_residue (if non-null) receives |imag|.
    double joint_moment(int alpha, int beta, double* imag_residue = nullptr) const;

    /// < W^n > with W = dU - Q, expanded binomially over joint moments.
    double work_moment(int n, double* imag_residue = nullptr) const;

    /// |G(0,0) - 1|.
    double normalization_residue() const;

private:
    std::vector<PhaseTerm> terms_;
    double omega_qub_;
    double omega_cav_;
};

/// Raw moments, central moments, and cumulants of one scalar variable,
/// indexed by order (entry [0] is 1, 1, 0 respectively).
struct MomentSeries {
    std::vector<double> raw;
    std::vector<double> central;
    std::vector<double> cumulant;
};

/// Moment summary up to a given order for the qubit energy change dU, the
/// energy Q released by the cavity, and the coupling work W = dU - Q.
struct MomentTable {
    int order = 0;
    MomentSeries energy_change; // dU
    MomentSeries heat;          // Q
    MomentSeries work;          // W
    double max_imag_residue = 0.0;
};

/// Characteristic function for an arbitrary initial product state
/// rho_qub (x) rho_cav evolved for tau. Time O(dim).
PhasePolynomial generating_function(const QubitDensity& qubit, const CavityDensity& cavity,
                                    const JCParams& params, TimeWindow window);

/// Moments and cumulants up to n_order (1 <= n_order <= 8).
MomentTable cumulant_table(const PhasePolynomial& gf, int n_order);

/// Closed-form statistics for the battery starting in the ground state with
/// exactly N photons in the cavity:
///   p(tau) = g^2 N sin^2(tau sqrt(Phi)) / Phi,  Phi = g^2 N + (detuning/2)^2,
///   mean = p omega_qub, variance = p omega_qub^2 - mean^2, snr = mean^2/var.
struct FockGroundStats {
    double mean = 0.0;
    double variance = 0.0;
    double snr = 0.0;
    double transfer_probability = 0.0;
};

FockGroundStats fock_ground_closed_form(const JCParams& params, int photons, TimeWindow window);

/// Two-term characteristic function matching fock_ground_closed_form.
PhasePolynomial fock_ground_generating_function(const JCParams& params, int photons,
                                                TimeWindow window);

} // namespace qbfcs

#endif
