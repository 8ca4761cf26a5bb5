#ifndef QBFCS_FOCKSPACE_HPP
#define QBFCS_FOCKSPACE_HPP

#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "qbfcs/numeric.hpp"

namespace qbfcs {

/// Photon-number cutoff for the cavity mode. The represented space has
/// dimension n_max + 1; tail_tol bounds the population the exact state may
/// carry above the cutoff.
struct TruncationPolicy {
    int n_max = 1;
    double tail_tol = 1e-10;

    void validate() const; // n_max >= 1, 0 < tail_tol <= 1e-6
};

/// Cutoff request as it appears in run configurations: tail tolerance plus
/// an optional explicit cutoff. resolve() fills in the smallest feasible
/// cutoff when none was given.
struct TruncationRequest {
    std::optional<int> n_max;
    double tail_tol = 1e-10;
};

struct FockSpec {
    int n = 0;
};

struct CoherentSpec {
    cdouble alpha;
};

struct ThermalSpec {
    double nbar = 0.0;                // mean occupation (canonical form)
    std::optional<double> beta;       // set when constructed from inverse temperature
};

struct SqueezedCoherentSpec {
    cdouble zeta;        // squeezing parameter
    cdouble alpha_tilde; // displacement applied before the squeeze
};

/// Tagged choice of initial cavity state.
class CavityStateSpec {
public:
    static CavityStateSpec fock(int n);
    static CavityStateSpec coherent(cdouble alpha);
    static CavityStateSpec thermal_from_nbar(double nbar);
    // Bose-Einstein bijection nbar = 1/(exp(beta*omega_cav) - 1), hbar = 1.
    static CavityStateSpec thermal_from_beta(double beta, double omega_cav);
    static CavityStateSpec squeezed_coherent(cdouble zeta, cdouble alpha_tilde);

    bool is_fock() const { return std::holds_alternative<FockSpec>(state_); }
    bool is_coherent() const { return std::holds_alternative<CoherentSpec>(state_); }
    bool is_thermal() const { return std::holds_alternative<ThermalSpec>(state_); }
    bool is_squeezed() const { return std::holds_alternative<SqueezedCoherentSpec>(state_); }

    const FockSpec& as_fock() const { return std::get<FockSpec>(state_); }
    const CoherentSpec& as_coherent() const { return std::get<CoherentSpec>(state_); }
    const ThermalSpec& as_thermal() const { return std::get<ThermalSpec>(state_); }
    const SqueezedCoherentSpec& as_squeezed() const { return std::get<SqueezedCoherentSpec>(state_); }

    /// Short kind label: "fock", "coherent", "thermal", "squeezed".
    std::string kind_name() const;

private:
    template <typename T>
    explicit CavityStateSpec(T spec) : state_(std::move(spec)) {}

    std::variant<FockSpec, CoherentSpec, ThermalSpec, SqueezedCoherentSpec> state_;
};

/// Truncated Fock-basis density matrix of the cavity mode. Immutable after
/// construction; construction validates Hermiticity (1e-12), renormalizes
/// the trace to 1, and checks positivity (min eigenvalue >= -1e-10).
class CavityDensity {
public:
    static CavityDensity from_matrix(Eigen::MatrixXcd matrix);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    int n_max() const { return dim() - 1; }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    cdouble entry(int m, int n) const { return matrix_(m, n); }

private:
    explicit CavityDensity(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {}

    Eigen::MatrixXcd matrix_;
};

/// Dense ladder and number operators on the truncated space. The commutator
/// [a, a_dag] equals the identity except in the top row/column, which the
/// cutoff cannot represent.
struct LadderOps {
    Eigen::MatrixXcd a;
    Eigen::MatrixXcd a_dag;
    Eigen::MatrixXcd n_op;

    static LadderOps make(int dim);
};

/// Smallest cutoff n_max such that the exact state keeps at most tail_tol
/// population above it. Fock states get one extra level of headroom so the
/// excitation sector reached from |e,N> stays representable.
/// Throws TruncationError when no cutoff <= hard_bound works.
int required_cutoff(const CavityStateSpec& spec, double tail_tol, int hard_bound = 512);

inline TruncationPolicy resolve(const TruncationRequest& req, const CavityStateSpec& spec) {
    TruncationPolicy policy{req.n_max ? *req.n_max : required_cutoff(spec, req.tail_tol), req.tail_tol};
    policy.validate();
    return policy;
}

/// Build the truncated, renormalized density matrix for the requested state.
/// Requires policy.n_max >= required_cutoff(spec, policy.tail_tol).
CavityDensity build_cavity_state(const CavityStateSpec& spec, const TruncationPolicy& policy);

/// Tr[n rho].
double mean_photon(const CavityDensity& rho);

} // namespace qbfcs

#endif
