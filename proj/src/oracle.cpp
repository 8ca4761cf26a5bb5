#include "qbfcs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>

namespace qbfcs {
namespace oracle {

namespace {

constexpr int kDenseCap = 160;
constexpr double kDiagonalTol = 1e-12;

void check_dense_cap(int n_max) {
    if (n_max < 1) throw std::invalid_argument("dense oracle needs n_max >= 1");
    if (n_max > kDenseCap) {
        throw std::invalid_argument("dense oracle capped at n_max = " +
                                    std::to_string(kDenseCap) + ", got " + std::to_string(n_max));
    }
}

int joint_index(int qubit_level, int photon, int fock_dim) {
    return qubit_level * fock_dim + photon;
}

/// chi . (qubit energy, -cavity energy) at basis state (q, n); exponentiated
/// with opposite half-signs around U this counts the qubit energy gained and
/// the cavity energy released.
Eigen::VectorXd counting_profile(const JCParams& params, int fock_dim, double chi1, double chi2) {
    Eigen::VectorXd profile(2 * fock_dim);
    for (int q = 0; q < 2; ++q) {
        const double qubit_energy = (q == 0 ? 0.5 : -0.5) * params.omega_qub;
        for (int n = 0; n < fock_dim; ++n) {
            profile(joint_index(q, n, fock_dim)) =
                chi1 * qubit_energy - chi2 * params.omega_cav * static_cast<double>(n);
        }
    }
    return profile;
}

} // namespace

Eigen::MatrixXcd dense_hamiltonian(const JCParams& params, int n_max) {
    check_dense_cap(n_max);
    const int fdim = n_max + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * fdim, 2 * fdim);
    for (int q = 0; q < 2; ++q) {
        const double qubit_energy = (q == 0 ? 0.5 : -0.5) * params.omega_qub;
        for (int n = 0; n < fdim; ++n) {
            h(joint_index(q, n, fdim), joint_index(q, n, fdim)) =
                qubit_energy + params.omega_cav * static_cast<double>(n);
        }
    }
    return h + dense_interaction(params, n_max);
}

Eigen::MatrixXcd dense_interaction(const JCParams& params, int n_max) {
    check_dense_cap(n_max);
    const int fdim = n_max + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * fdim, 2 * fdim);
    for (int n = 0; n + 1 < fdim; ++n) {
        const double amp = params.g * std::sqrt(static_cast<double>(n + 1));
        h(joint_index(0, n, fdim), joint_index(1, n + 1, fdim)) = amp; // sigma_+ a
        h(joint_index(1, n + 1, fdim), joint_index(0, n, fdim)) = amp; // sigma_- a^dag
    }
    return h;
}

Eigen::MatrixXcd dense_propagator(const Eigen::MatrixXcd& hamiltonian, double tau) {
    if (hamiltonian.rows() != hamiltonian.cols()) {
        throw std::invalid_argument("hamiltonian must be square");
    }
    const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
    if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("hamiltonian must be Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hamiltonian eigendecomposition failed");
    }
    const Eigen::VectorXd& energies = solver.eigenvalues();
    Eigen::VectorXcd phases(energies.size());
    for (Eigen::Index k = 0; k < energies.size(); ++k) {
        phases(k) = std::exp(-imag_unit * energies(k) * tau);
    }
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

cdouble dense_tilted_gf(const JointState& initial, const JCParams& params, TimeWindow window,
                        double chi1, double chi2) {
    const int fdim = initial.fock_dim();
    check_dense_cap(fdim - 1);
    const Eigen::MatrixXcd u =
        dense_propagator(dense_hamiltonian(params, fdim - 1), window.tau);
    return dense_tilted_trace(u, initial, params, chi1, chi2);
}

cdouble dense_tilted_trace(const Eigen::MatrixXcd& propagator, const JointState& initial,
                           const JCParams& params, double chi1, double chi2) {
    const int fdim = initial.fock_dim();
    const int dim = 2 * fdim;
    if (propagator.rows() != dim || propagator.cols() != dim) {
        throw std::invalid_argument("propagator dimension does not match the initial state");
    }
    const Eigen::VectorXd profile = counting_profile(params, fdim, chi1, chi2);

    // G = sum_j exp(+i d_j) [U (L rho L) U^dag]_jj with L = diag(exp(-i d/2)),
    // taking only the diagonal of the conjugation: row_j(U A) . conj(row_j(U)).
    Eigen::VectorXcd half_phase(dim);
    for (int j = 0; j < dim; ++j) {
        half_phase(j) = std::exp(-0.5 * imag_unit * profile(j));
    }
    const Eigen::MatrixXcd dressed =
        half_phase.asDiagonal() * initial.matrix() * half_phase.asDiagonal();
    const Eigen::MatrixXcd partial = propagator * dressed;
    cdouble total(0.0, 0.0);
    for (int j = 0; j < dim; ++j) {
        total += std::exp(imag_unit * profile(j)) * propagator.row(j).dot(partial.row(j));
    }
    return total;
}

double mean_interaction_energy(const JointState& state, const JCParams& params) {
    const Eigen::MatrixXcd h_int = dense_interaction(params, state.fock_dim() - 1);
    return (h_int * state.matrix()).trace().real();
}

double TpmDistribution::total_probability() const {
    double total = 0.0;
    for (const TpmAtom& atom : atoms) total += atom.probability;
    return total;
}

double TpmDistribution::moment(int alpha, int beta) const {
    if (alpha < 0 || beta < 0) throw std::invalid_argument("moment orders must be >= 0");
    double total = 0.0;
    for (const TpmAtom& atom : atoms) {
        total += atom.probability * std::pow(atom.energy_change, alpha) *
                 std::pow(atom.heat, beta);
    }
    return total;
}

TpmDistribution tpm_distribution(const QubitDensity& qubit, const CavityDensity& cavity,
                                 const JCParams& params, TimeWindow window) {
    if (std::abs(qubit.entry(0, 1)) > kDiagonalTol || std::abs(qubit.entry(1, 0)) > kDiagonalTol) {
        throw std::invalid_argument(
            "two-point measurement needs a diagonal qubit state (the first projection "
            "would destroy coherences)");
    }
    const int fdim = cavity.dim();
    for (int m = 0; m < fdim; ++m) {
        for (int n = 0; n < fdim; ++n) {
            if (m != n && std::abs(cavity.entry(m, n)) > kDiagonalTol) {
                throw std::invalid_argument(
                    "two-point measurement needs a diagonal cavity state");
            }
        }
    }

    const Eigen::MatrixXcd u =
        dense_propagator(dense_hamiltonian(params, fdim - 1), window.tau);

    std::map<std::pair<int, int>, double> buckets; // (qubit jump, photons released) -> prob
    for (int q = 0; q < 2; ++q) {
        const double q_pop = qubit.entry(q, q).real();
        if (q_pop <= 0.0) continue;
        for (int n = 0; n < fdim; ++n) {
            const double start_prob = q_pop * cavity.entry(n, n).real();
            if (start_prob <= 0.0) continue;
            for (int qf = 0; qf < 2; ++qf) {
                for (int nf = 0; nf < fdim; ++nf) {
                    const double amp = std::norm(
                        u(joint_index(qf, nf, fdim), joint_index(q, n, fdim)));
                    if (amp == 0.0) continue;
                    const int jump = (qf == 0 ? 1 : 0) - (q == 0 ? 1 : 0);
                    buckets[{jump, n - nf}] += start_prob * amp;
                }
            }
        }
    }

    TpmDistribution dist;
    dist.atoms.reserve(buckets.size());
    for (const auto& [key, prob] : buckets) {
        TpmAtom atom;
        atom.energy_change = static_cast<double>(key.first) * params.omega_qub;
        atom.heat = static_cast<double>(key.second) * params.omega_cav;
        atom.probability = prob;
        dist.atoms.push_back(atom);
    }
    std::sort(dist.atoms.begin(), dist.atoms.end(), [](const TpmAtom& a, const TpmAtom& b) {
        if (a.energy_change != b.energy_change) return a.energy_change < b.energy_change;
        return a.heat < b.heat;
    });
    return dist;
}

double finite_diff_moment(const std::function<cdouble(double)>& slice, int order, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
    if (order == 1) {
        return ((slice(step) - slice(-step)) / (2.0 * step)).imag();
    }
    if (order == 2) {
        return -((slice(step) - 2.0 * slice(0.0) + slice(-step)) / (step * step)).real();
    }
    throw std::invalid_argument("finite differences implemented for orders 1 and 2");
}

} // namespace oracle
} // namespace qbfcs
