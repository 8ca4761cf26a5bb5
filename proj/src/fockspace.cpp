#include "qbfcs/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qbfcs/errors.hpp"

namespace qbfcs {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kPsdTol = -1e-10;

/// Fock amplitudes of |alpha>: c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!).
Eigen::VectorXcd coherent_amplitudes(cdouble alpha, int dim) {
    Eigen::VectorXcd amps(dim);
    amps(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) {
        amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    return amps;
}

/// Fock amplitudes of S(zeta)|alpha>, computed by exponentiating the
/// squeeze generator K = (conj(zeta) a^2 - zeta a^dag^2)/2 on a space of
/// `internal_dim` levels. K is anti-Hermitian, so exp(K) = exp(-i (iK))
/// with iK Hermitian, handled by a self-adjoint eigendecomposition.
Eigen::VectorXcd squeezed_coherent_amplitudes(cdouble zeta, cdouble alpha, int internal_dim) {
    Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(internal_dim, internal_dim);
    for (int n = 0; n + 2 < internal_dim; ++n) {
        const double root = std::sqrt(static_cast<double>(n + 1) * static_cast<double>(n + 2));
        // a^2 |n+2> = root |n>,  a^dag^2 |n> = root |n+2>
        generator(n, n + 2) += 0.5 * std::conj(zeta) * root;
        generator(n + 2, n) -= 0.5 * zeta * root;
    }
    const Eigen::MatrixXcd hermitian = imag_unit * generator;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian);
    if (solver.info() != Eigen::Success) {
        throw TruncationError("squeeze-generator eigendecomposition failed");
    }
    const Eigen::VectorXd& phases = solver.eigenvalues();
    Eigen::VectorXcd rotated(internal_dim);
    for (int k = 0; k < internal_dim; ++k) {
        rotated(k) = std::exp(-imag_unit * phases(k));
    }
    const Eigen::VectorXcd base = coherent_amplitudes(alpha, internal_dim);
    return solver.eigenvectors() * rotated.asDiagonal() *
           (solver.eigenvectors().adjoint() * base);
}

/// Smallest m with population above m at most tol, where `prefix_at` yields
/// the cumulative population through level m against an exact total of 1.
/// Returns -1 when no m <= bound works.
template <typename PrefixFn>
int scan_tail(PrefixFn prefix_at, double tol, int bound) {
    for (int m = 1; m <= bound; ++m) {
        if (1.0 - prefix_at(m) <= tol) return m;
    }
    return -1;
}

int coherent_cutoff(cdouble alpha, double tol, int hard_bound) {
    const Eigen::VectorXcd amps = coherent_amplitudes(alpha, hard_bound + 1);
    std::vector<double> prefix(static_cast<std::size_t>(hard_bound) + 1);
    double acc = 0.0;
    for (int n = 0; n <= hard_bound; ++n) {
        acc += std::norm(amps(n));
        prefix[static_cast<std::size_t>(n)] = acc;
    }
    const int m = scan_tail([&](int i) { return prefix[static_cast<std::size_t>(i)]; }, tol,
                            hard_bound);
    if (m < 0) {
        std::ostringstream msg;
        msg << "coherent state |alpha|^2 = " << std::norm(alpha)
            << " cannot reach tail tolerance " << tol << " within cutoff " << hard_bound;
        throw TruncationError(msg.str());
    }
    return m;
}

int thermal_cutoff(double nbar, double tol, int hard_bound) {
    if (nbar <= 0.0) return 1;
    const double q = nbar / (nbar + 1.0); // population above m is q^(m+1)
    for (int m = 1; m <= hard_bound; ++m) {
        if (std::pow(q, m + 1) <= tol) return m;
    }
    std::ostringstream msg;
    msg << "thermal state nbar = " << nbar << " cannot reach tail tolerance " << tol
        << " within cutoff " << hard_bound;
    throw TruncationError(msg.str());
}

int squeezed_cutoff(const SqueezedCoherentSpec& spec, double tol, int hard_bound) {
    // The generator must be exponentiated on a window comfortably larger
    // than the state's support; grow the window until the top slice holds
    // a negligible share of the population, then apply the tail rule.
    for (int internal = 128; internal <= 2 * (hard_bound + 1); internal *= 2) {
        const Eigen::VectorXcd amps =
            squeezed_coherent_amplitudes(spec.zeta, spec.alpha_tilde, internal);
        double top_slice = 0.0;
        for (int n = internal - internal / 8; n < internal; ++n) top_slice += std::norm(amps(n));
        if (top_slice > 1e-3 * tol && internal < 2 * (hard_bound + 1)) continue;

        std::vector<double> prefix(static_cast<std::size_t>(internal));
        double acc = 0.0;
        for (int n = 0; n < internal; ++n) {
            acc += std::norm(amps(n));
            prefix[static_cast<std::size_t>(n)] = acc;
        }
        const int scan_bound = std::min(hard_bound, internal - 1);
        const int m = scan_tail([&](int i) { return prefix[static_cast<std::size_t>(i)]; }, tol,
                                scan_bound);
        if (m >= 0 && top_slice <= 1e-3 * tol) return m;
        break;
    }
    std::ostringstream msg;
    msg << "squeezed state (|zeta| = " << std::abs(spec.zeta)
        << ") cannot reach tail tolerance " << tol << " within cutoff " << hard_bound;
    throw TruncationError(msg.str());
}

} // namespace

void TruncationPolicy::validate() const {
    if (n_max < 1) {
        throw std::invalid_argument("truncation cutoff n_max must be at least 1");
    }
    if (!(tail_tol > 0.0) || tail_tol > 1e-6) {
        throw std::invalid_argument("tail_tol must lie in (0, 1e-6]");
    }
}

CavityStateSpec CavityStateSpec::fock(int n) {
    if (n < 0) throw std::invalid_argument("fock photon number must be >= 0");
    return CavityStateSpec(FockSpec{n});
}

CavityStateSpec CavityStateSpec::coherent(cdouble alpha) {
    return CavityStateSpec(CoherentSpec{alpha});
}

CavityStateSpec CavityStateSpec::thermal_from_nbar(double nbar) {
    if (!(nbar >= 0.0)) throw std::invalid_argument("thermal nbar must be >= 0");
    return CavityStateSpec(ThermalSpec{nbar, std::nullopt});
}

CavityStateSpec CavityStateSpec::thermal_from_beta(double beta, double omega_cav) {
    if (!(beta > 0.0)) throw std::invalid_argument("thermal beta must be > 0");
    if (!(omega_cav > 0.0)) throw std::invalid_argument("omega_cav must be > 0");
    const double nbar = 1.0 / std::expm1(beta * omega_cav);
    return CavityStateSpec(ThermalSpec{nbar, beta});
}

CavityStateSpec CavityStateSpec::squeezed_coherent(cdouble zeta, cdouble alpha_tilde) {
    if (!(std::abs(zeta) < 3.0)) {
        throw std::invalid_argument("squeezing parameter |zeta| must be < 3");
    }
    return CavityStateSpec(SqueezedCoherentSpec{zeta, alpha_tilde});
}

std::string CavityStateSpec::kind_name() const {
    if (is_fock()) return "fock";
    if (is_coherent()) return "coherent";
    if (is_thermal()) return "thermal";
    return "squeezed";
}

CavityDensity CavityDensity::from_matrix(Eigen::MatrixXcd matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 2) {
        throw std::invalid_argument("cavity density matrix must be square with dim >= 2");
    }
    const double herm_residue = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_residue > kHermTol) {
        throw std::invalid_argument("cavity density matrix is not Hermitian (residue " +
                                    std::to_string(herm_residue) + ")");
    }
    matrix = 0.5 * (matrix + matrix.adjoint().eval());
    const double trace = matrix.trace().real();
    if (!(trace > 1e-14)) {
        throw std::invalid_argument("cavity density matrix trace must be positive");
    }
    matrix /= trace;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < kPsdTol) {
        throw std::invalid_argument("cavity density matrix is not positive semidefinite");
    }
    return CavityDensity(std::move(matrix));
}

LadderOps LadderOps::make(int dim) {
    LadderOps ops;
    ops.a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    ops.a_dag = ops.a.adjoint();
    ops.n_op = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        ops.n_op(n, n) = static_cast<double>(n);
    }
    return ops;
}

int required_cutoff(const CavityStateSpec& spec, double tail_tol, int hard_bound) {
    if (!(tail_tol > 0.0) || tail_tol > 1e-6) {
        throw std::invalid_argument("tail_tol must lie in (0, 1e-6]");
    }
    if (hard_bound < 1) throw std::invalid_argument("hard_bound must be >= 1");

    if (spec.is_fock()) {
        const int needed = std::max(spec.as_fock().n + 1, 1);
        if (needed > hard_bound) {
            throw TruncationError("fock state needs cutoff " + std::to_string(needed) +
                                  " beyond hard bound " + std::to_string(hard_bound));
        }
        return needed;
    }
    if (spec.is_coherent()) {
        return coherent_cutoff(spec.as_coherent().alpha, tail_tol, hard_bound);
    }
    if (spec.is_thermal()) {
        return thermal_cutoff(spec.as_thermal().nbar, tail_tol, hard_bound);
    }
    const auto& sq = spec.as_squeezed();
    if (std::abs(sq.zeta) == 0.0) {
        return coherent_cutoff(sq.alpha_tilde, tail_tol, hard_bound);
    }
    return squeezed_cutoff(sq, tail_tol, hard_bound);
}

CavityDensity build_cavity_state(const CavityStateSpec& spec, const TruncationPolicy& policy) {
    policy.validate();
    const int dim = policy.n_max + 1;

    if (spec.is_fock()) {
        const int n = spec.as_fock().n;
        if (policy.n_max < n + 1) {
            throw TruncationError("fock state |" + std::to_string(n) +
                                  "> needs n_max >= " + std::to_string(n + 1) +
                                  " to keep the reachable sector representable");
        }
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
        rho(n, n) = 1.0;
        return CavityDensity::from_matrix(std::move(rho));
    }

    if (spec.is_thermal()) {
        const double nbar = spec.as_thermal().nbar;
        const double q = nbar > 0.0 ? nbar / (nbar + 1.0) : 0.0;
        const double tail = nbar > 0.0 ? std::pow(q, policy.n_max + 1) : 0.0;
        if (tail > policy.tail_tol) {
            throw TruncationError("thermal tail " + format_double(tail) + " above n_max = " +
                                  std::to_string(policy.n_max) + " exceeds tail_tol " +
                                  format_double(policy.tail_tol));
        }
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
        double weight = 1.0 / (nbar + 1.0);
        for (int n = 0; n < dim; ++n) {
            rho(n, n) = weight;
            weight *= q;
        }
        return CavityDensity::from_matrix(std::move(rho));
    }

    Eigen::VectorXcd amps;
    if (spec.is_coherent()) {
        amps = coherent_amplitudes(spec.as_coherent().alpha, dim);
    } else {
        const auto& sq = spec.as_squeezed();
        if (std::abs(sq.zeta) == 0.0) {
            amps = coherent_amplitudes(sq.alpha_tilde, dim);
        } else {
            const int internal = std::max(2 * dim, 64);
            amps = squeezed_coherent_amplitudes(sq.zeta, sq.alpha_tilde, internal).head(dim);
        }
    }
    const double tail = 1.0 - amps.squaredNorm();
    if (tail > policy.tail_tol) {
        throw TruncationError(spec.kind_name() + " state keeps tail " + format_double(tail) +
                              " above n_max = " + std::to_string(policy.n_max) +
                              ", exceeding tail_tol " + format_double(policy.tail_tol));
    }
    return CavityDensity::from_matrix(amps * amps.adjoint());
}

double mean_photon(const CavityDensity& rho) {
    double mean = 0.0;
    for (int n = 0; n < rho.dim(); ++n) {
        mean += static_cast<double>(n) * rho.entry(n, n).real();
    }
    return mean;
}

} // namespace qbfcs
