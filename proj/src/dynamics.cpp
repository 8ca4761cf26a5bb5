#include "qbfcs/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qbfcs {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kPsdTol = -1e-10;

void check_density(const Eigen::MatrixXcd& matrix, const char* what) {
    const double herm_residue = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_residue > kHermTol) {
        throw std::invalid_argument(std::string(what) + " is not Hermitian");
    }
}

} // namespace

JCParams::JCParams(double omega_qub_, double omega_cav_, double g_)
    : omega_qub(omega_qub_), omega_cav(omega_cav_), g(g_) {
    if (!(omega_qub > 0.0)) throw std::invalid_argument("omega_qub must be > 0");
    if (!(omega_cav > 0.0)) throw std::invalid_argument("omega_cav must be > 0");
    if (!(g >= 0.0)) throw std::invalid_argument("g must be >= 0");
}

TimeWindow::TimeWindow(double tau_) : tau(tau_) {
    if (!(tau >= 0.0)) throw std::invalid_argument("tau must be >= 0");
}

QubitDensity QubitDensity::ground() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(1, 1) = 1.0;
    return QubitDensity(m);
}

QubitDensity QubitDensity::excited() {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = 1.0;
    return QubitDensity(m);
}

QubitDensity QubitDensity::from_matrix(const Eigen::Matrix2cd& matrix) {
    check_density(matrix, "qubit density matrix");
    Eigen::Matrix2cd m = 0.5 * (matrix + matrix.adjoint());
    const double trace = m.trace().real();
    if (!(trace > 1e-14)) {
        throw std::invalid_argument("qubit density matrix trace must be positive");
    }
    m /= trace;
    // 2x2 eigenvalues in closed form: t/2 +/- sqrt((t/2)^2 - det).
    const double half_trace = 0.5; // after normalization
    const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    const double disc = std::sqrt(std::max(0.0, half_trace * half_trace - det));
    if (half_trace - disc < kPsdTol) {
        throw std::invalid_argument("qubit density matrix is not positive semidefinite");
    }
    return QubitDensity(m);
}

JointState JointState::product(const QubitDensity& qubit, const CavityDensity& cavity) {
    const int fdim = cavity.dim();
    Eigen::MatrixXcd joint(2 * fdim, 2 * fdim);
    for (int q = 0; q < 2; ++q) {
        for (int p = 0; p < 2; ++p) {
            joint.block(q * fdim, p * fdim, fdim, fdim) = qubit.entry(q, p) * cavity.matrix();
        }
    }
    return JointState(std::move(joint));
}

JointState JointState::from_matrix(Eigen::MatrixXcd matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() < 4 || matrix.rows() % 2 != 0) {
        throw std::invalid_argument("joint density matrix must be square with even dim >= 4");
    }
    check_density(matrix, "joint density matrix");
    matrix = 0.5 * (matrix + matrix.adjoint().eval());
    const double trace = matrix.trace().real();
    if (!(trace > 1e-14)) {
        throw std::invalid_argument("joint density matrix trace must be positive");
    }
    matrix /= trace;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < kPsdTol) {
        throw std::invalid_argument("joint density matrix is not positive semidefinite");
    }
    return JointState(std::move(matrix));
}

PropagatorBlocks::PropagatorBlocks(const JCParams& params, TimeWindow window, int n_max)
    : n_max_(n_max), tau_(window.tau) {
    if (n_max < 1) throw std::invalid_argument("propagator needs n_max >= 1");
    const double g = params.g;
    const double half_det = 0.5 * params.detuning();
    const double wc = params.omega_cav;
    const double tau = tau_;

    // phi(n) = g^2 n + (detuning/2)^2 drives the generalized Rabi angle of
    // the sector containing |e,n-1> and |g,n>.
    auto phi = [&](int n) { return g * g * static_cast<double>(n) + half_det * half_det; };

    stay_excited_.resize(static_cast<std::size_t>(n_max + 1));
    stay_ground_.resize(static_cast<std::size_t>(n_max + 1));
    emit_.resize(static_cast<std::size_t>(n_max));
    absorb_.resize(static_cast<std::size_t>(n_max));

    for (int n = 0; n <= n_max; ++n) {
        const double c_up = cos_root(tau, phi(n + 1));
        const double s_up = sin_over_root(tau, phi(n + 1));
        const double c_at = cos_root(tau, phi(n));
        const double s_at = sin_over_root(tau, phi(n));

        const cdouble phase_exc =
            std::exp(-0.5 * imag_unit * wc * (1.0 + 2.0 * static_cast<double>(n)) * tau);
        stay_excited_[static_cast<std::size_t>(n)] =
            phase_exc * (cdouble(c_up) - imag_unit * half_det * s_up);

        const cdouble phase_gnd =
            std::exp(imag_unit * wc * (0.5 - static_cast<double>(n)) * tau);
        stay_ground_[static_cast<std::size_t>(n)] =
            phase_gnd * (cdouble(c_at) + imag_unit * half_det * s_at);

        if (n < n_max) {
            const double root = std::sqrt(static_cast<double>(n + 1));
            // <e,n|U|g,n+1>: one quantum absorbed from the cavity.
            absorb_[static_cast<std::size_t>(n)] = -imag_unit * g * root * s_up *
                std::exp(-imag_unit * wc * (0.5 + static_cast<double>(n)) * tau);
            // <g,n+1|U|e,n>: one quantum emitted into the cavity.
            emit_[static_cast<std::size_t>(n)] = -imag_unit * g * root * s_up *
                std::exp(imag_unit * wc * (0.5 - static_cast<double>(n + 1)) * tau);
        }
    }
}

Eigen::MatrixXcd PropagatorBlocks::assemble_dense() const {
    const int fdim = fock_dim();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * fdim, 2 * fdim);
    for (int n = 0; n <= n_max_; ++n) {
        u(JointState::index(0, n, fdim), JointState::index(0, n, fdim)) = stay_excited(n);
        u(JointState::index(1, n, fdim), JointState::index(1, n, fdim)) = stay_ground(n);
    }
    for (int n = 0; n < n_max_; ++n) {
        u(JointState::index(0, n, fdim), JointState::index(1, n + 1, fdim)) = absorb(n);
        u(JointState::index(1, n + 1, fdim), JointState::index(0, n, fdim)) = emit(n);
    }
    return u;
}

JointState evolve_joint(const PropagatorBlocks& prop, const JointState& state) {
    const int fdim = state.fock_dim();
    if (prop.fock_dim() != fdim) {
        throw std::invalid_argument("propagator and state cutoffs disagree");
    }
    const Eigen::MatrixXcd& rho = state.matrix();
    const int n_max = prop.n_max();

    auto idx_e = [&](int n) { return JointState::index(0, n, fdim); };
    auto idx_g = [&](int n) { return JointState::index(1, n, fdim); };

    // half = U * rho, sector-bidiagonal stencil on rows.
    Eigen::MatrixXcd half(2 * fdim, 2 * fdim);
    for (int n = 0; n <= n_max; ++n) {
        half.row(idx_e(n)) = prop.stay_excited(n) * rho.row(idx_e(n));
        if (n < n_max) half.row(idx_e(n)) += prop.absorb(n) * rho.row(idx_g(n + 1));
        half.row(idx_g(n)) = prop.stay_ground(n) * rho.row(idx_g(n));
        if (n > 0) half.row(idx_g(n)) += prop.emit(n - 1) * rho.row(idx_e(n - 1));
    }

    // out = half * U^dag, same stencil conjugated on columns.
    Eigen::MatrixXcd out(2 * fdim, 2 * fdim);
    for (int n = 0; n <= n_max; ++n) {
        out.col(idx_e(n)) = std::conj(prop.stay_excited(n)) * half.col(idx_e(n));
        if (n < n_max) out.col(idx_e(n)) += std::conj(prop.absorb(n)) * half.col(idx_g(n + 1));
        out.col(idx_g(n)) = std::conj(prop.stay_ground(n)) * half.col(idx_g(n));
        if (n > 0) out.col(idx_g(n)) += std::conj(prop.emit(n - 1)) * half.col(idx_e(n - 1));
    }
    return JointState(std::move(out));
}

QubitDensity reduced_qubit(const JointState& state) {
    const int fdim = state.fock_dim();
    const Eigen::MatrixXcd& rho = state.matrix();
    Eigen::Matrix2cd reduced = Eigen::Matrix2cd::Zero();
    for (int q = 0; q < 2; ++q) {
        for (int p = 0; p < 2; ++p) {
            reduced(q, p) = rho.block(q * fdim, p * fdim, fdim, fdim).trace();
        }
    }
    return QubitDensity::from_matrix(reduced);
}

} // namespace qbfcs
