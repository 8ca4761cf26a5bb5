#include "qbfcs/fcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qbfcs {

namespace {

constexpr double kNormTol = 1e-10;

double term_energy_qub(const PhaseTerm& term, double omega_qub) {
    return 0.5 * static_cast<double>(term.k1_half) * omega_qub;
}

double term_energy_cav(const PhaseTerm& term, double omega_cav) {
    return 0.5 * static_cast<double>(term.k2_half) * omega_cav;
}

} // namespace

PhasePolynomial::PhasePolynomial(std::vector<PhaseTerm> terms, double omega_qub, double omega_cav)
    : omega_qub_(omega_qub), omega_cav_(omega_cav) {
    if (!(omega_qub > 0.0) || !(omega_cav > 0.0)) {
        throw std::invalid_argument("phase polynomial frequencies must be > 0");
    }
    terms_.reserve(terms.size());
    for (const PhaseTerm& term : terms) {
        if (term.coeff != cdouble(0.0, 0.0)) terms_.push_back(term);
    }
    cdouble total(0.0, 0.0);
    for (const PhaseTerm& term : terms_) total += term.coeff;
    if (std::abs(total - cdouble(1.0, 0.0)) > kNormTol) {
        throw std::invalid_argument("phase polynomial coefficients must sum to 1, got residue " +
                                    format_double(std::abs(total - cdouble(1.0, 0.0))));
    }
}

cdouble PhasePolynomial::evaluate(CountingVector chi) const {
    cdouble total(0.0, 0.0);
    for (const PhaseTerm& term : terms_) {
        const double phase = chi.chi1 * term_energy_qub(term, omega_qub_) +
                             chi.chi2 * term_energy_cav(term, omega_cav_);
        total += term.coeff * std::exp(imag_unit * phase);
    }
    return total;
}

double PhasePolynomial::joint_moment(int alpha, int beta, double* imag_residue) const {
    if (alpha < 0 || beta < 0) throw std::invalid_argument("moment orders must be >= 0");
    cdouble total(0.0, 0.0);
    for (const PhaseTerm& term : terms_) {
        total += term.coeff * std::pow(term_energy_qub(term, omega_qub_), alpha) *
                 std::pow(term_energy_cav(term, omega_cav_), beta);
    }
    if (imag_residue) *imag_residue = std::abs(total.imag());
    return total.real();
}

double PhasePolynomial::work_moment(int n, double* imag_residue) const {
    if (n < 0) throw std::invalid_argument("moment orders must be >= 0");
    cdouble total(0.0, 0.0);
    for (const PhaseTerm& term : terms_) {
        const double w = term_energy_qub(term, omega_qub_) - term_energy_cav(term, omega_cav_);
        total += term.coeff * std::pow(w, n);
    }
    if (imag_residue) *imag_residue = std::abs(total.imag());
    return total.real();
}

double PhasePolynomial::normalization_residue() const {
    cdouble total(0.0, 0.0);
    for (const PhaseTerm& term : terms_) total += term.coeff;
    return std::abs(total - cdouble(1.0, 0.0));
}

PhasePolynomial generating_function(const QubitDensity& qubit, const CavityDensity& cavity,
                                    const JCParams& params, TimeWindow window) {
    const int dim = cavity.dim();
    const double g = params.g;
    const double half_det = 0.5 * params.detuning();
    const double tau = window.tau;

    // Sector functions at phi(k) = g^2 k + (detuning/2)^2 for k = 0..dim.
    // zeta(k) is the survival weight of the sector, eta(k) the interference
    // weight carried by one-photon coherences.
    std::vector<double> s_val(static_cast<std::size_t>(dim) + 1);
    std::vector<double> c_val(static_cast<std::size_t>(dim) + 1);
    for (int k = 0; k <= dim; ++k) {
        const double phi = g * g * static_cast<double>(k) + half_det * half_det;
        s_val[static_cast<std::size_t>(k)] = sin_over_root(tau, phi);
        c_val[static_cast<std::size_t>(k)] = cos_root(tau, phi);
    }
    auto zeta = [&](int k) {
        const double s = s_val[static_cast<std::size_t>(k)];
        const double c = c_val[static_cast<std::size_t>(k)];
        return c * c + half_det * half_det * s * s;
    };
    auto eta = [&](int k) {
        const double s = s_val[static_cast<std::size_t>(k)];
        const double c = c_val[static_cast<std::size_t>(k)];
        return s * (cdouble(c) - imag_unit * half_det * s);
    };

    double stay_from_excited = 0.0; // sum_n zeta(n+1) rho_nn
    double stay_from_ground = 0.0;  // sum_n zeta(n) rho_nn
    double hop_from_ground = 0.0;   // sum_n n S(n)^2 rho_nn      (absorption)
    double hop_from_excited = 0.0;  // sum_n (n+1) S(n+1)^2 rho_nn (emission)
    for (int n = 0; n < dim; ++n) {
        const double pop = cavity.entry(n, n).real();
        const double s_at = s_val[static_cast<std::size_t>(n)];
        const double s_up = s_val[static_cast<std::size_t>(n + 1)];
        stay_from_excited += zeta(n + 1) * pop;
        stay_from_ground += zeta(n) * pop;
        hop_from_ground += static_cast<double>(n) * s_at * s_at * pop;
        hop_from_excited += static_cast<double>(n + 1) * s_up * s_up * pop;
    }

    // One-photon coherences of the cavity state enter through eta.
    cdouble upper(0.0, 0.0); // sum_m eta(m+1) sqrt(m+1) rho_{m,m+1}
    cdouble lower(0.0, 0.0); // sum_m conj(eta(m+1)) sqrt(m+1) rho_{m+1,m}
    for (int m = 0; m + 1 < dim; ++m) {
        const double root = std::sqrt(static_cast<double>(m + 1));
        upper += eta(m + 1) * root * cavity.entry(m, m + 1);
        lower += std::conj(eta(m + 1)) * root * cavity.entry(m + 1, m);
    }

    const cdouble q_ee = qubit.entry(0, 0);
    const cdouble q_eg = qubit.entry(0, 1);
    const cdouble q_ge = qubit.entry(1, 0);
    const cdouble q_gg = qubit.entry(1, 1);

    const cdouble half_quantum = imag_unit * g * (q_eg * upper - q_ge * lower);

    std::vector<PhaseTerm> terms;
    terms.push_back({q_ee * stay_from_excited + q_gg * stay_from_ground, 0, 0});
    terms.push_back({half_quantum, 1, 1});
    terms.push_back({-half_quantum, -1, -1});
    terms.push_back({g * g * q_gg * hop_from_ground, 2, 2});
    terms.push_back({g * g * q_ee * hop_from_excited, -2, -2});
    return PhasePolynomial(std::move(terms), params.omega_qub, params.omega_cav);
}

MomentTable cumulant_table(const PhasePolynomial& gf, int n_order) {
    if (n_order < 1 || n_order > 8) {
        throw std::invalid_argument("moment order must lie in [1, 8]");
    }
    MomentTable table;
    table.order = n_order;

    enum Variable { EnergyChange, Heat, Work };
    auto energy_of = [&](const PhaseTerm& term, Variable which) {
        const double e_qub = 0.5 * static_cast<double>(term.k1_half) * gf.omega_qub();
        const double e_cav = 0.5 * static_cast<double>(term.k2_half) * gf.omega_cav();
        switch (which) {
            case EnergyChange: return e_qub;
            case Heat: return e_cav;
            default: return e_qub - e_cav;
        }
    };

    auto fill = [&](Variable which, MomentSeries& series) {
        series.raw.assign(static_cast<std::size_t>(n_order) + 1, 0.0);
        series.central.assign(static_cast<std::size_t>(n_order) + 1, 0.0);
        series.cumulant.assign(static_cast<std::size_t>(n_order) + 1, 0.0);

        for (int n = 0; n <= n_order; ++n) {
            cdouble total(0.0, 0.0);
            for (const PhaseTerm& term : gf.terms()) {
                total += term.coeff * std::pow(energy_of(term, which), n);
            }
            series.raw[static_cast<std::size_t>(n)] = total.real();
            table.max_imag_residue = std::max(table.max_imag_residue, std::abs(total.imag()));
        }

        const double mean = series.raw[1];
        for (int n = 0; n <= n_order; ++n) {
            cdouble total(0.0, 0.0);
            for (const PhaseTerm& term : gf.terms()) {
                total += term.coeff * std::pow(energy_of(term, which) - mean, n);
            }
            series.central[static_cast<std::size_t>(n)] = total.real();
            table.max_imag_residue = std::max(table.max_imag_residue, std::abs(total.imag()));
        }

        // kappa_n = m_n - sum_{j=1}^{n-1} C(n-1, j-1) kappa_j m_{n-j}.
        series.cumulant[0] = 0.0;
        for (int n = 1; n <= n_order; ++n) {
            double kappa = series.raw[static_cast<std::size_t>(n)];
            for (int j = 1; j < n; ++j) {
                kappa -= binomial(n - 1, j - 1) * series.cumulant[static_cast<std::size_t>(j)] *
                         series.raw[static_cast<std::size_t>(n - j)];
            }
            series.cumulant[static_cast<std::size_t>(n)] = kappa;
        }
    };

    fill(EnergyChange, table.energy_change);
    fill(Heat, table.heat);
    fill(Work, table.work);
    return table;
}

FockGroundStats fock_ground_closed_form(const JCParams& params, int photons, TimeWindow window) {
    if (photons < 0) throw std::invalid_argument("photon number must be >= 0");
    const double half_det = 0.5 * params.detuning();
    const double phi = params.g * params.g * static_cast<double>(photons) + half_det * half_det;
    const double s = sin_over_root(window.tau, phi);
    const double p = params.g * params.g * static_cast<double>(photons) * s * s;

    FockGroundStats stats;
    stats.transfer_probability = p;
    stats.mean = p * params.omega_qub;
    stats.variance = p * params.omega_qub * params.omega_qub - stats.mean * stats.mean;
    if (p == 0.0) {
        stats.snr = 0.0;
    } else if (1.0 - p <= 1e-15) {
        stats.snr = std::numeric_limits<double>::infinity();
    } else {
        stats.snr = p / (1.0 - p);
    }
    return stats;
}

PhasePolynomial fock_ground_generating_function(const JCParams& params, int photons,
                                                TimeWindow window) {
    if (photons < 0) throw std::invalid_argument("photon number must be >= 0");
    const double half_det = 0.5 * params.detuning();
    const double phi = params.g * params.g * static_cast<double>(photons) + half_det * half_det;
    const double s = sin_over_root(window.tau, phi);
    const double c = cos_root(window.tau, phi);
    const double p = params.g * params.g * static_cast<double>(photons) * s * s;

    std::vector<PhaseTerm> terms;
    terms.push_back({cdouble(c * c + half_det * half_det * s * s), 0, 0});
    terms.push_back({cdouble(p), 2, 2});
    return PhasePolynomial(std::move(terms), params.omega_qub, params.omega_cav);
}

} // namespace qbfcs
