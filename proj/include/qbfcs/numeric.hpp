#ifndef QBFCS_NUMERIC_HPP
#define QBFCS_NUMERIC_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

namespace qbfcs {

using cdouble = std::complex<double>;

inline constexpr cdouble imag_unit{0.0, 1.0};

/// sin(x)/x, continued through x = 0.
inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

/// sin(tau*sqrt(phi))/sqrt(phi) for phi >= 0; equals tau at phi = 0.
inline double sin_over_root(double tau, double phi) {
    return tau * sinc(tau * std::sqrt(phi));
}

/// cos(tau*sqrt(phi)) for phi >= 0.
inline double cos_root(double tau, double phi) {
    return std::cos(tau * std::sqrt(phi));
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double acc = 1.0;
    for (int i = 1; i <= k; ++i) acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(acc);
}

/// Shortest decimal string that round-trips the double ("inf" for infinities).
std::string format_double(double x);

} // namespace qbfcs

#endif
