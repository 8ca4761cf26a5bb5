#include "qbfcs/numeric.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace qbfcs {

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    (void)ec; // 64 chars always suffice for shortest round-trip doubles
    return std::string(buf.data(), ptr);
}

} // namespace qbfcs
