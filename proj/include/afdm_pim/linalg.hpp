// linalg.hpp - shared numeric types and small helpers
//
// All complex arithmetic is double precision. Vectors and matrices are
// dynamic-size Eigen types; N is a runtime parameter everywhere.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace afdm_pim {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

/// One bit per element, values 0 or 1.
using Bits = std::vector<std::uint8_t>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// exp(i*2*pi*sign*frac(turns)). Reducing to the fractional part first keeps
/// large quadratic exponents (c*m^2) accurate and makes integer exponents
/// produce exactly 1.
inline cplx unit_phase(double turns, double sign = 1.0) {
    const double frac = turns - std::floor(turns);
    if (frac == 0.0) return {1.0, 0.0};
    return std::polar(1.0, sign * kTwoPi * frac);
}

/// Fractional part of c*k in turns, with the rounding error of the product
/// recovered by fma so large k (k = m^2) keeps full phase accuracy.
inline double product_turns(double c, double k) {
    const double p = c * k;
    const double err = std::fma(c, k, -p);
    return (p - std::floor(p)) + err;
}

/// Big-endian bit word -> integer.
inline std::uint64_t bits_to_word(const std::uint8_t* bits, std::size_t count) {
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < count; ++i) w = (w << 1) | (bits[i] & 1u);
    return w;
}

/// Integer -> big-endian bit word of the given width, appended to out.
inline void word_to_bits(std::uint64_t w, std::size_t count, Bits& out) {
    for (std::size_t i = count; i-- > 0;) out.push_back(static_cast<std::uint8_t>((w >> i) & 1u));
}

}  // namespace afdm_pim
