#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace mclab {

/// Arbitrary-precision rational (GMP backed, no expression templates so it
/// behaves as a plain value type inside Eigen containers).
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class NumericMode { float64_log_space, exact_rational };

template <class Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Natural log of |z| for an arbitrary-size integer, without overflow.
inline double log_abs(const BigInt& z) {
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, z.backend().data());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

/// Natural log of a positive scalar. For rationals the log is taken of the
/// numerator and denominator separately, so values far below the double
/// range are fine.
inline double log_of(double x) { return std::log(x); }
inline double log_of(const Rational& q) {
    return log_abs(BigInt(numerator(q))) - log_abs(BigInt(denominator(q)));
}

/// log(exp(a) + exp(b)) without overflow; -inf is the neutral element.
inline double log_add_exp(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// Parses "p/q", "p" or a decimal literal. Decimals are converted exactly
/// from their decimal expansion (so "0.25" is 1/4).
Rational parse_rational(std::string_view text);

/// Canonical "p/q" spelling in lowest terms (denominator always present).
std::string format_rational(const Rational& q);

template <class Scalar>
Scalar make_fraction(long num, long den) {
    if constexpr (is_exact_v<Scalar>) {
        return Rational(num, den);
    } else {
        return static_cast<double>(num) / static_cast<double>(den);
    }
}

}  // namespace mclab
