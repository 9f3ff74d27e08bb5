#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gmpxx.h>

namespace polydens {

using BigInt = mpz_class;
using Rational = mpq_class;
/// 50 significant decimal digits (166-bit mantissa).
using HighReal = boost::multiprecision::cpp_bin_float_50;

using int128 = __int128;
using uint128 = unsigned __int128;

bool fits_int64(const BigInt& v);
std::int64_t to_int64(const BigInt& v);

bool fits_int128(const BigInt& v);
int128 to_int128(const BigInt& v);
BigInt from_int128(int128 v);
BigInt from_uint64(std::uint64_t v);
std::uint64_t to_uint64(const BigInt& v);

/// Floor and ceiling of a rational as big integers.
BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);

HighReal to_high_real(const Rational& q);
std::string to_string(const HighReal& x, int digits = 30);

/// Parses "a", "-a/b" or a decimal literal such as "0.25" exactly.
Rational parse_rational(const std::string& text);

}  // namespace polydens
