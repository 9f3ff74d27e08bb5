#include "polydens/bigint.hpp"

#include <sstream>

#include "polydens/error.hpp"

namespace polydens {

bool fits_int64(const BigInt& v) {
  return mpz_sizeinbase(v.get_mpz_t(), 2) <= 63;
}

std::int64_t to_int64(const BigInt& v) {
  if (!fits_int64(v)) throw DomainError("integer does not fit in 64 bits");
  return static_cast<std::int64_t>(to_int128(v));
}

bool fits_int128(const BigInt& v) {
  return mpz_sizeinbase(v.get_mpz_t(), 2) <= 126;
}

int128 to_int128(const BigInt& v) {
  if (!fits_int128(v)) throw DomainError("integer does not fit in 128 bits");
  BigInt a = abs(v);
  std::size_t count = 0;
  std::uint64_t words[2] = {0, 0};
  mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, a.get_mpz_t());
  const uint128 out = (static_cast<uint128>(words[1]) << 64) | words[0];
  const auto s = static_cast<int128>(out);
  return sgn(v) < 0 ? -s : s;
}

BigInt from_int128(int128 v) {
  const bool negative = v < 0;
  uint128 a = negative ? static_cast<uint128>(-(v + 1)) + 1 : static_cast<uint128>(v);
  std::uint64_t words[2] = {static_cast<std::uint64_t>(a),
                            static_cast<std::uint64_t>(a >> 64)};
  BigInt out;
  mpz_import(out.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  if (negative) out = -out;
  return out;
}

BigInt from_uint64(std::uint64_t v) {
  return from_int128(static_cast<int128>(v));
}

std::uint64_t to_uint64(const BigInt& v) {
  if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) {
    throw DomainError("integer does not fit in an unsigned 64-bit word");
  }
  return static_cast<std::uint64_t>(to_int128(v));
}

BigInt floor_of(const Rational& q) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

BigInt ceil_of(const Rational& q) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

HighReal to_high_real(const Rational& q) {
  return HighReal(q.get_num().get_str()) / HighReal(q.get_den().get_str());
}

std::string to_string(const HighReal& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

Rational parse_rational(const std::string& text) {
  const auto dot = text.find('.');
  const auto exp = text.find_first_of("eE");
  try {
    if (dot == std::string::npos && exp == std::string::npos) {
      Rational q(text);
      q.canonicalize();
      return q;
    }
    std::string mantissa = exp == std::string::npos ? text : text.substr(0, exp);
    long exponent = exp == std::string::npos ? 0 : std::stol(text.substr(exp + 1));
    std::string digits;
    long frac_len = 0;
    bool seen_dot = false;
    for (char c : mantissa) {
      if (c == '.') {
        seen_dot = true;
      } else {
        digits.push_back(c);
        if (seen_dot) ++frac_len;
      }
    }
    Rational q{BigInt(digits)};
    const long shift = exponent - frac_len;
    BigInt ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift < 0) {
      q /= Rational(ten_pow);
    } else {
      q *= Rational(ten_pow);
    }
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw DomainError("not a rational number: '" + text + "'");
  }
}

}  // namespace polydens
