#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace behav {

/// Exact rational number. mpq_class keeps values canonical (lowest terms,
/// positive denominator) after every arithmetic operation.
using Rational = mpq_class;

/// Renders `p` or `p/q`.
inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses `p`, `p/q`, or a finite decimal such as `-1.25` into an exact
/// rational. Throws std::invalid_argument on anything else.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] {
    return std::invalid_argument("invalid rational literal '" +
                                 std::string(text) + "'");
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[end])))
      ++end;
    return end;
  };
  std::size_t int_end = digits(pos);
  if (int_end == pos) throw bad();
  mpz_class numerator(std::string(text.substr(pos, int_end - pos)));
  mpz_class denominator = 1;
  if (int_end < text.size() && text[int_end] == '/') {
    std::size_t den_end = digits(int_end + 1);
    if (den_end == int_end + 1 || den_end != text.size()) throw bad();
    denominator = mpz_class(std::string(text.substr(int_end + 1)));
    if (denominator == 0) throw bad();
  } else if (int_end < text.size() && text[int_end] == '.') {
    std::size_t frac_end = digits(int_end + 1);
    if (frac_end == int_end + 1 || frac_end != text.size()) throw bad();
    std::string frac(text.substr(int_end + 1, frac_end - int_end - 1));
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    numerator = numerator * scale + mpz_class(frac);
    denominator = scale;
  } else if (int_end != text.size()) {
    throw bad();
  }
  Rational result(numerator, denominator);
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

}  // namespace behav
