#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "privmine/errors.hpp"

namespace privmine {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number. Supports, confidences, thresholds and the
/// reconstruction algebra are all computed in this type; doubles appear
/// only in Monte-Carlo statistics and report formatting.
using Rational = boost::multiprecision::cpp_rational;

/// C(n, k) with exact integer arithmetic.
inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    result *= n - k + j;
    result /= j;  // exact: any j consecutive integers contain a multiple of j
  }
  return result;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

namespace detail {

inline BigInt parse_integer(std::string_view s, std::string_view context) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw ValidationError("expected a number in '" + std::string(context) + "'");
  BigInt value = 0;
  for (char c : s) {
    if (c < '0' || c > '9')
      throw ValidationError("invalid number '" + std::string(context) + "'");
    value = value * 10 + (c - '0');
  }
  return negative ? -value : value;
}

inline BigInt pow10(std::size_t digits) {
  BigInt p = 1;
  for (std::size_t i = 0; i < digits; ++i) p *= 10;
  return p;
}

}  // namespace detail

/// Parses "3/2", "-7", "0.25" or "1.5e0"-free plain decimals into an exact rational.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ValidationError("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_integer(trim(s.substr(0, slash)), s);
    BigInt den = detail::parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view head = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if (frac.empty()) throw ValidationError("invalid decimal '" + std::string(s) + "'");
    for (char c : frac)
      if (c < '0' || c > '9') throw ValidationError("invalid decimal '" + std::string(s) + "'");
    bool negative = !head.empty() && head.front() == '-';
    BigInt whole = head.empty() || head == "-" || head == "+"
                       ? BigInt(0)
                       : detail::parse_integer(head, s);
    if (whole < 0) whole = -whole;
    BigInt scale = detail::pow10(frac.size());
    BigInt num = whole * scale + detail::parse_integer(frac, s);
    return Rational(negative ? -num : num, scale);
  }
  return Rational(detail::parse_integer(s, s), 1);
}

/// Rounds to `digits` decimal places (half away from zero) and trims trailing
/// zeros, keeping at least one fractional digit: 1/2 -> "0.5", 1 -> "1.0".
inline std::string format_decimal(const Rational& value, int digits = 12) {
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt scale = detail::pow10(static_cast<std::size_t>(digits));
  BigInt scaled = (2 * num * scale + den) / (2 * den);  // round half up on |value|
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::string frac_str = frac.str();
  frac_str.insert(frac_str.begin(), static_cast<std::size_t>(digits) - frac_str.size(), '0');
  while (frac_str.size() > 1 && frac_str.back() == '0') frac_str.pop_back();
  std::string out;
  if (negative && (whole != 0 || frac != 0)) out += '-';
  out += whole.str();
  out += '.';
  out += frac_str;
  return out;
}

/// "num/den" in lowest terms, or just "num" for integers. Loss-free.
inline std::string format_exact(const Rational& value) {
  std::string out = numerator(value).str();
  if (denominator(value) != 1) {
    out += '/';
    out += denominator(value).str();
  }
  return out;
}

}  // namespace privmine
