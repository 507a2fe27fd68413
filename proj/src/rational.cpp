#include "dlrkit/rational.hpp"

#include <cctype>

namespace dlrkit {

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  auto read_digits = [&](BigInt& out) {
    std::size_t start = pos;
    out = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      out = out * 10 + (text[pos] - '0');
      ++pos;
    }
    return pos > start;
  };
  BigInt num;
  if (!read_digits(num)) return std::nullopt;
  BigInt den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    if (!read_digits(den) || den.is_zero()) return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;
  if (negative) num = -num;
  return Rational(num, den);
}

std::string Rational::str() const {
  return numerator().str() + "/" + denominator().str();
}

std::string Rational::str_compact() const {
  BigInt den = denominator();
  if (den == 1) return numerator().str();
  return numerator().str() + "/" + den.str();
}

std::size_t bit_length(const BigInt& n) {
  if (n.is_zero()) return 1;
  return boost::multiprecision::msb(boost::multiprecision::abs(n)) + 1;
}

std::size_t bit_length(const Rational& r) {
  return bit_length(r.numerator()) + bit_length(r.denominator());
}

}  // namespace dlrkit
