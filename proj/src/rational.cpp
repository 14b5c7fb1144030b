#include "genwag/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "genwag/errors.hpp"

namespace genwag {

namespace {

long long parse_integer(const std::string& text) {
  if (text.empty()) throw InputError("empty number");
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw InputError("not an integer: '" + text + "'");
  }
  if (pos != text.size())
    throw InputError("trailing characters in number: '" + text + "'");
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    long long num = parse_integer(text.substr(0, slash));
    long long den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    // Exact decimal conversion: d.f -> (d * 10^k + f) / 10^k.
    std::string head = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.empty()) return Rational(parse_integer(head));
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw InputError("malformed decimal: '" + text + "'");
    bool negative = !head.empty() && head[0] == '-';
    if (head == "-" || head.empty()) head = negative ? "-0" : "0";
    long long whole = parse_integer(head);
    long long den = 1;
    long long num = 0;
    for (char c : frac) {
      if (den > (1LL << 60) / 10)
        throw InputError("decimal too long for exact conversion: '" + text + "'");
      den *= 10;
      num = num * 10 + (c - '0');
    }
    Rational r(whole);
    Rational f(num, den);
    return negative ? r - f : r + f;
  }
  return Rational(parse_integer(text));
}

std::string rational_to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double rational_to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

}  // namespace genwag
