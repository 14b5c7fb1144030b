#pragma once

#include <boost/rational.hpp>

#include <string>

namespace genwag {

// Payoffs and transition probabilities are exact rationals throughout.
// The satisficing graph of a game can change under any rounding of ties,
// so floating point never enters a classification decision.
using Rational = boost::rational<long long>;

// Accepts "p/q", plain integers, and decimal strings like "-0.25"
// (converted exactly). Throws InputError on anything else.
Rational parse_rational(const std::string& text);

// "p/q", or just "p" when the denominator is 1.
std::string rational_to_string(const Rational& r);

double rational_to_double(const Rational& r);

}  // namespace genwag
