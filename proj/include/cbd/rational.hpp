#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cbd {

// All probabilities and derived quantities are exact rationals. mpq_class
// keeps values canonical (reduced form, positive denominator), which is what
// every equality test in the library relies on.
using Rat = mpq_class;

// num/den as a canonical rational. den must be nonzero.
Rat make_rat(long num, long den = 1);

// Accepts "a/b", plain integers, and terminating decimals ("0.125"), with an
// optional leading sign. Throws Error(ParseError) on anything else, including
// a zero denominator.
Rat parse_rational(std::string_view text);

// Canonical form: "n" when the denominator is 1, otherwise "n/d".
std::string to_string(const Rat& value);

Rat rat_abs(const Rat& value);

bool in_unit_interval(const Rat& value);

}  // namespace cbd
