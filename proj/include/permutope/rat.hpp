#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace permutope {

/// Exact rational scalar. GMP keeps every value in lowest terms with a
/// positive denominator.
using Rat = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GuardExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument on anything else
/// (including a zero denominator).
Rat parse_rat(std::string_view text);

/// Always "p/q", also for integers, so output is uniform and re-parseable.
std::string format_rat(const Rat& value);

/// "p" for integers, "p/q" otherwise.
std::string format_rat_short(const Rat& value);

}  // namespace permutope
