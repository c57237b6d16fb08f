#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ipapprox {

/// Exact rational scalar. GMP keeps every value canonical (lowest terms,
/// positive denominator) after each arithmetic operation.
using Rat = mpq_class;
using Int = mpz_class;
using RatVector = std::vector<Rat>;
using IntVector = std::vector<Int>;

/// num/den in canonical form. The two-argument mpq_class constructor does
/// not reduce, so every fraction built from parts goes through here.
Rat make_rat(long num, long den);

/// Parses "p/q", "p", with an optional sign on the numerator only.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rat parse_rat(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rat& value);
std::string to_string(const Int& value);

Int floor(const Rat& value);
Int ceil(const Rat& value);
bool is_integer(const Rat& value);

/// Fractional part in [0, 1).
Rat frac(const Rat& value);

Rat abs(const Rat& value);

/// Maximum absolute entry; zero for an empty vector.
Rat inf_norm(const RatVector& v);

Rat dot(const RatVector& a, const RatVector& b);
Rat dot(const RatVector& a, const IntVector& b);

RatVector to_rat(const IntVector& v);

/// Closest double, for human-readable reports only.
double approx(const Rat& value);

std::int64_t to_int64(const Int& value);

}  // namespace ipapprox
