#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace diffspec::poly {

/// Dense polynomial over F_p, constant term first, no trailing zeros.
/// The zero polynomial is the empty vector.
using Poly = std::vector<std::uint32_t>;

void trim(Poly& a);
int degree(const Poly& a);

Poly add(const Poly& a, const Poly& b, std::uint32_t p);
Poly sub(const Poly& a, const Poly& b, std::uint32_t p);
Poly mul(const Poly& a, const Poly& b, std::uint32_t p);
Poly mod(Poly a, const Poly& f, std::uint32_t p);
Poly mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p);
Poly powmod(Poly base, std::uint64_t exp, const Poly& f, std::uint32_t p);

/// Monic gcd.
Poly gcd(Poly a, Poly b, std::uint32_t p);

/// Ben-Or test: f (monic, degree n) is irreducible iff gcd(f, x^{p^k} - x) = 1
/// for every 1 <= k <= n/2.
bool is_irreducible(const Poly& f, std::uint32_t p);

/// Brute-force oracle for tiny fields: no monic factor of degree 1..n/2.
bool is_irreducible_bruteforce(const Poly& f, std::uint32_t p);

/// Lexicographically smallest monic irreducible of degree n, comparing
/// coefficient sequences constant term first.
Poly smallest_irreducible(std::uint32_t p, unsigned n);

/// Parses "2,3,0,0,0,0,0,1" (constant term first). Coefficients are kept as
/// written, so trailing zeros make the result non-monic rather than shorter.
std::vector<std::int64_t> parse_coefficients(std::string_view text);
std::string format_coefficients(std::span<const std::uint32_t> coeffs);

}  // namespace diffspec::poly
