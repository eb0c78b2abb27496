#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace diffspec::nt {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

/// Prime factorization as (prime, exponent) pairs sorted by prime.
std::vector<std::pair<u64, unsigned>> factorize(u64 n);

u64 gcd(u64 a, u64 b);

/// Legendre symbol (a/p) for odd prime p, returned as -1, 0 or +1.
int legendre(std::int64_t a, u64 p);

/// Inverse of a modulo m, when gcd(a, m) = 1.
std::optional<u64> invmod(u64 a, u64 m);

/// base^exp if it fits in 64 bits.
std::optional<u64> checked_pow(u64 base, unsigned exp);

std::optional<u64> checked_mul(u64 a, u64 b);

/// Decimal rendering of a 128-bit unsigned value.
std::string to_decimal(u128 v);

}  // namespace diffspec::nt
