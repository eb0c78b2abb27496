#include "diffspec/number_theory.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "diffspec/errors.hpp"

namespace diffspec::nt {

u64 powmod(u64 base, u64 exp, u64 m)
{
    if (m == 1)
        return 0;
    u64 result = 1;
    base %= m;
    while (exp != 0) {
        if (exp & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % small == 0)
            return n == small;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // The first twelve primes form a deterministic witness set for all n < 3.18e23.
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

u64 gcd(u64 a, u64 b)
{
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

namespace {

// Brent's variant of Pollard rho; n must be odd and composite.
u64 pollard_brent(u64 n)
{
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        constexpr u64 m = 128;
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i)
                y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd(q, n);
                k += m;
            }
            r <<= 1;
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_into(u64 n, std::map<u64, unsigned>& out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    for (u64 small = 2; small < 1000; ++small) {
        if (n % small == 0) {
            while (n % small == 0) {
                ++out[small];
                n /= small;
            }
            factor_into(n, out);
            return;
        }
    }
    u64 d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<u64, unsigned>> factorize(u64 n)
{
    if (n == 0)
        throw InvalidArgument("factorize: zero has no factorization");
    std::map<u64, unsigned> primes;
    factor_into(n, primes);
    return {primes.begin(), primes.end()};
}

int legendre(std::int64_t a, u64 p)
{
    if (p == 2 || !is_prime(p))
        throw InvalidArgument("legendre: modulus must be an odd prime");
    auto sp = static_cast<std::int64_t>(p);
    u64 r = static_cast<u64>(((a % sp) + sp) % sp);
    if (r == 0)
        return 0;
    return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::optional<u64> invmod(u64 a, u64 m)
{
    std::int64_t t = 0, new_t = 1;
    auto r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        std::int64_t quot = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - quot * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - quot * new_r);
    }
    if (r != 1)
        return std::nullopt;
    if (t < 0)
        t += static_cast<std::int64_t>(m);
    return static_cast<u64>(t);
}

std::optional<u64> checked_mul(u64 a, u64 b)
{
    u64 out;
    if (__builtin_mul_overflow(a, b, &out))
        return std::nullopt;
    return out;
}

std::optional<u64> checked_pow(u64 base, unsigned exp)
{
    u64 result = 1;
    for (unsigned i = 0; i < exp; ++i) {
        auto next = checked_mul(result, base);
        if (!next)
            return std::nullopt;
        result = *next;
    }
    return result;
}

std::string to_decimal(u128 v)
{
    if (v == 0)
        return "0";
    std::string digits;
    while (v != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

}  // namespace diffspec::nt
