#pragma once

// Deliberately naive reference arithmetic for tests. Shares nothing with the
// library except the packed-index convention (index = sum c_i p^i), so that
// elements can be compared one for one.

#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using Poly = std::vector<u64>;  // constant term first, may carry leading zeros

inline bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

inline u64 ipow(u64 b, unsigned e)
{
    u64 r = 1;
    while (e--)
        r *= b;
    return r;
}

// Remainder of a modulo b over F_p; b monic.
inline Poly poly_rem(Poly a, const Poly& b, u64 p)
{
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        const u64 lead = a.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i)
            a[shift + i] = (a[shift + i] + (p - lead) * b[i]) % p;
        a.pop_back();
    }
    return a;
}

inline bool is_zero_poly(const Poly& a)
{
    for (u64 c : a)
        if (c != 0)
            return false;
    return true;
}

// Monic f of degree n is irreducible iff no monic polynomial of degree
// 1..n/2 divides it. Trial division by every candidate.
inline bool is_irreducible(const Poly& f, u64 p)
{
    const std::size_t n = f.size() - 1;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const u64 count = ipow(p, static_cast<unsigned>(k));
        for (u64 idx = 0; idx < count; ++idx) {
            Poly g(k + 1);
            u64 v = idx;
            for (std::size_t i = 0; i < k; ++i) {
                g[i] = v % p;
                v /= p;
            }
            g[k] = 1;
            if (is_zero_poly(poly_rem(f, g, p)))
                return false;
        }
    }
    return true;
}

// First monic irreducible of degree n when coefficient tuples
// (m0, m1, ..., m_{n-1}) are listed in lexicographic order.
inline Poly first_irreducible(u64 p, unsigned n)
{
    std::vector<u64> digits(n, 0);
    for (;;) {
        Poly f(digits.begin(), digits.end());
        f.push_back(1);
        if (is_irreducible(f, p))
            return f;
        // increment with m_{n-1} as the least significant digit
        int i = static_cast<int>(n) - 1;
        while (i >= 0 && ++digits[i] == p)
            digits[i--] = 0;
        if (i < 0)
            return {};
    }
}

struct Field {
    u64 p;
    unsigned n;
    Poly modulus;  // monic, size n+1
    u64 q;

    Field(u64 p_, const std::vector<std::uint32_t>& mod) : p(p_), n(static_cast<unsigned>(mod.size() - 1)), q(1)
    {
        modulus.assign(mod.begin(), mod.end());
        for (unsigned i = 0; i < n; ++i)
            q *= p;
    }

    Poly unpack(u64 x) const
    {
        Poly c(n);
        for (unsigned i = 0; i < n; ++i) {
            c[i] = x % p;
            x /= p;
        }
        return c;
    }

    u64 pack(const Poly& c) const
    {
        u64 x = 0;
        for (unsigned i = n; i-- > 0;)
            x = x * p + (i < c.size() ? c[i] : 0);
        return x;
    }

    u64 add(u64 a, u64 b) const
    {
        Poly x = unpack(a), y = unpack(b);
        for (unsigned i = 0; i < n; ++i)
            x[i] = (x[i] + y[i]) % p;
        return pack(x);
    }

    u64 neg(u64 a) const
    {
        Poly x = unpack(a);
        for (auto& c : x)
            c = (p - c) % p;
        return pack(x);
    }

    u64 sub(u64 a, u64 b) const { return add(a, neg(b)); }

    u64 mul(u64 a, u64 b) const
    {
        const Poly x = unpack(a), y = unpack(b);
        Poly r(2 * n, 0);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j)
                r[i + j] = (r[i + j] + x[i] * y[j]) % p;
        return pack(poly_rem(r, modulus, p));
    }

    u64 pow(u64 a, u64 e) const
    {
        u64 r = 1;
        for (u64 k = 0; k < e; ++k)
            r = mul(r, a);
        return r;
    }

    // Square-and-multiply, for exponents too large for the loop above.
    u64 pow_fast(u64 a, u64 e) const
    {
        u64 r = 1;
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    u64 order(u64 x) const
    {
        u64 k = 1;
        for (u64 v = x; v != 1; v = mul(v, x))
            ++k;
        return k;
    }

    u64 power_map(u64 x, u64 d) const
    {
        if (x == 0)
            return 0;
        u64 e = d % (q - 1);
        if (e == 0)
            e = q - 1;
        return pow_fast(x, e);
    }

    // Spectrum of x^d by a value histogram over packed indices.
    std::map<u64, u64> spectrum(u64 d) const
    {
        std::vector<u64> counts(q, 0);
        for (u64 x = 0; x < q; ++x)
            ++counts[sub(power_map(add(x, 1), d), power_map(x, d))];
        std::map<u64, u64> omega;
        for (u64 c : counts)
            ++omega[c];
        return omega;
    }
};

}  // namespace oracle
