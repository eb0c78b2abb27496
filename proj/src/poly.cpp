#include "diffspec/poly.hpp"

#include <algorithm>
#include <charconv>

#include "diffspec/errors.hpp"
#include "diffspec/number_theory.hpp"

namespace diffspec::poly {

namespace {

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p)
{
    return static_cast<std::uint32_t>(nt::powmod(a, p - 2, p));
}

}  // namespace

void trim(Poly& a)
{
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

int degree(const Poly& a)
{
    return static_cast<int>(a.size()) - 1;
}

Poly add(const Poly& a, const Poly& b, std::uint32_t p)
{
    Poly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t s = (i < a.size() ? a[i] : 0) + static_cast<std::uint64_t>(i < b.size() ? b[i] : 0);
        out[i] = static_cast<std::uint32_t>(s % p);
    }
    trim(out);
    return out;
}

Poly sub(const Poly& a, const Poly& b, std::uint32_t p)
{
    Poly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t s = (i < a.size() ? a[i] : 0) + static_cast<std::uint64_t>(p) - (i < b.size() ? b[i] : 0);
        out[i] = static_cast<std::uint32_t>(s % p);
    }
    trim(out);
    return out;
}

Poly mul(const Poly& a, const Poly& b, std::uint32_t p)
{
    if (a.empty() || b.empty())
        return {};
    std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
    }
    Poly out(acc.begin(), acc.end());
    trim(out);
    return out;
}

Poly mod(Poly a, const Poly& f, std::uint32_t p)
{
    trim(a);
    const int df = degree(f);
    if (df < 0)
        throw InvalidArgument("poly::mod: division by zero polynomial");
    const std::uint32_t lead_inv = inv_mod_p(f.back(), p);
    while (degree(a) >= df) {
        const int shift = degree(a) - df;
        const std::uint64_t factor = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
        for (int i = 0; i <= df; ++i) {
            auto& coeff = a[static_cast<std::size_t>(i + shift)];
            coeff = static_cast<std::uint32_t>((coeff + p - factor * f[static_cast<std::size_t>(i)] % p) % p);
        }
        trim(a);
    }
    return a;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p)
{
    return mod(mul(a, b, p), f, p);
}

Poly powmod(Poly base, std::uint64_t exp, const Poly& f, std::uint32_t p)
{
    Poly result = mod(Poly{1}, f, p);
    base = mod(std::move(base), f, p);
    while (exp != 0) {
        if (exp & 1)
            result = mulmod(result, base, f, p);
        base = mulmod(base, base, f, p);
        exp >>= 1;
    }
    return result;
}

Poly gcd(Poly a, Poly b, std::uint32_t p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const std::uint64_t lead_inv = inv_mod_p(a.back(), p);
        for (auto& c : a)
            c = static_cast<std::uint32_t>(c * lead_inv % p);
    }
    return a;
}

bool is_irreducible(const Poly& f, std::uint32_t p)
{
    const int n = degree(f);
    if (n < 1 || f.back() != 1)
        return false;
    if (n == 1)
        return true;
    const Poly x{0, 1};
    Poly h = mod(x, f, p);
    for (int k = 1; k <= n / 2; ++k) {
        h = powmod(h, p, f, p);
        if (degree(gcd(f, sub(h, x, p), p)) != 0)
            return false;
    }
    return true;
}

bool is_irreducible_bruteforce(const Poly& f, std::uint32_t p)
{
    const int n = degree(f);
    if (n < 1 || f.back() != 1)
        return false;
    for (int k = 1; k <= n / 2; ++k) {
        // Every monic polynomial of degree k.
        Poly g(static_cast<std::size_t>(k) + 1, 0);
        g.back() = 1;
        while (true) {
            if (mod(f, g, p).empty())
                return false;
            int i = 0;
            while (i < k && ++g[static_cast<std::size_t>(i)] == p)
                g[static_cast<std::size_t>(i++)] = 0;
            if (i == k)
                break;
        }
    }
    return true;
}

Poly smallest_irreducible(std::uint32_t p, unsigned n)
{
    if (n == 0)
        throw InvalidArgument("smallest_irreducible: degree must be at least 1");
    // Constant term is the most significant position of the ordering, so the
    // odometer below advances the coefficient of x^{n-1} fastest.
    Poly f(n + 1, 0);
    f[n] = 1;
    while (true) {
        if (is_irreducible(f, p))
            return f;
        int i = static_cast<int>(n) - 1;
        while (i >= 0 && ++f[static_cast<std::size_t>(i)] == p)
            f[static_cast<std::size_t>(i--)] = 0;
        if (i < 0)
            throw VerificationFailure("smallest_irreducible: exhausted candidates");
    }
}

std::vector<std::int64_t> parse_coefficients(std::string_view text)
{
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view token = text.substr(pos, end - pos);
        while (!token.empty() && token.front() == ' ')
            token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ')
            token.remove_suffix(1);
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
            throw InvalidArgument("modulus: cannot parse coefficient '" + std::string(token) + "'");
        out.push_back(value);
        pos = end + 1;
    }
    return out;
}

std::string format_coefficients(std::span<const std::uint32_t> coeffs)
{
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i != 0)
            out.push_back(',');
        out += std::to_string(coeffs[i]);
    }
    return out;
}

}  // namespace diffspec::poly
