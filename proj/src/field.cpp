#include "diffspec/field.hpp"

#include <array>
#include <sstream>

#include "diffspec/errors.hpp"
#include "diffspec/number_theory.hpp"
#include "diffspec/poly.hpp"

namespace diffspec {

namespace {

constexpr unsigned kMaxDegree = 63;
constexpr std::uint64_t kMaxFieldSize = std::uint64_t{1} << 62;

using Digits = std::array<std::uint32_t, kMaxDegree>;

}  // namespace

struct FieldCtx::Impl {
    FieldSpec spec;
    std::uint64_t q = 0;
    std::uint64_t order = 0;  // q - 1
    std::vector<std::uint64_t> pow_p;
    FieldElement alpha;
    std::vector<std::pair<std::uint64_t, unsigned>> factors;

    bool tables = false;
    std::vector<std::uint32_t> log;
    std::vector<std::uint32_t> antilog;
    std::vector<std::uint32_t> zech;
    std::uint64_t half_log = 0;  // log(-1)

    void unpack(std::uint64_t index, Digits& out) const
    {
        const std::uint32_t p = spec.p;
        for (unsigned i = 0; i < spec.n; ++i) {
            out[i] = static_cast<std::uint32_t>(index % p);
            index /= p;
        }
    }

    std::uint64_t pack(const Digits& d) const
    {
        std::uint64_t index = 0;
        for (unsigned i = spec.n; i-- > 0;)
            index = index * spec.p + d[i];
        return index;
    }

    std::uint64_t poly_mul(std::uint64_t a, std::uint64_t b) const
    {
        if (a == 0 || b == 0)
            return 0;
        const unsigned n = spec.n;
        const std::uint64_t p = spec.p;
        Digits da{}, db{};
        unpack(a, da);
        unpack(b, db);
        std::array<std::uint64_t, 2 * kMaxDegree> prod{};
        for (unsigned i = 0; i < n; ++i) {
            if (da[i] == 0)
                continue;
            for (unsigned j = 0; j < n; ++j)
                prod[i + j] = (prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p;
        }
        // x^n = -(m_0 + m_1 x + ... + m_{n-1} x^{n-1}).
        for (unsigned k = 2 * n - 2; k >= n && k != ~0u; --k) {
            const std::uint64_t c = prod[k];
            if (c == 0)
                continue;
            prod[k] = 0;
            for (unsigned i = 0; i < n; ++i)
                prod[k - n + i] = (prod[k - n + i] + (p - c) * spec.modulus[i]) % p;
        }
        Digits out{};
        for (unsigned i = 0; i < n; ++i)
            out[i] = static_cast<std::uint32_t>(prod[i]);
        return pack(out);
    }

    std::uint64_t poly_pow(std::uint64_t x, std::uint64_t e) const
    {
        std::uint64_t result = 1;
        while (e != 0) {
            if (e & 1)
                result = poly_mul(result, x);
            x = poly_mul(x, x);
            e >>= 1;
        }
        return result;
    }

    std::uint64_t poly_add(std::uint64_t a, std::uint64_t b) const
    {
        Digits da{}, db{};
        unpack(a, da);
        unpack(b, db);
        for (unsigned i = 0; i < spec.n; ++i) {
            const std::uint32_t s = da[i] + db[i];
            da[i] = s >= spec.p ? s - spec.p : s;
        }
        return pack(da);
    }

    std::uint64_t poly_neg(std::uint64_t a) const
    {
        Digits da{};
        unpack(a, da);
        for (unsigned i = 0; i < spec.n; ++i)
            da[i] = da[i] == 0 ? 0 : spec.p - da[i];
        return pack(da);
    }

    bool is_primitive(std::uint64_t x) const
    {
        if (x == 0)
            return false;
        for (const auto& [prime, exp] : factors) {
            if (poly_pow(x, order / prime) == 1)
                return false;
        }
        return true;
    }

    std::uint64_t rank_to_index(std::uint64_t rank) const
    {
        // Rank digits are most significant at the constant term.
        Digits d{};
        for (unsigned i = spec.n; i-- > 0;) {
            d[i] = static_cast<std::uint32_t>(rank % spec.p);
            rank /= spec.p;
        }
        return pack(d);
    }

    void build_tables()
    {
        const unsigned n = spec.n;
        const std::uint64_t p = spec.p;
        log.assign(q, kNoLog);
        antilog.resize(order);

        // Rows of the multiply-by-alpha matrix: alpha * x^i.
        std::vector<Digits> rows(n);
        std::uint64_t basis = 1;
        for (unsigned i = 0; i < n; ++i) {
            unpack(poly_mul(alpha.index(), basis), rows[i]);
            basis = poly_mul(basis, n == 1 ? 0 : p);  // index p is the element x
        }

        Digits cur{};
        cur[0] = 1;
        std::array<std::uint64_t, kMaxDegree> acc{};
        for (std::uint64_t k = 0; k < order; ++k) {
            const std::uint64_t idx = pack(cur);
            antilog[k] = static_cast<std::uint32_t>(idx);
            if (log[idx] != kNoLog)
                throw VerificationFailure("field tables: alpha is not primitive");
            log[idx] = static_cast<std::uint32_t>(k);
            acc.fill(0);
            for (unsigned i = 0; i < n; ++i) {
                const std::uint64_t c = cur[i];
                if (c == 0)
                    continue;
                for (unsigned j = 0; j < n; ++j)
                    acc[j] += c * rows[i][j];
            }
            for (unsigned j = 0; j < n; ++j)
                cur[j] = static_cast<std::uint32_t>(acc[j] % p);
        }

        zech.resize(order);
        for (std::uint64_t k = 0; k < order; ++k) {
            const std::uint64_t e = antilog[k];
            const std::uint64_t plus_one = (e % p == p - 1) ? e - (p - 1) : e + 1;
            zech[k] = log[plus_one];
        }
        tables = true;
    }
};

std::uint64_t FieldSpec::q() const
{
    auto value = nt::checked_pow(p, n);
    if (!value)
        throw InvalidArgument("field size overflows 64 bits");
    return *value;
}

FieldCtx build_field(std::uint32_t p, unsigned n, std::optional<std::vector<std::int64_t>> modulus,
                     FieldOptions options)
{
    if (!nt::is_prime(p))
        throw InvalidArgument("p = " + std::to_string(p) + " is not prime");
    if (p >= (1u << 16))
        throw InvalidArgument("p must be below 2^16");
    if (n == 0)
        throw InvalidArgument("extension degree n must be at least 1");
    if (n > kMaxDegree)
        throw InvalidArgument("extension degree too large");
    auto q = nt::checked_pow(p, n);
    if (!q || *q > kMaxFieldSize)
        throw InvalidArgument("field size p^n exceeds 2^62");

    auto impl = std::make_shared<FieldCtx::Impl>();
    impl->spec.p = p;
    impl->spec.n = n;
    impl->q = *q;
    impl->order = *q - 1;

    poly::Poly f;
    if (modulus) {
        if (modulus->size() != n + 1)
            throw InvalidArgument("modulus must have exactly n+1 coefficients (constant term first)");
        for (auto c : *modulus) {
            if (c < 0 || c >= static_cast<std::int64_t>(p))
                throw InvalidArgument("modulus coefficient " + std::to_string(c) + " is outside [0, p)");
            f.push_back(static_cast<std::uint32_t>(c));
        }
        if (f.back() != 1)
            throw InvalidArgument("modulus must be monic");
        if (!poly::is_irreducible(f, p))
            throw InvalidArgument("modulus " + poly::format_coefficients(f) + " is reducible over F_" +
                                  std::to_string(p));
    } else {
        f = poly::smallest_irreducible(p, n);
    }
    impl->spec.modulus = f;

    impl->pow_p.resize(n + 1);
    impl->pow_p[0] = 1;
    for (unsigned i = 1; i <= n; ++i)
        impl->pow_p[i] = impl->pow_p[i - 1] * p;

    impl->factors = impl->order > 1 ? nt::factorize(impl->order) : decltype(impl->factors){};
    for (std::uint64_t rank = 1; rank < impl->q; ++rank) {
        const std::uint64_t candidate = impl->rank_to_index(rank);
        if (impl->is_primitive(candidate)) {
            impl->alpha = FieldElement{candidate};
            break;
        }
    }
    impl->half_log = (p == 2) ? 0 : impl->order / 2;

    if (impl->q <= options.table_cap && impl->q <= (std::uint64_t{1} << 31))
        impl->build_tables();

    return FieldCtx{std::shared_ptr<const FieldCtx::Impl>(std::move(impl))};
}

const FieldSpec& FieldCtx::spec() const { return impl_->spec; }
std::uint32_t FieldCtx::p() const { return impl_->spec.p; }
unsigned FieldCtx::n() const { return impl_->spec.n; }
std::uint64_t FieldCtx::q() const { return impl_->q; }
FieldElement FieldCtx::alpha() const { return impl_->alpha; }
bool FieldCtx::has_tables() const { return impl_->tables; }

FieldElement FieldCtx::from_int(std::int64_t v) const
{
    const auto p = static_cast<std::int64_t>(impl_->spec.p);
    return FieldElement{static_cast<std::uint64_t>(((v % p) + p) % p)};
}

FieldElement FieldCtx::from_coeffs(std::span<const std::int64_t> coeffs) const
{
    if (coeffs.size() > n())
        throw InvalidArgument("element has more than n coefficients");
    const auto p = static_cast<std::int64_t>(impl_->spec.p);
    Digits d{};
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        d[i] = static_cast<std::uint32_t>(((coeffs[i] % p) + p) % p);
    return FieldElement{impl_->pack(d)};
}

FieldElement FieldCtx::element(std::uint64_t index) const
{
    if (index >= impl_->q)
        throw InvalidArgument("element index " + std::to_string(index) + " outside field of size " +
                              std::to_string(impl_->q));
    return FieldElement{index};
}

std::vector<std::uint32_t> FieldCtx::coeffs(FieldElement x) const
{
    Digits d{};
    impl_->unpack(x.index(), d);
    return {d.begin(), d.begin() + n()};
}

std::string FieldCtx::to_string(FieldElement x) const
{
    auto c = coeffs(x);
    return "[" + poly::format_coefficients(c) + "]";
}

FieldElement FieldCtx::add(FieldElement a, FieldElement b) const
{
    if (!impl_->tables)
        return poly_add(a, b);
    if (a.is_zero())
        return b;
    if (b.is_zero())
        return a;
    const std::uint64_t N = impl_->order;
    const std::uint64_t la = impl_->log[a.index()];
    const std::uint64_t lb = impl_->log[b.index()];
    const std::uint64_t k = lb >= la ? lb - la : lb + N - la;
    const std::uint32_t z = impl_->zech[k];
    if (z == kNoLog)
        return zero();
    std::uint64_t e = la + z;
    if (e >= N)
        e -= N;
    return FieldElement{impl_->antilog[e]};
}

FieldElement FieldCtx::neg(FieldElement a) const
{
    if (!impl_->tables || a.is_zero())
        return poly_neg(a);
    std::uint64_t e = impl_->log[a.index()] + impl_->half_log;
    if (e >= impl_->order)
        e -= impl_->order;
    return FieldElement{impl_->antilog[e]};
}

FieldElement FieldCtx::sub(FieldElement a, FieldElement b) const
{
    return add(a, neg(b));
}

FieldElement FieldCtx::mul(FieldElement a, FieldElement b) const
{
    if (!impl_->tables)
        return poly_mul(a, b);
    if (a.is_zero() || b.is_zero())
        return zero();
    std::uint64_t e = static_cast<std::uint64_t>(impl_->log[a.index()]) + impl_->log[b.index()];
    if (e >= impl_->order)
        e -= impl_->order;
    return FieldElement{impl_->antilog[e]};
}

FieldElement FieldCtx::inv(FieldElement a) const
{
    if (a.is_zero())
        throw InvalidArgument("inverse of zero");
    if (!impl_->tables)
        return poly_inv(a);
    const std::uint64_t l = impl_->log[a.index()];
    return FieldElement{impl_->antilog[l == 0 ? 0 : impl_->order - l]};
}

FieldElement FieldCtx::div(FieldElement a, FieldElement b) const
{
    return mul(a, inv(b));
}

FieldElement FieldCtx::pow_unsigned(FieldElement x, std::uint64_t e) const
{
    if (x.is_zero())
        return e == 0 ? one() : zero();
    if (e == 0)
        return one();
    const std::uint64_t N = impl_->order;
    // x^e with e > 0 and x != 0 depends only on e mod N; e = N maps to x^N = 1.
    const std::uint64_t r = e % N;
    if (!impl_->tables)
        return FieldElement{impl_->poly_pow(x.index(), r)};
    return FieldElement{impl_->antilog[nt::mulmod(impl_->log[x.index()], r, N)]};
}

FieldElement FieldCtx::pow(FieldElement x, std::int64_t e) const
{
    if (e >= 0)
        return pow_unsigned(x, static_cast<std::uint64_t>(e));
    if (x.is_zero())
        throw InvalidArgument("negative power of zero");
    const auto N = impl_->order;
    const std::uint64_t mag = static_cast<std::uint64_t>(-(e + 1)) + 1;
    const std::uint64_t r = (N - mag % N) % N;
    return pow_unsigned(x, r == 0 ? N : r);
}

FieldElement FieldCtx::add_one(FieldElement x) const
{
    const std::uint64_t p = impl_->spec.p;
    const std::uint64_t i = x.index();
    return FieldElement{(i % p == p - 1) ? i - (p - 1) : i + 1};
}

FieldElement FieldCtx::frobenius(FieldElement x, std::uint64_t k) const
{
    if (x.is_zero())
        return x;
    const std::uint64_t N = impl_->order;
    const std::uint64_t e = nt::powmod(impl_->spec.p, k, N);
    return pow_unsigned(x, e == 0 ? N : e);
}

bool FieldCtx::is_square(FieldElement x) const
{
    if (p() == 2)
        throw InvalidArgument("is_square: every element of a binary field is a square");
    if (x.is_zero())
        return true;
    if (impl_->tables)
        return impl_->log[x.index()] % 2 == 0;
    return impl_->poly_pow(x.index(), impl_->order / 2) == 1;
}

std::vector<FieldElement> FieldCtx::sqrt(FieldElement x) const
{
    if (p() == 2)
        throw InvalidArgument("sqrt: characteristic 2 is not supported");
    if (x.is_zero())
        return {x};
    if (!is_square(x))
        return {};
    FieldElement r;
    const std::uint64_t q = impl_->q;
    if (impl_->tables) {
        r = FieldElement{impl_->antilog[impl_->log[x.index()] / 2]};
    } else if (q % 4 == 3) {
        r = pow_unsigned(x, (q + 1) / 4);
    } else {
        // Tonelli-Shanks in the cyclic group of order q-1 = 2^s * odd.
        std::uint64_t odd = q - 1;
        unsigned s = 0;
        while (odd % 2 == 0) {
            odd /= 2;
            ++s;
        }
        unsigned m = s;
        FieldElement c = pow_unsigned(alpha(), odd);
        FieldElement t = pow_unsigned(x, odd);
        r = pow_unsigned(x, (odd + 1) / 2);
        while (t != one()) {
            unsigned i = 0;
            FieldElement t2 = t;
            while (t2 != one()) {
                t2 = mul(t2, t2);
                ++i;
            }
            FieldElement b = c;
            for (unsigned j = 0; j + i + 1 < m; ++j)
                b = mul(b, b);
            m = i;
            c = mul(b, b);
            t = mul(t, c);
            r = mul(r, b);
        }
    }
    if (mul(r, r) != x)
        throw VerificationFailure("sqrt: root does not square back");
    return {r, neg(r)};
}

std::uint64_t FieldCtx::element_order(FieldElement x) const
{
    if (x.is_zero())
        throw InvalidArgument("element_order: zero has no multiplicative order");
    std::uint64_t ord = impl_->order;
    for (const auto& [prime, exp] : impl_->factors) {
        for (unsigned i = 0; i < exp; ++i) {
            if (pow_unsigned(x, ord / prime) != one())
                break;
            ord /= prime;
        }
    }
    return ord;
}

std::uint32_t FieldCtx::log(FieldElement x) const
{
    if (!impl_->tables)
        throw InvalidArgument("log: field was built without tables");
    if (x.is_zero())
        throw InvalidArgument("log of zero");
    return impl_->log[x.index()];
}

FieldElement FieldCtx::exp(std::uint64_t k) const
{
    k %= impl_->order;
    if (impl_->tables)
        return FieldElement{impl_->antilog[k]};
    return FieldElement{impl_->poly_pow(impl_->alpha.index(), k)};
}

const std::vector<std::pair<std::uint64_t, unsigned>>& FieldCtx::order_factors() const
{
    return impl_->factors;
}

std::uint64_t FieldCtx::lex_rank(FieldElement x) const
{
    Digits d{};
    impl_->unpack(x.index(), d);
    std::uint64_t rank = 0;
    for (unsigned i = 0; i < n(); ++i)
        rank = rank * p() + d[i];
    return rank;
}

FieldElement FieldCtx::poly_add(FieldElement a, FieldElement b) const
{
    return FieldElement{impl_->poly_add(a.index(), b.index())};
}

FieldElement FieldCtx::poly_neg(FieldElement a) const
{
    return FieldElement{impl_->poly_neg(a.index())};
}

FieldElement FieldCtx::poly_mul(FieldElement a, FieldElement b) const
{
    return FieldElement{impl_->poly_mul(a.index(), b.index())};
}

FieldElement FieldCtx::poly_pow(FieldElement x, std::uint64_t e) const
{
    return FieldElement{impl_->poly_pow(x.index(), e)};
}

FieldElement FieldCtx::poly_inv(FieldElement a) const
{
    if (a.is_zero())
        throw InvalidArgument("inverse of zero");
    return FieldElement{impl_->poly_pow(a.index(), impl_->q - 2)};
}

std::span<const std::uint32_t> FieldCtx::log_table() const { return impl_->log; }
std::span<const std::uint32_t> FieldCtx::antilog_table() const { return impl_->antilog; }
std::span<const std::uint32_t> FieldCtx::zech_plus_table() const { return impl_->zech; }

}  // namespace diffspec
