#include <doctest.h>

#include <random>
#include <set>

#include "diffspec/errors.hpp"
#include "diffspec/field.hpp"
#include "diffspec/poly.hpp"
#include "oracle.hpp"

using namespace diffspec;

namespace {

struct Shape {
    std::uint32_t p;
    unsigned n;
};

// Every field with q <= 10^4 is too many to build; this covers each
// characteristic below 14 at every degree that fits, plus two large primes.
std::vector<Shape> small_fields()
{
    std::vector<Shape> out;
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        std::uint64_t q = p;
        for (unsigned n = 1; q <= 10000; ++n, q *= p)
            out.push_back({p, n});
    }
    out.push_back({101, 2});
    out.push_back({9973, 1});
    return out;
}

FieldElement el(std::uint64_t i) { return FieldElement{i}; }

}  // namespace

TEST_SUITE("field") {

TEST_CASE("smallest irreducible matches an exhaustive search")
{
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        for (unsigned n = 1; oracle::ipow(p, n) <= 4096; ++n) {
            const auto expected = oracle::first_irreducible(p, n);
            const auto got = poly::smallest_irreducible(p, n);
            REQUIRE(got.size() == expected.size());
            for (std::size_t i = 0; i < got.size(); ++i)
                CHECK(got[i] == expected[i]);
        }
    }
}

TEST_CASE("Ben-Or test agrees with trial division")
{
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (unsigned n = 1; n <= (p == 5 ? 3u : 5u); ++n) {
            const std::uint64_t count = oracle::ipow(p, n);
            for (std::uint64_t idx = 0; idx < count; ++idx) {
                poly::Poly f(n + 1);
                oracle::Poly g(n + 1);
                std::uint64_t v = idx;
                for (unsigned i = 0; i < n; ++i) {
                    f[i] = static_cast<std::uint32_t>(v % p);
                    g[i] = v % p;
                    v /= p;
                }
                f[n] = 1;
                g[n] = 1;
                poly::trim(f);
                const bool expected = oracle::is_irreducible(g, p);
                REQUIRE(poly::is_irreducible(f, p) == expected);
                REQUIRE(poly::is_irreducible_bruteforce(f, p) == expected);
            }
        }
    }
}

TEST_CASE("build_field examples")
{
    const auto f16 = build_field(2, 4);
    CHECK(f16.q() == 16);
    CHECK(f16.spec().modulus == build_field(2, 4).spec().modulus);

    CHECK(build_field(5, 7).q() == 78125);

    const auto f9 = build_field(3, 2, std::vector<std::int64_t>{1, 0, 1});
    CHECK(f9.q() == 9);
    // x^2 = -1 in F_3[x]/(x^2+1)
    const FieldElement x = f9.element(3);
    CHECK(f9.mul(x, x) == f9.neg(f9.one()));
}

TEST_CASE("build_field rejects bad input")
{
    CHECK_THROWS_AS(build_field(4, 2), InvalidArgument);
    CHECK_THROWS_AS(build_field(1, 2), InvalidArgument);
    CHECK_THROWS_AS(build_field(3, 0), InvalidArgument);
    CHECK_THROWS_AS(build_field(3, 2, std::vector<std::int64_t>{2, 0, 1}), InvalidArgument);  // x^2 - 1
    CHECK_THROWS_AS(build_field(3, 2, std::vector<std::int64_t>{1, 0, 2}), InvalidArgument);  // not monic
    CHECK_THROWS_AS(build_field(3, 2, std::vector<std::int64_t>{1, 1}), InvalidArgument);     // wrong degree
    CHECK_THROWS_AS(build_field(3, 2, std::vector<std::int64_t>{1, 3, 1}), InvalidArgument);  // out of range
    CHECK_THROWS_AS(build_field(65537, 1), InvalidArgument);
}

TEST_CASE("modulus text parsing")
{
    CHECK(poly::parse_coefficients("2,3,0,0,0,0,0,1") == std::vector<std::int64_t>{2, 3, 0, 0, 0, 0, 0, 1});
    CHECK(poly::parse_coefficients(" 1, 0 ,1 ") == std::vector<std::int64_t>{1, 0, 1});
    CHECK_THROWS_AS(poly::parse_coefficients(""), InvalidArgument);
    CHECK_THROWS_AS(poly::parse_coefficients("1,,2"), InvalidArgument);
    CHECK_THROWS_AS(poly::parse_coefficients("1,x"), InvalidArgument);
    const std::vector<std::uint32_t> m{2, 3, 1};
    CHECK(poly::format_coefficients(m) == "2,3,1");
}

TEST_CASE("alpha is the first primitive element in constant-term-first order")
{
    for (const auto& [p, n] : small_fields()) {
        if (oracle::ipow(p, n) > 2500)
            continue;
        const auto f = build_field(p, n);
        const oracle::Field o(p, f.spec().modulus);
        // rank order: compare coefficient tuples with c_0 most significant
        std::vector<std::uint64_t> by_rank(f.q());
        for (std::uint64_t i = 0; i < f.q(); ++i)
            by_rank[f.lex_rank(el(i))] = i;
        std::uint64_t expected = 0;
        for (std::uint64_t idx : by_rank) {
            if (idx != 0 && o.order(idx) == f.q() - 1) {
                expected = idx;
                break;
            }
        }
        INFO("p=" << p << " n=" << n);
        CHECK(f.alpha().index() == expected);
    }
}

TEST_CASE("lex_rank orders coefficient tuples with the constant term first")
{
    const auto f = build_field(3, 2);
    // [c0, c1]: [0,1] (index 3) comes before [1,0] (index 1)
    CHECK(f.lex_rank(el(3)) < f.lex_rank(el(1)));
    CHECK(f.lex_rank(el(0)) == 0);
}

TEST_CASE("field invariants, exhaustive per element")
{
    for (const auto& [p, n] : small_fields()) {
        const auto f = build_field(p, n);
        INFO("p=" << p << " n=" << n);
        const std::uint64_t q = f.q();
        REQUIRE(f.has_tables());
        CHECK(f.element_order(f.alpha()) == q - 1);
        CHECK(f.log(f.alpha()) == (q == 2 ? 0u : 1u));
        std::uint64_t squares = 0;
        for (std::uint64_t i = 0; i < q; ++i) {
            const FieldElement x = el(i);
            REQUIRE(f.pow_unsigned(x, q) == x);
            REQUIRE(f.frobenius(x, n) == x);
            if (!x.is_zero()) {
                REQUIRE(f.pow(x, static_cast<std::int64_t>(q - 1)) == f.one());
                REQUIRE(f.mul(x, f.inv(x)) == f.one());
                REQUIRE(f.exp(f.log(x)) == x);
            }
            if (p != 2) {
                const auto roots = f.sqrt(x);
                if (f.is_square(x)) {
                    if (!x.is_zero()) {
                        ++squares;
                        REQUIRE(roots.size() == 2);
                        REQUIRE(f.add(roots[0], roots[1]).is_zero());
                    }
                    for (FieldElement r : roots)
                        REQUIRE(f.mul(r, r) == x);
                } else {
                    REQUIRE(roots.empty());
                }
            }
        }
        if (p != 2)
            CHECK(squares == (q - 1) / 2);
    }
}

TEST_CASE("table and polynomial arithmetic agree")
{
    std::mt19937_64 rng(7);
    for (const auto& [p, n] : small_fields()) {
        const auto f = build_field(p, n);
        const std::uint64_t q = f.q();
        std::vector<FieldElement> probes = {f.zero(), f.one(), f.alpha(), f.neg(f.one())};
        for (int k = 0; k < 6; ++k)
            probes.push_back(el(rng() % q));
        for (std::uint64_t i = 0; i < q; ++i) {
            const FieldElement x = el(i);
            for (FieldElement y : probes) {
                REQUIRE(f.mul(x, y) == f.poly_mul(x, y));
                REQUIRE(f.add(x, y) == f.poly_add(x, y));
            }
            REQUIRE(f.neg(x) == f.poly_neg(x));
            REQUIRE(f.add_one(x) == f.poly_add(x, f.one()));
            if (!x.is_zero())
                REQUIRE(f.inv(x) == f.poly_inv(x));
        }
    }
}

TEST_CASE("arithmetic agrees with the naive oracle")
{
    std::mt19937_64 rng(11);
    for (const auto& [p, n] : small_fields()) {
        const auto f = build_field(p, n);
        const oracle::Field o(p, f.spec().modulus);
        for (int k = 0; k < 400; ++k) {
            const std::uint64_t a = rng() % f.q(), b = rng() % f.q();
            REQUIRE(f.mul(el(a), el(b)).index() == o.mul(a, b));
            REQUIRE(f.add(el(a), el(b)).index() == o.add(a, b));
            REQUIRE(f.sub(el(a), el(b)).index() == o.sub(a, b));
            const std::uint64_t e = rng() % (3 * f.q());
            REQUIRE(f.pow_unsigned(el(a), e).index() == (a == 0 && e > 0 ? 0 : o.pow_fast(a, e)));
        }
    }
}

TEST_CASE("fields built without tables behave identically")
{
    for (const auto& [p, n] : std::vector<Shape>{{2, 6}, {3, 4}, {5, 3}, {7, 2}, {13, 2}}) {
        const auto t = build_field(p, n);
        const auto u = build_field(p, n, std::nullopt, FieldOptions{0});
        CHECK_FALSE(u.has_tables());
        CHECK(u.alpha() == t.alpha());
        CHECK_THROWS_AS(u.log(u.one()), InvalidArgument);
        for (std::uint64_t i = 0; i < t.q(); ++i) {
            const FieldElement x = el(i);
            REQUIRE(u.mul(x, t.alpha()) == t.mul(x, t.alpha()));
            REQUIRE(u.frobenius(x, 1) == t.frobenius(x, 1));
            if (p != 2) {
                REQUIRE(u.is_square(x) == t.is_square(x));
                auto a = u.sqrt(x), b = t.sqrt(x);
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                REQUIRE(a == b);
            }
        }
    }
}

TEST_CASE("pow conventions")
{
    const auto f = build_field(5, 2);
    CHECK(f.pow(f.zero(), 0) == f.one());
    CHECK(f.pow(f.zero(), 3) == f.zero());
    CHECK(f.pow(f.alpha(), 0) == f.one());
    CHECK(f.pow(f.alpha(), static_cast<std::int64_t>(f.q() - 1)) == f.one());
    CHECK(f.pow(f.alpha(), -1) == f.inv(f.alpha()));
    CHECK(f.pow(f.alpha(), -25) == f.inv(f.pow(f.alpha(), 25)));
    CHECK_THROWS_AS(f.pow(f.zero(), -1), InvalidArgument);
    CHECK_THROWS_AS(f.inv(f.zero()), InvalidArgument);
}

TEST_CASE("frobenius is an automorphism with the expected fixed field")
{
    std::mt19937_64 rng(3);
    for (const auto& [p, m] : std::vector<Shape>{{2, 3}, {3, 2}, {5, 2}, {7, 1}, {3, 3}}) {
        const auto f = build_field(p, 2 * m);
        std::uint64_t fixed = 0;
        for (std::uint64_t i = 0; i < f.q(); ++i) {
            const FieldElement x = el(i);
            REQUIRE(f.frobenius(f.frobenius(x, m), m) == x);
            if (f.frobenius(x, m) == x)
                ++fixed;
        }
        CHECK(fixed == oracle::ipow(p, m));
        for (int k = 0; k < 200; ++k) {
            const FieldElement x = el(rng() % f.q()), y = el(rng() % f.q());
            REQUIRE(f.frobenius(f.add(x, y), 1) == f.add(f.frobenius(x, 1), f.frobenius(y, 1)));
            REQUIRE(f.frobenius(f.mul(x, y), 1) == f.mul(f.frobenius(x, 1), f.frobenius(y, 1)));
        }
    }
}

TEST_CASE("quadratic character and square roots")
{
    const auto f5 = build_field(5, 1);
    CHECK_FALSE(f5.is_square(f5.from_int(-3)));
    const auto f7 = build_field(7, 1);
    CHECK(f7.is_square(f7.from_int(-3)));
    auto roots = f7.sqrt(f7.from_int(4));
    std::sort(roots.begin(), roots.end());
    CHECK(roots == std::vector<FieldElement>{el(2), el(5)});
    CHECK(f7.sqrt(f7.zero()) == std::vector<FieldElement>{f7.zero()});
    CHECK(f7.sqrt(f7.from_int(3)).empty());

    // With tables the first root is alpha^{t/2} for the even log t.
    const auto f = build_field(5, 2);
    for (std::uint64_t i = 1; i < f.q(); ++i) {
        if (!f.is_square(el(i)))
            continue;
        const auto r = f.sqrt(el(i));
        CHECK(r[0] == f.exp(f.log(el(i)) / 2));
    }

    const auto f2 = build_field(2, 3);
    CHECK_THROWS_AS(f2.is_square(f2.one()), InvalidArgument);
    CHECK_THROWS_AS(f2.sqrt(f2.one()), InvalidArgument);

    // no tables, q = 1 (mod 4) exercises Tonelli-Shanks, q = 3 (mod 4) the direct power
    for (const auto& [p, n] : std::vector<Shape>{{13, 2}, {7, 3}, {17, 1}, {3, 5}}) {
        const auto g = build_field(p, n, std::nullopt, FieldOptions{0});
        for (std::uint64_t i = 0; i < g.q(); ++i) {
            for (FieldElement r : g.sqrt(el(i)))
                REQUIRE(g.mul(r, r) == el(i));
        }
    }
}

TEST_CASE("element orders")
{
    const auto f = build_field(5, 2);
    const oracle::Field o(5, f.spec().modulus);
    CHECK(f.element_order(f.one()) == 1);
    CHECK(f.element_order(f.pow(f.alpha(), 2)) == 12);
    for (std::uint64_t i = 1; i < f.q(); ++i)
        REQUIRE(f.element_order(el(i)) == o.order(i));
    CHECK_THROWS_AS(f.element_order(f.zero()), InvalidArgument);
}

TEST_CASE("element construction and formatting")
{
    const auto f = build_field(5, 3);
    const std::vector<std::int64_t> c{4, -1, 7};
    const FieldElement x = f.from_coeffs(c);
    CHECK(f.coeffs(x) == std::vector<std::uint32_t>{4, 4, 2});
    CHECK(f.to_string(x) == "[4,4,2]");
    CHECK(x.index() == 4 + 4 * 5 + 2 * 25);
    CHECK(f.from_int(-1) == f.neg(f.one()));
    CHECK_THROWS_AS(f.element(125), InvalidArgument);
}

}
