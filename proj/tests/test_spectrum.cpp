#include <doctest.h>

#include "diffspec/errors.hpp"
#include "diffspec/field.hpp"
#include "diffspec/kernels.hpp"
#include "diffspec/spectrum.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace diffspec;

namespace {

SparseCounts counts(std::initializer_list<std::pair<const std::uint64_t, std::uint64_t>> init)
{
    return SparseCounts(init);
}

PowerMap power(std::uint32_t p, unsigned n, std::uint64_t d) { return PowerMap(build_field(p, n), d); }

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("delta_b examples")
{
    const auto m5 = power(5, 2, 27);
    const auto& f = m5.field();
    const FieldElement quarter = f.inv(f.from_int(4));
    CHECK(delta_b(m5, quarter) == 1);

    const auto m3 = power(3, 2, 5);
    CHECK(delta_b(m3, m3.field().one()) == 3);

    const auto m2 = power(2, 4, 6);
    for (std::uint64_t b = 0; b < 16; ++b) {
        const auto v = delta_b(m2, FieldElement{b});
        CHECK((v == 0 || v == 2));
    }
}

TEST_CASE("brute spectrum examples")
{
    CHECK(brute_spectrum(power(7, 2, 9)).omega == counts({{0, 24}, {1, 1}, {2, 24}}));
    CHECK(brute_spectrum(power(5, 2, 7)).omega == counts({{0, 16}, {1, 1}, {2, 4}, {4, 4}}));
    // 27 = 3 (mod 24): over F_25 the exponent 27 acts as x^3
    CHECK(brute_spectrum(power(5, 2, 27)).omega == counts({{0, 12}, {1, 1}, {2, 12}}));
}

TEST_CASE("brute spectrum of x^627 over F_{5^7}")
{
    const auto s = brute_spectrum(power(5, 7, 627), SweepOptions{.threads = 4});
    CHECK(s.sequence() == std::vector<std::uint64_t>{47630, 1, 22710, 0, 7392, 0, 0, 0, 392});
    CHECK(s.uniformity == 8);
    CHECK(check_identities(s));
}

TEST_CASE("brute spectrum agrees with the naive oracle")
{
    struct Shape {
        std::uint32_t p;
        unsigned n;
    };
    for (const auto& [p, n] : std::vector<Shape>{{2, 3}, {2, 4}, {2, 5}, {2, 6}, {3, 2}, {3, 3}, {3, 4},
                                                  {5, 2}, {5, 3}, {7, 2}, {11, 2}, {13, 1}, {17, 1}}) {
        const auto f = build_field(p, n);
        const oracle::Field o(p, f.spec().modulus);
        const std::uint64_t q = f.q();
        for (std::uint64_t d = 1; d < std::min<std::uint64_t>(q + 3, 40); ++d) {
            INFO("p=" << p << " n=" << n << " d=" << d);
            const PowerMap map(f, d);
            const auto expected = testing::nonzero(o.spectrum(d));
            REQUIRE(brute_spectrum(map).omega == expected);
            REQUIRE(reference_spectrum(map).omega == expected);
        }
    }
}

TEST_CASE("fields without tables take the packed-index path")
{
    for (std::uint64_t d : {7ull, 27ull, 11ull}) {
        const PowerMap with(build_field(5, 3), d);
        const PowerMap without(build_field(5, 3, std::nullopt, FieldOptions{0}), d);
        CHECK(brute_spectrum(with) == brute_spectrum(without));
        const auto a = DerivativeCounts::sweep(with), b = DerivativeCounts::sweep(without);
        for (std::uint64_t x = 0; x < 125; ++x)
            REQUIRE(a.at(FieldElement{x}) == b.at(FieldElement{x}));
    }
}

TEST_CASE("sweep counts agree with delta_b and with the two-argument form")
{
    const auto map = power(5, 2, 7);
    const auto& f = map.field();
    const auto sweep = DerivativeCounts::sweep(map);
    for (std::uint64_t b = 0; b < f.q(); ++b)
        REQUIRE(sweep.at(FieldElement{b}) == delta_b(map, FieldElement{b}));
    for (std::uint64_t a = 0; a < f.q(); ++a) {
        for (std::uint64_t b = 0; b < f.q(); ++b) {
            std::uint64_t direct = 0;
            for (std::uint64_t x = 0; x < f.q(); ++x)
                if (map.derivative(FieldElement{x}, FieldElement{a}) == FieldElement{b})
                    ++direct;
            REQUIRE(sweep.at(FieldElement{a}, FieldElement{b}) == direct);
        }
    }
    CHECK_THROWS_AS(sweep.at(FieldElement{25}), InvalidArgument);
}

TEST_CASE("full DDT check")
{
    CHECK(full_ddt_check(power(5, 2, 27)));
    CHECK(full_ddt_check(power(3, 2, 5)));
    CHECK(full_ddt_check(power(2, 4, 6)));
    CHECK_THROWS_AS(full_ddt_check(power(2, 13, 6)), CapExceeded);
}

TEST_CASE("cyclotomic coset equivalence")
{
    for (const auto& [p, n] : std::vector<std::pair<std::uint32_t, unsigned>>{{3, 3}, {5, 2}, {2, 6}, {7, 2}}) {
        const auto f = build_field(p, n);
        const std::uint64_t N = f.q() - 1;
        for (std::uint64_t d = 2; d < 30; ++d) {
            const auto a = brute_spectrum(PowerMap(f, d));
            const auto b = brute_spectrum(PowerMap(f, d * p % N == 0 ? N : d * p % N));
            REQUIRE(a.omega == b.omega);
        }
    }
}

TEST_CASE("odd counts only at b = 1/4 for the family exponent")
{
    struct Shape {
        std::uint32_t p;
        unsigned m, n;
    };
    for (const auto& [p, m, n] : std::vector<Shape>{{3, 1, 2}, {3, 2, 4}, {3, 2, 3}, {3, 3, 5}, {5, 1, 2},
                                                     {5, 2, 4}, {5, 2, 3}, {7, 1, 2}, {7, 2, 3}, {11, 1, 2}}) {
        const auto map = power(p, n, oracle::ipow(p, m) + 2);
        const auto& f = map.field();
        const FieldElement quarter = f.inv(f.from_int(4));
        const auto sweep = DerivativeCounts::sweep(map);
        for (std::uint64_t b = 0; b < f.q(); ++b)
            if (sweep.at(FieldElement{b}) % 2 == 1)
                REQUIRE(FieldElement{b} == quarter);
    }
}

TEST_CASE("spectrum does not depend on worker count or modulus")
{
    const auto f = build_field(3, 11);
    const PowerMap map(f, 245);
    const auto one = brute_spectrum(map, SweepOptions{.threads = 1});
    for (unsigned t : {2u, 3u, 4u, 7u}) {
        const auto sweep = DerivativeCounts::sweep(map, SweepOptions{.threads = t});
        CHECK(sweep.workers() == t);
        CHECK(sweep.spectrum() == one);
    }
    // x^2 + 1 and x^2 + x + 2 both define F_9
    for (std::uint64_t d : {5ull, 7ull}) {
        const PowerMap a(build_field(3, 2, std::vector<std::int64_t>{1, 0, 1}), d);
        const PowerMap b(build_field(3, 2, std::vector<std::int64_t>{2, 1, 1}), d);
        CHECK(brute_spectrum(a) == brute_spectrum(b));
    }
    const PowerMap c(build_field(5, 3, std::vector<std::int64_t>{2, 0, 1, 1}), 27);
    CHECK(brute_spectrum(c).omega == brute_spectrum(power(5, 3, 27)).omega);
}

TEST_CASE("worker count is bounded by the histogram budget and the work size")
{
    SweepOptions opts{.threads = 8};
    CHECK(DerivativeCounts::sweep(power(2, 4, 6), opts).workers() == 1);
    opts.histogram_budget_bytes = 2 * 4 * 19683;
    CHECK(DerivativeCounts::sweep(power(3, 9, 29), opts).workers() == 2);
}

TEST_CASE("sweep cap")
{
    SweepOptions opts{.sweep_cap = 100};
    CHECK_THROWS_AS(brute_spectrum(power(5, 3, 27), opts), CapExceeded);
    opts.override_cap = true;
    CHECK_NOTHROW(brute_spectrum(power(5, 3, 27), opts));
    CHECK_THROWS_AS(PowerMap(build_field(5, 2), 0), InvalidArgument);
}

TEST_CASE("identities and ambiguity")
{
    DifferentialSpectrum ex1 = DifferentialSpectrum::from_counts(
        78125, 627, counts({{0, 47630}, {1, 1}, {2, 22710}, {4, 7392}, {8, 392}}));
    CHECK(check_identities(ex1));
    auto broken = ex1;
    broken.omega[0] += 1;
    CHECK_FALSE(check_identities(broken));
    CHECK_THROWS_AS(ambiguity_deficiency(broken), InvalidArgument);

    const auto r7 = ambiguity_deficiency(brute_spectrum(power(7, 2, 9)));
    CHECK(r7.ambiguity == 1152);
    CHECK(r7.deficiency == 1152);
    const auto r5 = ambiguity_deficiency(brute_spectrum(power(5, 2, 7)));
    CHECK(r5.ambiguity == 672);
    CHECK(r5.deficiency == 384);
    const auto flat = ambiguity_deficiency(DifferentialSpectrum::from_counts(27, 29, counts({{1, 27}})));
    CHECK(flat.ambiguity == 0);
    CHECK(flat.deficiency == 0);

    const auto s = DifferentialSpectrum::from_counts(9, 5, counts({{0, 4}, {2, 0}, {3, 1}, {1, 0}}));
    CHECK(s.omega.size() == 2);
    CHECK(s.uniformity == 3);
    CHECK(s.at(2) == 0);
    CHECK(s.sequence() == std::vector<std::uint64_t>{4, 0, 0, 1});
}

TEST_CASE("sparse storage for large uniformity")
{
    const auto s = brute_spectrum(power(3, 8, 83));
    CHECK(s.at(81) == 1);
    CHECK(s.uniformity == 81);
    CHECK(s.omega.size() == 3);
}

}
