#include <doctest.h>

#include "diffspec/closed_form.hpp"
#include "diffspec/errors.hpp"
#include "diffspec/field.hpp"
#include "diffspec/number_theory.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace diffspec;

namespace {

SparseCounts counts(std::initializer_list<std::pair<const std::uint64_t, std::uint64_t>> init)
{
    return SparseCounts(init);
}

DifferentialSpectrum family_brute(std::uint64_t p, unsigned m, unsigned n)
{
    return brute_spectrum(PowerMap(build_field(static_cast<std::uint32_t>(p), n), family_exponent(p, m)),
                          SweepOptions{.threads = 2});
}

}  // namespace

TEST_SUITE("closed_form") {

TEST_CASE("classify examples")
{
    CHECK(classify(2, 3, 6) == CaseTag::P2_N2M_ODD_M);
    CHECK(classify(2, 2, 4) == CaseTag::P2_N2M_EVEN_M);
    CHECK(classify(2, 3, 5) == CaseTag::P2_N2M1_APN);
    CHECK(classify(3, 2, 4) == CaseTag::P3_N2M);
    CHECK(classify(5, 1, 2) == CaseTag::PG3_N2M_Q2MOD3);
    CHECK(classify(5, 2, 4) == CaseTag::PG3_N2M_Q1MOD3);
    CHECK(classify(7, 1, 2) == CaseTag::PG3_N2M_Q1MOD3);
    CHECK(classify(3, 2, 3) == CaseTag::P3_N2M1_WELCH);
    CHECK(classify(5, 4, 7) == CaseTag::PODD_N2M1_PARTIAL);
    CHECK(std::string(to_string(CaseTag::PG3_N2M_Q2MOD3)) == "PG3_N2M_Q2MOD3");
}

TEST_CASE("classify rejects bad parameters")
{
    CHECK_THROWS_AS(classify(5, 2, 5), InvalidArgument);
    CHECK_THROWS_AS(classify(5, 2, 2), InvalidArgument);
    CHECK_THROWS_AS(classify(6, 1, 2), InvalidArgument);
    CHECK_THROWS_AS(classify(5, 0, 0), InvalidArgument);
    CHECK_THROWS_AS(family_exponent(5, 40), InvalidArgument);
}

TEST_CASE("exact prediction examples")
{
    CHECK(predict_spectrum(2, 3, 6).exact_omega == counts({{0, 48}, {4, 16}}));
    CHECK(predict_spectrum(2, 2, 4).exact_omega == counts({{0, 8}, {2, 8}}));
    CHECK(predict_spectrum(2, 3, 5).exact_omega == counts({{0, 16}, {2, 16}}));
    CHECK(predict_spectrum(3, 2, 4).exact_omega == counts({{0, 44}, {2, 36}, {9, 1}}));
    CHECK(predict_spectrum(13, 1, 2).exact_omega == counts({{0, 84}, {1, 1}, {2, 84}}));
    CHECK(predict_spectrum(5, 1, 2).exact_omega == counts({{0, 16}, {1, 1}, {2, 4}, {4, 4}}));
    CHECK(predict_spectrum(3, 2, 3).exact_omega == counts({{0, 17}, {2, 6}, {3, 1}, {4, 3}}));
    const auto pred = predict_spectrum(3, 2, 3);
    CHECK(pred.tag == CaseTag::P3_N2M1_WELCH);
    CHECK(pred.kind == PredictionKind::Exact);
    CHECK(pred.q == 27);
    CHECK_THROWS_AS(predict_spectrum(5, 4, 7), InvalidArgument);
}

TEST_CASE("exact predictions satisfy the counting identities")
{
    for (std::uint64_t p = 2; p <= 13; ++p) {
        if (!nt::is_prime(p))
            continue;
        for (unsigned m = 1; m <= 4; ++m) {
            for (unsigned n : {2 * m, 2 * m - 1}) {
                if (n == 0 || classify(p, m, n) == CaseTag::PODD_N2M1_PARTIAL)
                    continue;
                const auto pred = predict_spectrum(p, m, n);
                INFO("p=" << p << " m=" << m << " n=" << n);
                CHECK(pred.q == oracle::ipow(p, n));
                CHECK(check_identities(DifferentialSpectrum::from_counts(pred.q, 0, pred.exact_omega)));
            }
        }
    }
}

TEST_CASE("exact predictions match the naive oracle on small fields")
{
    struct Shape {
        std::uint64_t p;
        unsigned m, n;
    };
    for (const auto& [p, m, n] : std::vector<Shape>{{2, 1, 2}, {2, 2, 4}, {2, 3, 6}, {2, 2, 3}, {2, 3, 5},
                                                     {3, 1, 2}, {3, 2, 4}, {3, 2, 3}, {5, 1, 2}, {7, 1, 2},
                                                     {11, 1, 2}, {13, 1, 2}, {3, 3, 5}}) {
        const auto f = build_field(static_cast<std::uint32_t>(p), n);
        const oracle::Field o(p, f.spec().modulus);
        INFO("p=" << p << " m=" << m << " n=" << n);
        CHECK(predict_spectrum(p, m, n).exact_omega == testing::nonzero(o.spectrum(oracle::ipow(p, m) + 2)));
    }
}

TEST_CASE("exact predictions match the brute spectrum")
{
    struct Shape {
        std::uint64_t p;
        unsigned m, n;
    };
    for (const auto& [p, m, n] : std::vector<Shape>{{2, 4, 8}, {2, 5, 10}, {2, 4, 7}, {3, 3, 6}, {3, 4, 7},
                                                     {5, 2, 4}, {5, 3, 6}, {7, 2, 4}, {11, 2, 4}, {17, 1, 2}}) {
        const auto pred = predict_spectrum(p, m, n);
        INFO("p=" << p << " m=" << m << " n=" << n);
        CHECK(compare_prediction(pred, family_brute(p, m, n)).empty());
    }
}

TEST_CASE("constraint predictions")
{
    const auto a = predict_constraints(5, 4, 7);
    CHECK(a.kind == PredictionKind::Constraints);
    CHECK(a.bound == 8);
    CHECK(a.forced_zero == std::vector<std::uint64_t>{3, 7});
    CHECK(a.omega_1 == 1);
    CHECK(a.omega_p == 0);

    const auto b = predict_constraints(3, 2, 3);
    CHECK(b.bound == 6);
    CHECK(b.forced_zero == std::vector<std::uint64_t>{5});
    CHECK(b.omega_1 == 0);
    CHECK(b.omega_p == 1);

    const auto c = predict_constraints(7, 2, 3);
    CHECK(c.bound == 10);
    CHECK(c.forced_zero == std::vector<std::uint64_t>{3, 5, 9});

    CHECK(predict(5, 4, 7) == a);
    CHECK(predict(5, 1, 2).kind == PredictionKind::Exact);
    CHECK_THROWS_AS(predict_constraints(5, 2, 4), InvalidArgument);
    CHECK_THROWS_AS(predict_constraints(2, 2, 3), InvalidArgument);
}

TEST_CASE("omega_p condition")
{
    CHECK(omega_p_condition(3, 3));
    CHECK_FALSE(omega_p_condition(5, 7));
    CHECK(omega_p_condition(3, 5));
    CHECK_THROWS_AS(omega_p_condition(2, 3), InvalidArgument);
    // The norm shortcut against a direct (p-1)-th power test in the field
    for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
        for (unsigned n = 1; oracle::ipow(p, n) <= 20000; ++n) {
            const auto f = build_field(p, n);
            const FieldElement quarter = f.inv(f.from_int(4));
            const bool power = f.pow_unsigned(quarter, (f.q() - 1) / (p - 1)) == f.one();
            const bool second = (1 + nt::powmod(2, n, p)) % p == 0;
            INFO("p=" << p << " n=" << n);
            CHECK(omega_p_condition(p, n) == (power && second));
        }
    }
}

TEST_CASE("constraints hold on brute spectra")
{
    struct Shape {
        std::uint64_t p;
        unsigned m, n;
    };
    for (const auto& [p, m, n] : std::vector<Shape>{{3, 2, 3}, {3, 3, 5}, {5, 2, 3}, {5, 3, 5}, {7, 2, 3},
                                                     {11, 2, 3}, {13, 2, 3}, {3, 4, 7}}) {
        INFO("p=" << p << " m=" << m << " n=" << n);
        CHECK(compare_prediction(predict_constraints(p, m, n), family_brute(p, m, n)).empty());
    }
}

TEST_CASE("compare_prediction reports differences")
{
    const auto pred = predict_spectrum(5, 1, 2);
    const auto wrong = brute_spectrum(PowerMap(build_field(5, 2), 27));
    const auto diffs = compare_prediction(pred, wrong);
    CHECK_FALSE(diffs.empty());
    CHECK(diffs.front().rfind("omega_", 0) == 0);

    auto cons = predict_constraints(5, 2, 3);
    auto fake = DifferentialSpectrum::from_counts(125, 27, counts({{0, 60}, {1, 1}, {2, 60}, {3, 0}, {4, 1}}));
    fake.omega[9] = 1;
    fake.uniformity = 9;
    CHECK_FALSE(compare_prediction(cons, fake).empty());
}

TEST_CASE("closed ambiguity and deficiency")
{
    auto r = closed_ambiguity_deficiency(7, 1, CaseTag::PG3_N2M_Q1MOD3);
    CHECK(r.ambiguity == 1152);
    CHECK(r.deficiency == 1152);
    r = closed_ambiguity_deficiency(5, 1, CaseTag::PG3_N2M_Q2MOD3);
    CHECK(r.ambiguity == 672);
    CHECK(r.deficiency == 384);
    r = closed_ambiguity_deficiency(11, 1, CaseTag::PG3_N2M_Q2MOD3);
    CHECK(r.ambiguity == 19200);
    CHECK(r.deficiency == 10200);
    CHECK_THROWS_AS(closed_ambiguity_deficiency(3, 2, CaseTag::P3_N2M), InvalidArgument);
    CHECK_THROWS_AS(closed_ambiguity_deficiency(7, 1, CaseTag::PG3_N2M_Q2MOD3), InvalidArgument);

    for (const auto& [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{
             {5, 1}, {7, 1}, {11, 1}, {13, 1}, {17, 1}, {5, 2}, {7, 2}, {5, 3}}) {
        INFO("p=" << p << " m=" << m);
        CHECK(closed_ambiguity_deficiency(p, m, classify(p, m, 2 * m)) ==
              ambiguity_deficiency(family_brute(p, m, 2 * m)));
    }
}

TEST_CASE("linearized kernel size")
{
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (unsigned n = 1; n <= 6 && oracle::ipow(p, n) <= 20000; ++n) {
            const auto f = build_field(p, n);
            const oracle::Field o(p, f.spec().modulus);
            for (unsigned t = 1; t <= n; ++t) {
                std::uint64_t roots = 0;
                for (std::uint64_t x = 0; x < f.q(); ++x)
                    if (o.add(o.pow_fast(x, oracle::ipow(p, t)), x) == 0)
                        ++roots;
                INFO("p=" << p << " n=" << n << " t=" << t);
                CHECK(linearized_kernel_size(p, n, t) == roots);
            }
        }
    }
}

TEST_CASE("Gold family spectra")
{
    CHECK(gold_family_spectrum(2, 1, 4).exact_omega == counts({{0, 8}, {2, 8}}));
    CHECK(gold_family_spectrum(3, 1, 3).exact_omega == counts({{1, 27}}));
    CHECK(gold_family_spectrum(3, 2, 4).exact_omega == counts({{0, 72}, {9, 9}}));
    CHECK_FALSE(gold_family_spectrum(3, 2, 4).tag.has_value());
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        for (unsigned n = 1; oracle::ipow(p, n) <= 3000; ++n) {
            const auto f = build_field(p, n);
            const oracle::Field o(p, f.spec().modulus);
            for (unsigned t = 1; t <= n + 1; ++t) {
                INFO("p=" << p << " n=" << n << " t=" << t);
                CHECK(gold_family_spectrum(p, t, n).exact_omega ==
                      testing::nonzero(o.spectrum(oracle::ipow(p, t) + 1)));
            }
        }
    }
}

}
