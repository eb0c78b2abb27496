#include "diffspec/equation_lab.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "diffspec/closed_form.hpp"
#include "diffspec/errors.hpp"
#include "diffspec/kernels.hpp"
#include "diffspec/number_theory.hpp"

namespace diffspec::lab {

namespace {

using nt::u128;
using nt::u64;

void require_odd(const FieldCtx& field, const char* what)
{
    if (field.p() == 2)
        throw InvalidArgument(std::string(what) + ": needs odd characteristic");
}

void require_even_regime(const FieldCtx& field, const char* what)
{
    if (field.n() % 2 != 0)
        throw InvalidArgument(std::string(what) + ": needs n = 2m");
}

void require_p_above_3(const FieldCtx& field, const char* what)
{
    if (field.p() <= 3)
        throw InvalidArgument(std::string(what) + ": needs p > 3");
}

u64 subfield_size(const FieldCtx& field)
{
    return *nt::checked_pow(field.p(), half_degree(field));
}

FieldElement scaled(const FieldCtx& field, std::int64_t k, FieldElement x)
{
    return field.mul(field.from_int(k), x);
}

FieldElement divided(const FieldCtx& field, FieldElement x, std::int64_t k)
{
    return field.div(x, field.from_int(k));
}

FieldElement square(const FieldCtx& field, FieldElement x)
{
    return field.mul(x, x);
}

FieldElement plus_or_minus_one(const FieldCtx& field, FieldElement v, const char* what)
{
    if (v != field.one() && v != field.neg(field.one()))
        throw VerificationFailure(std::string(what) + " is not +-1: " + field.to_string(v));
    return v;
}

}  // namespace

QuadraticRoots quadratic_classify(const FieldCtx& field, FieldElement a, FieldElement b)
{
    require_odd(field, "quadratic_classify");
    const FieldElement disc = field.sub(square(field, a), scaled(field, 4, b));
    const FieldElement minus_a = field.neg(a);
    if (disc.is_zero())
        return DoubleRoot{divided(field, minus_a, 2)};
    const auto roots = field.sqrt(disc);
    if (roots.empty())
        return Irreducible{};
    FieldElement r1 = divided(field, field.add(minus_a, roots[0]), 2);
    FieldElement r2 = divided(field, field.sub(minus_a, roots[0]), 2);
    if (r2 < r1)
        std::swap(r1, r2);
    return TwoRoots{r1, r2};
}

std::uint64_t linearized_root_count_brute(const FieldCtx& field, unsigned t)
{
    const u64 q = field.q();
    if (!field.has_tables()) {
        u64 count = 0;
        for (u64 i = 0; i < q; ++i) {
            const FieldElement x{i};
            if (field.add(field.frobenius(x, t), x).is_zero())
                ++count;
        }
        return count;
    }
    // x^{p^t} = -x for x = alpha^l reads l p^t = l + log(-1) (mod q-1).
    const auto N = static_cast<std::uint32_t>(q - 1);
    const std::uint32_t half = field.p() == 2 ? 0 : N / 2;
    const auto logs = field.log_table();
    std::vector<std::uint32_t> powered(q);
    kernels::scale_logs(logs.data(), q, static_cast<std::uint32_t>(nt::powmod(field.p(), t, N)), N, powered.data());
    u64 count = 1;  // x = 0
    for (u64 i = 1; i < q; ++i) {
        if (powered[i] == (logs[i] + half) % N)
            ++count;
    }
    return count;
}

RootCountComparison linearized_root_count(std::uint32_t p, unsigned n, unsigned t, std::uint64_t cap)
{
    const auto q = nt::checked_pow(p, n);
    if (!q || *q > cap)
        throw CapExceeded("linearized root scan limited to fields of size <= " + std::to_string(cap));
    const FieldCtx field = build_field(p, n);
    return {linearized_kernel_size(p, n, t), linearized_root_count_brute(field, t)};
}

bool char_minus3(std::uint32_t p, unsigned m)
{
    if (p <= 3 || !nt::is_prime(p))
        throw InvalidArgument("char_minus3 needs a prime p > 3");
    if (m == 0)
        throw InvalidArgument("char_minus3 needs m >= 1");
    const FieldCtx field = build_field(p, m, std::nullopt, FieldOptions{std::uint64_t{1} << 16});
    const bool square = field.is_square(field.from_int(-3));
    const bool expected = nt::powmod(p % 3, m, 3) == 1;
    if (square != expected)
        throw VerificationFailure("-3 is " + std::string(square ? "" : "not ") + "a square in F_" +
                                  std::to_string(p) + "^" + std::to_string(m));
    return square;
}

CanonicalDerivative to_canonical(const FieldCtx& field, FieldElement b)
{
    require_odd(field, "to_canonical");
    CanonicalDerivative out;
    out.b = b;
    out.a = field.sub(b, field.one());
    out.c = field.sub(scaled(field, 4, b), field.one());
    out.half = field.inv(field.from_int(2));
    return out;
}

std::vector<FieldElement> conjugate_table(const FieldCtx& field, unsigned k)
{
    const u64 q = field.q();
    std::vector<FieldElement> out(q);
    if (!field.has_tables()) {
        for (u64 i = 0; i < q; ++i)
            out[i] = field.frobenius(FieldElement{i}, k);
        return out;
    }
    const auto N = static_cast<std::uint32_t>(q - 1);
    const auto logs = field.log_table();
    const auto antilog = field.antilog_table();
    std::vector<std::uint32_t> powered(q);
    kernels::scale_logs(logs.data(), q, static_cast<std::uint32_t>(nt::powmod(field.p(), k, N)), N, powered.data());
    for (u64 i = 0; i < q; ++i)
        out[i] = powered[i] == kernels::kNoLog ? FieldElement{0} : FieldElement{antilog[powered[i]]};
    return out;
}

unsigned half_degree(const FieldCtx& field)
{
    return (field.n() + 1) / 2;
}

FieldElement canonical_lhs(const FieldCtx& field, FieldElement y, FieldElement ybar)
{
    return field.add(scaled(field, 8, field.mul(y, ybar)), scaled(field, 4, square(field, y)));
}

std::uint64_t count_canonical_solutions(const FieldCtx& field, FieldElement c)
{
    require_odd(field, "count_canonical_solutions");
    const unsigned m = half_degree(field);
    u64 count = 0;
    for (u64 i = 0; i < field.q(); ++i) {
        const FieldElement y{i};
        if (canonical_lhs(field, y, field.frobenius(y, m)) == c)
            ++count;
    }
    return count;
}

std::vector<std::uint32_t> canonical_solution_counts(const FieldCtx& field)
{
    require_odd(field, "canonical_solution_counts");
    const auto bar = conjugate_table(field, half_degree(field));
    std::vector<std::uint32_t> counts(field.q(), 0);
    for (u64 i = 0; i < field.q(); ++i)
        ++counts[canonical_lhs(field, FieldElement{i}, bar[i]).index()];
    return counts;
}

std::uint64_t count_even_regime_solutions(const FieldCtx& field, FieldElement c)
{
    require_even_regime(field, "count_even_regime_solutions");
    return count_canonical_solutions(field, c);
}

std::uint64_t count_odd_regime_solutions(const FieldCtx& field, FieldElement c)
{
    if (field.n() % 2 == 0)
        throw InvalidArgument("count_odd_regime_solutions: needs n = 2m-1");
    return count_canonical_solutions(field, c);
}

FieldElement compute_D(const FieldCtx& field, FieldElement c)
{
    require_even_regime(field, "compute_D");
    if (c.is_zero())
        throw InvalidArgument("compute_D: c must be nonzero");
    const unsigned m = half_degree(field);
    const FieldElement cbar = field.frobenius(c, m);
    const FieldElement d = field.add(field.sub(square(field, cbar), field.mul(cbar, c)), square(field, c));
    if (field.frobenius(d, m) != d)
        throw VerificationFailure("D = " + field.to_string(d) + " is not in the subfield");
    return d;
}

FieldElement quartic_value(const FieldCtx& field, FieldElement c, FieldElement cbar, FieldElement y)
{
    const FieldElement y2 = square(field, y);
    const FieldElement mid = divided(field, field.sub(scaled(field, 2, cbar), c), 2);
    return field.sub(field.add(scaled(field, 3, square(field, y2)), field.mul(mid, y2)),
                     divided(field, square(field, c), 16));
}

std::vector<FieldElement> quartic_roots(const FieldCtx& field, FieldElement c)
{
    require_p_above_3(field, "quartic_roots");
    require_even_regime(field, "quartic_roots");
    if (c.is_zero())
        throw InvalidArgument("quartic_roots: c must be nonzero");
    const FieldElement cbar = field.frobenius(c, half_degree(field));
    // 3z^2 + (2cbar - c)/2 z - c^2/16 = 0, made monic.
    const FieldElement lin = divided(field, field.sub(scaled(field, 2, cbar), c), 6);
    const FieldElement con = field.neg(divided(field, square(field, c), 48));
    std::vector<FieldElement> zs;
    const auto roots = quadratic_classify(field, lin, con);
    if (const auto* two = std::get_if<TwoRoots>(&roots))
        zs = {two->r1, two->r2};
    else if (const auto* dbl = std::get_if<DoubleRoot>(&roots))
        zs = {dbl->r};
    std::vector<FieldElement> ys;
    for (FieldElement z : zs) {
        for (FieldElement y : field.sqrt(z))
            ys.push_back(y);
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return ys;
}

std::vector<FieldElement> quartic_roots_exhaustive(const FieldCtx& field, FieldElement c)
{
    const FieldElement cbar = field.frobenius(c, half_degree(field));
    std::vector<FieldElement> ys;
    for (u64 i = 0; i < field.q(); ++i) {
        if (quartic_value(field, c, cbar, FieldElement{i}).is_zero())
            ys.push_back(FieldElement{i});
    }
    return ys;
}

DZeroSet enumerate_D_zero_set(const FieldCtx& field)
{
    require_p_above_3(field, "enumerate_D_zero_set");
    require_even_regime(field, "enumerate_D_zero_set");
    DZeroSet out;
    out.Q = subfield_size(field);
    out.applicable = out.Q % 3 == 2;
    const u64 N = field.q() - 1;

    std::set<FieldElement> formula;
    if (out.applicable) {
        const u64 step = out.Q + 1;
        for (unsigned residue : {1u, 5u}) {
            for (u64 j = 0; j + 1 < out.Q; ++j) {
                const u64 t = (residue * (step / 6) + j * step) % N;
                const FieldElement c = field.exp(t);
                out.members.push_back({residue, j, c});
                formula.insert(c);
            }
        }
    }

    std::set<FieldElement> scanned;
    for (u64 i = 1; i < field.q(); ++i) {
        if (compute_D(field, FieldElement{i}).is_zero())
            scanned.insert(FieldElement{i});
    }
    out.matches_scan = formula == scanned && formula.size() == out.members.size();
    return out;
}

PairSystemResult pair_system_count(const FieldCtx& field, FieldElement c)
{
    require_p_above_3(field, "pair_system_count");
    require_even_regime(field, "pair_system_count");
    if (c.is_zero() || !compute_D(field, c).is_zero())
        throw InvalidArgument("pair_system_count: c = " + field.to_string(c) + " is not in the D = 0 set");
    const unsigned m = half_degree(field);
    const FieldElement cbar = field.frobenius(c, m);
    const FieldElement ysq = divided(field, field.sub(c, scaled(field, 2, cbar)), 12);
    const FieldElement prod = divided(field, field.add(cbar, c), 12);
    PairSystemResult out;
    const auto roots = field.sqrt(ysq);
    out.first_equation_solvable = !roots.empty();
    for (FieldElement y : roots) {
        if (field.mul(field.frobenius(y, m), y) == prod)
            ++out.count;
    }
    return out;
}

SignPair sign_pair(const FieldCtx& field, unsigned residue, std::uint64_t j)
{
    require_p_above_3(field, "sign_pair");
    require_even_regime(field, "sign_pair");
    if (!field.has_tables())
        throw InvalidArgument("sign_pair: needs log tables");
    const u64 Q = subfield_size(field);
    if (Q % 3 != 2)
        throw InvalidArgument("sign_pair: needs p^m = 2 (mod 3)");
    if ((residue != 1 && residue != 5) || j + 1 >= Q)
        throw InvalidArgument("sign_pair: residue must be 1 or 5 and j in [0, p^m - 2]");

    const u64 N = field.q() - 1;
    const u64 step = Q + 1;
    const FieldElement c = field.exp((residue * (step / 6) + j * step) % N);
    const FieldElement cbar = field.frobenius(c, half_degree(field));

    SignPair out;
    out.dlog3 = field.log(field.from_int(3));
    if (out.dlog3 % 2 != 0)
        throw VerificationFailure("log of 3 is odd, so 3 is not a square");
    const FieldElement sqrt3 = field.exp(out.dlog3 / 2);

    // -2cbar + c = eps * alpha^{(q-1)/4} * 3^{1/2} * c
    const FieldElement eps_base = field.mul(field.mul(field.exp(N / 4), sqrt3), c);
    const FieldElement eps = plus_or_minus_one(field, field.div(field.sub(c, scaled(field, 2, cbar)), eps_base), "eps");

    // cbar + c = tau * 3^{1/2} * (alpha^{i (Q+1)^2 / 6})^{1/2} * alpha^{j (Q+1)}
    const u64 k = static_cast<u64>(u128{residue} * step * (step / 6) % N);
    if (k % 2 != 0)
        throw VerificationFailure("exponent under the square root is odd");
    const FieldElement tau_base = field.mul(field.mul(sqrt3, field.exp(k / 2)), field.exp(static_cast<u64>(u128{j} * step % N)));
    const FieldElement tau = plus_or_minus_one(field, field.div(field.add(cbar, c), tau_base), "tau");

    out.eps = eps == field.one() ? 1 : -1;
    out.tau = tau == field.one() ? 1 : -1;
    return out;
}

FieldElement odd_regime_value(const FieldCtx& field, FieldElement c, FieldElement cbar, FieldElement y)
{
    const std::int64_t p = field.p();
    const FieldElement y2 = square(field, y);
    FieldElement v = scaled(field, 64, field.pow(y, p + 3));
    v = field.sub(v, scaled(field, 16, field.mul(c, field.pow(y, p + 1))));
    v = field.sub(v, scaled(field, 16, square(field, y2)));
    v = field.add(v, field.mul(field.add(scaled(field, 8, c), scaled(field, 16, cbar)), y2));
    return field.sub(v, square(field, c));
}

const char* to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::Pass:
        return "pass";
    case Verdict::Fail:
        return "fail";
    case Verdict::Inapplicable:
        return "inapplicable";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Suite

namespace {

const std::vector<std::string> kSuiteIds = {
    "counting_identities",
    "derivative_rewrite",
    "quadratic_roots",
    "linearized_roots",
    "minus_three_character",
    "quarter_single_solution",
    "shift_bijection",
    "discriminant_zero_set",
    "solution_count_exclusions",
    "quartic_solver",
    "pair_root_square",
    "pair_system_half",
    "sign_pair_constancy",
    "omega_two_count",
    "ternary_frobenius_form",
    "odd_extension_structure",
    "closed_form_spectrum",
};

// Everything the checks share, computed once per suite run.
struct Setup {
    std::uint32_t p;
    unsigned m;
    unsigned n;
    u64 q;
    u64 Q;  // p^m
    bool even;
    FieldCtx field;
    PowerMap map;
    DerivativeCounts counts;
    DifferentialSpectrum spectrum;
    std::vector<std::uint32_t> delta;       // delta(b) by packed b
    std::vector<FieldElement> bar;          // y^{p^m} by packed y
    std::vector<std::uint32_t> canonical;   // solutions of 8 y ybar + 4 y^2 = c, by packed c
    const SuiteOptions& options;

    std::string el(FieldElement x) const { return field.to_string(x); }
};

class Check {
public:
    Check(const Setup& s, std::string id) : s_(s)
    {
        report_.lemma = std::move(id);
        report_.p = s.p;
        report_.m = s.m;
        report_.n = s.n;
    }

    void fail(Witness w)
    {
        ++failures_;
        if (report_.counterexamples.size() < s_.options.max_counterexamples)
            report_.counterexamples.push_back(std::move(w));
    }

    /// Records a failure unless `ok`.
    void expect(bool ok, const std::function<Witness()>& witness)
    {
        if (!ok)
            fail(witness());
    }

    void stat(const std::string& key, u64 value) { report_.stats[key] = value; }
    void note(std::string text) { report_.note = std::move(text); }

    LemmaReport inapplicable(std::string why)
    {
        report_.verdict = Verdict::Inapplicable;
        report_.note = std::move(why);
        return std::move(report_);
    }

    LemmaReport finish()
    {
        report_.verdict = failures_ == 0 ? Verdict::Pass : Verdict::Fail;
        if (failures_ != 0)
            report_.stats["failures"] = failures_;
        return std::move(report_);
    }

private:
    const Setup& s_;
    LemmaReport report_;
    u64 failures_ = 0;
};

Witness count_witness(const Setup& s, const char* name, FieldElement x, u64 expected, u64 actual)
{
    return {{name, s.el(x)}, {"expected", std::to_string(expected)}, {"actual", std::to_string(actual)}};
}

LemmaReport check_counting_identities(const Setup& s)
{
    Check check(s, "counting_identities");
    check.expect(check_identities(s.spectrum), [&] {
        return Witness{{"spectrum", "sum omega_i or sum i*omega_i differs from q"}};
    });
    u64 row = 0;
    for (u64 v : s.delta)
        row += v;
    check.expect(row == s.q, [&] { return Witness{{"row_sum", std::to_string(row)}}; });
    check.stat("q", s.q);
    check.stat("uniformity", s.spectrum.uniformity);
    return check.finish();
}

// (x+1)^{p^m+2} - x^{p^m+2} = 2 x xbar + xbar + x^2 + 2x + 1; in characteristic
// 2 this is the affine map xbar + x^2 + 1.
LemmaReport check_derivative_rewrite(const Setup& s)
{
    Check check(s, "derivative_rewrite");
    const auto& f = s.field;
    for (u64 i = 0; i < s.q; ++i) {
        const FieldElement x{i};
        const FieldElement xbar = s.bar[i];
        FieldElement v = f.add(scaled(f, 2, f.mul(x, xbar)), xbar);
        v = f.add(v, f.add(square(f, x), f.add(scaled(f, 2, x), f.one())));
        const FieldElement direct = s.map.derivative(x);
        check.expect(v == direct, [&] {
            return Witness{{"x", s.el(x)}, {"expanded", s.el(v)}, {"direct", s.el(direct)}};
        });
    }
    if (s.p == 2) {
        // kernel of xbar + x^2, i.e. of x^{2^{m-1}} + x
        u64 kernel = 0;
        for (u64 i = 0; i < s.q; ++i) {
            if (f.add(s.bar[i], square(f, FieldElement{i})).is_zero())
                ++kernel;
        }
        const u64 expected = s.m == 1 ? s.q : linearized_kernel_size(2, s.n, s.m - 1);
        check.expect(kernel == expected, [&] {
            return Witness{{"kernel", std::to_string(kernel)}, {"expected", std::to_string(expected)}};
        });
        for (u64 b = 0; b < s.q; ++b) {
            check.expect(s.delta[b] == 0 || s.delta[b] == kernel,
                         [&] { return count_witness(s, "b", FieldElement{b}, kernel, s.delta[b]); });
        }
        check.stat("kernel", kernel);
    }
    return check.finish();
}

LemmaReport check_quadratic_roots(const Setup& s, std::mt19937_64& rng)
{
    Check check(s, "quadratic_roots");
    if (s.p == 2)
        return check.inapplicable("characteristic 2");
    const auto& f = s.field;
    std::vector<std::pair<FieldElement, FieldElement>> cases;
    if (s.q * s.q <= 4096) {
        for (u64 a = 0; a < s.q; ++a)
            for (u64 b = 0; b < s.q; ++b)
                cases.emplace_back(FieldElement{a}, FieldElement{b});
    } else {
        cases = {{f.zero(), f.neg(f.one())}, {f.one(), f.one()}, {f.from_int(2), f.one()}};
        const u64 budget = std::max<u64>(8, (u64{1} << 24) / s.q);
        const u64 samples = std::min<u64>(s.options.quadratic_samples, budget);
        for (u64 k = 0; k < samples; ++k)
            cases.emplace_back(FieldElement{rng() % s.q}, FieldElement{rng() % s.q});
    }
    u64 counts[3] = {0, 0, 0};
    for (const auto& [a, b] : cases) {
        std::vector<FieldElement> brute;
        for (u64 i = 0; i < s.q; ++i) {
            const FieldElement x{i};
            if (f.add(f.mul(x, f.add(x, a)), b).is_zero())
                brute.push_back(x);
        }
        const auto roots = quadratic_classify(f, a, b);
        std::vector<FieldElement> claimed;
        if (const auto* two = std::get_if<TwoRoots>(&roots))
            claimed = {two->r1, two->r2};
        else if (const auto* dbl = std::get_if<DoubleRoot>(&roots))
            claimed = {dbl->r};
        ++counts[claimed.size()];
        check.expect(claimed == brute, [&] {
            return Witness{{"a", s.el(a)}, {"b", s.el(b)}, {"claimed_roots", std::to_string(claimed.size())},
                           {"scanned_roots", std::to_string(brute.size())}};
        });
    }
    check.stat("checked", cases.size());
    check.stat("irreducible", counts[0]);
    check.stat("double_root", counts[1]);
    check.stat("two_roots", counts[2]);
    return check.finish();
}

LemmaReport check_linearized_roots(const Setup& s)
{
    Check check(s, "linearized_roots");
    for (unsigned t = 1; t <= s.n; ++t) {
        const u64 formula = linearized_kernel_size(s.p, s.n, t);
        const u64 brute = linearized_root_count_brute(s.field, t);
        check.expect(formula == brute, [&] {
            return Witness{{"t", std::to_string(t)}, {"formula", std::to_string(formula)},
                           {"brute", std::to_string(brute)}};
        });
    }
    check.stat("checked", s.n);
    return check.finish();
}

LemmaReport check_minus_three(const Setup& s)
{
    Check check(s, "minus_three_character");
    if (s.p <= 3)
        return check.inapplicable("needs p > 3");
    for (unsigned k : std::set<unsigned>{1, s.m}) {
        try {
            const bool square = char_minus3(s.p, k);
            check.stat("square_m" + std::to_string(k), square ? 1 : 0);
        } catch (const VerificationFailure& e) {
            check.fail({{"m", std::to_string(k)}, {"error", e.what()}});
        }
    }
    const bool legendre_square = nt::legendre(-3, s.p) == 1;
    check.expect(legendre_square == (s.p % 3 == 1), [&] {
        return Witness{{"legendre", std::to_string(nt::legendre(-3, s.p))}};
    });
    return check.finish();
}

LemmaReport check_quarter(const Setup& s)
{
    Check check(s, "quarter_single_solution");
    if (s.p == 2)
        return check.inapplicable("characteristic 2");
    const FieldElement quarter = s.field.inv(s.field.from_int(4));
    for (u64 b = 0; b < s.q; ++b) {
        check.expect(s.delta[b] % 2 == 0 || FieldElement{b} == quarter, [&] {
            return Witness{{"b", s.el(FieldElement{b})}, {"delta", std::to_string(s.delta[b])}};
        });
    }
    const u64 at_quarter = s.delta[quarter.index()];
    check.stat("delta_quarter", at_quarter);
    if (s.even && s.p > 3)
        check.expect(at_quarter == 1, [&] { return count_witness(s, "b", quarter, 1, at_quarter); });
    else if (s.even)
        check.expect(at_quarter == s.Q, [&] { return count_witness(s, "b", quarter, s.Q, at_quarter); });
    else
        check.expect(at_quarter == 1 || at_quarter == s.p, [&] {
            return Witness{{"b", s.el(quarter)}, {"delta", std::to_string(at_quarter)}};
        });
    return check.finish();
}

LemmaReport check_shift_bijection(const Setup& s)
{
    Check check(s, "shift_bijection");
    if (s.p == 2)
        return check.inapplicable("characteristic 2");
    const auto& f = s.field;
    for (u64 b = 0; b < s.q; ++b) {
        const auto canon = to_canonical(f, FieldElement{b});
        const u64 shifted = s.canonical[canon.c.index()];
        check.expect(shifted == s.delta[b], [&] {
            return Witness{{"b", s.el(canon.b)}, {"c", s.el(canon.c)}, {"delta", std::to_string(s.delta[b])},
                           {"shifted_count", std::to_string(shifted)}};
        });
    }
    // Pointwise: with y = x + 1/2 and b = D(x), 8 y ybar + 4 y^2 = 4b - 1.
    const FieldElement half = f.inv(f.from_int(2));
    for (u64 i = 0; i < s.q; ++i) {
        const FieldElement x{i};
        const FieldElement y = f.add(x, half);
        const FieldElement c = to_canonical(f, s.map.derivative(x)).c;
        const FieldElement lhs = canonical_lhs(f, y, s.bar[y.index()]);
        check.expect(lhs == c, [&] { return Witness{{"x", s.el(x)}, {"lhs", s.el(lhs)}, {"c", s.el(c)}}; });
    }
    if (s.even && s.p > 3)
        check.expect(s.canonical[0] == 1, [&] { return count_witness(s, "c", f.zero(), 1, s.canonical[0]); });
    check.stat("c_zero_count", s.canonical[0]);
    return check.finish();
}

bool quartic_regime(const Setup& s)
{
    return s.p > 3 && s.even;
}

LemmaReport check_discriminant_zero_set(const Setup& s, const DZeroSet& dz)
{
    Check check(s, "discriminant_zero_set");
    if (!quartic_regime(s))
        return check.inapplicable("needs p > 3 and n = 2m");
    u64 zeros = 0;
    for (u64 i = 1; i < s.q; ++i) {
        try {
            if (compute_D(s.field, FieldElement{i}).is_zero())
                ++zeros;
        } catch (const VerificationFailure& e) {
            check.fail({{"c", s.el(FieldElement{i})}, {"error", e.what()}});
        }
    }
    const u64 expected = dz.applicable ? 2 * (s.Q - 1) : 0;
    check.expect(zeros == expected, [&] {
        return Witness{{"zero_count", std::to_string(zeros)}, {"expected", std::to_string(expected)}};
    });
    check.expect(dz.members.size() == expected, [&] {
        return Witness{{"formula_members", std::to_string(dz.members.size())}, {"expected", std::to_string(expected)}};
    });
    check.expect(dz.matches_scan, [&] { return Witness{{"formula_set", "differs from the D = 0 scan"}}; });
    check.stat("members", dz.members.size());
    check.stat("d_zero", zeros);
    return check.finish();
}

LemmaReport check_solution_count_exclusions(const Setup& s, const std::set<FieldElement>& dzero)
{
    Check check(s, "solution_count_exclusions");
    if (!quartic_regime(s))
        return check.inapplicable("needs p > 3 and n = 2m");
    const bool q1 = s.Q % 3 == 1;
    std::map<u64, u64> histogram;
    for (u64 i = 1; i < s.q; ++i) {
        const FieldElement c{i};
        const u64 count = s.canonical[i];
        ++histogram[count];
        const bool on_d = dzero.count(c) != 0;
        const bool ok = q1 ? (count == 0 || count == 2) : (count == 0 || count == (on_d ? 2u : 4u));
        check.expect(ok, [&] {
            return Witness{{"c", s.el(c)}, {"count", std::to_string(count)}, {"in_D_zero_set", on_d ? "yes" : "no"}};
        });
    }
    // Every solution with c != 0 is a root of the quartic.
    for (u64 i = 0; i < s.q; ++i) {
        const FieldElement y{i};
        const FieldElement c = canonical_lhs(s.field, y, s.bar[i]);
        if (c.is_zero())
            continue;
        const FieldElement v = quartic_value(s.field, c, s.bar[c.index()], y);
        check.expect(v.is_zero(), [&] { return Witness{{"y", s.el(y)}, {"c", s.el(c)}, {"quartic", s.el(v)}}; });
    }
    for (const auto& [count, how_many] : histogram)
        check.stat("count_" + std::to_string(count), how_many);
    return check.finish();
}

LemmaReport check_quartic_solver(const Setup& s, const DZeroSet& dz, std::mt19937_64& rng)
{
    Check check(s, "quartic_solver");
    if (!quartic_regime(s))
        return check.inapplicable("needs p > 3 and n = 2m");
    std::vector<FieldElement> cs;
    if (s.q <= s.options.exhaustive_quartic_cap) {
        for (u64 i = 1; i < s.q; ++i)
            cs.emplace_back(i);
    } else {
        for (std::size_t k = 0; k < dz.members.size() && k < 16; ++k)
            cs.push_back(dz.members[k].c);
        for (unsigned k = 0; k < s.options.quartic_samples; ++k)
            cs.emplace_back(1 + rng() % (s.q - 1));
    }
    for (FieldElement c : cs) {
        const auto solved = quartic_roots(s.field, c);
        const auto scanned = quartic_roots_exhaustive(s.field, c);
        check.expect(solved == scanned, [&] {
            return Witness{{"c", s.el(c)}, {"solver_roots", std::to_string(solved.size())},
                           {"scanned_roots", std::to_string(scanned.size())}};
        });
        for (FieldElement y : solved) {
            const FieldElement neg = s.field.neg(y);
            check.expect(std::binary_search(solved.begin(), solved.end(), neg),
                         [&] { return Witness{{"c", s.el(c)}, {"root_without_negative", s.el(y)}}; });
        }
    }
    check.stat("checked", cs.size());
    return check.finish();
}

bool pair_regime(const Setup& s)
{
    return quartic_regime(s) && s.Q % 3 == 2;
}

LemmaReport check_pair_root_square(const Setup& s, const DZeroSet& dz)
{
    Check check(s, "pair_root_square");
    if (!pair_regime(s))
        return check.inapplicable("needs p > 3, n = 2m and p^m = 2 (mod 3)");
    const auto& f = s.field;
    for (const auto& member : dz.members) {
        const FieldElement c = member.c;
        const FieldElement v = divided(f, f.sub(c, scaled(f, 2, s.bar[c.index()])), 12);
        check.expect(f.is_square(v), [&] { return Witness{{"c", s.el(c)}, {"value", s.el(v)}}; });
    }
    check.stat("members", dz.members.size());
    return check.finish();
}

LemmaReport check_pair_system_half(const Setup& s, const DZeroSet& dz)
{
    Check check(s, "pair_system_half");
    if (!pair_regime(s))
        return check.inapplicable("needs p > 3, n = 2m and p^m = 2 (mod 3)");
    u64 count_two = 0;
    for (const auto& member : dz.members) {
        const auto r = pair_system_count(s.field, member.c);
        if (r.count == 2)
            ++count_two;
        check.expect((r.count == 0 || r.count == 2) && r.first_equation_solvable, [&] {
            return Witness{{"c", s.el(member.c)}, {"count", std::to_string(r.count)},
                           {"first_equation_solvable", r.first_equation_solvable ? "yes" : "no"}};
        });
        check.expect(r.count == s.canonical[member.c.index()], [&] {
            return count_witness(s, "c", member.c, s.canonical[member.c.index()], r.count);
        });
    }
    check.expect(count_two == s.Q - 1, [&] {
        return Witness{{"count_two", std::to_string(count_two)}, {"expected", std::to_string(s.Q - 1)}};
    });
    check.stat("members", dz.members.size());
    check.stat("count_two", count_two);
    return check.finish();
}

LemmaReport check_sign_pairs(const Setup& s)
{
    Check check(s, "sign_pair_constancy");
    if (!pair_regime(s))
        return check.inapplicable("needs p > 3, n = 2m and p^m = 2 (mod 3)");
    if (!s.field.has_tables())
        return check.inapplicable("field built without log tables");
    const auto& f = s.field;
    std::string summary;
    for (unsigned residue : {1u, 5u}) {
        std::optional<SignPair> first;
        for (u64 j = 0; j + 1 < s.Q; ++j) {
            SignPair sp;
            try {
                sp = sign_pair(f, residue, j);
            } catch (const VerificationFailure& e) {
                check.fail({{"residue", std::to_string(residue)}, {"j", std::to_string(j)}, {"error", e.what()}});
                continue;
            }
            const u64 step = s.Q + 1;
            const FieldElement c = f.exp((residue * (step / 6) + j * step) % (s.q - 1));
            const FieldElement cbar = s.bar[c.index()];
            const FieldElement lhs1 = square(f, f.sub(c, scaled(f, 2, cbar)));
            const FieldElement rhs1 = scaled(f, -3, square(f, c));
            const FieldElement lhs2 = square(f, f.add(cbar, c));
            const FieldElement rhs2 = scaled(f, 3, f.mul(cbar, c));
            check.expect(lhs1 == rhs1 && lhs2 == rhs2, [&] {
                return Witness{{"c", s.el(c)}, {"identity", "(-2cbar+c)^2 = -3c^2 or (cbar+c)^2 = 3 cbar c fails"}};
            });
            if (!first) {
                first = sp;
                continue;
            }
            check.expect(sp.eps == first->eps && sp.tau == first->tau, [&] {
                return Witness{{"residue", std::to_string(residue)}, {"j", std::to_string(j)},
                               {"eps", std::to_string(sp.eps)}, {"tau", std::to_string(sp.tau)},
                               {"eps_at_j0", std::to_string(first->eps)}, {"tau_at_j0", std::to_string(first->tau)}};
            });
        }
        if (first) {
            check.stat("dlog3", first->dlog3);
            summary += (summary.empty() ? "" : "; ") + std::string("residue ") + std::to_string(residue) +
                       ": eps=" + std::to_string(first->eps) + " tau=" + std::to_string(first->tau);
        }
    }
    check.note(summary);
    return check.finish();
}

LemmaReport check_omega_two(const Setup& s)
{
    Check check(s, "omega_two_count");
    if (!pair_regime(s))
        return check.inapplicable("needs p > 3, n = 2m and p^m = 2 (mod 3)");
    const u64 w2 = s.spectrum.at(2);
    check.expect(w2 == s.Q - 1, [&] {
        return Witness{{"omega_2", std::to_string(w2)}, {"expected", std::to_string(s.Q - 1)}};
    });
    check.stat("omega_2", w2);
    return check.finish();
}

// For p = 3 the canonical equation raised to p^m reads -ybar y + ybar^2 = abar.
LemmaReport check_ternary(const Setup& s)
{
    Check check(s, "ternary_frobenius_form");
    if (s.p != 3 || !s.even)
        return check.inapplicable("needs p = 3 and n = 2m");
    const auto& f = s.field;
    std::vector<std::uint32_t> hist(s.q, 0);
    for (u64 i = 0; i < s.q; ++i) {
        const FieldElement y{i};
        const FieldElement ybar = s.bar[i];
        ++hist[f.sub(square(f, ybar), f.mul(ybar, y)).index()];
    }
    for (u64 b = 0; b < s.q; ++b) {
        const FieldElement a = f.sub(FieldElement{b}, f.one());
        const u64 count = hist[s.bar[a.index()].index()];
        check.expect(count == s.delta[b], [&] { return count_witness(s, "b", FieldElement{b}, s.delta[b], count); });
        const u64 expected_max = a.is_zero() ? s.Q : 2;
        check.expect(a.is_zero() ? s.delta[b] == s.Q : (s.delta[b] == 0 || s.delta[b] == 2), [&] {
            return count_witness(s, "b", FieldElement{b}, expected_max, s.delta[b]);
        });
    }
    // Solutions with a != 0 satisfy (abar + a) y^2 = a^2.
    for (u64 i = 0; i < s.q; ++i) {
        const FieldElement y{i};
        const FieldElement a = canonical_lhs(f, y, s.bar[i]);  // c = a when p = 3
        if (a.is_zero())
            continue;
        const FieldElement v = f.sub(f.mul(f.add(s.bar[a.index()], a), square(f, y)), square(f, a));
        check.expect(v.is_zero(), [&] { return Witness{{"y", s.el(y)}, {"a", s.el(a)}, {"value", s.el(v)}}; });
    }
    check.stat("delta_one", s.delta[1]);
    return check.finish();
}

LemmaReport check_odd_extension(const Setup& s)
{
    Check check(s, "odd_extension_structure");
    if (s.p == 2 || s.even)
        return check.inapplicable("needs odd p and n = 2m-1");
    const auto& f = s.field;
    u64 max_count = 0;
    for (u64 i = 1; i < s.q; ++i) {
        const u64 count = s.canonical[i];
        max_count = std::max(max_count, count);
        check.expect(count % 2 == 0 && count <= s.p + 3, [&] {
            return Witness{{"c", s.el(FieldElement{i})}, {"count", std::to_string(count)}};
        });
    }
    for (u64 i = 0; i < s.q; ++i) {
        const FieldElement y{i};
        const FieldElement c = canonical_lhs(f, y, s.bar[i]);
        if (c.is_zero())
            continue;
        const FieldElement v = odd_regime_value(f, c, s.bar[c.index()], y);
        check.expect(v.is_zero(), [&] { return Witness{{"y", s.el(y)}, {"c", s.el(c)}, {"value", s.el(v)}}; });
    }
    // c = 0: one solution or p, and p exactly under the two-clause condition.
    // The clauses are reported separately so a disagreement can be traced.
    const u64 c0 = s.canonical[0];
    const u64 quarter = *nt::invmod(4 % s.p, s.p);
    const bool power_clause = nt::powmod(quarter, s.n, s.p) == 1;
    const bool vanishing_clause = (1 + nt::powmod(2, s.n, s.p)) % s.p == 0;
    const bool condition = omega_p_condition(s.p, s.n);
    check.expect(c0 == 1 || c0 == s.p, [&] { return count_witness(s, "c", f.zero(), 1, c0); });
    check.expect((c0 == s.p) == condition, [&] {
        return Witness{{"c0_count", std::to_string(c0)}, {"power_clause", power_clause ? "true" : "false"},
                       {"vanishing_clause", vanishing_clause ? "true" : "false"}};
    });
    check.stat("c0_count", c0);
    check.stat("max_count", max_count);
    check.stat("power_clause", power_clause);
    check.stat("vanishing_clause", vanishing_clause);
    return check.finish();
}

LemmaReport check_closed_form(const Setup& s)
{
    Check check(s, "closed_form_spectrum");
    const auto prediction = predict(s.p, s.m, s.n);
    for (const auto& line : compare_prediction(prediction, s.spectrum))
        check.fail({{"diff", line}});
    if (prediction.tag == CaseTag::PG3_N2M_Q1MOD3 || prediction.tag == CaseTag::PG3_N2M_Q2MOD3) {
        const auto closed = closed_ambiguity_deficiency(s.p, s.m, *prediction.tag);
        const auto brute = ambiguity_deficiency(s.spectrum);
        check.expect(closed == brute, [&] {
            return Witness{{"ambiguity_closed", nt::to_decimal(closed.ambiguity)},
                           {"ambiguity_brute", nt::to_decimal(brute.ambiguity)},
                           {"deficiency_closed", nt::to_decimal(closed.deficiency)},
                           {"deficiency_brute", nt::to_decimal(brute.deficiency)}};
        });
    }
    check.note(std::string("case ") + to_string(*prediction.tag));
    return check.finish();
}

}  // namespace

const std::vector<std::string>& suite_lemma_ids()
{
    return kSuiteIds;
}

std::vector<LemmaReport> run_lemma_suite(std::uint32_t p, unsigned m, unsigned n, const SuiteOptions& options)
{
    classify(p, m, n);
    const auto q = nt::checked_pow(p, n);
    if (!q || (*q > options.sweep.sweep_cap && !options.sweep.override_cap))
        throw CapExceeded("field size exceeds sweep cap " + std::to_string(options.sweep.sweep_cap));

    FieldCtx field = build_field(p, n);
    PowerMap map(field, family_exponent(p, m));
    DerivativeCounts counts = DerivativeCounts::sweep(map, options.sweep);

    Setup s{p,
            m,
            n,
            *q,
            *nt::checked_pow(p, m),
            n == 2 * m,
            field,
            map,
            counts,
            counts.spectrum(),
            {},
            conjugate_table(field, m),
            {},
            options};
    s.delta.resize(s.q);
    for (u64 b = 0; b < s.q; ++b)
        s.delta[b] = static_cast<std::uint32_t>(counts.at(FieldElement{b}));
    if (p != 2)
        s.canonical = canonical_solution_counts(field);

    std::mt19937_64 rng(options.seed ^ (u64{p} << 32) ^ (u64{m} << 16) ^ n);

    DZeroSet dz;
    std::set<FieldElement> dzero;
    if (quartic_regime(s)) {
        dz = enumerate_D_zero_set(field);
        for (const auto& member : dz.members)
            dzero.insert(member.c);
    }

    std::vector<LemmaReport> out;
    out.push_back(check_counting_identities(s));
    out.push_back(check_derivative_rewrite(s));
    out.push_back(check_quadratic_roots(s, rng));
    out.push_back(check_linearized_roots(s));
    out.push_back(check_minus_three(s));
    out.push_back(check_quarter(s));
    out.push_back(check_shift_bijection(s));
    out.push_back(check_discriminant_zero_set(s, dz));
    out.push_back(check_solution_count_exclusions(s, dzero));
    out.push_back(check_quartic_solver(s, dz, rng));
    out.push_back(check_pair_root_square(s, dz));
    out.push_back(check_pair_system_half(s, dz));
    out.push_back(check_sign_pairs(s));
    out.push_back(check_omega_two(s));
    out.push_back(check_ternary(s));
    out.push_back(check_odd_extension(s));
    out.push_back(check_closed_form(s));
    return out;
}

}  // namespace diffspec::lab
