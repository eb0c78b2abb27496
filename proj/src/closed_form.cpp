#include "diffspec/closed_form.hpp"

#include <limits>

#include "diffspec/errors.hpp"
#include "diffspec/number_theory.hpp"

namespace diffspec {

namespace {

using nt::u128;
using nt::u64;

u64 pow_or_throw(u64 base, unsigned exp)
{
    auto v = nt::checked_pow(base, exp);
    if (!v)
        throw InvalidArgument(std::to_string(base) + "^" + std::to_string(exp) + " does not fit in 64 bits");
    return *v;
}

u64 narrow(u128 v)
{
    if (v > std::numeric_limits<u64>::max())
        throw InvalidArgument("closed-form count does not fit in 64 bits");
    return static_cast<u64>(v);
}

void require_prime(u64 p)
{
    if (!nt::is_prime(p))
        throw InvalidArgument(std::to_string(p) + " is not prime");
}

SpectrumPrediction exact(std::optional<CaseTag> tag, u64 p, unsigned n, u64 q, SparseCounts omega)
{
    SpectrumPrediction out;
    out.tag = tag;
    out.kind = PredictionKind::Exact;
    out.p = p;
    out.n = n;
    out.q = q;
    for (const auto& [i, c] : omega) {
        if (c != 0)
            out.exact_omega[i] = c;
    }
    return out;
}

}  // namespace

const char* to_string(CaseTag tag)
{
    switch (tag) {
    case CaseTag::P2_N2M_EVEN_M:
        return "P2_N2M_EVEN_M";
    case CaseTag::P2_N2M_ODD_M:
        return "P2_N2M_ODD_M";
    case CaseTag::P2_N2M1_APN:
        return "P2_N2M1_APN";
    case CaseTag::P3_N2M:
        return "P3_N2M";
    case CaseTag::PG3_N2M_Q1MOD3:
        return "PG3_N2M_Q1MOD3";
    case CaseTag::PG3_N2M_Q2MOD3:
        return "PG3_N2M_Q2MOD3";
    case CaseTag::P3_N2M1_WELCH:
        return "P3_N2M1_WELCH";
    case CaseTag::PODD_N2M1_PARTIAL:
        return "PODD_N2M1_PARTIAL";
    }
    return "UNKNOWN";
}

u64 family_exponent(u64 p, unsigned m)
{
    const u64 pm = pow_or_throw(p, m);
    if (pm > std::numeric_limits<u64>::max() - 2)
        throw InvalidArgument("p^m + 2 does not fit in 64 bits");
    return pm + 2;
}

CaseTag classify(u64 p, unsigned m, unsigned n)
{
    require_prime(p);
    if (m == 0)
        throw InvalidArgument("m must be at least 1");
    const bool even = n == 2 * m;
    if (!even && n != 2 * m - 1)
        throw InvalidArgument("n must be 2m or 2m-1 (got m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
    if (p == 2) {
        if (!even)
            return CaseTag::P2_N2M1_APN;
        return m % 2 == 0 ? CaseTag::P2_N2M_EVEN_M : CaseTag::P2_N2M_ODD_M;
    }
    if (p == 3)
        return even ? CaseTag::P3_N2M : CaseTag::P3_N2M1_WELCH;
    if (!even)
        return CaseTag::PODD_N2M1_PARTIAL;
    return nt::powmod(p % 3, m, 3) == 1 ? CaseTag::PG3_N2M_Q1MOD3 : CaseTag::PG3_N2M_Q2MOD3;
}

SpectrumPrediction predict_spectrum(u64 p, unsigned m, unsigned n)
{
    const CaseTag tag = classify(p, m, n);
    const u64 q = pow_or_throw(p, n);
    const u64 pm = pow_or_throw(p, m);
    switch (tag) {
    case CaseTag::P2_N2M_EVEN_M:
    case CaseTag::P2_N2M1_APN:
        return exact(tag, p, n, q, {{0, q / 2}, {2, q / 2}});
    case CaseTag::P2_N2M_ODD_M:
        return exact(tag, p, n, q, {{0, q - q / 4}, {4, q / 4}});
    case CaseTag::P3_N2M:
        return exact(tag, p, n, q, {{0, (q + pm) / 2 - 1}, {2, (q - pm) / 2}, {pm, 1}});
    case CaseTag::PG3_N2M_Q1MOD3:
        return exact(tag, p, n, q, {{0, (q - 1) / 2}, {1, 1}, {2, (q - 1) / 2}});
    case CaseTag::PG3_N2M_Q2MOD3: {
        const u128 r = pm - 1;
        return exact(tag, p, n, q,
                     {{0, narrow((3 * u128{pm} + 1) * r / 4)}, {1, 1}, {2, pm - 1}, {4, narrow(r * r / 4)}});
    }
    case CaseTag::P3_N2M1_WELCH:
        return exact(tag, p, n, q,
                     {{0, narrow((5 * u128{q} + 1) / 8)}, {2, (q - 3) / 4}, {3, 1}, {4, (q - 3) / 8}});
    case CaseTag::PODD_N2M1_PARTIAL:
        break;
    }
    throw InvalidArgument(std::string("no exact spectrum is known for case ") + to_string(tag));
}

SpectrumPrediction predict_constraints(u64 p, unsigned m, unsigned n)
{
    const CaseTag tag = classify(p, m, n);
    if (tag != CaseTag::PODD_N2M1_PARTIAL && tag != CaseTag::P3_N2M1_WELCH)
        throw InvalidArgument(std::string("structural constraints apply to odd p with n = 2m-1, not ") +
                              to_string(tag));
    SpectrumPrediction out;
    out.tag = tag;
    out.kind = PredictionKind::Constraints;
    out.p = p;
    out.n = n;
    out.q = pow_or_throw(p, n);
    out.bound = p + 3;
    for (u64 i = 3; i < out.bound; i += 2) {
        if (i != p)
            out.forced_zero.push_back(i);
    }
    const bool cond = omega_p_condition(p, n);
    out.omega_p = cond ? 1 : 0;
    out.omega_1 = cond ? 0 : 1;
    return out;
}

SpectrumPrediction predict(u64 p, unsigned m, unsigned n)
{
    if (classify(p, m, n) == CaseTag::PODD_N2M1_PARTIAL)
        return predict_constraints(p, m, n);
    return predict_spectrum(p, m, n);
}

bool omega_p_condition(u64 p, unsigned n)
{
    require_prime(p);
    if (p == 2)
        throw InvalidArgument("omega_p_condition needs odd p");
    const u64 quarter = *nt::invmod(4 % p, p);
    const bool power = nt::powmod(quarter, n, p) == 1;
    const bool vanishes = (1 + nt::powmod(2, n, p)) % p == 0;
    return power && vanishes;
}

AmbiguityDeficiencyReport closed_ambiguity_deficiency(u64 p, unsigned m, CaseTag tag)
{
    if (tag != CaseTag::PG3_N2M_Q1MOD3 && tag != CaseTag::PG3_N2M_Q2MOD3)
        throw InvalidArgument(std::string("no closed ambiguity/deficiency for case ") + to_string(tag));
    if (classify(p, m, 2 * m) != tag)
        throw InvalidArgument(std::string("case ") + to_string(tag) + " does not match p=" + std::to_string(p) +
                              ", m=" + std::to_string(m));
    const u128 pm = pow_or_throw(p, m);
    const u128 rows = pm * pm - 1;
    switch (tag) {
    case CaseTag::PG3_N2M_Q1MOD3:
        return {rows * rows / 2, rows * rows / 2};
    case CaseTag::PG3_N2M_Q2MOD3:
        return {rows * (pm - 1) * (3 * pm - 1) / 2, rows * (pm - 1) * (3 * pm + 1) / 4};
    default:
        break;
    }
    throw InvalidArgument(std::string("no closed ambiguity/deficiency for case ") + to_string(tag));
}

u64 linearized_kernel_size(u64 p, unsigned n, unsigned t)
{
    require_prime(p);
    if (n == 0 || t == 0)
        throw InvalidArgument("n and t must be at least 1");
    const auto s = static_cast<unsigned>(nt::gcd(n, t));
    if (p == 2 || (n / s) % 2 == 0)
        return pow_or_throw(p, s);
    return 1;
}

SpectrumPrediction gold_family_spectrum(u64 p, unsigned t, unsigned n)
{
    const u64 q = pow_or_throw(p, n);
    const u64 k = linearized_kernel_size(p, n, t);
    return exact(std::nullopt, p, n, q, {{0, q - q / k}, {k, q / k}});
}

std::vector<std::string> compare_prediction(const SpectrumPrediction& prediction, const DifferentialSpectrum& spectrum)
{
    std::vector<std::string> diffs;
    auto mismatch = [&](const std::string& what, u64 expected, u64 actual) {
        if (expected != actual)
            diffs.push_back(what + ": predicted " + std::to_string(expected) + ", brute " + std::to_string(actual));
    };
    mismatch("q", prediction.q, spectrum.q);
    if (prediction.kind == PredictionKind::Exact) {
        SparseCounts keys = prediction.exact_omega;
        for (const auto& [i, c] : spectrum.omega)
            keys.try_emplace(i, 0);
        for (const auto& [i, c] : keys) {
            auto it = prediction.exact_omega.find(i);
            mismatch("omega_" + std::to_string(i), it == prediction.exact_omega.end() ? 0 : it->second, spectrum.at(i));
        }
        return diffs;
    }
    if (spectrum.uniformity > prediction.bound)
        diffs.push_back("uniformity " + std::to_string(spectrum.uniformity) + " exceeds bound " +
                        std::to_string(prediction.bound));
    for (u64 i : prediction.forced_zero)
        mismatch("omega_" + std::to_string(i), 0, spectrum.at(i));
    mismatch("omega_1", prediction.omega_1, spectrum.at(1));
    mismatch("omega_" + std::to_string(prediction.p), prediction.omega_p, spectrum.at(prediction.p));
    return diffs;
}

}  // namespace diffspec
