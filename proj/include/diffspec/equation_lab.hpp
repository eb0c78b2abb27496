#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "diffspec/field.hpp"
#include "diffspec/spectrum.hpp"

// Exhaustive checks of the equations behind the spectrum of x^{p^m+2}.
// Throughout, ybar = y^{p^m}; the field is F_{p^n} with n = 2m or n = 2m-1,
// and m is recovered from n by the regime each function works in.

namespace diffspec::lab {

struct Irreducible {
    friend bool operator==(Irreducible, Irreducible) = default;
};
struct TwoRoots {
    FieldElement r1, r2;  ///< r1 < r2 by packed index
    friend bool operator==(TwoRoots, TwoRoots) = default;
};
struct DoubleRoot {
    FieldElement r;
    friend bool operator==(DoubleRoot, DoubleRoot) = default;
};
using QuadraticRoots = std::variant<Irreducible, TwoRoots, DoubleRoot>;

/// Roots of x^2 + a x + b over a field of odd characteristic.
QuadraticRoots quadratic_classify(const FieldCtx& field, FieldElement a, FieldElement b);

struct RootCountComparison {
    std::uint64_t formula = 0;
    std::uint64_t brute = 0;
};

/// Roots of x^{p^t} + x over F_{p^n}: closed form against a full scan.
RootCountComparison linearized_root_count(std::uint32_t p, unsigned n, unsigned t,
                                          std::uint64_t cap = std::uint64_t{1} << 22);
/// Same scan on an existing field.
std::uint64_t linearized_root_count_brute(const FieldCtx& field, unsigned t);

/// Whether -3 is a square in F_{p^m}, computed in that field. Throws
/// VerificationFailure if the answer disagrees with p^m = 1 (mod 3).
bool char_minus3(std::uint32_t p, unsigned m);

/// The derivative equation (x+1)^{p^m+2} - x^{p^m+2} = b rewritten with
/// y = x + 1/2 as 8 y ybar + 4 y^2 - c = 0.
struct CanonicalDerivative {
    FieldElement b;
    FieldElement a;     ///< b - 1
    FieldElement c;     ///< 4b - 1 = 4a + 3
    FieldElement half;  ///< y = x + half
};

CanonicalDerivative to_canonical(const FieldCtx& field, FieldElement b);

/// x -> x^{p^k} for every packed index, built once per field.
std::vector<FieldElement> conjugate_table(const FieldCtx& field, unsigned k);

/// m for n = 2m (even regime) or n = 2m-1 (odd regime).
unsigned half_degree(const FieldCtx& field);

/// 8 y ybar + 4 y^2 for a given y and ybar.
FieldElement canonical_lhs(const FieldCtx& field, FieldElement y, FieldElement ybar);

/// Solutions of 8 y ybar + 4 y^2 = c by full scan over y. Works in both
/// regimes (n = 2m and n = 2m-1).
std::uint64_t count_canonical_solutions(const FieldCtx& field, FieldElement c);
/// Solution counts for every c at once, indexed by packed c.
std::vector<std::uint32_t> canonical_solution_counts(const FieldCtx& field);

/// n = 2m only.
std::uint64_t count_even_regime_solutions(const FieldCtx& field, FieldElement c);

/// cbar^2 - cbar c + c^2 for n = 2m, c != 0. Throws VerificationFailure if
/// the result is not fixed by y -> y^{p^m}.
FieldElement compute_D(const FieldCtx& field, FieldElement c);

/// 3 y^4 + (2 cbar - c)/2 y^2 - c^2/16.
FieldElement quartic_value(const FieldCtx& field, FieldElement c, FieldElement cbar, FieldElement y);

/// Roots of the quartic above through its quadratic in z = y^2; sorted by
/// packed index. p > 3, n = 2m, c != 0.
std::vector<FieldElement> quartic_roots(const FieldCtx& field, FieldElement c);
/// Same root set by evaluating the quartic at every y.
std::vector<FieldElement> quartic_roots_exhaustive(const FieldCtx& field, FieldElement c);

struct DZeroMember {
    unsigned residue = 0;  ///< 1 or 5
    std::uint64_t j = 0;   ///< 0 <= j <= p^m - 2
    FieldElement c;
};

/// c = alpha^{i (Q+1)/6 + j (Q+1)}, Q = p^m: the nonzero c with D = 0.
struct DZeroSet {
    std::uint64_t Q = 0;
    bool applicable = false;  ///< Q = 2 (mod 3)
    std::vector<DZeroMember> members;
    /// Formula set equals {c != 0 : D(c) = 0}, checked over the whole field.
    bool matches_scan = false;
};

DZeroSet enumerate_D_zero_set(const FieldCtx& field);

struct PairSystemResult {
    /// Solutions of y^2 = (-2cbar + c)/12, y ybar = (cbar + c)/12.
    std::uint64_t count = 0;
    /// Whether (-2cbar + c)/12 has square roots at all.
    bool first_equation_solvable = false;
};

/// Both square roots are tried, so the result does not depend on which root
/// sqrt returns first. Throws InvalidArgument if D(c) != 0 or c = 0.
PairSystemResult pair_system_count(const FieldCtx& field, FieldElement c);

struct SignPair {
    int eps = 0;
    int tau = 0;
    std::uint32_t dlog3 = 0;
};

/// Signs relating -2cbar + c and cbar + c to their square-root expressions
/// for c = alpha^{i (Q+1)/6 + j (Q+1)}. Needs log tables; throws
/// VerificationFailure if a sign is not +-1.
SignPair sign_pair(const FieldCtx& field, unsigned residue, std::uint64_t j);

/// n = 2m-1 only.
std::uint64_t count_odd_regime_solutions(const FieldCtx& field, FieldElement c);

/// 64 y^{p+3} - 16 c y^{p+1} - 16 y^4 + (8c + 16 cbar) y^2 - c^2 with
/// cbar = c^{p^m}.
FieldElement odd_regime_value(const FieldCtx& field, FieldElement c, FieldElement cbar, FieldElement y);

enum class Verdict { Pass, Fail, Inapplicable };
const char* to_string(Verdict verdict);

using Witness = std::vector<std::pair<std::string, std::string>>;

struct LemmaReport {
    std::string lemma;
    std::uint64_t p = 0;
    unsigned m = 0;
    unsigned n = 0;
    std::optional<unsigned> t;
    Verdict verdict = Verdict::Pass;
    std::vector<Witness> counterexamples;
    std::map<std::string, std::uint64_t> stats;
    std::string note;
};

struct SuiteOptions {
    SweepOptions sweep;
    /// All c are checked against the exhaustive quartic root scan up to this q.
    std::uint64_t exhaustive_quartic_cap = std::uint64_t{1} << 12;
    unsigned quartic_samples = 64;
    unsigned quadratic_samples = 512;
    std::size_t max_counterexamples = 16;
    std::uint64_t seed = 0x6a09e667f3bcc909ULL;
};

/// Ids of the suite in report order.
const std::vector<std::string>& suite_lemma_ids();

/// Every check in suite_lemma_ids() order; checks that do not apply to
/// (p, m, n) come back Inapplicable. Throws InvalidArgument for n not in
/// {2m, 2m-1} and CapExceeded above the sweep cap.
std::vector<LemmaReport> run_lemma_suite(std::uint32_t p, unsigned m, unsigned n, const SuiteOptions& options = {});

}  // namespace diffspec::lab
