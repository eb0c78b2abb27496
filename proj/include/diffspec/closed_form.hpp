#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diffspec/spectrum.hpp"

// Closed-form differential spectra of x^{p^m+2} over F_{p^n}, n in {2m, 2m-1}.

namespace diffspec {

enum class CaseTag {
    P2_N2M_EVEN_M,
    P2_N2M_ODD_M,
    P2_N2M1_APN,
    P3_N2M,
    PG3_N2M_Q1MOD3,
    PG3_N2M_Q2MOD3,
    P3_N2M1_WELCH,
    PODD_N2M1_PARTIAL,
};

const char* to_string(CaseTag tag);

enum class PredictionKind { Exact, Constraints };

struct SpectrumPrediction {
    /// Empty for predictions outside the x^{p^m+2} family (Gold exponents).
    std::optional<CaseTag> tag;
    PredictionKind kind = PredictionKind::Exact;
    std::uint64_t p = 0;
    unsigned n = 0;
    std::uint64_t q = 0;

    SparseCounts exact_omega;

    std::uint64_t bound = 0;
    std::vector<std::uint64_t> forced_zero;
    std::uint64_t omega_1 = 0;
    std::uint64_t omega_p = 0;

    friend bool operator==(const SpectrumPrediction&, const SpectrumPrediction&) = default;
};

/// p^m + 2; throws InvalidArgument when it does not fit in 64 bits.
std::uint64_t family_exponent(std::uint64_t p, unsigned m);

/// Throws InvalidArgument unless p is prime, m >= 1 and n is 2m or 2m-1.
CaseTag classify(std::uint64_t p, unsigned m, unsigned n);

/// Exact spectrum for every case except PODD_N2M1_PARTIAL.
SpectrumPrediction predict_spectrum(std::uint64_t p, unsigned m, unsigned n);

/// Uniformity bound p+3, vanishing odd components, and the (omega_1, omega_p)
/// rule. Valid for odd p and n = 2m-1, so the Welch case is accepted too.
SpectrumPrediction predict_constraints(std::uint64_t p, unsigned m, unsigned n);

/// predict_spectrum where the case is fully determined, else predict_constraints.
SpectrumPrediction predict(std::uint64_t p, unsigned m, unsigned n);

/// 1/4 is a (p-1)-th power in F_{p^n} and 1 + 2^n = 0 in F_p. The first
/// clause is tested through the norm to F_p, which for 1/4 is (1/4)^n mod p.
bool omega_p_condition(std::uint64_t p, unsigned n);

/// Ambiguity and deficiency for the p > 3, n = 2m cases.
AmbiguityDeficiencyReport closed_ambiguity_deficiency(std::uint64_t p, unsigned m, CaseTag tag);

/// Root count of x^{p^t} + x over F_{p^n}.
std::uint64_t linearized_kernel_size(std::uint64_t p, unsigned n, unsigned t);

/// Spectrum of x^{p^t+1} over F_{p^n}: the derivative is affine, so every
/// attained value is hit exactly K = linearized_kernel_size(p, n, t) times.
SpectrumPrediction gold_family_spectrum(std::uint64_t p, unsigned t, unsigned n);

/// One line per disagreement between a prediction and a computed spectrum;
/// empty when they agree.
std::vector<std::string> compare_prediction(const SpectrumPrediction& prediction, const DifferentialSpectrum& spectrum);

}  // namespace diffspec
