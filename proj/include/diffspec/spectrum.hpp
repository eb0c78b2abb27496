#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "diffspec/field.hpp"

namespace diffspec {

using Wide = unsigned __int128;

/// Sparse counts i -> omega_i; only nonzero entries are stored.
using SparseCounts = std::map<std::uint64_t, std::uint64_t>;

/// x -> x^d over a field, with 0 -> 0 and x -> x^{d mod (q-1)} otherwise
/// (a zero residue acts as exponent q-1).
class PowerMap {
public:
    PowerMap(FieldCtx field, std::uint64_t d);

    const FieldCtx& field() const { return field_; }
    std::uint64_t exponent() const { return d_; }

    FieldElement operator()(FieldElement x) const;
    /// (x+1)^d - x^d
    FieldElement derivative(FieldElement x) const;
    /// (x+a)^d - x^d
    FieldElement derivative(FieldElement x, FieldElement a) const;

private:
    FieldCtx field_;
    std::uint64_t d_;
};

struct DifferentialSpectrum {
    std::uint64_t q = 0;
    std::uint64_t d = 0;
    SparseCounts omega;
    std::uint64_t uniformity = 0;

    /// Drops zero entries and recomputes the uniformity.
    static DifferentialSpectrum from_counts(std::uint64_t q, std::uint64_t d, const SparseCounts& omega);

    std::uint64_t at(std::uint64_t i) const;
    /// Dense [omega_0, ..., omega_uniformity].
    std::vector<std::uint64_t> sequence() const;

    friend bool operator==(const DifferentialSpectrum&, const DifferentialSpectrum&) = default;
};

struct AmbiguityDeficiencyReport {
    Wide ambiguity = 0;
    Wide deficiency = 0;

    friend bool operator==(const AmbiguityDeficiencyReport&, const AmbiguityDeficiencyReport&) = default;
};

struct SweepOptions {
    unsigned threads = 1;
    std::uint64_t sweep_cap = std::uint64_t{1} << 24;
    bool override_cap = false;
    /// Upper bound on memory spent on per-worker histograms; limits the
    /// effective worker count for large fields.
    std::uint64_t histogram_budget_bytes = std::uint64_t{1} << 30;
};

/// |{x : (x+1)^d - x^d = b}| by a full scan.
std::uint64_t delta_b(const PowerMap& map, FieldElement b);

/// delta(1, b) for every b, from one pass over the field.
class DerivativeCounts {
public:
    /// Throws CapExceeded when q is above the sweep cap and no override is set.
    static DerivativeCounts sweep(const PowerMap& map, const SweepOptions& options = {});

    const PowerMap& map() const { return map_; }
    std::uint64_t at(FieldElement b) const;
    /// delta(a, b) through delta(a, b) = delta(1, b / a^d).
    std::uint64_t at(FieldElement a, FieldElement b) const;
    DifferentialSpectrum spectrum() const;
    /// Worker count actually used by the sweep.
    unsigned workers() const { return workers_; }

private:
    DerivativeCounts(PowerMap map, bool log_keyed, std::vector<std::uint32_t> counts, unsigned workers);
    std::uint64_t key_of(FieldElement b) const;

    PowerMap map_;
    bool log_keyed_;
    std::vector<std::uint32_t> counts_;
    unsigned workers_;
};

DifferentialSpectrum brute_spectrum(const PowerMap& map, const SweepOptions& options = {});

/// Single-threaded spectrum through polynomial arithmetic only, keyed by
/// packed element. Independent of the table and kernel paths.
DifferentialSpectrum reference_spectrum(const PowerMap& map);

/// For every a != 0, checks that the multiset {delta(a, b) : b} equals the
/// a = 1 multiset. Quadratic in q; throws CapExceeded above `cap`.
bool full_ddt_check(const PowerMap& map, std::uint64_t cap = std::uint64_t{1} << 12);

/// Sum omega_i = q and sum i * omega_i = q.
bool check_identities(const DifferentialSpectrum& spectrum);

/// A = (q-1) sum_i omega_i C(i,2), D = (q-1) omega_0. Throws InvalidArgument
/// when the spectrum fails check_identities.
AmbiguityDeficiencyReport ambiguity_deficiency(const DifferentialSpectrum& spectrum);

}  // namespace diffspec
