#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace diffspec {

/// An element of F_{p^n} in packed form: index = sum_i c_i p^i, where c_i is
/// the coefficient of x^i in the polynomial basis of the owning FieldCtx.
/// Zero is index 0 and the prime subfield occupies indices 0..p-1.
class FieldElement {
public:
    constexpr FieldElement() = default;
    constexpr explicit FieldElement(std::uint64_t index) : index_(index) {}

    constexpr std::uint64_t index() const { return index_; }
    constexpr bool is_zero() const { return index_ == 0; }

    friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

private:
    std::uint64_t index_ = 0;
};

struct FieldSpec {
    std::uint32_t p = 0;
    unsigned n = 0;
    /// Monic, degree n, constant term first.
    std::vector<std::uint32_t> modulus;

    std::uint64_t q() const;
};

struct FieldOptions {
    /// Discrete-log tables are built when q is at most this size.
    std::uint64_t table_cap = std::uint64_t{1} << 24;
};

/// A concrete construction of F_{p^n}. Immutable once built; copies share
/// their tables, so a FieldCtx can be passed by value and read concurrently.
class FieldCtx {
public:
    static constexpr std::uint32_t kNoLog = 0xFFFFFFFFu;

    const FieldSpec& spec() const;
    std::uint32_t p() const;
    unsigned n() const;
    std::uint64_t q() const;
    /// Smallest element of multiplicative order q-1 (constant-term-first order).
    FieldElement alpha() const;
    bool has_tables() const;

    FieldElement zero() const { return FieldElement{0}; }
    FieldElement one() const { return FieldElement{1}; }
    /// Image of an integer in the prime subfield.
    FieldElement from_int(std::int64_t v) const;
    FieldElement from_coeffs(std::span<const std::int64_t> coeffs) const;
    /// Checked construction from a packed index.
    FieldElement element(std::uint64_t index) const;
    std::vector<std::uint32_t> coeffs(FieldElement x) const;
    std::string to_string(FieldElement x) const;

    FieldElement add(FieldElement a, FieldElement b) const;
    FieldElement sub(FieldElement a, FieldElement b) const;
    FieldElement neg(FieldElement a) const;
    FieldElement mul(FieldElement a, FieldElement b) const;
    FieldElement inv(FieldElement a) const;
    FieldElement div(FieldElement a, FieldElement b) const;
    /// Negative exponents need a nonzero base; pow(0, 0) is 1.
    FieldElement pow(FieldElement x, std::int64_t e) const;
    /// Exponent given as a residue class mod q-1, applied to nonzero x only.
    FieldElement pow_unsigned(FieldElement x, std::uint64_t e) const;
    /// x + 1 without going through a general addition.
    FieldElement add_one(FieldElement x) const;

    /// x^{p^k}.
    FieldElement frobenius(FieldElement x, std::uint64_t k) const;

    bool is_square(FieldElement x) const;
    /// Empty for nonsquares, {0} for zero, otherwise {r, -r}.
    std::vector<FieldElement> sqrt(FieldElement x) const;
    std::uint64_t element_order(FieldElement x) const;

    /// Discrete log base alpha in [0, q-2]; tables only.
    std::uint32_t log(FieldElement x) const;
    /// alpha^k.
    FieldElement exp(std::uint64_t k) const;

    /// Prime factorization of q-1.
    const std::vector<std::pair<std::uint64_t, unsigned>>& order_factors() const;

    /// Rank in the constant-term-first lexicographic order.
    std::uint64_t lex_rank(FieldElement x) const;

    // Polynomial backend, always available. The table backend is used by the
    // operations above whenever tables exist.
    FieldElement poly_add(FieldElement a, FieldElement b) const;
    FieldElement poly_neg(FieldElement a) const;
    FieldElement poly_mul(FieldElement a, FieldElement b) const;
    FieldElement poly_pow(FieldElement x, std::uint64_t e) const;
    FieldElement poly_inv(FieldElement a) const;

    /// log table indexed by packed element (kNoLog at zero).
    std::span<const std::uint32_t> log_table() const;
    /// alpha^k for k in [0, q-2].
    std::span<const std::uint32_t> antilog_table() const;
    /// log(1 + alpha^k) for k in [0, q-2]; kNoLog where 1 + alpha^k = 0.
    std::span<const std::uint32_t> zech_plus_table() const;

    struct Impl;

private:
    friend FieldCtx build_field(std::uint32_t, unsigned, std::optional<std::vector<std::int64_t>>, FieldOptions);
    explicit FieldCtx(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Builds F_{p^n}. Without a modulus the lexicographically smallest monic
/// irreducible (constant term first) is used. Throws InvalidArgument for a
/// non-prime p, n = 0, or a supplied modulus that is not monic irreducible of
/// degree n with coefficients in [0, p).
FieldCtx build_field(std::uint32_t p, unsigned n, std::optional<std::vector<std::int64_t>> modulus = std::nullopt,
                     FieldOptions options = {});

}  // namespace diffspec
