#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

// Inner loops of the exhaustive sweeps, in log-domain form. Every kernel has
// a scalar reference and an AVX2 variant; both are exact integer kernels and
// must produce bit-identical output. The dispatching entry points pick the
// widest variant the running CPU supports.

namespace diffspec::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
/// Widest ISA supported by both the build and the running CPU.
Isa detected_isa();
/// ISA used by the dispatching entry points.
Isa active_isa();
/// Forces the dispatching entry points onto one ISA (tests, benchmarks);
/// nullopt restores detection. Unavailable ISAs fall back to scalar.
void set_isa_override(std::optional<Isa> isa);

inline constexpr std::uint32_t kNoLog = 0xFFFFFFFFu;
/// Largest modulus the AVX2 mulmod handles exactly; larger ones run scalar.
inline constexpr std::uint32_t kAvx2MaxModulus = std::uint32_t{1} << 26;

/// Inputs of the derivative kernel for x -> x^e over a field of size q.
/// All logs are base alpha and live in [0, order), order = q - 1 < 2^31.
struct DerivativeParams {
    const std::uint32_t* zech_plus = nullptr;  ///< log(1 + alpha^k), kNoLog where that is zero
    std::uint32_t order = 0;
    std::uint32_t half_log = 0;       ///< log(-1); 0 in characteristic 2
    std::uint32_t exponent = 0;       ///< e mod order
    std::uint32_t key_minus_one = 0;  ///< key emitted for x = -1, where (x+1)^e = 0
};

/// For x = alpha^i, i in [begin, end): writes log((x+1)^e - x^e), or `order`
/// when the difference is zero, to out[i - begin].
void derivative_keys_scalar(const DerivativeParams& params, std::uint32_t begin, std::uint32_t end,
                            std::uint32_t* out);
void derivative_keys_avx2(const DerivativeParams& params, std::uint32_t begin, std::uint32_t end,
                          std::uint32_t* out);
void derivative_keys(const DerivativeParams& params, std::uint32_t begin, std::uint32_t end, std::uint32_t* out);

/// out[i] = in[i] * factor mod modulus, entries of kNoLog pass through.
/// Requires in[i] < modulus (or kNoLog), factor < modulus, modulus < 2^31.
void scale_logs_scalar(const std::uint32_t* in, std::size_t count, std::uint32_t factor, std::uint32_t modulus,
                       std::uint32_t* out);
void scale_logs_avx2(const std::uint32_t* in, std::size_t count, std::uint32_t factor, std::uint32_t modulus,
                     std::uint32_t* out);
void scale_logs(const std::uint32_t* in, std::size_t count, std::uint32_t factor, std::uint32_t modulus,
                std::uint32_t* out);

}  // namespace diffspec::kernels
