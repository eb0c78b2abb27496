#include "diffspec/kernels.hpp"

namespace diffspec::kernels {

void derivative_keys_scalar(const DerivativeParams& params, std::uint32_t begin, std::uint32_t end,
                            std::uint32_t* out)
{
    const std::uint64_t N = params.order;
    const std::uint64_t e = params.exponent;
    for (std::uint32_t i = begin; i < end; ++i) {
        const std::uint32_t z = params.zech_plus[i];
        if (z == kNoLog) {
            *out++ = params.key_minus_one;
            continue;
        }
        // (x+1)^e - x^e = a^{L1} (1 - a^{L0 - L1})
        const std::uint64_t l0 = e * i % N;
        const std::uint64_t l1 = e * z % N;
        const std::uint64_t k = l0 >= l1 ? l0 - l1 : l0 + N - l1;
        std::uint64_t idx = k + params.half_log;
        if (idx >= N)
            idx -= N;
        const std::uint32_t zm = params.zech_plus[idx];
        if (zm == kNoLog) {
            *out++ = params.order;
            continue;
        }
        std::uint64_t key = l1 + zm;
        if (key >= N)
            key -= N;
        *out++ = static_cast<std::uint32_t>(key);
    }
}

void scale_logs_scalar(const std::uint32_t* in, std::size_t count, std::uint32_t factor, std::uint32_t modulus,
                       std::uint32_t* out)
{
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t v = in[i];
        out[i] = v == kNoLog ? kNoLog : static_cast<std::uint32_t>(std::uint64_t{v} * factor % modulus);
    }
}

}  // namespace diffspec::kernels
