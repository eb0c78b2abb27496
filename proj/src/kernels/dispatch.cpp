#include <atomic>

#include "diffspec/kernels.hpp"

namespace diffspec::kernels {

namespace {

// -1: no override.
std::atomic<int> g_override{-1};

bool cpu_has_avx2()
{
#if defined(DIFFSPEC_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    static const bool has = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    return has;
#else
    return false;
#endif
}

}  // namespace

#if !defined(DIFFSPEC_HAVE_AVX2)
void derivative_keys_avx2(const DerivativeParams& params, std::uint32_t begin, std::uint32_t end,
                          std::uint32_t* out)
{
    derivative_keys_scalar(params, begin, end, out);
}

void scale_logs_avx2(const std::uint32_t* in, std::size_t count, std::uint32_t factor, std::uint32_t modulus,
                     std::uint32_t* out)
{
    scale_logs_scalar(in, count, factor, modulus, out);
}
#endif

const char* isa_name(Isa isa)
{
    switch (isa) {
    case Isa::Scalar:
        return "scalar";
    case Isa::Avx2:
        return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa)
{
    return isa == Isa::Scalar || (isa == Isa::Avx2 && cpu_has_avx2());
}

Isa detected_isa()
{
    return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

Isa active_isa()
{
    const int forced = g_override.load(std::memory_order_relaxed);
    if (forced >= 0) {
        const auto isa = static_cast<Isa>(forced);
        return isa_available(isa) ? isa : Isa::Scalar;
    }
    return detected_isa();
}

void set_isa_override(std::optional<Isa> isa)
{
    g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void derivative_keys(const DerivativeParams& params, std::uint32_t begin, std::uint32_t end, std::uint32_t* out)
{
    if (active_isa() == Isa::Avx2 && params.order <= kAvx2MaxModulus)
        derivative_keys_avx2(params, begin, end, out);
    else
        derivative_keys_scalar(params, begin, end, out);
}

void scale_logs(const std::uint32_t* in, std::size_t count, std::uint32_t factor, std::uint32_t modulus,
                std::uint32_t* out)
{
    if (active_isa() == Isa::Avx2 && modulus <= kAvx2MaxModulus)
        scale_logs_avx2(in, count, factor, modulus, out);
    else
        scale_logs_scalar(in, count, factor, modulus, out);
}

}  // namespace diffspec::kernels
