// Compiled with -mavx2. Nothing here may run unless the CPU reports AVX2;
// dispatch.cpp is the only caller.

#include <immintrin.h>

#include "diffspec/kernels.hpp"

namespace diffspec::kernels {

namespace {

struct MulModConsts {
    __m256d factor;
    __m256d modulus;
    __m256d inv_modulus;
};

MulModConsts make_consts(std::uint32_t factor, std::uint32_t modulus)
{
    return {_mm256_set1_pd(static_cast<double>(factor)), _mm256_set1_pd(static_cast<double>(modulus)),
            _mm256_set1_pd(1.0 / static_cast<double>(modulus))};
}

// Four lanes of a * factor mod modulus. Exact while a * factor < 2^53, which
// holds for moduli up to kAvx2MaxModulus; larger ones are routed to scalar. The
// reciprocal quotient may be off by one either way; r is fixed up below.
inline __m128i mulmod4(__m128i a, const MulModConsts& c)
{
    const __m256d x = _mm256_cvtepi32_pd(a);
    const __m256d prod = _mm256_mul_pd(x, c.factor);
    const __m256d quot = _mm256_floor_pd(_mm256_mul_pd(prod, c.inv_modulus));
    __m256d r = _mm256_sub_pd(prod, _mm256_mul_pd(quot, c.modulus));
    r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_LT_OQ), c.modulus));
    r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, c.modulus, _CMP_GE_OQ), c.modulus));
    return _mm256_cvttpd_epi32(r);
}

inline __m256i mulmod8(__m256i a, const MulModConsts& c)
{
    const __m128i lo = mulmod4(_mm256_castsi256_si128(a), c);
    const __m128i hi = mulmod4(_mm256_extracti128_si256(a, 1), c);
    return _mm256_set_m128i(hi, lo);
}

// v - N where v >= N; v is known to be below 2N.
inline __m256i reduce_once(__m256i v, __m256i n, __m256i n_minus_one)
{
    return _mm256_sub_epi32(v, _mm256_and_si256(_mm256_cmpgt_epi32(v, n_minus_one), n));
}

}  // namespace

void derivative_keys_avx2(const DerivativeParams& params, std::uint32_t begin, std::uint32_t end,
                          std::uint32_t* out)
{
    const std::uint32_t N = params.order;
    if (N < 8 || N > kAvx2MaxModulus || end - begin < 8) {
        derivative_keys_scalar(params, begin, end, out);
        return;
    }
    const auto* zech = reinterpret_cast<const int*>(params.zech_plus);
    const MulModConsts consts = make_consts(params.exponent, N);
    const __m256i vn = _mm256_set1_epi32(static_cast<int>(N));
    const __m256i vn1 = _mm256_set1_epi32(static_cast<int>(N - 1));
    const __m256i vhalf = _mm256_set1_epi32(static_cast<int>(params.half_log));
    const __m256i vnone = _mm256_set1_epi32(static_cast<int>(kNoLog));
    const __m256i vkey_m1 = _mm256_set1_epi32(static_cast<int>(params.key_minus_one));
    const __m256i zero = _mm256_setzero_si256();
    const __m256i eight = _mm256_set1_epi32(8);

    // e*i mod N advances by 8e mod N per iteration.
    alignas(32) std::uint32_t l0_init[8];
    for (std::uint32_t lane = 0; lane < 8; ++lane)
        l0_init[lane] = static_cast<std::uint32_t>(std::uint64_t{params.exponent} * (begin + lane) % N);
    __m256i l0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(l0_init));
    const __m256i step = _mm256_set1_epi32(static_cast<int>(std::uint64_t{params.exponent} * 8 % N));
    __m256i iv = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(begin)), _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7));

    std::uint32_t i = begin;
    for (; end - i >= 8; i += 8) {
        const __m256i z = _mm256_i32gather_epi32(zech, iv, 4);
        const __m256i none = _mm256_cmpeq_epi32(z, vnone);
        const __m256i l1 = mulmod8(_mm256_andnot_si256(none, z), consts);

        __m256i k = _mm256_sub_epi32(l0, l1);
        k = _mm256_add_epi32(k, _mm256_and_si256(_mm256_cmpgt_epi32(zero, k), vn));
        const __m256i idx = reduce_once(_mm256_add_epi32(k, vhalf), vn, vn1);
        const __m256i zm = _mm256_i32gather_epi32(zech, idx, 4);
        const __m256i diff_zero = _mm256_cmpeq_epi32(zm, vnone);

        __m256i key = reduce_once(_mm256_add_epi32(l1, zm), vn, vn1);
        key = _mm256_blendv_epi8(key, vn, diff_zero);
        key = _mm256_blendv_epi8(key, vkey_m1, none);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out), key);
        out += 8;

        l0 = reduce_once(_mm256_add_epi32(l0, step), vn, vn1);
        iv = _mm256_add_epi32(iv, eight);
    }
    derivative_keys_scalar(params, i, end, out);
}

void scale_logs_avx2(const std::uint32_t* in, std::size_t count, std::uint32_t factor, std::uint32_t modulus,
                     std::uint32_t* out)
{
    if (modulus > kAvx2MaxModulus) {
        scale_logs_scalar(in, count, factor, modulus, out);
        return;
    }
    const MulModConsts consts = make_consts(factor, modulus);
    const __m256i vnone = _mm256_set1_epi32(static_cast<int>(kNoLog));
    std::size_t i = 0;
    for (; i + 8 <= count; i += 8) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
        const __m256i none = _mm256_cmpeq_epi32(v, vnone);
        const __m256i r = mulmod8(_mm256_andnot_si256(none, v), consts);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_blendv_epi8(r, vnone, none));
    }
    scale_logs_scalar(in + i, count - i, factor, modulus, out + i);
}

}  // namespace diffspec::kernels
