#include "dpoq/bitops.hpp"

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define DPOQ_X86 1
#include <immintrin.h>
#else
#define DPOQ_X86 0
#endif

#if defined(__aarch64__) || defined(__ARM_NEON) || defined(__ARM_NEON__)
#define DPOQ_NEON 1
#include <arm_neon.h>
#else
#define DPOQ_NEON 0
#endif

namespace dpoq::bitops {

#if DPOQ_X86

__attribute__((target("avx2"))) static void xor_words_avx2(Word *dst, const Word *src, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(dst + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i *>(dst + i), _mm256_xor_si256(d, s));
    }
    for (; i < n; ++i)
        dst[i] ^= src[i];
}

__attribute__((target("avx2"))) static Word and_fold_avx2(const Word *a, const Word *b, size_t n) {
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(b + i));
        acc = _mm256_xor_si256(acc, _mm256_and_si256(va, vb));
    }
    alignas(32) Word lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i *>(lanes), acc);
    Word r = lanes[0] ^ lanes[1] ^ lanes[2] ^ lanes[3];
    for (; i < n; ++i)
        r ^= a[i] & b[i];
    return r;
}

__attribute__((target("avx2"))) static Word xor_fold_avx2(const Word *a, size_t n) {
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_xor_si256(acc, _mm256_loadu_si256(reinterpret_cast<const __m256i *>(a + i)));
    alignas(32) Word lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i *>(lanes), acc);
    Word r = lanes[0] ^ lanes[1] ^ lanes[2] ^ lanes[3];
    for (; i < n; ++i)
        r ^= a[i];
    return r;
}

__attribute__((target("avx2"))) static uint64_t popcount_avx2(const Word *a, size_t n) {
    // POPCNT on scalar words; the loads vectorize, the count does not need to.
    uint64_t c = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        c += static_cast<uint64_t>(__builtin_popcountll(a[i]));
        c += static_cast<uint64_t>(__builtin_popcountll(a[i + 1]));
        c += static_cast<uint64_t>(__builtin_popcountll(a[i + 2]));
        c += static_cast<uint64_t>(__builtin_popcountll(a[i + 3]));
    }
    for (; i < n; ++i)
        c += static_cast<uint64_t>(__builtin_popcountll(a[i]));
    return c;
}

#endif // DPOQ_X86

#if DPOQ_NEON

static void xor_words_neon(Word *dst, const Word *src, size_t n) {
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint64x2_t d = vld1q_u64(dst + i);
        uint64x2_t s = vld1q_u64(src + i);
        vst1q_u64(dst + i, veorq_u64(d, s));
    }
    for (; i < n; ++i)
        dst[i] ^= src[i];
}

static Word and_fold_neon(const Word *a, const Word *b, size_t n) {
    uint64x2_t acc = vdupq_n_u64(0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = veorq_u64(acc, vandq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
    Word r = vgetq_lane_u64(acc, 0) ^ vgetq_lane_u64(acc, 1);
    for (; i < n; ++i)
        r ^= a[i] & b[i];
    return r;
}

static Word xor_fold_neon(const Word *a, size_t n) {
    uint64x2_t acc = vdupq_n_u64(0);
    size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = veorq_u64(acc, vld1q_u64(a + i));
    Word r = vgetq_lane_u64(acc, 0) ^ vgetq_lane_u64(acc, 1);
    for (; i < n; ++i)
        r ^= a[i];
    return r;
}

static uint64_t popcount_neon(const Word *a, size_t n) {
    uint64_t c = 0;
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint8x16_t bytes = vreinterpretq_u8_u64(vld1q_u64(a + i));
        c += vaddvq_u8(vcntq_u8(bytes));
    }
    for (; i < n; ++i)
        c += static_cast<uint64_t>(__builtin_popcountll(a[i]));
    return c;
}

#endif // DPOQ_NEON

static const Kernels kScalar{xor_words_scalar, and_fold_scalar, xor_fold_scalar, popcount_scalar,
                             Impl::Scalar};

#if DPOQ_X86
static const Kernels kAvx2{xor_words_avx2, and_fold_avx2, xor_fold_avx2, popcount_avx2, Impl::Avx2};
#endif
#if DPOQ_NEON
static const Kernels kNeon{xor_words_neon, and_fold_neon, xor_fold_neon, popcount_neon, Impl::Neon};
#endif

bool impl_available(Impl impl) {
    switch (impl) {
    case Impl::Scalar:
        return true;
    case Impl::Avx2:
#if DPOQ_X86
        return __builtin_cpu_supports("avx2") != 0;
#else
        return false;
#endif
    case Impl::Neon:
#if DPOQ_NEON
        return true;
#else
        return false;
#endif
    }
    return false;
}

const Kernels &kernels_for(Impl impl) {
#if DPOQ_X86
    if (impl == Impl::Avx2)
        return kAvx2;
#endif
#if DPOQ_NEON
    if (impl == Impl::Neon)
        return kNeon;
#endif
    (void)impl;
    return kScalar;
}

static const Kernels *select() {
#if DPOQ_X86
    if (__builtin_cpu_supports("avx2"))
        return &kAvx2;
#endif
#if DPOQ_NEON
    return &kNeon;
#endif
    return &kScalar;
}

const Kernels &kernels() {
    static const Kernels *chosen = select();
    return *chosen;
}

const char *impl_name(Impl impl) {
    switch (impl) {
    case Impl::Scalar:
        return "scalar";
    case Impl::Avx2:
        return "avx2";
    case Impl::Neon:
        return "neon";
    }
    return "?";
}

} // namespace dpoq::bitops
