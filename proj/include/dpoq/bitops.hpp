#pragma once

// Packed-bit word kernels: the inner loops under the GF(2) matrix routines,
// bit-vector folds/dot-products and sparse-state key updates.  Scalar
// reference implementations always exist; AVX2 (x86) and NEON (aarch64)
// variants are selected once at runtime and must be bit-identical to the
// scalar path (equivalence-tested).

#include <cstddef>
#include <cstdint>

namespace dpoq::bitops {

using Word = uint64_t;
inline constexpr size_t kWordBits = 64;

enum class Impl { Scalar, Avx2, Neon };

// ---- scalar reference kernels ----

inline void xor_words_scalar(Word *dst, const Word *src, size_t n) {
    for (size_t i = 0; i < n; ++i)
        dst[i] ^= src[i];
}

inline Word and_fold_scalar(const Word *a, const Word *b, size_t n) {
    Word acc = 0;
    for (size_t i = 0; i < n; ++i)
        acc ^= a[i] & b[i];
    return acc;
}

inline Word xor_fold_scalar(const Word *a, size_t n) {
    Word acc = 0;
    for (size_t i = 0; i < n; ++i)
        acc ^= a[i];
    return acc;
}

inline uint64_t popcount_scalar(const Word *a, size_t n) {
    uint64_t c = 0;
    for (size_t i = 0; i < n; ++i)
        c += static_cast<uint64_t>(__builtin_popcountll(a[i]));
    return c;
}

// ---- dispatch table ----

struct Kernels {
    void (*xor_words)(Word *, const Word *, size_t);
    Word (*and_fold)(const Word *, const Word *, size_t);
    Word (*xor_fold)(const Word *, size_t);
    uint64_t (*popcount)(const Word *, size_t);
    Impl impl;
};

const Kernels &kernels();                  // runtime-selected best variant
const Kernels &kernels_for(Impl impl);     // explicit variant (tests)
const char *impl_name(Impl impl);
bool impl_available(Impl impl);

// ---- public entry points ----

inline void xor_words(Word *dst, const Word *src, size_t n) { kernels().xor_words(dst, src, n); }
inline Word and_fold(const Word *a, const Word *b, size_t n) { return kernels().and_fold(a, b, n); }
inline Word xor_fold(const Word *a, size_t n) { return kernels().xor_fold(a, n); }
inline uint64_t popcount(const Word *a, size_t n) { return kernels().popcount(a, n); }

// parity of popcount(a & b): the GF(2) inner product of two packed vectors.
// Folding words with xor preserves total bit parity, so one final popcount
// suffices.
inline bool dot_parity(const Word *a, const Word *b, size_t n) {
    return (__builtin_popcountll(and_fold(a, b, n)) & 1) != 0;
}

inline bool parity(const Word *a, size_t n) {
    return (__builtin_popcountll(xor_fold(a, n)) & 1) != 0;
}

} // namespace dpoq::bitops
