// Compiled with -mavx2; only entered after a runtime CPU check.
#include "sckg/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

namespace sckg::kernels {
namespace {

// x / 255 for 0 <= x < 65535, exact, in 16-bit lanes.
inline __m256i div255_epu16(__m256i x) {
  const __m256i one = _mm256_set1_epi16(1);
  return _mm256_srli_epi16(_mm256_add_epi16(_mm256_add_epi16(x, one), _mm256_srli_epi16(x, 8)), 8);
}

inline __m256i composite_epu16(__m256i c, __m256i a) {
  const __m256i k255 = _mm256_set1_epi16(255);
  const __m256i k127 = _mm256_set1_epi16(127);
  __m256i x = _mm256_mullo_epi16(c, a);
  x = _mm256_add_epi16(x, _mm256_mullo_epi16(_mm256_sub_epi16(k255, a), k255));
  x = _mm256_add_epi16(x, k127);
  return div255_epu16(x);
}

void pack_keys_avx2(const std::uint8_t* rgba, std::size_t n, std::uint32_t* keys) {
  const __m256i zero = _mm256_setzero_si256();
  // Broadcast each pixel's alpha byte over its four bytes.
  const __m256i alpha_shuffle = _mm256_setr_epi8(3, 3, 3, 3, 7, 7, 7, 7, 11, 11, 11, 11, 15, 15,
                                                 15, 15, 3, 3, 3, 3, 7, 7, 7, 7, 11, 11, 11, 11,
                                                 15, 15, 15, 15);
  // R,G,B,A bytes -> B,G,R,0 so the little-endian word reads 0x00RRGGBB.
  const __m256i key_shuffle = _mm256_setr_epi8(2, 1, 0, -1, 6, 5, 4, -1, 10, 9, 8, -1, 14, 13, 12,
                                               -1, 2, 1, 0, -1, 6, 5, 4, -1, 10, 9, 8, -1, 14, 13,
                                               12, -1);
  const __m256i transparent = _mm256_set1_epi32(static_cast<int>(kTransparentKey));

  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i px = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rgba + i * 4));
    const __m256i alpha = _mm256_shuffle_epi8(px, alpha_shuffle);
    const __m256i lo = composite_epu16(_mm256_unpacklo_epi8(px, zero),
                                       _mm256_unpacklo_epi8(alpha, zero));
    const __m256i hi = composite_epu16(_mm256_unpackhi_epi8(px, zero),
                                       _mm256_unpackhi_epi8(alpha, zero));
    const __m256i blended = _mm256_packus_epi16(lo, hi);
    __m256i key = _mm256_shuffle_epi8(blended, key_shuffle);
    const __m256i clear = _mm256_cmpeq_epi32(_mm256_srli_epi32(px, 24), zero);
    key = _mm256_blendv_epi8(key, transparent, clear);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(keys + i), key);
  }
  if (i < n) scalar_table().pack_keys(rgba + i * 4, n - i, keys + i);
}

std::size_t first_within_avx2(const std::int32_t* r, const std::int32_t* g, const std::int32_t* b,
                              std::size_t n, std::uint32_t key, std::int32_t max_sq) {
  const __m256i cr = _mm256_set1_epi32(static_cast<int>((key >> 16) & 0xFF));
  const __m256i cg = _mm256_set1_epi32(static_cast<int>((key >> 8) & 0xFF));
  const __m256i cb = _mm256_set1_epi32(static_cast<int>(key & 0xFF));
  const __m256i limit = _mm256_set1_epi32(max_sq);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i dr = _mm256_sub_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(r + i)), cr);
    const __m256i dg = _mm256_sub_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(g + i)), cg);
    const __m256i db = _mm256_sub_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)), cb);
    __m256i d = _mm256_mullo_epi32(dr, dr);
    d = _mm256_add_epi32(d, _mm256_mullo_epi32(dg, dg));
    d = _mm256_add_epi32(d, _mm256_mullo_epi32(db, db));
    // d <= limit  <=>  !(d > limit)
    const __m256i over = _mm256_cmpgt_epi32(d, limit);
    const int mask = ~_mm256_movemask_ps(_mm256_castsi256_ps(over)) & 0xFF;
    if (mask != 0) return i + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(mask)));
  }
  const std::size_t rest = scalar_table().first_within(r + i, g + i, b + i, n - i, key, max_sq);
  return i + rest;
}

constexpr KernelTable kAvx2{Isa::kAvx2, pack_keys_avx2, first_within_avx2};

}  // namespace

namespace detail {
const KernelTable* avx2_table() noexcept { return &kAvx2; }
}  // namespace detail

}  // namespace sckg::kernels

#else

namespace sckg::kernels::detail {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace sckg::kernels::detail

#endif
