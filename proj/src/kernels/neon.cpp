#include "sckg/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON) && !defined(SCKG_NO_SIMD)

#include <arm_neon.h>

namespace sckg::kernels {
namespace {

// x / 255 for 0 <= x < 65535, exact.
inline uint16x8_t div255_u16(uint16x8_t x) {
  return vshrq_n_u16(vaddq_u16(vaddq_u16(x, vdupq_n_u16(1)), vshrq_n_u16(x, 8)), 8);
}

inline uint8x8_t composite_u8(uint8x8_t c, uint8x8_t a) {
  const uint8x8_t inv = vsub_u8(vdup_n_u8(255), a);
  uint16x8_t x = vmull_u8(c, a);
  x = vmlal_u8(x, inv, vdup_n_u8(255));
  x = vaddq_u16(x, vdupq_n_u16(127));
  return vmovn_u16(div255_u16(x));
}

void pack_keys_neon(const std::uint8_t* rgba, std::size_t n, std::uint32_t* keys) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const uint8x8x4_t px = vld4_u8(rgba + i * 4);
    const uint8x8_t r = composite_u8(px.val[0], px.val[3]);
    const uint8x8_t g = composite_u8(px.val[1], px.val[3]);
    const uint8x8_t b = composite_u8(px.val[2], px.val[3]);
    // Interleave as B,G,R,0 bytes so each little-endian word is 0x00RRGGBB.
    uint8x8x4_t out;
    out.val[0] = b;
    out.val[1] = g;
    out.val[2] = r;
    out.val[3] = vdup_n_u8(0);
    std::uint32_t tmp[8];
    vst4_u8(reinterpret_cast<std::uint8_t*>(tmp), out);
    const uint8x8_t clear = vceq_u8(px.val[3], vdup_n_u8(0));
    std::uint8_t clear_bytes[8];
    vst1_u8(clear_bytes, clear);
    for (int j = 0; j < 8; ++j) keys[i + j] = clear_bytes[j] ? kTransparentKey : tmp[j];
  }
  if (i < n) scalar_table().pack_keys(rgba + i * 4, n - i, keys + i);
}

std::size_t first_within_neon(const std::int32_t* r, const std::int32_t* g, const std::int32_t* b,
                              std::size_t n, std::uint32_t key, std::int32_t max_sq) {
  const int32x4_t cr = vdupq_n_s32(static_cast<std::int32_t>((key >> 16) & 0xFF));
  const int32x4_t cg = vdupq_n_s32(static_cast<std::int32_t>((key >> 8) & 0xFF));
  const int32x4_t cb = vdupq_n_s32(static_cast<std::int32_t>(key & 0xFF));
  const int32x4_t limit = vdupq_n_s32(max_sq);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const int32x4_t dr = vsubq_s32(vld1q_s32(r + i), cr);
    const int32x4_t dg = vsubq_s32(vld1q_s32(g + i), cg);
    const int32x4_t db = vsubq_s32(vld1q_s32(b + i), cb);
    int32x4_t d = vmulq_s32(dr, dr);
    d = vmlaq_s32(d, dg, dg);
    d = vmlaq_s32(d, db, db);
    const uint32x4_t within = vcleq_s32(d, limit);
    if (vmaxvq_u32(within) != 0) {
      std::uint32_t lanes[4];
      vst1q_u32(lanes, within);
      for (std::size_t j = 0; j < 4; ++j) {
        if (lanes[j]) return i + j;
      }
    }
  }
  return i + scalar_table().first_within(r + i, g + i, b + i, n - i, key, max_sq);
}

constexpr KernelTable kNeon{Isa::kNeon, pack_keys_neon, first_within_neon};

}  // namespace

namespace detail {
const KernelTable* neon_table() noexcept { return &kNeon; }
}  // namespace detail

}  // namespace sckg::kernels

#else

namespace sckg::kernels::detail {
const KernelTable* neon_table() noexcept { return nullptr; }
}  // namespace sckg::kernels::detail

#endif
