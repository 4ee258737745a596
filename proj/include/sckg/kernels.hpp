#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

// Inner loops of palette extraction. Each kernel exists as a scalar
// reference and as vector variants (AVX2 on x86-64, NEON on AArch64); the
// variants must be bit-identical to the reference.

namespace sckg::kernels {

/// Key written for fully transparent pixels. Real keys are 0xRRGGBB.
inline constexpr std::uint32_t kTransparentKey = 0x01000000u;

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa) noexcept;

/// Converts `n` RGBA pixels to 0xRRGGBB keys. Partial alpha is composited
/// over white as (c*a + 255*(255-a) + 127) / 255; alpha 0 yields
/// kTransparentKey.
using PackKeysFn = void (*)(const std::uint8_t* rgba, std::size_t n, std::uint32_t* keys);

/// Index of the first representative (structure-of-arrays r/g/b) whose
/// squared RGB distance to `key` is <= `max_sq`, or `n` when none is.
using FirstWithinFn = std::size_t (*)(const std::int32_t* r, const std::int32_t* g,
                                      const std::int32_t* b, std::size_t n, std::uint32_t key,
                                      std::int32_t max_sq);

struct KernelTable {
  Isa isa;
  PackKeysFn pack_keys;
  FirstWithinFn first_within;
};

const KernelTable& scalar_table() noexcept;

/// Every variant compiled in and supported by the running CPU; the scalar
/// reference comes first.
std::vector<const KernelTable*> available_tables();

/// Best supported variant, unless SCKG_KERNELS=scalar is set in the
/// environment.
const KernelTable& active_table();

namespace detail {
const KernelTable* avx2_table() noexcept;  // nullptr when not compiled in
const KernelTable* neon_table() noexcept;  // nullptr when not compiled in
}  // namespace detail

}  // namespace sckg::kernels
