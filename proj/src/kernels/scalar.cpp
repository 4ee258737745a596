#include "sckg/kernels.hpp"

namespace sckg::kernels {
namespace {

void pack_keys_scalar(const std::uint8_t* rgba, std::size_t n, std::uint32_t* keys) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = rgba + i * 4;
    const std::uint32_t a = p[3];
    if (a == 0) {
      keys[i] = kTransparentKey;
      continue;
    }
    std::uint32_t key = 0;
    for (int c = 0; c < 3; ++c) {
      const std::uint32_t v = (p[c] * a + 255u * (255u - a) + 127u) / 255u;
      key = (key << 8) | v;
    }
    keys[i] = key;
  }
}

std::size_t first_within_scalar(const std::int32_t* r, const std::int32_t* g,
                                const std::int32_t* b, std::size_t n, std::uint32_t key,
                                std::int32_t max_sq) {
  const auto cr = static_cast<std::int32_t>((key >> 16) & 0xFF);
  const auto cg = static_cast<std::int32_t>((key >> 8) & 0xFF);
  const auto cb = static_cast<std::int32_t>(key & 0xFF);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t dr = r[i] - cr;
    const std::int32_t dg = g[i] - cg;
    const std::int32_t db = b[i] - cb;
    if (dr * dr + dg * dg + db * db <= max_sq) return i;
  }
  return n;
}

constexpr KernelTable kScalar{Isa::kScalar, pack_keys_scalar, first_within_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace sckg::kernels
