#include <cstdlib>
#include <string_view>

#include "sckg/kernels.hpp"

namespace sckg::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (const auto* avx2 = detail::avx2_table(); avx2 && cpu_has_avx2()) tables.push_back(avx2);
  // NEON is architecturally mandatory on AArch64.
  if (const auto* neon = detail::neon_table()) tables.push_back(neon);
  return tables;
}

const KernelTable& active_table() {
  static const KernelTable& chosen = [&]() -> const KernelTable& {
    const char* forced = std::getenv("SCKG_KERNELS");
    if (forced && std::string_view(forced) == "scalar") return scalar_table();
    return *available_tables().back();
  }();
  return chosen;
}

}  // namespace sckg::kernels
