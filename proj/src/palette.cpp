#include "sckg/palette.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include <fmt/format.h>

#include "sckg/error.hpp"

namespace sckg {
namespace {

constexpr Rgb from_key(std::uint32_t key) {
  return Rgb{static_cast<std::uint8_t>(key >> 16), static_cast<std::uint8_t>(key >> 8),
             static_cast<std::uint8_t>(key)};
}

constexpr std::uint32_t to_key(Rgb c) {
  return (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b;
}

bool by_count_then_rgb(const ColorGroup& a, const ColorGroup& b) {
  if (a.pixel_count != b.pixel_count) return a.pixel_count > b.pixel_count;
  return a.representative < b.representative;
}

// Unbiased draw in [0, bound) from a generator whose output sequence is
// fixed by the standard, so samples do not depend on the standard library.
std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = gen();
  while (x >= limit) x = gen();
  return x % bound;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Image downscale_nearest(const Image& image, int max_dimension) {
  const int longest = std::max(image.width, image.height);
  if (max_dimension <= 0 || longest <= max_dimension) return image;
  const double scale = static_cast<double>(max_dimension) / longest;
  const int w = std::max(1, static_cast<int>(std::lround(image.width * scale)));
  const int h = std::max(1, static_cast<int>(std::lround(image.height * scale)));
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = static_cast<int>((static_cast<std::int64_t>(y) * image.height) / h);
    for (int x = 0; x < w; ++x) {
      const int sx = static_cast<int>((static_cast<std::int64_t>(x) * image.width) / w);
      std::copy_n(image.pixel(sx, sy), 4, out.pixel(x, y));
    }
  }
  return out;
}

std::vector<ColorGroup> color_histogram(const Image& image, const kernels::KernelTable& table) {
  std::vector<std::uint32_t> keys(image.pixel_count());
  table.pack_keys(image.rgba.data(), keys.size(), keys.data());
  std::sort(keys.begin(), keys.end());
  std::vector<ColorGroup> hist;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    if (keys[i] != kernels::kTransparentKey) {
      hist.push_back({from_key(keys[i]), static_cast<std::int64_t>(j - i)});
    }
    i = j;
  }
  std::sort(hist.begin(), hist.end(), by_count_then_rgb);
  return hist;
}

std::vector<ColorGroup> group_colors(const Image& image, int tolerance,
                                     const kernels::KernelTable& table) {
  // Beyond the RGB cube diagonal every colour is within reach.
  const int clamped = std::clamp(tolerance, 0, 442);
  const std::int32_t max_sq = clamped * clamped;

  std::vector<ColorGroup> groups;
  std::vector<std::int32_t> rs, gs, bs;
  for (const auto& color : color_histogram(image, table)) {
    const std::size_t hit =
        table.first_within(rs.data(), gs.data(), bs.data(), groups.size(), to_key(color.representative), max_sq);
    if (hit < groups.size()) {
      groups[hit].pixel_count += color.pixel_count;
      continue;
    }
    groups.push_back(color);
    rs.push_back(color.representative.r);
    gs.push_back(color.representative.g);
    bs.push_back(color.representative.b);
  }
  std::stable_sort(groups.begin(), groups.end(), by_count_then_rgb);
  return groups;
}

Palette extract_palette(const Image& image, const ExtractOptions& options,
                        const kernels::KernelTable& table) {
  if (image.pixel_count() == 0) throw Error(ErrorCode::kEmptyImage, "image has no pixels");
  if (options.k < 1) throw Error(ErrorCode::kConfig, "palette size must be at least 1");
  if (options.tolerance < 0) throw Error(ErrorCode::kConfig, "tolerance must be non-negative");
  const Image analysed = downscale_nearest(image, options.max_dimension);
  auto groups = group_colors(analysed, options.tolerance, table);

  Palette p;
  for (const auto& g : groups) p.total_pixels += g.pixel_count;
  if (p.total_pixels == 0) throw Error(ErrorCode::kEmptyImage, "image has no opaque pixels");
  const auto keep = std::min(groups.size(), static_cast<std::size_t>(options.k));
  for (std::size_t i = 0; i < keep; ++i) {
    p.swatches.push_back({groups[i].representative, groups[i].pixel_count,
                          100.0 * static_cast<double>(groups[i].pixel_count) /
                              static_cast<double>(p.total_pixels)});
  }
  return p;
}

std::vector<int> strip_segment_widths(const Palette& p, int width) {
  if (p.swatches.empty()) throw Error(ErrorCode::kNoSwatches, "palette has no swatches");
  std::int64_t total = 0;
  for (const auto& s : p.swatches) total += s.pixel_count;
  std::vector<int> widths;
  int used = 0;
  for (std::size_t i = 0; i + 1 < p.swatches.size(); ++i) {
    // round(width * count / total), half away from zero, in integers
    const std::int64_t num = 2 * static_cast<std::int64_t>(width) * p.swatches[i].pixel_count + total;
    int w = static_cast<int>(num / (2 * total));
    w = std::min(w, width - used);
    widths.push_back(w);
    used += w;
  }
  widths.push_back(width - used);
  return widths;
}

Image render_proportional_strip(const Palette& p, int width, int height) {
  if (p.swatches.empty()) throw Error(ErrorCode::kNoSwatches, "palette has no swatches");
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kConfig, fmt::format("strip size {}x{} is empty", width, height));
  }
  const auto widths = strip_segment_widths(p, width);
  Image out(width, height);
  int x0 = 0;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const Rgb c = p.swatches[i].rgb;
    for (int y = 0; y < height; ++y) {
      for (int x = x0; x < x0 + widths[i]; ++x) out.set(x, y, c.r, c.g, c.b);
    }
    x0 += widths[i];
  }
  return out;
}

Image render_palette_grid(std::span<const Palette> palettes, int width, int row_height, int gap) {
  const int n = static_cast<int>(palettes.size());
  const int height = n == 0 ? 1 : n * row_height + (n - 1) * gap;
  Image out(width, height);
  std::fill(out.rgba.begin(), out.rgba.end(), std::uint8_t{255});
  for (int i = 0; i < n; ++i) {
    const Image strip = render_proportional_strip(palettes[static_cast<std::size_t>(i)], width, row_height);
    const int y0 = i * (row_height + gap);
    for (int y = 0; y < row_height; ++y) {
      std::copy_n(strip.pixel(0, y), static_cast<std::size_t>(width) * 4, out.pixel(0, y0 + y));
    }
  }
  return out;
}

bool medium_matches(std::string_view medium, std::span<const std::string> keywords) {
  if (keywords.empty()) return true;
  const std::string m = lower(medium);
  for (const auto& keyword : keywords) {
    const std::string k = lower(keyword);
    if (k.empty()) continue;
    if (m.find(k) != std::string::npos) return true;
    if (k.size() > 3 && k.ends_with("ing") &&
        m.find(k.substr(0, k.size() - 3)) != std::string::npos) {
      return true;
    }
  }
  return false;
}

std::vector<ArtworkId> sample_concept_images(const ArtworkIndex& ix, const SocialConcept& c,
                                             std::size_t n, std::uint64_t seed,
                                             std::span<const std::string> medium_filter) {
  std::vector<ArtworkId> eligible;
  for (ArtworkId id : ix.tagged_with(c.tag_id)) {
    const Artwork* art = ix.find(id);
    if (!medium_matches(art->medium, medium_filter)) continue;
    std::error_code ec;
    if (!art->image_path || !std::filesystem::is_regular_file(*art->image_path, ec)) continue;
    eligible.push_back(id);
  }
  if (eligible.size() <= n) return eligible;

  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + bounded(gen, eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(n);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

}  // namespace sckg
