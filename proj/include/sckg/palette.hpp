#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sckg/concepts.hpp"
#include "sckg/corpus.hpp"
#include "sckg/image.hpp"
#include "sckg/kernels.hpp"

namespace sckg {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  auto operator<=>(const Rgb&) const = default;
};

struct Swatch {
  Rgb rgb;
  std::int64_t pixel_count = 0;
  double percentage = 0.0;  // of the analysed (downscaled, opaque) pixels

  friend bool operator==(const Swatch&, const Swatch&) = default;
};

struct Palette {
  std::string image_ref;
  std::vector<Swatch> swatches;  // (pixel_count desc, rgb asc)
  std::int64_t total_pixels = 0;

  friend bool operator==(const Palette&, const Palette&) = default;
};

/// One merged colour group: the founding colour and the pixels it absorbed.
struct ColorGroup {
  Rgb representative;
  std::int64_t pixel_count = 0;

  friend bool operator==(const ColorGroup&, const ColorGroup&) = default;
};

struct ExtractOptions {
  int tolerance = 32;       // Euclidean RGB distance
  int k = 5;
  int max_dimension = 256;  // nearest-neighbour downscale bound; 0 disables
};

/// Nearest-neighbour resize so that max(width, height) <= max_dimension.
Image downscale_nearest(const Image& image, int max_dimension);

/// Exact-colour histogram of the opaque pixels, as (colour, count) sorted by
/// count desc then colour asc.
std::vector<ColorGroup> color_histogram(const Image& image,
                                        const kernels::KernelTable& table = kernels::active_table());

/// Greedy first-fit merge of the histogram in descending frequency order.
/// Returns every group (no truncation), sorted by (pixel_count desc, rgb asc).
/// No downscaling happens here.
std::vector<ColorGroup> group_colors(const Image& image, int tolerance,
                                     const kernels::KernelTable& table = kernels::active_table());

/// Downscale, group, keep the top k. Throws EmptyImage when the raster has
/// no pixels or none is opaque.
Palette extract_palette(const Image& image, const ExtractOptions& options = {},
                        const kernels::KernelTable& table = kernels::active_table());

/// Horizontal strip; segment widths proportional to pixel counts, the last
/// segment absorbing the rounding remainder. Throws NoSwatches.
Image render_proportional_strip(const Palette& p, int width, int height);

/// The widths used by render_proportional_strip.
std::vector<int> strip_segment_widths(const Palette& p, int width);

/// Strips stacked vertically with `gap` white rows between them.
Image render_palette_grid(std::span<const Palette> palettes, int width, int row_height, int gap);

/// Case-insensitive substring match against any keyword; a keyword ending in
/// "ing" also matches its stem ("painting" matches "Oil paint on canvas").
/// An empty keyword list matches everything.
bool medium_matches(std::string_view medium, std::span<const std::string> keywords);

/// Seeded uniform sample without replacement of matched artworks whose
/// medium passes the filter and whose image file exists. Returns all eligible
/// ids (ascending) when fewer than n; the sample itself is also ascending.
std::vector<ArtworkId> sample_concept_images(const ArtworkIndex& ix, const SocialConcept& c,
                                             std::size_t n, std::uint64_t seed,
                                             std::span<const std::string> medium_filter);

}  // namespace sckg
