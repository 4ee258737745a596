#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sckg/concepts.hpp"
#include "sckg/taxonomy.hpp"

namespace sckg {

enum class ArtworkId : std::int64_t {};

constexpr std::int64_t to_int(ArtworkId id) noexcept { return static_cast<std::int64_t>(id); }

struct Artwork {
  ArtworkId id{};
  std::string accession;
  std::string title;
  std::string artist;
  std::optional<std::string> date;
  std::string medium;
  std::vector<TagId> tag_ids;  // sorted, unique
  std::optional<std::filesystem::path> image_path;

  friend bool operator==(const Artwork&, const Artwork&) = default;
};

/// Inverted index tag -> artworks. Immutable after construction.
class ArtworkIndex {
 public:
  ArtworkIndex() = default;

  /// Later duplicates of an id are dropped; `dropped` (when given) receives
  /// their ids.
  static ArtworkIndex build(std::vector<Artwork> artworks,
                            std::vector<ArtworkId>* dropped = nullptr);

  const std::map<ArtworkId, Artwork>& artworks() const { return artworks_; }
  const Artwork* find(ArtworkId id) const;
  std::size_t size() const { return artworks_.size(); }

  /// Ascending, duplicate-free; empty when the tag indexes nothing.
  std::span<const ArtworkId> tagged_with(TagId tag) const;
  const std::map<TagId, std::vector<ArtworkId>>& by_tag() const { return by_tag_; }

  friend bool operator==(const ArtworkIndex&, const ArtworkIndex&) = default;

 private:
  std::map<ArtworkId, Artwork> artworks_;
  std::map<TagId, std::vector<ArtworkId>> by_tag_;
};

struct IngestReport {
  std::size_t files_read = 0;
  std::size_t records_read = 0;
  /// (file, message) for every file or record that could not be used.
  std::vector<std::pair<std::string, std::string>> errors;
  /// Tag ids referenced by records but absent from the taxonomy.
  std::set<TagId> unknown_tag_ids;
  std::size_t records_with_unknown_tags = 0;
  std::vector<ArtworkId> duplicate_ids;

  bool empty() const {
    return errors.empty() && unknown_tag_ids.empty() && duplicate_ids.empty();
  }
};

struct IngestResult {
  ArtworkIndex index;
  IngestReport report;
};

/// Reads every `*.json` / `*.jsonl` file under `root` (or `root` itself when
/// it is a file). A `.json` file holds one record object or an array of
/// records; `.jsonl` holds one record per line. Records may use the
/// collection layout (`subjects` tree, `contributors`, `dateText`) or the flat
/// layout (`tag_ids`, `artist`, `date`). Throws UnreadableRoot; everything
/// else lands in the report.
IngestResult ingest_corpus(const std::filesystem::path& root, const Taxonomy& t);

/// Exactly the artworks explicitly tagged with the concept's own tag.
std::vector<ArtworkId> match_concept(const ArtworkIndex& ix, const SocialConcept& c);

std::string format_ingest_report(const IngestReport& report);

}  // namespace sckg
