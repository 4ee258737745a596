#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sckg {

/// Collection-assigned subject tag identifier. Identity is always the id,
/// never the display name.
enum class TagId : std::int64_t {};

constexpr std::int64_t to_int(TagId id) noexcept { return static_cast<std::int64_t>(id); }

inline constexpr int kMaxLevel = 2;

struct SubjectTag {
  TagId id{};
  std::string name;
  int level = 0;  // 0 = broadest, 2 = narrowest
  std::optional<TagId> parent_id;

  friend bool operator==(const SubjectTag&, const SubjectTag&) = default;
};

/// Validated three-level subject tree. Immutable once built.
///
/// Invariants: level 0 iff no parent; level(child) = level(parent) + 1;
/// parent links and child lists agree; child lists and roots are sorted by
/// (name, id).
class Taxonomy {
 public:
  Taxonomy() = default;

  /// Builds a taxonomy from parent-linked records. The `level` field of the
  /// input is ignored and recomputed from the parent chain.
  ///
  /// Throws DuplicateId, OrphanTag, CycleDetected, DepthViolation, or
  /// MalformedDocument (empty name).
  static Taxonomy from_records(std::vector<SubjectTag> records);

  bool contains(TagId id) const { return tags_.contains(id); }
  const SubjectTag* find(TagId id) const;
  /// Throws UnknownTag.
  const SubjectTag& at(TagId id) const;

  std::span<const TagId> roots() const { return roots_; }
  /// Throws UnknownTag.
  std::span<const TagId> children(TagId id) const;

  const std::map<TagId, SubjectTag>& tags() const { return tags_; }
  std::size_t size() const { return tags_.size(); }
  std::array<std::size_t, kMaxLevel + 1> level_counts() const;

  /// All tags carrying exactly this name (byte-exact), ascending by id.
  std::vector<TagId> find_by_name(std::string_view name) const;

  /// True when `ancestor` lies strictly above `id`.
  bool is_strict_descendant(TagId id, TagId ancestor) const;

  friend bool operator==(const Taxonomy& a, const Taxonomy& b) {
    return a.tags_ == b.tags_ && a.children_ == b.children_ && a.roots_ == b.roots_;
  }

 private:
  std::map<TagId, SubjectTag> tags_;
  std::map<TagId, std::vector<TagId>> children_;
  std::vector<TagId> roots_;
  std::multimap<std::string, TagId, std::less<>> by_name_;
};

/// Parses either the nested JSON layout (records with `id`, `name`,
/// `children`) or the flat tab-separated layout (`id`, `name`, `parent_id`).
/// The first non-blank character selects the form: `{` or `[` means nested.
Taxonomy parse_taxonomy(std::string_view source);
/// `path` may also be a directory: every *.json below it (taxonomy documents
/// or artwork records carrying a `subjects` tree) is merged. Tags repeated
/// across files must agree.
Taxonomy load_taxonomy(const std::filesystem::path& path);

/// Canonical nested-JSON write-out; parse_taxonomy(write_taxonomy(t)) == t.
std::string write_taxonomy(const Taxonomy& t);

const SubjectTag* parent_of(const Taxonomy& t, TagId id);
const SubjectTag* grandparent_of(const Taxonomy& t, TagId id);
std::set<TagId> descendants_of(const Taxonomy& t, TagId id);

}  // namespace sckg
