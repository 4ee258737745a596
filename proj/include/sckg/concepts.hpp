#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sckg/taxonomy.hpp"

namespace sckg {

/// A level-0 or level-1 tag given either by id or by exact name. Names that
/// match more than one tag are rejected; use the id instead.
using TagRef = std::variant<TagId, std::string>;

struct SelectionRule {
  TagRef area_root;
  /// When non-empty, replaces subtree enumeration under `area_root`.
  std::vector<TagId> include_ids;
  /// Removed from the whole result, whichever rule picked the tag.
  std::vector<TagId> exclude_ids;
};

struct SocialConcept {
  TagId tag_id{};
  std::string name;
  std::string area;         // level-0 ancestor
  std::string parent_name;  // level-1 parent

  friend bool operator==(const SocialConcept&, const SocialConcept&) = default;
};

/// Level-2 tags picked by `rules`, deduplicated, sorted by (area, name, id).
/// Throws UnresolvedRule or NonLeafInclude.
std::vector<SocialConcept> select_concepts(const Taxonomy& t, std::span<const SelectionRule> rules);

/// One row of a concept-list file.
struct ConceptListEntry {
  std::optional<TagId> tag_id;
  std::string name;
  std::string area;
};

/// Tab-separated concept list with a `tag_id  name  area` header. Either the
/// id or the name may be blank (not both); a blank area means "whatever the
/// tag's level-0 ancestor is". An optional fourth
/// column (parent name) is ignored. Lines starting with '#' are comments.
std::vector<ConceptListEntry> parse_concept_list(std::string_view text);

/// Turns list entries into one include-rule each, resolving names against `t`.
/// Throws UnresolvedRule for unknown, ambiguous, or inconsistent rows.
std::vector<SelectionRule> rules_from_concept_list(const Taxonomy& t,
                                                   std::span<const ConceptListEntry> entries);

std::string write_concept_list(std::span<const SocialConcept> concepts);

}  // namespace sckg
