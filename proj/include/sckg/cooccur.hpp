#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sckg/concepts.hpp"
#include "sckg/corpus.hpp"
#include "sckg/taxonomy.hpp"

namespace sckg {

/// Per-concept frequency table of co-occurring tags. The unit is the artwork:
/// a tag contributes at most one per matched artwork.
struct CooccurrenceProfile {
  SocialConcept social_concept;
  std::map<TagId, std::int64_t> counts;
  std::int64_t n_matches = 0;

  friend bool operator==(const CooccurrenceProfile&, const CooccurrenceProfile&) = default;
};

/// Counts every tag on the concept's matched artworks except the concept's
/// own tag. With `exclude_ancestors`, the concept's level-0/1 ancestors in `t`
/// are dropped too.
CooccurrenceProfile cooccurrence_profile(const ArtworkIndex& ix, const SocialConcept& c);
CooccurrenceProfile cooccurrence_profile(const ArtworkIndex& ix, const SocialConcept& c,
                                         const Taxonomy& t, bool exclude_ancestors);

enum class TagClass { kPhysicalObject, kAction, kOther };

const char* to_string(TagClass cls) noexcept;

/// Category names driving classification. Names are compared after
/// whitespace normalisation (runs collapsed, none around ':').
struct ClassifierRules {
  std::string objects_root = "objects";
  std::vector<std::string> people_parents = {"children", "adults", "nude"};
  std::string nature = "nature";
  std::vector<std::string> action_categories = {
      "actions: postures and motions", "actions: processes and functions",
      "actions: expressive", "animals: actions"};
  /// "animals: actions" lives under "nature", so both rules can fire.
  bool actions_take_precedence = true;
};

std::string normalize_category_name(std::string_view name);

/// Precomputes one class per taxonomy tag.
class TagClassifier {
 public:
  explicit TagClassifier(const Taxonomy& t, ClassifierRules rules = {});

  /// Throws UnknownTag.
  TagClass classify(TagId id) const;
  /// kOther for ids outside the taxonomy.
  TagClass classify_or_other(TagId id) const;

  const Taxonomy& taxonomy() const { return *taxonomy_; }

 private:
  const Taxonomy* taxonomy_;
  std::map<TagId, TagClass> classes_;
};

TagClass classify_tag(const Taxonomy& t, TagId id, const ClassifierRules& rules = {});

/// Restricts counts to tags of class `cls`; tags unknown to the taxonomy
/// count as kOther.
CooccurrenceProfile filtered_profile(const CooccurrenceProfile& p, const TagClassifier& classifier,
                                     TagClass cls);

struct TagCount {
  TagId id{};
  std::string name;
  std::int64_t count = 0;

  friend bool operator==(const TagCount&, const TagCount&) = default;
};

/// First k entries by (count desc, name asc, id asc). Tags unknown to `t`
/// are named "#<id>".
std::vector<TagCount> top_k(const CooccurrenceProfile& p, const Taxonomy& t, std::size_t k);

struct ConceptStats {
  std::string name;
  TagId tag_id{};
  std::int64_t n_matches = 0;
  std::int64_t n_co_tags = 0;
  std::int64_t n_objects = 0;
  std::int64_t n_actions = 0;
  double freq_top_objects = 0.0;
  double freq_top_actions = 0.0;
  std::vector<TagCount> top_objects;
  std::vector<TagCount> top_actions;
};

double mean_of(std::span<const double> values);
/// Even-length input gives the mean of the two middle values.
double median_of(std::vector<double> values);

ConceptStats concept_stats(const CooccurrenceProfile& p, const TagClassifier& classifier,
                           std::size_t k = 10);

struct ColumnSummary {
  double mean = 0.0;
  double median = 0.0;
};

struct SummaryStats {
  std::size_t n_concepts = 0;
  ColumnSummary matches;
  ColumnSummary co_tags;
  ColumnSummary objects;
  ColumnSummary freq_top_objects;
  ColumnSummary actions;
  ColumnSummary freq_top_actions;
};

/// Throws EmptyInput.
SummaryStats summary_stats(std::span<const ConceptStats> all);

/// `name<TAB>count` rows (with header) for the top-n tags of one class.
std::string export_wordcloud_data(const CooccurrenceProfile& p, const TagClassifier& classifier,
                                  TagClass cls, std::size_t n);

}  // namespace sckg
