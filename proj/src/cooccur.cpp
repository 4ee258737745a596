#include "sckg/cooccur.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "sckg/error.hpp"

namespace sckg {
namespace {

CooccurrenceProfile count_profile(const ArtworkIndex& ix, const SocialConcept& c,
                                  const std::set<TagId>& excluded) {
  CooccurrenceProfile p;
  p.social_concept = c;
  const auto matches = ix.tagged_with(c.tag_id);
  p.n_matches = static_cast<std::int64_t>(matches.size());
  for (ArtworkId id : matches) {
    // tag_ids are unique per artwork, so each artwork adds at most one.
    for (TagId tag : ix.find(id)->tag_ids) {
      if (tag != c.tag_id && !excluded.contains(tag)) ++p.counts[tag];
    }
  }
  return p;
}

std::string tag_name(const Taxonomy& t, TagId id) {
  if (const auto* tag = t.find(id)) return tag->name;
  return fmt::format("#{}", to_int(id));
}

}  // namespace

CooccurrenceProfile cooccurrence_profile(const ArtworkIndex& ix, const SocialConcept& c) {
  return count_profile(ix, c, {});
}

CooccurrenceProfile cooccurrence_profile(const ArtworkIndex& ix, const SocialConcept& c,
                                         const Taxonomy& t, bool exclude_ancestors) {
  std::set<TagId> excluded;
  if (exclude_ancestors && t.contains(c.tag_id)) {
    for (const auto* tag = parent_of(t, c.tag_id); tag; tag = parent_of(t, tag->id)) {
      excluded.insert(tag->id);
    }
  }
  return count_profile(ix, c, excluded);
}

const char* to_string(TagClass cls) noexcept {
  switch (cls) {
    case TagClass::kPhysicalObject: return "object";
    case TagClass::kAction: return "action";
    case TagClass::kOther: return "other";
  }
  return "other";
}

std::string normalize_category_name(std::string_view name) {
  std::string collapsed;
  bool pending_space = false;
  for (const char c : name) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space && c != ':' && collapsed.back() != ':') collapsed += ' ';
    pending_space = false;
    collapsed += c;
  }
  return collapsed;
}

TagClassifier::TagClassifier(const Taxonomy& t, ClassifierRules rules) : taxonomy_(&t) {
  std::set<std::string> actions;
  for (const auto& name : rules.action_categories) actions.insert(normalize_category_name(name));
  std::set<std::string> people;
  for (const auto& name : rules.people_parents) people.insert(normalize_category_name(name));
  const std::string objects = normalize_category_name(rules.objects_root);
  const std::string nature = normalize_category_name(rules.nature);

  std::map<TagId, std::string> normalized;
  for (const auto& [id, tag] : t.tags()) normalized.emplace(id, normalize_category_name(tag.name));

  for (const auto& [id, tag] : t.tags()) {
    const SubjectTag* parent = parent_of(t, id);
    const SubjectTag* grandparent = parent ? parent_of(t, parent->id) : nullptr;

    bool action = false;
    bool under_objects = false;
    for (const SubjectTag* up : {parent, grandparent}) {
      if (!up) continue;
      const auto& n = normalized.at(up->id);
      if (actions.contains(n)) action = true;
      if (up->level == 0 && n == objects) under_objects = true;
    }
    const bool people_child = parent && people.contains(normalized.at(parent->id));
    const bool nature_line = (parent && normalized.at(parent->id) == nature) ||
                             (grandparent && normalized.at(grandparent->id) == nature);
    const bool object = under_objects || people_child || nature_line;

    TagClass cls = TagClass::kOther;
    if (action && (rules.actions_take_precedence || !object)) {
      cls = TagClass::kAction;
    } else if (object) {
      cls = TagClass::kPhysicalObject;
    }
    classes_.emplace(id, cls);
  }
}

TagClass TagClassifier::classify(TagId id) const {
  const auto it = classes_.find(id);
  if (it == classes_.end()) {
    throw Error(ErrorCode::kUnknownTag, fmt::format("no tag with id {}", to_int(id)));
  }
  return it->second;
}

TagClass TagClassifier::classify_or_other(TagId id) const {
  const auto it = classes_.find(id);
  return it == classes_.end() ? TagClass::kOther : it->second;
}

TagClass classify_tag(const Taxonomy& t, TagId id, const ClassifierRules& rules) {
  t.at(id);
  return TagClassifier(t, rules).classify(id);
}

CooccurrenceProfile filtered_profile(const CooccurrenceProfile& p, const TagClassifier& classifier,
                                     TagClass cls) {
  CooccurrenceProfile out;
  out.social_concept = p.social_concept;
  out.n_matches = p.n_matches;
  for (const auto& [tag, count] : p.counts) {
    if (classifier.classify_or_other(tag) == cls) out.counts.emplace(tag, count);
  }
  return out;
}

std::vector<TagCount> top_k(const CooccurrenceProfile& p, const Taxonomy& t, std::size_t k) {
  std::vector<TagCount> rows;
  rows.reserve(p.counts.size());
  for (const auto& [tag, count] : p.counts) rows.push_back({tag, tag_name(t, tag), count});
  const auto order = [](const TagCount& a, const TagCount& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.name != b.name) return a.name < b.name;
    return a.id < b.id;
  };
  const std::size_t n = std::min(k, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n), rows.end(), order);
  rows.resize(n);
  return rows;
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

ConceptStats concept_stats(const CooccurrenceProfile& p, const TagClassifier& classifier,
                           std::size_t k) {
  const auto& t = classifier.taxonomy();
  const auto objects = filtered_profile(p, classifier, TagClass::kPhysicalObject);
  const auto actions = filtered_profile(p, classifier, TagClass::kAction);

  ConceptStats s;
  s.name = p.social_concept.name;
  s.tag_id = p.social_concept.tag_id;
  s.n_matches = p.n_matches;
  s.n_co_tags = static_cast<std::int64_t>(p.counts.size());
  s.n_objects = static_cast<std::int64_t>(objects.counts.size());
  s.n_actions = static_cast<std::int64_t>(actions.counts.size());
  s.top_objects = top_k(objects, t, k);
  s.top_actions = top_k(actions, t, k);
  auto mean_count = [](const std::vector<TagCount>& rows) {
    std::vector<double> counts;
    for (const auto& row : rows) counts.push_back(static_cast<double>(row.count));
    return mean_of(counts);
  };
  s.freq_top_objects = mean_count(s.top_objects);
  s.freq_top_actions = mean_count(s.top_actions);
  return s;
}

SummaryStats summary_stats(std::span<const ConceptStats> all) {
  if (all.empty()) throw Error(ErrorCode::kEmptyInput, "no concept statistics to summarise");
  auto column = [&](auto field) {
    std::vector<double> values;
    values.reserve(all.size());
    for (const auto& s : all) values.push_back(static_cast<double>(field(s)));
    return ColumnSummary{mean_of(values), median_of(values)};
  };
  SummaryStats out;
  out.n_concepts = all.size();
  out.matches = column([](const ConceptStats& s) { return s.n_matches; });
  out.co_tags = column([](const ConceptStats& s) { return s.n_co_tags; });
  out.objects = column([](const ConceptStats& s) { return s.n_objects; });
  out.freq_top_objects = column([](const ConceptStats& s) { return s.freq_top_objects; });
  out.actions = column([](const ConceptStats& s) { return s.n_actions; });
  out.freq_top_actions = column([](const ConceptStats& s) { return s.freq_top_actions; });
  return out;
}

std::string export_wordcloud_data(const CooccurrenceProfile& p, const TagClassifier& classifier,
                                  TagClass cls, std::size_t n) {
  std::string out = "name\tcount\n";
  for (const auto& row : top_k(filtered_profile(p, classifier, cls), classifier.taxonomy(), n)) {
    out += fmt::format("{}\t{}\n", row.name, row.count);
  }
  return out;
}

}  // namespace sckg
