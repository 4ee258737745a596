#include "sckg/concepts.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include <fmt/format.h>

#include "sckg/error.hpp"

namespace sckg {
namespace {

std::string describe(const TagRef& ref) {
  if (const auto* id = std::get_if<TagId>(&ref)) return fmt::format("id {}", to_int(*id));
  return fmt::format("\"{}\"", std::get<std::string>(ref));
}

TagId resolve_area(const Taxonomy& t, const TagRef& ref) {
  if (const auto* id = std::get_if<TagId>(&ref)) {
    const auto* tag = t.find(*id);
    if (!tag) {
      throw Error(ErrorCode::kUnresolvedRule, fmt::format("area root {} is not in the taxonomy",
                                                          describe(ref)));
    }
    if (tag->level > 1) {
      throw Error(ErrorCode::kUnresolvedRule,
                  fmt::format("area root {} is a level-{} tag; expected level 0 or 1",
                              describe(ref), tag->level));
    }
    return *id;
  }
  std::vector<TagId> candidates;
  for (TagId id : t.find_by_name(std::get<std::string>(ref))) {
    if (t.at(id).level <= 1) candidates.push_back(id);
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::kUnresolvedRule,
                fmt::format("no level-0/1 tag named {}", describe(ref)));
  }
  if (candidates.size() > 1) {
    throw Error(ErrorCode::kUnresolvedRule,
                fmt::format("area name {} is ambiguous ({} tags); give the id instead",
                            describe(ref), candidates.size()));
  }
  return candidates.front();
}

const SubjectTag& require_leaf(const Taxonomy& t, TagId id, std::string_view list) {
  const auto* tag = t.find(id);
  if (!tag) {
    throw Error(ErrorCode::kUnresolvedRule,
                fmt::format("{} id {} is not in the taxonomy", list, to_int(id)));
  }
  if (tag->level != kMaxLevel) {
    throw Error(ErrorCode::kNonLeafInclude,
                fmt::format("{} id {} \"{}\" is level {}, not level {}", list, to_int(id),
                            tag->name, tag->level, kMaxLevel));
  }
  return *tag;
}

SocialConcept make_concept(const Taxonomy& t, const SubjectTag& tag) {
  const auto* parent = parent_of(t, tag.id);
  const auto* root = grandparent_of(t, tag.id);
  return SocialConcept{tag.id, tag.name, root->name, parent->name};
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<SocialConcept> select_concepts(const Taxonomy& t, std::span<const SelectionRule> rules) {
  std::map<TagId, SocialConcept> picked;
  // Exclusions apply across all rules.
  std::set<TagId> excluded;
  for (const auto& rule : rules) {
    for (TagId id : rule.exclude_ids) excluded.insert(require_leaf(t, id, "exclude").id);
  }
  for (const auto& rule : rules) {
    const TagId root = resolve_area(t, rule.area_root);

    std::vector<TagId> candidates;
    if (!rule.include_ids.empty()) {
      for (TagId id : rule.include_ids) {
        require_leaf(t, id, "include");
        if (!t.is_strict_descendant(id, root)) {
          throw Error(ErrorCode::kUnresolvedRule,
                      fmt::format("include id {} \"{}\" is not under area root {}", to_int(id),
                                  t.at(id).name, describe(rule.area_root)));
        }
        candidates.push_back(id);
      }
    } else {
      for (TagId id : descendants_of(t, root)) {
        if (t.at(id).level == kMaxLevel) candidates.push_back(id);
      }
    }
    for (TagId id : candidates) {
      if (!excluded.contains(id)) picked.emplace(id, make_concept(t, t.at(id)));
    }
  }

  std::vector<SocialConcept> out;
  out.reserve(picked.size());
  for (auto& [id, picked_concept] : picked) out.push_back(std::move(picked_concept));
  std::sort(out.begin(), out.end(), [](const SocialConcept& a, const SocialConcept& b) {
    return std::tie(a.area, a.name, a.tag_id) < std::tie(b.area, b.name, b.tag_id);
  });
  return out;
}

std::vector<ConceptListEntry> parse_concept_list(std::string_view text) {
  std::vector<ConceptListEntry> entries;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      fields.push_back(trim(line.substr(start, tab == std::string_view::npos ? tab : tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (!seen_header && fields[0] == "tag_id") {
      seen_header = true;
      continue;
    }
    seen_header = true;
    // A fourth column (parent name, as written by write_concept_list) is informational.
    if (fields.size() > 4) {
      throw ParseError(fmt::format("expected at most 4 tab-separated fields, got {}", fields.size()),
                       line_no, 1);
    }
    fields.resize(3);
    ConceptListEntry entry;
    if (!fields[0].empty()) {
      std::int64_t id = 0;
      const auto* end = fields[0].data() + fields[0].size();
      const auto [ptr, ec] = std::from_chars(fields[0].data(), end, id);
      if (ec != std::errc{} || ptr != end) {
        throw ParseError(fmt::format("bad tag_id \"{}\"", fields[0]), line_no, 1);
      }
      entry.tag_id = TagId{id};
    }
    entry.name = std::string(fields[1]);
    entry.area = std::string(fields[2]);
    if (!entry.tag_id && entry.name.empty()) {
      throw ParseError("row needs a tag_id or a name", line_no, 1);
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<SelectionRule> rules_from_concept_list(const Taxonomy& t,
                                                   std::span<const ConceptListEntry> entries) {
  std::vector<SelectionRule> rules;
  rules.reserve(entries.size());
  for (const auto& entry : entries) {
    TagId id{};
    if (entry.tag_id) {
      const auto* tag = t.find(*entry.tag_id);
      if (!tag) {
        throw Error(ErrorCode::kUnresolvedRule,
                    fmt::format("concept id {} is not in the taxonomy", to_int(*entry.tag_id)));
      }
      if (!entry.name.empty() && tag->name != entry.name) {
        throw Error(ErrorCode::kUnresolvedRule,
                    fmt::format("concept id {} is named \"{}\" in the taxonomy, not \"{}\"",
                                to_int(*entry.tag_id), tag->name, entry.name));
      }
      id = *entry.tag_id;
    } else {
      std::vector<TagId> leaves;
      for (TagId candidate : t.find_by_name(entry.name)) {
        if (t.at(candidate).level == kMaxLevel) leaves.push_back(candidate);
      }
      if (leaves.empty()) {
        throw Error(ErrorCode::kUnresolvedRule,
                    fmt::format("no level-{} tag named \"{}\"", kMaxLevel, entry.name));
      }
      if (leaves.size() > 1) {
        throw Error(ErrorCode::kUnresolvedRule,
                    fmt::format("concept name \"{}\" is ambiguous ({} tags); give the tag_id",
                                entry.name, leaves.size()));
      }
      id = leaves.front();
    }

    SelectionRule rule;
    if (entry.area.empty()) {
      const auto* tag = &t.at(id);
      while (tag->parent_id) tag = &t.at(*tag->parent_id);
      rule.area_root = tag->id;
    } else {
      rule.area_root = entry.area;
    }
    rule.include_ids.push_back(id);
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string write_concept_list(std::span<const SocialConcept> concepts) {
  std::string out = "tag_id\tname\tarea\tparent\n";
  for (const auto& c : concepts) {
    out += fmt::format("{}\t{}\t{}\t{}\n", to_int(c.tag_id), c.name, c.area, c.parent_name);
  }
  return out;
}

}  // namespace sckg
