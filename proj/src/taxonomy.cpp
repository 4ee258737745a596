#include "sckg/taxonomy.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include "json.hpp"

#include <fmt/format.h>

#include "sckg/error.hpp"
#include "sckg/io.hpp"

namespace sckg {
namespace {

using nlohmann::json;

std::string describe(const SubjectTag& tag) {
  return fmt::format("{} \"{}\"", to_int(tag.id), tag.name);
}

void sort_by_name_then_id(std::vector<TagId>& ids, const std::map<TagId, SubjectTag>& tags) {
  std::sort(ids.begin(), ids.end(), [&](TagId a, TagId b) {
    const auto& ta = tags.at(a);
    const auto& tb = tags.at(b);
    if (ta.name != tb.name) return ta.name < tb.name;
    return a < b;
  });
}

// ---- nested JSON form -------------------------------------------------------

std::optional<std::int64_t> json_integer(const json& value) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  return std::nullopt;
}

void collect_nested(const json& node, int depth, std::optional<TagId> parent,
                    const std::string& pointer, std::vector<SubjectTag>& out) {
  if (!node.is_object()) {
    throw Error(ErrorCode::kMalformedDocument, fmt::format("at {}: expected an object", pointer));
  }
  const auto id_it = node.find("id");
  const auto name_it = node.find("name");
  std::optional<std::int64_t> id;
  if (id_it != node.end()) id = json_integer(*id_it);
  if (!id) {
    throw Error(ErrorCode::kMalformedDocument,
                fmt::format("at {}: missing integer \"id\"", pointer));
  }
  if (name_it == node.end() || !name_it->is_string()) {
    throw Error(ErrorCode::kMalformedDocument,
                fmt::format("at {}: missing string \"name\"", pointer));
  }
  if (depth > kMaxLevel) {
    throw Error(ErrorCode::kDepthViolation,
                fmt::format("tag {} \"{}\" at {} is nested at level {}", *id,
                            name_it->get<std::string>(), pointer, depth));
  }
  out.push_back(SubjectTag{TagId{*id}, name_it->get<std::string>(), depth, parent});

  const auto children = node.find("children");
  if (children == node.end() || children->is_null()) return;
  if (!children->is_array()) {
    throw Error(ErrorCode::kMalformedDocument,
                fmt::format("at {}/children: expected an array", pointer));
  }
  for (std::size_t i = 0; i < children->size(); ++i) {
    collect_nested((*children)[i], depth + 1, TagId{*id},
                   fmt::format("{}/children/{}", pointer, i), out);
  }
}

std::vector<SubjectTag> parse_nested(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, column] = line_column(source, offset);
    throw ParseError(e.what(), line, column);
  }

  std::vector<SubjectTag> records;
  auto collect_roots = [&](const json& list, const std::string& pointer) {
    if (list.is_null()) return;
    if (!list.is_array()) {
      throw Error(ErrorCode::kMalformedDocument, fmt::format("at {}: expected an array", pointer));
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      collect_nested(list[i], 0, std::nullopt, fmt::format("{}/{}", pointer, i), records);
    }
  };

  if (doc.is_array()) {
    collect_roots(doc, "");
  } else if (doc.is_object()) {
    // A top-level object without an id, or the collection's own "subject"
    // wrapper, only holds the level-0 list.
    const auto name = doc.find("name");
    const bool wrapper = !doc.contains("id") ||
                         (name != doc.end() && name->is_string() && *name == "subject");
    if (wrapper) {
      if (const auto children = doc.find("children"); children != doc.end()) {
        collect_roots(*children, "/children");
      }
    } else {
      collect_nested(doc, 0, std::nullopt, "", records);
    }
  } else {
    throw Error(ErrorCode::kMalformedDocument, "top level must be an object or an array");
  }
  return records;
}

// ---- flat tab-separated form ------------------------------------------------

std::int64_t parse_id_field(std::string_view field, std::size_t line, std::size_t column) {
  std::int64_t value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(fmt::format("expected an integer id, got \"{}\"", field), line, column);
  }
  return value;
}

std::vector<SubjectTag> parse_flat(std::string_view source) {
  std::vector<SubjectTag> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool first_record = true;
  while (pos < source.size()) {
    std::size_t eol = source.find('\n', pos);
    if (eol == std::string_view::npos) eol = source.size();
    std::string_view line = source.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::vector<std::size_t> starts;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      starts.push_back(start + 1);
      if (tab == std::string_view::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (first_record && fields[0] == "id") {
      first_record = false;
      continue;
    }
    first_record = false;
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(
          fmt::format("expected 2 or 3 tab-separated fields (id, name, parent_id), got {}",
                      fields.size()),
          line_no, 1);
    }
    SubjectTag tag;
    tag.id = TagId{parse_id_field(fields[0], line_no, starts[0])};
    tag.name = std::string(fields[1]);
    if (fields.size() == 3 && !fields[2].empty()) {
      tag.parent_id = TagId{parse_id_field(fields[2], line_no, starts[2])};
    }
    records.push_back(std::move(tag));
  }
  return records;
}

json to_json(const Taxonomy& t, TagId id) {
  const auto& tag = t.at(id);
  json node = {{"id", to_int(tag.id)}, {"name", tag.name}};
  const auto kids = t.children(id);
  if (!kids.empty()) {
    json list = json::array();
    for (TagId kid : kids) list.push_back(to_json(t, kid));
    node["children"] = std::move(list);
  }
  return node;
}

}  // namespace

Taxonomy Taxonomy::from_records(std::vector<SubjectTag> records) {
  Taxonomy t;
  for (auto& record : records) {
    if (record.name.empty()) {
      throw Error(ErrorCode::kMalformedDocument,
                  fmt::format("tag {} has an empty name", to_int(record.id)));
    }
    const TagId id = record.id;
    if (const auto it = t.tags_.find(id); it != t.tags_.end()) {
      throw Error(ErrorCode::kDuplicateId, fmt::format("tag id {} appears more than once "
                                                       "(\"{}\" and \"{}\")",
                                                       to_int(id), it->second.name, record.name));
    }
    t.tags_.emplace(id, std::move(record));
  }

  for (const auto& [id, tag] : t.tags_) {
    if (!tag.parent_id) continue;
    if (!t.tags_.contains(*tag.parent_id)) {
      throw Error(ErrorCode::kOrphanTag, fmt::format("tag {} references unknown parent {}",
                                                     describe(tag), to_int(*tag.parent_id)));
    }
  }

  // Colour walk up the parent chain: 0 = unseen, 1 = on the current path,
  // 2 = level known. Cycles are reported before depth problems.
  std::map<TagId, int> state;
  std::map<TagId, int> level;
  std::optional<TagId> too_deep;
  for (const auto& [start, unused] : t.tags_) {
    if (state[start] == 2) continue;
    std::vector<TagId> path;
    TagId cursor = start;
    int base = -1;
    while (true) {
      int& s = state[cursor];
      if (s == 1) {
        throw Error(ErrorCode::kCycleDetected,
                    fmt::format("parent chain of tag {} loops back to tag {}",
                                describe(t.tags_.at(start)), describe(t.tags_.at(cursor))));
      }
      if (s == 2) {
        base = level[cursor];
        break;
      }
      s = 1;
      path.push_back(cursor);
      const auto& parent = t.tags_.at(cursor).parent_id;
      if (!parent) break;
      cursor = *parent;
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      level[*it] = ++base;
      state[*it] = 2;
      if (base > kMaxLevel && !too_deep) too_deep = *it;
    }
  }
  if (too_deep) {
    throw Error(ErrorCode::kDepthViolation,
                fmt::format("tag {} sits at level {}, deeper than {}",
                            describe(t.tags_.at(*too_deep)), level[*too_deep], kMaxLevel));
  }

  for (auto& [id, tag] : t.tags_) {
    tag.level = level[id];
    t.children_[id];
    if (tag.parent_id) {
      t.children_[*tag.parent_id].push_back(id);
    } else {
      t.roots_.push_back(id);
    }
    t.by_name_.emplace(tag.name, id);
  }
  for (auto& [id, kids] : t.children_) sort_by_name_then_id(kids, t.tags_);
  sort_by_name_then_id(t.roots_, t.tags_);
  return t;
}

const SubjectTag* Taxonomy::find(TagId id) const {
  const auto it = tags_.find(id);
  return it == tags_.end() ? nullptr : &it->second;
}

const SubjectTag& Taxonomy::at(TagId id) const {
  if (const auto* tag = find(id)) return *tag;
  throw Error(ErrorCode::kUnknownTag, fmt::format("no tag with id {}", to_int(id)));
}

std::span<const TagId> Taxonomy::children(TagId id) const {
  const auto it = children_.find(id);
  if (it == children_.end()) {
    throw Error(ErrorCode::kUnknownTag, fmt::format("no tag with id {}", to_int(id)));
  }
  return it->second;
}

std::array<std::size_t, kMaxLevel + 1> Taxonomy::level_counts() const {
  std::array<std::size_t, kMaxLevel + 1> counts{};
  for (const auto& [id, tag] : tags_) ++counts[static_cast<std::size_t>(tag.level)];
  return counts;
}

std::vector<TagId> Taxonomy::find_by_name(std::string_view name) const {
  std::vector<TagId> ids;
  const auto [first, last] = by_name_.equal_range(name);
  for (auto it = first; it != last; ++it) ids.push_back(it->second);
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool Taxonomy::is_strict_descendant(TagId id, TagId ancestor) const {
  const SubjectTag* tag = &at(id);
  while (tag->parent_id) {
    if (*tag->parent_id == ancestor) return true;
    tag = &tags_.at(*tag->parent_id);
  }
  return false;
}

Taxonomy parse_taxonomy(std::string_view source) {
  const auto first = source.find_first_not_of(" \t\r\n");
  const bool nested =
      first != std::string_view::npos && (source[first] == '{' || source[first] == '[');
  return Taxonomy::from_records(nested ? parse_nested(source) : parse_flat(source));
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(path)) return parse_taxonomy(read_file(path));

  // Directory form: every *.json below it is either a nested taxonomy
  // document or an artwork record whose "subjects" tree is merged in.
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::map<TagId, SubjectTag> merged;
  for (const auto& file : files) {
    const std::string text = read_file(file);
    std::vector<SubjectTag> records;
    try {
      const json doc = json::parse(text);
      if (doc.is_object() && doc.contains("subjects")) {
        records = parse_nested(doc.at("subjects").dump());
      } else if (doc.is_object() && !doc.contains("name")) {
        continue;  // artwork record without a subject block
      } else {
        records = parse_nested(text);
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedDocument, fmt::format("{}: {}", file.string(), e.what()));
    } catch (const Error& e) {
      const std::string_view what = e.what();
      const auto colon = what.find(": ");
      throw Error(e.code(), fmt::format("{}: {}", file.string(),
                                        colon == std::string_view::npos ? what : what.substr(colon + 2)));
    }
    for (auto& tag : records) {
      const auto [it, inserted] = merged.emplace(tag.id, tag);
      if (!inserted && (it->second.name != tag.name || it->second.parent_id != tag.parent_id)) {
        throw Error(ErrorCode::kDuplicateId,
                    fmt::format("{}: tag {} disagrees with an earlier file", file.string(),
                                to_int(tag.id)));
      }
    }
  }
  std::vector<SubjectTag> records;
  records.reserve(merged.size());
  for (auto& [id, tag] : merged) records.push_back(std::move(tag));
  return Taxonomy::from_records(std::move(records));
}

std::string write_taxonomy(const Taxonomy& t) {
  json roots = json::array();
  for (TagId root : t.roots()) roots.push_back(to_json(t, root));
  return roots.dump(2) + "\n";
}

const SubjectTag* parent_of(const Taxonomy& t, TagId id) {
  const auto& tag = t.at(id);
  return tag.parent_id ? &t.at(*tag.parent_id) : nullptr;
}

const SubjectTag* grandparent_of(const Taxonomy& t, TagId id) {
  const SubjectTag* parent = parent_of(t, id);
  return parent ? parent_of(t, parent->id) : nullptr;
}

std::set<TagId> descendants_of(const Taxonomy& t, TagId id) {
  std::set<TagId> out;
  std::vector<TagId> stack(t.children(id).begin(), t.children(id).end());
  while (!stack.empty()) {
    const TagId next = stack.back();
    stack.pop_back();
    out.insert(next);
    for (TagId kid : t.children(next)) stack.push_back(kid);
  }
  return out;
}

}  // namespace sckg
