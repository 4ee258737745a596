#include "sckg/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"
#include "sckg/error.hpp"
#include "sckg/io.hpp"

namespace sckg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct FileResult {
  std::vector<Artwork> artworks;
  std::vector<std::string> errors;
  std::size_t records = 0;
};

std::string string_field(const json& record, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    const auto it = record.find(key);
    if (it == record.end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number()) return it->dump();
  }
  return {};
}

// Every node of a subject tree except the collection's "subject" wrapper.
void collect_subject_ids(const json& node, std::vector<TagId>& out) {
  if (node.is_array()) {
    for (const auto& child : node) collect_subject_ids(child, out);
    return;
  }
  if (!node.is_object()) return;
  const auto id = node.find("id");
  const auto name = node.find("name");
  const bool wrapper = name != node.end() && name->is_string() && *name == "subject";
  if (!wrapper && id != node.end() && id->is_number_integer()) {
    out.push_back(TagId{id->get<std::int64_t>()});
  }
  if (const auto kids = node.find("children"); kids != node.end()) {
    collect_subject_ids(*kids, out);
  }
}

std::optional<fs::path> find_image(const json& record, const fs::path& dir, ArtworkId id,
                                   const std::string& accession) {
  if (const auto it = record.find("image_path"); it != record.end() && it->is_string()) {
    fs::path p = it->get<std::string>();
    return p.is_absolute() ? p : dir / p;
  }
  std::vector<std::string> stems{std::to_string(to_int(id))};
  if (!accession.empty()) stems.push_back(accession);
  for (const auto& stem : stems) {
    for (const char* ext : {".png", ".jpg", ".jpeg", ".PNG", ".JPG", ".JPEG"}) {
      fs::path candidate = dir / (stem + ext);
      std::error_code ec;
      if (fs::is_regular_file(candidate, ec)) return candidate;
    }
  }
  return std::nullopt;
}

Artwork parse_record(const json& record, const fs::path& dir) {
  if (!record.is_object()) throw std::runtime_error("record is not an object");
  const auto id_it = record.find("id");
  if (id_it == record.end() || !id_it->is_number_integer()) {
    throw std::runtime_error("record has no integer \"id\"");
  }
  Artwork art;
  art.id = ArtworkId{id_it->get<std::int64_t>()};
  art.accession = string_field(record, {"accession", "accession_number", "acno"});
  art.title = string_field(record, {"title"});
  art.artist = string_field(record, {"artist", "all_artists"});
  if (art.artist.empty()) {
    if (const auto c = record.find("contributors"); c != record.end() && c->is_array()) {
      for (const auto& person : *c) {
        if (person.is_object() && person.contains("fc") && person["fc"].is_string()) {
          art.artist = person["fc"].get<std::string>();
          break;
        }
      }
    }
  }
  if (std::string date = string_field(record, {"date", "dateText", "year"}); !date.empty()) {
    art.date = std::move(date);
  }
  art.medium = string_field(record, {"medium"});

  if (const auto tags = record.find("tag_ids"); tags != record.end() && tags->is_array()) {
    for (const auto& tag : *tags) {
      if (!tag.is_number_integer()) throw std::runtime_error("non-integer entry in \"tag_ids\"");
      art.tag_ids.push_back(TagId{tag.get<std::int64_t>()});
    }
  }
  if (const auto subjects = record.find("subjects"); subjects != record.end()) {
    collect_subject_ids(*subjects, art.tag_ids);
  }
  std::sort(art.tag_ids.begin(), art.tag_ids.end());
  art.tag_ids.erase(std::unique(art.tag_ids.begin(), art.tag_ids.end()), art.tag_ids.end());
  art.image_path = find_image(record, dir, art.id, art.accession);
  return art;
}

void parse_one(const json& record, const fs::path& dir, FileResult& result,
               const std::string& where) {
  ++result.records;
  try {
    result.artworks.push_back(parse_record(record, dir));
  } catch (const std::exception& e) {
    result.errors.push_back(fmt::format("{}: {}", where, e.what()));
  }
}

FileResult parse_file(const fs::path& file) {
  FileResult result;
  std::string text;
  try {
    text = read_file(file);
  } catch (const Error& e) {
    result.errors.push_back(e.what());
    return result;
  }
  const fs::path dir = file.parent_path();
  if (file.extension() == ".jsonl") {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string::npos) eol = text.size();
      const std::string_view line(text.data() + pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      try {
        parse_one(json::parse(line), dir, result, fmt::format("line {}", line_no));
      } catch (const json::parse_error& e) {
        ++result.records;
        result.errors.push_back(fmt::format("line {}: {}", line_no, e.what()));
      }
    }
    return result;
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    result.errors.push_back(fmt::format("line {}, column {}: {}", line, column, e.what()));
    return result;
  }
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      parse_one(doc[i], dir, result, fmt::format("record {}", i));
    }
  } else {
    parse_one(doc, dir, result, "record");
  }
  return result;
}

std::vector<fs::path> list_metadata_files(const fs::path& root) {
  std::error_code ec;
  if (fs::is_regular_file(root, ec)) return {root};
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kUnreadableRoot,
                fmt::format("{} is not a readable file or directory", root.string()));
  }
  std::vector<fs::path> files;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw Error(ErrorCode::kUnreadableRoot, fmt::format("{}: {}", root.string(), ec.message()));
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".json" || ext == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

ArtworkIndex ArtworkIndex::build(std::vector<Artwork> artworks, std::vector<ArtworkId>* dropped) {
  ArtworkIndex ix;
  for (auto& art : artworks) {
    std::sort(art.tag_ids.begin(), art.tag_ids.end());
    art.tag_ids.erase(std::unique(art.tag_ids.begin(), art.tag_ids.end()), art.tag_ids.end());
    const ArtworkId id = art.id;
    if (!ix.artworks_.emplace(id, std::move(art)).second && dropped) dropped->push_back(id);
  }
  // Map iteration is ascending by artwork id, so each list comes out sorted.
  for (const auto& [id, art] : ix.artworks_) {
    for (TagId tag : art.tag_ids) ix.by_tag_[tag].push_back(id);
  }
  return ix;
}

const Artwork* ArtworkIndex::find(ArtworkId id) const {
  const auto it = artworks_.find(id);
  return it == artworks_.end() ? nullptr : &it->second;
}

std::span<const ArtworkId> ArtworkIndex::tagged_with(TagId tag) const {
  const auto it = by_tag_.find(tag);
  if (it == by_tag_.end()) return {};
  return it->second;
}

IngestResult ingest_corpus(const fs::path& root, const Taxonomy& t) {
  const auto files = list_metadata_files(root);
  std::vector<FileResult> results(files.size());

  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(files.size() / 64 + 1)));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < files.size(); i = next++) results[i] = parse_file(files[i]);
      });
    }
  }

  IngestResult out;
  std::vector<Artwork> artworks;
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto& r = results[i];
    ++out.report.files_read;
    out.report.records_read += r.records;
    const auto rel = fs::relative(files[i], fs::is_directory(root) ? root : root.parent_path());
    for (auto& message : r.errors) out.report.errors.emplace_back(rel.generic_string(), message);
    for (auto& art : r.artworks) artworks.push_back(std::move(art));
  }
  out.index = ArtworkIndex::build(std::move(artworks), &out.report.duplicate_ids);
  for (const auto& [id, art] : out.index.artworks()) {
    bool unknown = false;
    for (TagId tag : art.tag_ids) {
      if (!t.contains(tag)) {
        out.report.unknown_tag_ids.insert(tag);
        unknown = true;
      }
    }
    if (unknown) ++out.report.records_with_unknown_tags;
  }
  return out;
}

std::vector<ArtworkId> match_concept(const ArtworkIndex& ix, const SocialConcept& c) {
  const auto ids = ix.tagged_with(c.tag_id);
  return {ids.begin(), ids.end()};
}

std::string format_ingest_report(const IngestReport& report) {
  std::string out = fmt::format("files read: {}\nrecords read: {}\nerrors: {}\n", report.files_read,
                                report.records_read, report.errors.size());
  for (const auto& [file, message] : report.errors) out += fmt::format("  {}: {}\n", file, message);
  out += fmt::format("duplicate artwork ids: {}\n", report.duplicate_ids.size());
  for (ArtworkId id : report.duplicate_ids) out += fmt::format("  {}\n", to_int(id));
  out += fmt::format("records with unknown tags: {}\nunknown tag ids: {}\n",
                     report.records_with_unknown_tags, report.unknown_tag_ids.size());
  for (TagId id : report.unknown_tag_ids) out += fmt::format("  {}\n", to_int(id));
  return out;
}

}  // namespace sckg
