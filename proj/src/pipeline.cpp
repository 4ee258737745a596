#include "sckg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "json.hpp"
#include "sckg/concepts.hpp"
#include "sckg/cooccur.hpp"
#include "sckg/corpus.hpp"
#include "sckg/error.hpp"
#include "sckg/hash.hpp"
#include "sckg/image.hpp"
#include "sckg/io.hpp"
#include "sckg/palette.hpp"
#include "sckg/rdf.hpp"
#include "sckg/rdf_export.hpp"
#include "sckg/taxonomy.hpp"

namespace sckg {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kCacheVersion = "sckg-cache-v1";

struct CooccurData {
  std::vector<CooccurrenceProfile> profiles;
  std::map<TagId, std::vector<ArtworkId>> matches;
  std::map<ArtworkId, Artwork> artworks;  // matched artworks only, no image paths
  std::string ingest_report;
};

struct ConceptPalettes {
  SocialConcept social_concept;
  std::vector<ArtworkPalette> samples;
  std::vector<std::string> failures;
};

std::string slug(const SocialConcept& c) {
  std::string out;
  for (const char ch : c.name) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      out += static_cast<char>(std::tolower(u));
    } else if (!out.empty() && out.back() != '-') {
      out += '-';
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return fmt::format("{}-{}", out.empty() ? "tag" : out, to_int(c.tag_id));
}

// Display rounding is half away from zero; verify compares the same values.
double round1(double v) { return std::round(v * 10.0) / 10.0; }
std::string fixed1(double v) { return fmt::format("{:.1f}", round1(v)); }
std::string rounded(double v) { return fmt::format("{:.0f}", std::round(v)); }

// ---- JSON (de)serialisation of cached artifacts --------------------------

ordered_json concept_json(const SocialConcept& c) {
  return {{"tag_id", to_int(c.tag_id)}, {"name", c.name}, {"area", c.area}, {"parent", c.parent_name}};
}

SocialConcept concept_from(const json& j) {
  return {TagId{j.at("tag_id").get<std::int64_t>()}, j.at("name").get<std::string>(),
          j.at("area").get<std::string>(), j.at("parent").get<std::string>()};
}

ordered_json artwork_json(const Artwork& a) {
  ordered_json j = {{"id", to_int(a.id)},     {"accession", a.accession}, {"title", a.title},
                    {"artist", a.artist},     {"date", a.date ? json(*a.date) : json(nullptr)},
                    {"medium", a.medium}};
  json tags = json::array();
  for (TagId t : a.tag_ids) tags.push_back(to_int(t));
  j["tag_ids"] = std::move(tags);
  return j;
}

Artwork artwork_from(const json& j) {
  Artwork a;
  a.id = ArtworkId{j.at("id").get<std::int64_t>()};
  a.accession = j.at("accession").get<std::string>();
  a.title = j.at("title").get<std::string>();
  a.artist = j.at("artist").get<std::string>();
  if (!j.at("date").is_null()) a.date = j.at("date").get<std::string>();
  a.medium = j.at("medium").get<std::string>();
  for (const auto& t : j.at("tag_ids")) a.tag_ids.push_back(TagId{t.get<std::int64_t>()});
  return a;
}

ordered_json cooccur_json(const CooccurData& d) {
  ordered_json profiles = ordered_json::array();
  for (const auto& p : d.profiles) {
    ordered_json counts = ordered_json::array();
    for (const auto& [tag, n] : p.counts) counts.push_back({to_int(tag), n});
    ordered_json matches = ordered_json::array();
    for (ArtworkId id : d.matches.at(p.social_concept.tag_id)) matches.push_back(to_int(id));
    profiles.push_back({{"concept", concept_json(p.social_concept)},
                        {"n_matches", p.n_matches},
                        {"matches", std::move(matches)},
                        {"counts", std::move(counts)}});
  }
  ordered_json artworks = ordered_json::array();
  for (const auto& [id, art] : d.artworks) artworks.push_back(artwork_json(art));
  return {{"profiles", std::move(profiles)},
          {"artworks", std::move(artworks)},
          {"ingest_report", d.ingest_report}};
}

CooccurData cooccur_from(const json& j) {
  CooccurData d;
  for (const auto& pj : j.at("profiles")) {
    CooccurrenceProfile p;
    p.social_concept = concept_from(pj.at("concept"));
    p.n_matches = pj.at("n_matches").get<std::int64_t>();
    for (const auto& entry : pj.at("counts")) {
      p.counts.emplace(TagId{entry.at(0).get<std::int64_t>()}, entry.at(1).get<std::int64_t>());
    }
    auto& ids = d.matches[p.social_concept.tag_id];
    for (const auto& id : pj.at("matches")) ids.push_back(ArtworkId{id.get<std::int64_t>()});
    d.profiles.push_back(std::move(p));
  }
  for (const auto& aj : j.at("artworks")) {
    Artwork a = artwork_from(aj);
    d.artworks.emplace(a.id, std::move(a));
  }
  d.ingest_report = j.at("ingest_report").get<std::string>();
  return d;
}

ordered_json palette_json(const Palette& p) {
  ordered_json swatches = ordered_json::array();
  for (const auto& s : p.swatches) {
    swatches.push_back({{"rgb", {s.rgb.r, s.rgb.g, s.rgb.b}},
                        {"pixel_count", s.pixel_count},
                        {"percentage", s.percentage}});
  }
  return {{"image_ref", p.image_ref}, {"total_pixels", p.total_pixels}, {"swatches", std::move(swatches)}};
}

Palette palette_from(const json& j) {
  Palette p;
  p.image_ref = j.at("image_ref").get<std::string>();
  p.total_pixels = j.at("total_pixels").get<std::int64_t>();
  for (const auto& sj : j.at("swatches")) {
    const auto& rgb = sj.at("rgb");
    p.swatches.push_back({Rgb{rgb.at(0).get<std::uint8_t>(), rgb.at(1).get<std::uint8_t>(),
                              rgb.at(2).get<std::uint8_t>()},
                          sj.at("pixel_count").get<std::int64_t>(),
                          sj.at("percentage").get<double>()});
  }
  return p;
}

ordered_json palettes_json(const std::vector<ConceptPalettes>& all) {
  ordered_json out = ordered_json::array();
  for (const auto& cp : all) {
    ordered_json samples = ordered_json::array();
    for (const auto& [id, palette] : cp.samples) {
      samples.push_back({{"artwork", to_int(id)}, {"palette", palette_json(palette)}});
    }
    out.push_back({{"concept", concept_json(cp.social_concept)},
                   {"samples", std::move(samples)},
                   {"failures", cp.failures}});
  }
  return out;
}

std::vector<ConceptPalettes> palettes_from(const json& j) {
  std::vector<ConceptPalettes> out;
  for (const auto& cj : j) {
    ConceptPalettes cp;
    cp.social_concept = concept_from(cj.at("concept"));
    for (const auto& sj : cj.at("samples")) {
      cp.samples.emplace_back(ArtworkId{sj.at("artwork").get<std::int64_t>()},
                              palette_from(sj.at("palette")));
    }
    cp.failures = cj.at("failures").get<std::vector<std::string>>();
    out.push_back(std::move(cp));
  }
  return out;
}

// ---- text tables ------------------------------------------------------------

std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i + 1 == row.size()) {
        line += row[i];
      } else {
        line += row[i] + std::string(widths[i] - row[i].size() + 2, ' ');
      }
    }
    out += line + "\n";
  }
  return out;
}

std::string tsv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void require_path(const fs::path& path, std::string_view flag) {
  if (path.empty()) throw Error(ErrorCode::kConfig, fmt::format("{} is required", flag));
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw Error(ErrorCode::kConfig, fmt::format("{} {} does not exist", flag, path.string()));
  }
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.emplace_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
    while (!f.empty() && f.front() == ' ') f.erase(0, 1);
  }
  return fields;
}

}  // namespace

struct Pipeline::State {
  PipelineConfig cfg;
  std::ostream& out;
  std::ostream& log;

  std::optional<Taxonomy> taxonomy;
  std::optional<TagClassifier> classifier;
  std::optional<std::vector<SocialConcept>> concepts;
  std::optional<IngestResult> corpus;
  std::optional<CooccurData> cooccur;
  std::optional<std::vector<ConceptPalettes>> palettes;
  std::optional<std::vector<ConceptStats>> stats;
  std::optional<std::string> input_hash;
  std::size_t hits = 0;
  std::size_t misses = 0;

  State(PipelineConfig c, std::ostream& o, std::ostream& l) : cfg(std::move(c)), out(o), log(l) {}

  fs::path output(const fs::path& rel) const { return cfg.output_dir / rel; }

  void write(const fs::path& rel, std::string_view contents) const {
    write_file(output(rel), contents);
  }

  const Taxonomy& tax() {
    if (!taxonomy) {
      require_path(cfg.taxonomy_file, "--taxonomy");
      taxonomy = load_taxonomy(cfg.taxonomy_file);
      classifier.emplace(*taxonomy);
    }
    return *taxonomy;
  }

  const TagClassifier& classes() {
    tax();
    return *classifier;
  }

  const std::vector<SocialConcept>& selected() {
    if (!concepts) {
      require_path(cfg.concepts_file, "--concepts");
      const auto entries = parse_concept_list(read_file(cfg.concepts_file));
      const auto rules = rules_from_concept_list(tax(), entries);
      concepts = select_concepts(tax(), rules);
    }
    return *concepts;
  }

  const IngestResult& ingested() {
    if (!corpus) {
      require_path(cfg.data_dir, "--data-dir");
      corpus = ingest_corpus(cfg.data_dir, tax());
      log << fmt::format("ingested {} artworks from {} files ({} errors)\n",
                         corpus->index.size(), corpus->report.files_read,
                         corpus->report.errors.size());
    }
    return *corpus;
  }

  const std::string& inputs_digest() {
    if (!input_hash) {
      require_path(cfg.taxonomy_file, "--taxonomy");
      require_path(cfg.concepts_file, "--concepts");
      require_path(cfg.data_dir, "--data-dir");
      ContentHasher h;
      h.add(kCacheVersion);
      h.add_tree(cfg.taxonomy_file).add_file(cfg.concepts_file).add_tree(cfg.data_dir);
      input_hash = h.hex_digest();
    }
    return *input_hash;
  }

  fs::path cache_path(std::string_view stage, std::string_view digest) const {
    return output("cache") / fmt::format("{}-{}.json", stage, digest.substr(0, 16));
  }

  std::optional<json> load_cache(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) return std::nullopt;
    try {
      return json::parse(read_file(path));
    } catch (const std::exception& e) {
      log << fmt::format("ignoring unreadable cache {}: {}\n", path.filename().string(), e.what());
      return std::nullopt;
    }
  }

  void store_cache(std::string_view stage, const fs::path& path, const ordered_json& j) {
    std::error_code ec;
    if (fs::is_directory(path.parent_path(), ec)) {
      for (const auto& entry : fs::directory_iterator(path.parent_path())) {
        const auto name = entry.path().filename().string();
        if (name.starts_with(std::string(stage) + "-") && entry.path() != path) fs::remove(entry.path());
      }
    }
    write_file(path, j.dump(1) + "\n");
  }

  const CooccurData& cooccurrence() {
    if (cooccur) return *cooccur;
    ContentHasher h;
    h.add(inputs_digest()).add(cfg.ancestor_cooccurrence ? "ancestors" : "no-ancestors");
    const std::string digest = h.hex_digest();
    const auto path = cache_path("cooccur", digest);
    if (auto cached = load_cache(path)) {
      try {
        cooccur = cooccur_from(*cached);
        ++hits;
        log << fmt::format("cache hit: {}\n", path.filename().string());
        return *cooccur;
      } catch (const std::exception& e) {
        log << fmt::format("ignoring malformed cache {}: {}\n", path.filename().string(), e.what());
      }
    }
    ++misses;
    const auto& ix = ingested().index;
    CooccurData d;
    for (const auto& c : selected()) {
      d.profiles.push_back(cooccurrence_profile(ix, c, tax(), !cfg.ancestor_cooccurrence));
      auto ids = match_concept(ix, c);
      for (ArtworkId id : ids) {
        Artwork art = *ix.find(id);
        art.image_path.reset();
        d.artworks.emplace(id, std::move(art));
      }
      d.matches[c.tag_id] = std::move(ids);
    }
    d.ingest_report = format_ingest_report(ingested().report);
    store_cache("cooccur", path, cooccur_json(d));
    cooccur = std::move(d);
    return *cooccur;
  }

  std::vector<SocialConcept> palette_targets() {
    const auto& all = selected();
    if (cfg.palette_concepts.empty()) return all;
    std::vector<SocialConcept> out;
    for (const auto& name : cfg.palette_concepts) {
      const auto it = std::find_if(all.begin(), all.end(),
                                   [&](const SocialConcept& c) { return c.name == name; });
      if (it == all.end()) {
        throw Error(ErrorCode::kConfig,
                    fmt::format("--palette-concept \"{}\" is not among the selected concepts", name));
      }
      out.push_back(*it);
    }
    return out;
  }

  const std::vector<ConceptPalettes>& colour_analysis() {
    if (palettes) return *palettes;
    const auto targets = palette_targets();
    ContentHasher h;
    h.add(inputs_digest());
    h.add(fmt::format("seed={} tolerance={} n={} k=5 max=256", cfg.seed, cfg.tolerance, cfg.sample_n));
    for (const auto& m : cfg.medium_filter) h.add("medium:" + m);
    for (const auto& c : targets) h.add(fmt::format("concept:{}", to_int(c.tag_id)));
    const std::string digest = h.hex_digest();
    const auto path = cache_path("palette", digest);
    if (auto cached = load_cache(path)) {
      try {
        palettes = palettes_from(*cached);
        ++hits;
        log << fmt::format("cache hit: {}\n", path.filename().string());
        return *palettes;
      } catch (const std::exception& e) {
        log << fmt::format("ignoring malformed cache {}: {}\n", path.filename().string(), e.what());
      }
    }
    ++misses;
    const auto& ix = ingested().index;
    ExtractOptions options;
    options.tolerance = cfg.tolerance;
    std::vector<ConceptPalettes> all;
    for (const auto& c : targets) {
      ConceptPalettes cp{c, {}, {}};
      for (ArtworkId id : sample_concept_images(ix, c, cfg.sample_n, cfg.seed, cfg.medium_filter)) {
        try {
          Palette p = extract_palette(decode_image(*ix.find(id)->image_path), options);
          p.image_ref = fmt::format("artwork/{}", to_int(id));
          cp.samples.emplace_back(id, std::move(p));
        } catch (const Error& e) {
          cp.failures.push_back(fmt::format("artwork {}: {}", to_int(id), e.what()));
          log << fmt::format("palette skipped for artwork {}: {}\n", to_int(id), e.what());
        }
      }
      all.push_back(std::move(cp));
    }
    store_cache("palette", path, palettes_json(all));
    palettes = std::move(all);
    return *palettes;
  }

  const std::vector<ConceptStats>& concept_statistics() {
    if (!stats) {
      std::vector<ConceptStats> all;
      for (const auto& p : cooccurrence().profiles) all.push_back(concept_stats(p, classes(), cfg.top_k));
      stats = std::move(all);
    }
    return *stats;
  }
};

Pipeline::Pipeline(PipelineConfig config, std::ostream& out, std::ostream& log)
    : state_(std::make_unique<State>(std::move(config), out, log)) {}

Pipeline::~Pipeline() = default;

std::size_t Pipeline::cache_hits() const { return state_->hits; }
std::size_t Pipeline::cache_misses() const { return state_->misses; }

void Pipeline::run_taxonomy() {
  auto& s = *state_;
  const auto& t = s.tax();
  const KgNamespace ns{s.cfg.namespace_iri};
  s.write("taxonomy.ttl", rdf::serialize_turtle(taxonomy_to_skos(t, ns.scheme(), ns.subjects())));
  const auto counts = t.level_counts();
  std::vector<std::vector<std::string>> rows{{"level", "tags"}};
  for (std::size_t level = 0; level < counts.size(); ++level) {
    rows.push_back({std::to_string(level), std::to_string(counts[level])});
  }
  rows.push_back({"total", std::to_string(t.size())});
  s.write("taxonomy_levels.tsv", tsv(rows));
  s.out << fmt::format("taxonomy: {} tags (level 0: {}, level 1: {}, level 2: {})\n", t.size(),
                       counts[0], counts[1], counts[2]);
}

void Pipeline::run_concepts() {
  auto& s = *state_;
  const auto& concepts = s.selected();
  s.write("concepts.tsv", write_concept_list(concepts));
  std::map<std::string, std::size_t> per_area;
  for (const auto& c : concepts) ++per_area[c.area];
  s.out << fmt::format("concepts: {} selected\n", concepts.size());
  for (const auto& [area, n] : per_area) s.out << fmt::format("  {}: {}\n", area, n);
}

void Pipeline::run_match() {
  auto& s = *state_;
  const auto& d = s.cooccurrence();
  std::vector<std::vector<std::string>> rows{{"tag_id", "concept", "area", "parent", "matches"}};
  ordered_json detail = ordered_json::array();
  for (const auto& p : d.profiles) {
    const auto& c = p.social_concept;
    rows.push_back({std::to_string(to_int(c.tag_id)), c.name, c.area, c.parent_name,
                    std::to_string(p.n_matches)});
    ordered_json artworks = ordered_json::array();
    for (ArtworkId id : d.matches.at(c.tag_id)) artworks.push_back(artwork_json(d.artworks.at(id)));
    detail.push_back({{"concept", concept_json(c)}, {"artworks", std::move(artworks)}});
  }
  s.write("matches.tsv", tsv(rows));
  s.write("matches.json", detail.dump(1) + "\n");
  s.write("ingest_report.txt", d.ingest_report);
  s.out << fmt::format("match: {} concepts\n", d.profiles.size());
}

void Pipeline::run_cooccur() {
  auto& s = *state_;
  const auto& d = s.cooccurrence();
  const auto& t = s.tax();
  const auto& classifier = s.classes();
  ordered_json all = ordered_json::array();
  for (const auto& p : d.profiles) {
    ordered_json tags = ordered_json::array();
    for (const auto& row : top_k(p, t, p.counts.size())) {
      tags.push_back({{"tag_id", to_int(row.id)},
                      {"name", row.name},
                      {"count", row.count},
                      {"class", to_string(classifier.classify_or_other(row.id))}});
    }
    all.push_back({{"concept", concept_json(p.social_concept)},
                   {"n_matches", p.n_matches},
                   {"n_co_tags", p.counts.size()},
                   {"tags", std::move(tags)}});
    const auto base = fs::path("wordcloud") / slug(p.social_concept);
    s.write(base.string() + "-objects.tsv",
            export_wordcloud_data(p, classifier, TagClass::kPhysicalObject, s.cfg.wordcloud_n));
    s.write(base.string() + "-actions.tsv",
            export_wordcloud_data(p, classifier, TagClass::kAction, s.cfg.wordcloud_n));
  }
  s.write("cooccurrence.json", all.dump(1) + "\n");
  s.out << fmt::format("cooccur: {} profiles\n", d.profiles.size());
}

void Pipeline::run_stats() {
  auto& s = *state_;
  const auto& stats = s.concept_statistics();

  const std::vector<std::string> header{"concept",     "tag_id",           "matches",
                                        "co_tags",     "co_objects",       "freq_top_objects",
                                        "co_actions",  "freq_top_actions"};
  std::vector<std::vector<std::string>> rows{header};
  ordered_json concepts = ordered_json::array();
  for (const auto& st : stats) {
    rows.push_back({st.name, std::to_string(to_int(st.tag_id)), std::to_string(st.n_matches),
                    std::to_string(st.n_co_tags), std::to_string(st.n_objects),
                    fixed1(st.freq_top_objects), std::to_string(st.n_actions),
                    fixed1(st.freq_top_actions)});
    auto top = [](const std::vector<TagCount>& list) {
      ordered_json arr = ordered_json::array();
      for (const auto& r : list) arr.push_back({{"name", r.name}, {"count", r.count}});
      return arr;
    };
    concepts.push_back({{"concept", st.name},
                        {"tag_id", to_int(st.tag_id)},
                        {"matches", st.n_matches},
                        {"co_tags", st.n_co_tags},
                        {"co_objects", st.n_objects},
                        {"freq_top_objects", st.freq_top_objects},
                        {"co_actions", st.n_actions},
                        {"freq_top_actions", st.freq_top_actions},
                        {"top_objects", top(st.top_objects)},
                        {"top_actions", top(st.top_actions)}});
  }
  ordered_json summary = nullptr;
  if (!stats.empty()) {
    const auto sum = summary_stats(stats);
    auto row = [&](std::string label, auto pick) {
      return std::vector<std::string>{label, "-", rounded(pick(sum.matches)),
                                      rounded(pick(sum.co_tags)), rounded(pick(sum.objects)),
                                      fixed1(pick(sum.freq_top_objects)), rounded(pick(sum.actions)),
                                      fixed1(pick(sum.freq_top_actions))};
    };
    rows.push_back(row("Average", [](const ColumnSummary& c) { return c.mean; }));
    rows.push_back(row("Median", [](const ColumnSummary& c) { return c.median; }));
    auto col = [](const ColumnSummary& c) { return ordered_json{{"mean", c.mean}, {"median", c.median}}; };
    summary = {{"n_concepts", sum.n_concepts},         {"matches", col(sum.matches)},
               {"co_tags", col(sum.co_tags)},          {"co_objects", col(sum.objects)},
               {"freq_top_objects", col(sum.freq_top_objects)},
               {"co_actions", col(sum.actions)},       {"freq_top_actions", col(sum.freq_top_actions)}};
  }
  s.write("stats.tsv", tsv(rows));
  s.write("stats.txt", aligned(rows));
  s.write("stats.json",
          ordered_json{{"concepts", std::move(concepts)}, {"summary", std::move(summary)}}.dump(1) + "\n");

  for (const auto& [kind, pick] :
       std::vector<std::pair<std::string, std::vector<TagCount> ConceptStats::*>>{
           {"objects", &ConceptStats::top_objects}, {"actions", &ConceptStats::top_actions}}) {
    std::vector<std::vector<std::string>> table{{"concept", "rank", "name", "count"}};
    std::string text;
    for (const auto& st : stats) {
      const auto& list = st.*pick;
      std::vector<std::string> quoted;
      for (std::size_t i = 0; i < list.size(); ++i) {
        table.push_back({st.name, std::to_string(i + 1), list[i].name, std::to_string(list[i].count)});
        quoted.push_back(fmt::format("'{}' ({})", list[i].name, list[i].count));
      }
      text += fmt::format("{}: {}\n", st.name, fmt::join(quoted, ", "));
    }
    s.write("top_" + kind + ".tsv", tsv(table));
    s.write("top_" + kind + ".txt", text);
  }
  s.out << fmt::format("stats: {} concepts\n", stats.size());
}

void Pipeline::run_palette() {
  auto& s = *state_;
  const auto& all = s.colour_analysis();
  std::size_t total = 0;
  for (const auto& cp : all) {
    const auto dir = fs::path("palettes") / slug(cp.social_concept);
    std::vector<Palette> rows;
    for (const auto& [id, palette] : cp.samples) {
      write_png(s.output(dir / fmt::format("{}.png", to_int(id))),
                render_proportional_strip(palette, s.cfg.strip_width, s.cfg.strip_height));
      rows.push_back(palette);
    }
    if (!rows.empty()) {
      write_png(s.output(dir / "grid.png"),
                render_palette_grid(rows, s.cfg.strip_width, s.cfg.strip_height, 4));
    }
    total += cp.samples.size();
  }
  s.write("palettes.json", palettes_json(all).dump(1) + "\n");
  s.out << fmt::format("palette: {} images across {} concepts\n", total, all.size());
}

void Pipeline::run_kg() {
  auto& s = *state_;
  const auto& d = s.cooccurrence();
  const auto& cps = s.colour_analysis();
  std::vector<ArtworkPalette> palettes;
  std::set<ArtworkId> known;
  for (const auto& [id, art] : d.artworks) known.insert(id);
  for (const auto& cp : cps) {
    for (const auto& sample : cp.samples) {
      if (std::none_of(palettes.begin(), palettes.end(),
                       [&](const ArtworkPalette& p) { return p.first == sample.first; })) {
        palettes.push_back(sample);
      }
    }
  }
  const auto graph = build_kg(s.selected(), d.profiles, palettes, known, s.classes(),
                              KgNamespace{s.cfg.namespace_iri});
  s.write("kg.ttl", rdf::serialize_turtle(graph));
  s.out << fmt::format("kg: {} triples\n", graph.size());
}

void Pipeline::run_report() {
  run_taxonomy();
  run_concepts();
  run_match();
  run_cooccur();
  run_stats();
  run_palette();
  run_kg();
}

std::size_t Pipeline::run_verify() {
  auto& s = *state_;
  require_path(s.cfg.expected_file, "--expected");
  const auto text = read_file(s.cfg.expected_file);
  const auto& stats = s.concept_statistics();

  std::map<std::string, const ConceptStats*> by_name;
  for (const auto& st : stats) by_name.emplace(st.name, &st);
  std::optional<SummaryStats> summary;
  if (!stats.empty()) summary = summary_stats(stats);

  struct Column {
    bool is_freq;
    double (*per_concept)(const ConceptStats&);
    const ColumnSummary SummaryStats::*summary;
  };
  const std::map<std::string, Column> columns{
      {"matches", {false, [](const ConceptStats& c) { return double(c.n_matches); }, &SummaryStats::matches}},
      {"co_tags", {false, [](const ConceptStats& c) { return double(c.n_co_tags); }, &SummaryStats::co_tags}},
      {"co_objects", {false, [](const ConceptStats& c) { return double(c.n_objects); }, &SummaryStats::objects}},
      {"freq_top_objects", {true, [](const ConceptStats& c) { return c.freq_top_objects; }, &SummaryStats::freq_top_objects}},
      {"co_actions", {false, [](const ConceptStats& c) { return double(c.n_actions); }, &SummaryStats::actions}},
      {"freq_top_actions", {true, [](const ConceptStats& c) { return c.freq_top_actions; }, &SummaryStats::freq_top_actions}},
  };

  std::vector<std::string> header;
  std::size_t failures = 0;
  std::size_t missing = 0;
  std::size_t checked = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos || line.front() == '#') continue;
    auto fields = split_tabs(line);
    if (header.empty()) {
      header = std::move(fields);
      if (header.empty() || header[0] != "concept") {
        throw ParseError("expected a header row starting with \"concept\"", line_no, 1);
      }
      for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i] != "tag_id" && !columns.contains(header[i])) {
          throw ParseError(fmt::format("unknown column \"{}\"", header[i]), line_no, 1);
        }
      }
      continue;
    }
    const std::string& name = fields[0];
    std::string lowered = name;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const bool is_summary = lowered == "average" || lowered == "median";
    const ConceptStats* st = nullptr;
    if (is_summary) {
      if (!summary) {
        s.out << fmt::format("MISSING {}: no concepts were computed\n", name);
        ++missing;
        continue;
      }
    } else {
      const auto it = by_name.find(name);
      if (it == by_name.end()) {
        s.out << fmt::format("MISSING {}: concept not among computed statistics\n", name);
        ++missing;
        continue;
      }
      st = it->second;
    }
    for (std::size_t i = 1; i < header.size() && i < fields.size(); ++i) {
      const auto& cell = fields[i];
      if (cell.empty() || cell == "-" || header[i] == "tag_id") continue;
      double expected = 0.0;
      try {
        expected = std::stod(cell);
      } catch (const std::exception&) {
        throw ParseError(fmt::format("non-numeric cell \"{}\"", cell), line_no, 1);
      }
      const auto& col = columns.at(header[i]);
      double computed = 0.0;
      if (is_summary) {
        const auto& cs = (*summary).*(col.summary);
        computed = lowered == "average" ? cs.mean : cs.median;
      } else {
        computed = col.per_concept(*st);
      }
      // Compare at display precision: integers for counts, one decimal for means.
      const double shown = col.is_freq ? round1(computed) : std::round(computed);
      const double tol = col.is_freq ? s.cfg.freq_tolerance : s.cfg.count_tolerance;
      ++checked;
      if (std::fabs(shown - expected) > tol + 1e-9) {
        ++failures;
        s.out << fmt::format("MISMATCH {}.{}: expected {}, computed {} (tolerance {})\n", name,
                             header[i], cell, col.is_freq ? fixed1(computed) : rounded(computed),
                             tol);
      }
    }
  }
  s.out << fmt::format("verify: {} cells checked, {} mismatches, {} missing rows\n", checked,
                       failures, missing);
  return failures + missing;
}

}  // namespace sckg
