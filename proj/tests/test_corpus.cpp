#include <map>

#include "doctest.h"
#include "sckg/corpus.hpp"
#include "sckg/error.hpp"
#include "sckg/io.hpp"
#include "test_support.hpp"

using namespace sckg;

TEST_CASE("fixture corpus ingests with a report") {
  testing::TempDir dir;
  testing::write_fixture_inputs(dir.path());
  const auto t = testing::fixture_taxonomy();
  const auto [ix, report] = ingest_corpus(dir / "corpus", t);

  CHECK(ix.size() == 9);
  const auto consumerism = ix.tagged_with(TagId{107});
  CHECK(std::vector<ArtworkId>(consumerism.begin(), consumerism.end()) ==
        std::vector<ArtworkId>{ArtworkId{1}, ArtworkId{2}, ArtworkId{3}});
  CHECK(ix.tagged_with(TagId{109}).size() == 2);
  CHECK(ix.tagged_with(TagId{112}).empty());
  CHECK(ix.tagged_with(TagId{111}).size() == 2);

  CHECK(report.files_read == 10);
  CHECK(report.errors.size() == 2);  // broken.json and the record without an id
  CHECK(report.unknown_tag_ids == std::set<TagId>{TagId{9999}});
  CHECK(report.records_with_unknown_tags == 1);
  CHECK(report.duplicate_ids.empty());
  // unknown tag kept on the record
  CHECK(ix.tagged_with(TagId{9999}).size() == 1);

  const Artwork* two = ix.find(ArtworkId{2});
  REQUIRE(two);
  CHECK(two->accession == "T00002");
  CHECK(two->artist == "Artist 2");
  CHECK(two->date == std::optional<std::string>("1962"));
  // the "subject" wrapper node is not a tag
  CHECK_FALSE(std::binary_search(two->tag_ids.begin(), two->tag_ids.end(), TagId{1}));
  CHECK(two->image_path);
  CHECK(ix.find(ArtworkId{4})->image_path->filename() == "T00004.jpg");
  CHECK_FALSE(ix.find(ArtworkId{6})->image_path);

  const auto text = format_ingest_report(report);
  CHECK(text.find("broken.json") != std::string::npos);
  CHECK(text.find("9999") != std::string::npos);
}

TEST_CASE("empty directory gives an empty index and report") {
  testing::TempDir dir;
  const auto [ix, report] = ingest_corpus(dir.path(), Taxonomy{});
  CHECK(ix.size() == 0);
  CHECK(ix.by_tag().empty());
  CHECK(report.empty());
}

TEST_CASE("missing root is an error") {
  testing::TempDir dir;
  try {
    ingest_corpus(dir / "nope", Taxonomy{});
    FAIL("expected UnreadableRoot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnreadableRoot);
  }
}

TEST_CASE("single-file corpus, arrays and duplicates") {
  testing::TempDir dir;
  write_file(dir / "all.json",
             R"([{"id": 5, "tag_ids": [3, 3, 1]}, {"id": 2, "tag_ids": [3]},
                 {"id": 5, "tag_ids": [9]}])");
  const auto [ix, report] = ingest_corpus(dir / "all.json", parse_taxonomy("1\ta\t\n3\tb\t1\n"));
  CHECK(ix.size() == 2);
  CHECK(ix.find(ArtworkId{5})->tag_ids == std::vector<TagId>{TagId{1}, TagId{3}});
  CHECK(report.duplicate_ids == std::vector<ArtworkId>{ArtworkId{5}});
  CHECK(ix.tagged_with(TagId{3}).size() == 2);
  CHECK(ix.tagged_with(TagId{9}).empty());
}

TEST_CASE("matching is explicit-tag only") {
  ArtworkIndex ix = ArtworkIndex::build({
      Artwork{ArtworkId{1}, "", "", "", {}, "", {TagId{5}, TagId{50}}, {}},
      Artwork{ArtworkId{2}, "", "", "", {}, "", {TagId{5}}, {}},
  });
  // 5 is the parent of 50 but artwork 2 does not match concept 50
  CHECK(match_concept(ix, SocialConcept{TagId{50}, "c", "", ""}) ==
        std::vector<ArtworkId>{ArtworkId{1}});
  CHECK(match_concept(ix, SocialConcept{TagId{77}, "absent", "", ""}).empty());
}

TEST_CASE("property: index agrees with a linear rescan; ingest is idempotent") {
  std::mt19937_64 rng(17);
  std::vector<TagId> tags;
  for (int i = 0; i < 30; ++i) tags.push_back(TagId{i});
  for (int round = 0; round < 200; ++round) {
    auto arts = testing::random_artworks(rng, tags, 60);
    const auto ix = ArtworkIndex::build(arts);
    for (TagId tag : tags) {
      std::vector<ArtworkId> oracle;
      for (const auto& a : arts) {
        if (std::find(a.tag_ids.begin(), a.tag_ids.end(), tag) != a.tag_ids.end()) {
          oracle.push_back(a.id);
        }
      }
      std::sort(oracle.begin(), oracle.end());
      const auto got = ix.tagged_with(tag);
      CHECK(std::vector<ArtworkId>(got.begin(), got.end()) == oracle);
    }
    for (const auto& [tag, list] : ix.by_tag()) CHECK_FALSE(list.empty());
  }

  testing::TempDir dir;
  testing::write_fixture_inputs(dir.path());
  const auto t = testing::fixture_taxonomy();
  CHECK(ingest_corpus(dir / "corpus", t).index == ingest_corpus(dir / "corpus", t).index);
}
