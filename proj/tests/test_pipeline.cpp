#include <sstream>

#include "doctest.h"
#include "sckg/io.hpp"
#include "sckg/pipeline.hpp"
#include "test_support.hpp"

using namespace sckg;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sckg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> inputs(const testing::TempDir& dir) {
  return {"--data-dir", (dir / "corpus").string(), "--taxonomy", (dir / "taxonomy.json").string(),
          "--concepts", (dir / "concepts.tsv").string(), "--out", (dir / "out").string()};
}

std::vector<std::string> with(std::vector<std::string> base, std::initializer_list<std::string> more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

}  // namespace

TEST_CASE("concepts with an empty concept list") {
  testing::TempDir dir;
  testing::write_fixture_inputs(dir.path());
  write_file(dir / "concepts.tsv", "");
  const auto r = cli(with(inputs(dir), {"concepts"}));
  CHECK(r.code == 0);
  CHECK(r.out.find("0 selected") != std::string::npos);
  CHECK(read_file(dir / "out" / "concepts.tsv") == "tag_id\tname\tarea\tparent\n");
}

TEST_CASE("bad invocations fail with a message") {
  CHECK(cli({"frobnicate"}).code != 0);
  CHECK(cli({}).code != 0);
  CHECK(cli({"stats", "--top-k", "many"}).code != 0);
  const auto missing = cli({"taxonomy", "--taxonomy", "/definitely/not/here.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error:") != std::string::npos);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("stats on the fixture inputs") {
  testing::TempDir dir;
  testing::write_fixture_inputs(dir.path());
  const auto r = cli(with(inputs(dir), {"stats"}));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto tsv = read_file(dir / "out" / "stats.tsv");
  // consumerism: artworks 1,2,3; co-tags 15,4,102,11,2,103,12,101,104,100,10,1 = 12
  // objects: woman 2, man, missile, weapons 1 -> mean 1.25 shown 1.3; actions 2 -> 1.0
  CHECK(tsv.find("consumerism\t107\t3\t12\t4\t1.3\t2\t1.0\n") != std::string::npos);
  // void is tagged nowhere
  CHECK(tsv.find("void\t112\t0\t0\t0\t0.0\t0\t0.0\n") != std::string::npos);
  CHECK(tsv.find("\nAverage\t-\t") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "top_objects.txt"));
  CHECK(fs::exists(dir / "out" / "stats.json"));
}

TEST_CASE("ancestor toggle changes co-tag counts") {
  testing::TempDir dir;
  testing::write_fixture_inputs(dir.path());
  REQUIRE(cli(with(inputs(dir), {"--no-ancestor-cooccurrence", "stats"})).code == 0);
  const auto tsv = read_file(dir / "out" / "stats.tsv");
  CHECK(tsv.find("consumerism\t107\t3\t10\t") != std::string::npos);
}

TEST_CASE("verify passes on its own output and names a perturbed cell") {
  testing::TempDir dir;
  testing::write_fixture_inputs(dir.path());
  REQUIRE(cli(with(inputs(dir), {"stats"})).code == 0);
  const auto expected = read_file(dir / "out" / "stats.tsv");
  write_file(dir / "expected.tsv", expected);

  const auto ok = cli(with(inputs(dir), {"verify", "--expected", (dir / "expected.tsv").string()}));
  CHECK_MESSAGE(ok.code == 0, ok.out);
  CHECK(ok.out.find(" 0 mismatches") != std::string::npos);

  std::string perturbed = expected;
  const std::string row = "consumerism\t107\t3\t";
  const auto at = perturbed.find(row);
  REQUIRE(at != std::string::npos);
  perturbed.replace(at, row.size(), "consumerism\t107\t5\t");
  write_file(dir / "expected.tsv", perturbed);
  const auto bad = cli(with(inputs(dir), {"verify", "--expected", (dir / "expected.tsv").string()}));
  CHECK(bad.code != 0);
  CHECK(bad.out.find("MISMATCH consumerism.matches: expected 5, computed 3") != std::string::npos);

  // within tolerance the same difference passes
  const auto loose = cli(with(inputs(dir), {"verify", "--expected", (dir / "expected.tsv").string(),
                                            "--count-tolerance", "2"}));
  CHECK(loose.code == 0);

  write_file(dir / "expected.tsv", "concept\tmatches\nparanoia\t1\n");
  const auto missing = cli(with(inputs(dir), {"verify", "--expected", (dir / "expected.tsv").string()}));
  CHECK(missing.code != 0);
  CHECK(missing.out.find("MISSING paranoia") != std::string::npos);
}

TEST_CASE("kg reuses the cached co-occurrence stage") {
  testing::TempDir dir;
  testing::write_fixture_inputs(dir.path());
  PipelineConfig cfg;
  cfg.data_dir = dir / "corpus";
  cfg.taxonomy_file = dir / "taxonomy.json";
  cfg.concepts_file = dir / "concepts.tsv";
  cfg.output_dir = dir / "out";
  std::ostringstream out, log;
  {
    Pipeline first(cfg, out, log);
    first.run_cooccur();
    CHECK(first.cache_misses() == 1);
    CHECK(first.cache_hits() == 0);
  }
  {
    Pipeline second(cfg, out, log);
    second.run_kg();
    CHECK(second.cache_hits() >= 1);
  }
  CHECK(log.str().find("cache hit: cooccur-") != std::string::npos);
  const auto ttl = read_file(dir / "out" / "kg.ttl");
  CHECK(ttl.find("sco:Cooccurrence") != std::string::npos);

  // touching an input invalidates the cache
  write_file(dir / "corpus" / "extra.jsonl", "{\"id\": 9, \"tag_ids\": [111]}\n");
  std::ostringstream log2;
  Pipeline third(cfg, out, log2);
  third.run_cooccur();
  CHECK(third.cache_misses() == 1);
  std::size_t cooccur_files = 0;
  for (const auto& e : fs::directory_iterator(dir / "out" / "cache")) {
    cooccur_files += e.path().filename().string().starts_with("cooccur-");
  }
  CHECK(cooccur_files == 1);
}

TEST_CASE("report writes every artifact") {
  testing::TempDir dir;
  testing::write_fixture_inputs(dir.path());
  const auto r = cli(with(inputs(dir), {"--seed", "7", "report"}));
  REQUIRE_MESSAGE(r.code == 0, r.err);
  for (const char* f : {"taxonomy.ttl", "taxonomy_levels.tsv", "concepts.tsv", "matches.tsv",
                        "matches.json", "ingest_report.txt", "cooccurrence.json", "stats.tsv",
                        "stats.txt", "top_objects.tsv", "top_actions.txt", "palettes.json", "kg.ttl"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / "out" / f));
  }
  CHECK(fs::exists(dir / "out" / "palettes"));
  CHECK(fs::exists(dir / "out" / "wordcloud"));
}
