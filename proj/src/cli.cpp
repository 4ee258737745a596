#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "sckg/error.hpp"
#include "sckg/pipeline.hpp"

namespace sckg {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  CLI::App app{"Social-concept knowledge graph pipeline over a museum collection"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string data_dir, taxonomy, concepts, output = cfg.output_dir.string(), expected;
  bool no_ancestors = false;
  app.add_option("--data-dir", data_dir, "Artwork metadata root (directory or single file)")
      ->envname("SCKG_DATA_DIR");
  app.add_option("--taxonomy", taxonomy, "Subject taxonomy (nested JSON, flat TSV, or a directory of records)")
      ->envname("SCKG_TAXONOMY");
  app.add_option("--concepts", concepts, "Concept list (TSV: tag_id, name, area)")
      ->envname("SCKG_CONCEPTS");
  app.add_option("--out", output, "Output directory")->envname("SCKG_OUT")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Sampling seed")->envname("SCKG_SEED")->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance, "Colour grouping distance (RGB)")
      ->envname("SCKG_TOLERANCE")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--top-k", cfg.top_k, "Length of top object/action lists")
      ->envname("SCKG_TOP_K")
      ->capture_default_str();
  app.add_option("--sample-n", cfg.sample_n, "Images sampled per concept")
      ->envname("SCKG_SAMPLE_N")
      ->capture_default_str();
  app.add_option("--medium", cfg.medium_filter, "Medium keywords for image sampling")
      ->envname("SCKG_MEDIUM")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--namespace", cfg.namespace_iri, "Namespace IRI for minted resources")
      ->envname("SCKG_NAMESPACE")
      ->capture_default_str();
  app.add_flag("--no-ancestor-cooccurrence", no_ancestors,
               "Do not count a concept's own level-0/1 ancestors as co-occurring tags")
      ->envname("SCKG_NO_ANCESTOR_COOCCURRENCE");
  app.add_option("--palette-concept", cfg.palette_concepts,
                 "Restrict colour analysis to these concept names (repeatable)")
      ->envname("SCKG_PALETTE_CONCEPTS")
      ->delimiter(',');
  app.add_option("--wordcloud-n", cfg.wordcloud_n, "Rows per wordcloud frequency file")
      ->envname("SCKG_WORDCLOUD_N")
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Compare statistics with an expected-values table");
  verify->add_option("--expected", expected, "Expected values (TSV, Table-2 columns)")->required();
  verify->add_option("--count-tolerance", cfg.count_tolerance, "Allowed difference on counts")
      ->capture_default_str();
  verify->add_option("--freq-tolerance", cfg.freq_tolerance,
                     "Allowed difference on frequency means")
      ->capture_default_str();

  app.add_subcommand("taxonomy", "Parse and validate the taxonomy; write SKOS Turtle");
  app.add_subcommand("concepts", "List the selected social concepts");
  app.add_subcommand("match", "Write per-concept artwork matches");
  app.add_subcommand("cooccur", "Write co-occurrence profiles and wordcloud tables");
  app.add_subcommand("stats", "Write per-concept statistics and top-k tables");
  app.add_subcommand("palette", "Sample images, extract palettes, render strips");
  app.add_subcommand("kg", "Write the integrated knowledge graph (Turtle)");
  app.add_subcommand("report", "Run every stage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e_out;
    const int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? 0 : 2;
  }

  cfg.data_dir = data_dir;
  cfg.taxonomy_file = taxonomy;
  cfg.concepts_file = concepts;
  cfg.output_dir = output;
  cfg.expected_file = expected;
  cfg.ancestor_cooccurrence = !no_ancestors;

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Pipeline pipeline(cfg, out, err);
    if (name == "taxonomy") pipeline.run_taxonomy();
    else if (name == "concepts") pipeline.run_concepts();
    else if (name == "match") pipeline.run_match();
    else if (name == "cooccur") pipeline.run_cooccur();
    else if (name == "stats") pipeline.run_stats();
    else if (name == "palette") pipeline.run_palette();
    else if (name == "kg") pipeline.run_kg();
    else if (name == "report") pipeline.run_report();
    else if (name == "verify") return pipeline.run_verify() == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sckg
