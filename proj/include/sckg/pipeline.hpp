#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sckg {

/// Settings shared by every subcommand. Defaults reproduce the published
/// analysis: top ten lists, 30 sampled paintings/prints per concept.
struct PipelineConfig {
  std::filesystem::path data_dir;
  std::filesystem::path taxonomy_file;
  std::filesystem::path concepts_file;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  int tolerance = 32;
  std::size_t top_k = 10;
  std::size_t sample_n = 30;
  std::vector<std::string> medium_filter = {"painting", "print"};
  std::string namespace_iri = "http://example.org/sckg/";
  bool ancestor_cooccurrence = true;

  /// Concept names to run colour analysis on; empty means all selected.
  std::vector<std::string> palette_concepts;
  std::size_t wordcloud_n = 50;
  int strip_width = 600;
  int strip_height = 40;

  std::filesystem::path expected_file;
  double count_tolerance = 0.0;
  double freq_tolerance = 0.0;
};

class Pipeline {
 public:
  Pipeline(PipelineConfig config, std::ostream& out, std::ostream& log);
  ~Pipeline();
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  void run_taxonomy();
  void run_concepts();
  void run_match();
  void run_cooccur();
  void run_stats();
  void run_palette();
  void run_kg();
  void run_report();
  /// Returns mismatching cells plus missing rows (0 = success).
  std::size_t run_verify();

  /// Cache hits/misses so far, for tests and diagnostics.
  std::size_t cache_hits() const;
  std::size_t cache_misses() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Entry point behind the `sckg` binary. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sckg
