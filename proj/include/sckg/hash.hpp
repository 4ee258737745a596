#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace sckg {

/// Incremental SHA-256; used to key cached pipeline artifacts by input content.
class ContentHasher {
 public:
  ContentHasher();
  ~ContentHasher();
  ContentHasher(const ContentHasher&) = delete;
  ContentHasher& operator=(const ContentHasher&) = delete;

  /// Length-prefixed, so ("ab","c") and ("a","bc") differ.
  ContentHasher& add(std::string_view bytes);
  ContentHasher& add_file(const std::filesystem::path& path);
  /// Every regular file below `root`, in sorted relative-path order, with its
  /// relative path mixed in.
  ContentHasher& add_tree(const std::filesystem::path& root);

  /// Lower-case hex digest; the hasher cannot be reused afterwards.
  std::string hex_digest();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

}  // namespace sckg
