#include "sckg/hash.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <vector>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "sckg/error.hpp"

namespace sckg {

struct ContentHasher::State {
  EVP_MD_CTX* ctx = nullptr;
  ~State() { EVP_MD_CTX_free(ctx); }
};

ContentHasher::ContentHasher() : state_(std::make_unique<State>()) {
  state_->ctx = EVP_MD_CTX_new();
  if (!state_->ctx || EVP_DigestInit_ex(state_->ctx, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 initialisation failed");
  }
}

ContentHasher::~ContentHasher() = default;

ContentHasher& ContentHasher::add(std::string_view bytes) {
  const std::string length = fmt::format("{}:", bytes.size());
  EVP_DigestUpdate(state_->ctx, length.data(), length.size());
  EVP_DigestUpdate(state_->ctx, bytes.data(), bytes.size());
  return *this;
}

ContentHasher& ContentHasher::add_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const auto size = std::filesystem::file_size(path);
  const std::string length = fmt::format("{}:", size);
  EVP_DigestUpdate(state_->ctx, length.data(), length.size());
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    const auto got = in.gcount();
    if (got > 0) EVP_DigestUpdate(state_->ctx, buffer.data(), static_cast<std::size_t>(got));
  }
  return *this;
}

ContentHasher& ContentHasher::add_tree(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(root)) return add(root.filename().string()).add_file(root);
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  add(fmt::format("{} files", files.size()));
  for (const auto& file : files) add(fs::relative(file, root).generic_string()).add_file(file);
  return *this;
}

std::string ContentHasher::hex_digest() {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(state_->ctx, digest.data(), &length);
  std::string out;
  for (unsigned int i = 0; i < length; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

}  // namespace sckg
