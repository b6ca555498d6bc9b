#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

namespace efpred {

/// Writes to "<path>.tmp" then renames over `path`, so readers never see a
/// truncated file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Records files written during a multi-file emission and deletes them on
/// destruction unless commit() was called.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir);
  ~ArtifactSet();
  ArtifactSet(const ArtifactSet&) = delete;
  ArtifactSet& operator=(const ArtifactSet&) = delete;

  std::filesystem::path write(std::string_view filename, std::string_view contents);
  void commit() noexcept { committed_ = true; }
  const std::vector<std::filesystem::path>& files() const noexcept { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
  bool committed_ = false;
};

}  // namespace efpred
