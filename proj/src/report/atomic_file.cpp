#include "efpred/report/atomic_file.hpp"

#include <fstream>
#include <system_error>

#include "efpred/common/error.hpp"

namespace efpred {

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::kIo, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::kIo, "cannot rename into '" + path.string() + "'");
  }
}

ArtifactSet::ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create directory '" + dir_.string() + "'");
}

ArtifactSet::~ArtifactSet() {
  if (committed_) return;
  for (const auto& f : files_) {
    std::error_code ec;
    std::filesystem::remove(f, ec);
  }
}

std::filesystem::path ArtifactSet::write(std::string_view filename, std::string_view contents) {
  const auto path = dir_ / std::filesystem::path(filename);
  write_file_atomic(path, contents);
  files_.push_back(path);
  return path;
}

}  // namespace efpred
