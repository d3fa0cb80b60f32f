// Copyright 2026 The QFaaS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfaas/storage/document_dir.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>

#include "qfaas/error.hpp"

namespace qfaas::storage {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void storage_failure(const std::string& what) {
  throw Error("StorageFailure", what + ": " + std::strerror(errno));
}

void fsync_path(const fs::path& p, int flags) {
  const int fd = ::open(p.c_str(), flags);
  if (fd < 0) storage_failure("open " + p.string());
  if (::fsync(fd) != 0) {
    ::close(fd);
    storage_failure("fsync " + p.string());
  }
  ::close(fd);
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.size() > 200 || key.front() == '.') return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
           c == '.';
  });
}

}  // namespace

DocumentDir::DocumentDir(fs::path dir, bool durable) : dir_(std::move(dir)), durable_(durable) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error("StorageFailure", "cannot create " + dir_.string() + ": " + ec.message());
}

fs::path DocumentDir::file_for(std::string_view key) const {
  if (!valid_key(key)) throw Error("StorageFailure", "invalid document key '" + std::string(key) + "'");
  return dir_ / (std::string(key) + ".json");
}

void DocumentDir::put(std::string_view key, const nlohmann::json& doc) const {
  const fs::path target = file_for(key);
  const fs::path tmp = dir_ / ("." + std::string(key) + ".tmp");
  const std::string body = doc.dump(2) + "\n";

  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0640);
  if (fd < 0) storage_failure("open " + tmp.string());
  std::size_t written = 0;
  while (written < body.size()) {
    const ssize_t n = ::write(fd, body.data() + written, body.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      storage_failure("write " + tmp.string());
    }
    written += static_cast<std::size_t>(n);
  }
  if (durable_ && ::fsync(fd) != 0) {
    ::close(fd);
    storage_failure("fsync " + tmp.string());
  }
  ::close(fd);
  if (::rename(tmp.c_str(), target.c_str()) != 0) storage_failure("rename " + tmp.string());
  if (durable_) fsync_path(dir_, O_RDONLY | O_DIRECTORY);
}

std::optional<nlohmann::json> DocumentDir::get(std::string_view key) const {
  std::ifstream in(file_for(key));
  if (!in) return std::nullopt;
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("StorageFailure", "corrupt document '" + std::string(key) + "': " + e.what());
  }
}

void DocumentDir::remove(std::string_view key) const {
  std::error_code ec;
  fs::remove(file_for(key), ec);
  if (ec) throw Error("StorageFailure", "cannot remove '" + std::string(key) + "': " + ec.message());
  if (durable_) fsync_path(dir_, O_RDONLY | O_DIRECTORY);
}

std::vector<std::string> DocumentDir::keys() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto name = entry.path().filename().string();
    if (!entry.is_regular_file() || name.front() == '.' || entry.path().extension() != ".json") continue;
    out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qfaas::storage
