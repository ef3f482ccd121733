#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parared {

struct ProcessResult {
  std::string output;  // stdout and stderr, interleaved
  int exit_code = -1;
  bool timed_out = false;
  bool cancelled = false;
  double seconds = 0;
};

class ProcessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs `argv` with stdin from /dev/null, capturing its output. The child is
/// killed (with its process group) once `timeout` elapses or `cancel` is set.
ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::duration<double> timeout,
                          const std::atomic<bool>* cancel = nullptr);

/// Resolves a program name against PATH; returns nullopt if not found.
std::optional<std::filesystem::path> find_executable(const std::string& name);

/// A file in the temp directory removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& suffix, const std::string& contents = {});
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  void write(const std::string& contents) const;

 private:
  std::filesystem::path path_;
};

}  // namespace parared
