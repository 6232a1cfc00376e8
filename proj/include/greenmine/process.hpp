#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace greenmine::detail {

struct ProcessResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// Runs argv[0] (looked up on PATH) with the remaining arguments and captures
// both output streams. Throws ProcessError if the executable cannot start.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& working_dir = {});

// As run_process, but a nonzero exit status is also a ProcessError.
std::string run_checked(const std::vector<std::string>& argv,
                        const std::filesystem::path& working_dir = {});

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "greenmine");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace greenmine::detail
