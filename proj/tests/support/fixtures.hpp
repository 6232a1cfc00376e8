#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "greenmine/energy.hpp"
#include "greenmine/process.hpp"
#include "greenmine/vcs.hpp"

namespace greenmine::testing {

std::filesystem::path data_dir();
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

// A throwaway git repository with a fixed author and date.
class GitRepo {
 public:
  explicit GitRepo(std::filesystem::path dir);

  const std::filesystem::path& path() const { return dir_; }
  void write(const std::string& relative, const std::string& text) const;
  void remove(const std::string& relative) const;
  // Stages everything and commits; returns the full commit hash.
  RevisionId commit(const std::string& message);

 private:
  std::string git(std::vector<std::string> args) const;

  std::filesystem::path dir_;
  int commits_ = 0;
};

// A repository whose added-line entropy tracks the energy deltas. Revision
// 0 is a base codebase; each later revision adds a new file mixing lines
// copied from the base with lines of fresh identifiers. The fresh fraction
// drives both the entropy and the planted delta.
struct PlantedHistory {
  std::vector<RevisionId> revisions;
  EnergyProfile profile;
  std::vector<double> novelty;  // fresh-line fraction per revision, [0] unused
};

PlantedHistory make_planted_history(GitRepo& repo, std::size_t revision_count, std::uint64_t seed,
                                    double noise = 0.05);

void write_profile(const std::filesystem::path& path, const EnergyProfile& profile);

// Files under dir (relative path -> contents), for byte comparisons.
std::vector<std::pair<std::string, std::string>> snapshot(const std::filesystem::path& dir);

}  // namespace greenmine::testing
