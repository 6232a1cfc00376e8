#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "greenmine/report.hpp"

namespace greenmine::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return GREENMINE_TEST_DATA; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.flush()) throw std::runtime_error("cannot write " + path.string());
}

GitRepo::GitRepo(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  git({"init", "-q"});
}

std::string GitRepo::git(std::vector<std::string> args) const {
  std::vector<std::string> argv = {"git",           "-C", dir_.string(), "-c", "user.name=Fixture",
                                   "-c",            "user.email=fixture@example.com",
                                   "-c",            "commit.gpgsign=false"};
  argv.insert(argv.end(), args.begin(), args.end());
  return detail::run_checked(argv);
}

void GitRepo::write(const std::string& relative, const std::string& text) const {
  write_file(dir_ / relative, text);
}

void GitRepo::remove(const std::string& relative) const { fs::remove(dir_ / relative); }

RevisionId GitRepo::commit(const std::string& message) {
  git({"add", "-A"});
  // A fixed, increasing timestamp keeps hashes stable across runs.
  const std::string stamp = std::to_string(1388534400 + 60 * ++commits_) + " +0000";
  detail::run_checked({"env", "GIT_AUTHOR_DATE=" + stamp, "GIT_COMMITTER_DATE=" + stamp, "git", "-C",
                       dir_.string(), "-c", "user.name=Fixture", "-c",
                       "user.email=fixture@example.com", "-c", "commit.gpgsign=false", "commit",
                       "-q", "--allow-empty", "-m", message});
  std::string hash = git({"rev-parse", "HEAD"});
  while (!hash.empty() && (hash.back() == '\n' || hash.back() == '\r')) hash.pop_back();
  return {hash};
}

namespace {

const char* const kBaseLines[] = {
    "int count = 0;",
    "for (int i = 0; i < size; ++i) {",
    "count += values[i];",
    "}",
    "return count;",
    "if (value == nullptr) return false;",
    "std::vector<int> values;",
    "values.push_back(item);",
    "const int size = values.size();",
    "total = total + value;",
};

std::string fresh_line(std::mt19937_64& rng, std::size_t& serial) {
  // Never-seen identifiers and literals: every token is surprising.
  std::ostringstream line;
  line << "auto q" << serial << "_" << rng() % 1000 << " = zz" << serial + 1 << "(w" << serial + 2
       << ", " << 1000 + serial << ");";
  serial += 3;
  return line.str();
}

}  // namespace

PlantedHistory make_planted_history(GitRepo& repo, std::size_t revision_count, std::uint64_t seed,
                                    double noise) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, noise);

  PlantedHistory history;
  std::ostringstream base;
  base << "// base\n";
  for (int copy = 0; copy < 20; ++copy) {
    for (const char* line : kBaseLines) base << line << "\n";
  }
  repo.write("src/base.cpp", base.str());
  repo.write("README.md", "fixture\n");
  history.revisions.push_back(repo.commit("base"));
  history.novelty.push_back(0.0);
  double watts = 50.0;
  history.profile.entries.push_back({history.revisions.back(), watts});

  std::size_t serial = 0;
  constexpr int kLinesPerChange = 40;
  for (std::size_t r = 1; r < revision_count; ++r) {
    const double novelty = unit(rng);
    std::ostringstream text;
    for (int k = 0; k < kLinesPerChange; ++k) {
      if (unit(rng) < novelty) {
        text << fresh_line(rng, serial) << "\n";
      } else {
        text << kBaseLines[rng() % std::size(kBaseLines)] << "\n";
      }
    }
    repo.write("src/change_" + std::to_string(r) + ".cpp", text.str());
    // Trim the previous change so the removed stream is exercised too.
    if (r > 1) {
      const std::string previous = "src/change_" + std::to_string(r - 1) + ".cpp";
      std::string body = read_file(repo.path() / previous);
      body.erase(0, body.find('\n') + 1);
      repo.write(previous, body);
    }
    history.revisions.push_back(repo.commit("change " + std::to_string(r)));
    history.novelty.push_back(novelty);
    watts += 2.0 * (novelty - 0.5) + jitter(rng);
    history.profile.entries.push_back({history.revisions.back(), watts});
  }
  return history;
}

void write_profile(const fs::path& path, const EnergyProfile& profile) {
  std::ostringstream out;
  out << "revision,mean_watts\n";
  for (const auto& entry : profile.entries) {
    out << entry.revision.id << "," << format_number(entry.mean_watts) << "\n";
  }
  write_file(path, out.str());
}

std::vector<std::pair<std::string, std::string>> snapshot(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    files.emplace_back(fs::relative(entry.path(), dir).generic_string(), read_file(entry.path()));
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace greenmine::testing
