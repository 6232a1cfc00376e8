#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "greenmine/lexer.hpp"

namespace greenmine {

// A version-control revision hash such as "4e3b03de1fd3".
struct RevisionId {
  std::string id;

  friend bool operator==(const RevisionId&, const RevisionId&) = default;
  friend auto operator<=>(const RevisionId&, const RevisionId&) = default;
};

enum class VcsKind { kHg, kGit };

std::string_view to_string(VcsKind kind);
VcsKind parse_vcs_kind(std::string_view name);

using PathFilter = std::function<bool(std::string_view path)>;

// Accepts paths whose extension is in extensions (case-insensitive).
PathFilter cpp_path_filter(std::vector<std::string> extensions = default_cpp_extensions());

struct DiffContent {
  std::vector<std::string> added_lines;
  std::vector<std::string> removed_lines;
};

struct Changeset {
  RevisionId revision;
  RevisionId parent;
  std::vector<std::string> added_lines;
  std::vector<std::string> removed_lines;
};

// The unfiltered diff text between two consecutive revisions.
struct RawDiff {
  RevisionId revision;
  RevisionId parent;
  std::string text;
};

// Extracts added and removed lines from unified-diff text (hg or git).
// A file's lines are kept when its new path passes filter; deleted files are
// judged by their old path. Throws ParseError on a malformed hunk header.
DiffContent parse_unified_diff(std::string_view text, const PathFilter& filter);

// Argument vectors for the VCS executables. repo is passed via -R / -C.
std::vector<std::string> diff_command(VcsKind kind, const std::filesystem::path& repo,
                                      const RevisionId& from, const RevisionId& to);
std::vector<std::string> archive_command(VcsKind kind, const std::filesystem::path& repo,
                                         const RevisionId& revision,
                                         const std::filesystem::path& destination);

// Throws UnknownRevisionError if revision does not name a commit in repo.
void verify_revision(const std::filesystem::path& repo, VcsKind kind, const RevisionId& revision);

// One RawDiff per consecutive revision pair, attributed to the latter.
std::vector<RawDiff> extract_raw_diffs(const std::filesystem::path& repo, VcsKind kind,
                                       const std::vector<RevisionId>& revisions);

std::vector<Changeset> extract_changesets(const std::filesystem::path& repo, VcsKind kind,
                                          const std::vector<RevisionId>& revisions,
                                          const PathFilter& filter);

Changeset to_changeset(const RawDiff& diff, const PathFilter& filter);

// Exports revision to a temporary tree, lexes every file passing filter in
// path order, and removes the tree. Throws EmptyCorpusError when no file
// matches.
TokenStream checkout_corpus(const std::filesystem::path& repo, VcsKind kind,
                            const RevisionId& revision, const PathFilter& filter);

// Lexes every file under root passing filter, in sorted relative-path order.
TokenStream lex_tree(const std::filesystem::path& root, const PathFilter& filter,
                     std::string source_id);

// Offline mode: a directory of "<index>_<revision>.diff" files.
class DiffDirectory {
 public:
  explicit DiffDirectory(std::filesystem::path dir);

  // Diffs for revisions[1..], parents taken from the preceding entry.
  // Throws UnknownRevisionError when a revision has no diff file and
  // ValidationError when file indices disagree with the revision order.
  std::vector<RawDiff> raw_diffs(const std::vector<RevisionId>& revisions) const;

  static std::string file_name(std::size_t index, const RevisionId& revision);

 private:
  struct Entry {
    std::size_t index;
    RevisionId revision;
    std::filesystem::path path;
  };

  std::filesystem::path dir_;
  std::vector<Entry> entries_;
};

}  // namespace greenmine
