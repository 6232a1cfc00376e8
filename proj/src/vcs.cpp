#include "greenmine/vcs.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "greenmine/error.hpp"
#include "greenmine/process.hpp"

namespace greenmine {

namespace fs = std::filesystem;

namespace {

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// Path from a ---/+++ header or a "diff --git" operand. Empty for /dev/null.
std::string header_path(std::string_view rest) {
  if (const auto tab = rest.find('\t'); tab != std::string_view::npos) rest = rest.substr(0, tab);
  while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) rest.remove_suffix(1);
  std::string path;
  if (rest.size() >= 2 && rest.front() == '"' && rest.back() == '"') {
    rest = rest.substr(1, rest.size() - 2);
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] == '\\' && i + 1 < rest.size()) ++i;
      path += rest[i];
    }
  } else {
    path = std::string(rest);
  }
  if (path == "/dev/null") return {};
  if (starts_with(path, "a/") || starts_with(path, "b/")) path.erase(0, 2);
  return path;
}

// Parses "start[,count]" and returns count (default 1).
bool parse_range(std::string_view field, long& count) {
  const auto comma = field.find(',');
  const std::string_view start = field.substr(0, comma);
  long value = 0;
  auto [p, ec] = std::from_chars(start.data(), start.data() + start.size(), value);
  if (ec != std::errc() || p != start.data() + start.size() || start.empty()) return false;
  if (comma == std::string_view::npos) {
    count = 1;
    return true;
  }
  const std::string_view len = field.substr(comma + 1);
  auto [q, ec2] = std::from_chars(len.data(), len.data() + len.size(), count);
  return ec2 == std::errc() && q == len.data() + len.size() && !len.empty();
}

// "@@ -a[,b] +c[,d] @@ ..." -> (b, d).
bool parse_hunk_header(std::string_view line, long& old_count, long& new_count) {
  if (!starts_with(line, "@@ -")) return false;
  const auto close = line.find(" @@", 3);
  if (close == std::string_view::npos) return false;
  const std::string_view ranges = line.substr(4, close - 4);
  const auto space = ranges.find(" +");
  if (space == std::string_view::npos) return false;
  return parse_range(ranges.substr(0, space), old_count) &&
         parse_range(ranges.substr(space + 2), new_count);
}

std::string strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return std::string(s);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string_view to_string(VcsKind kind) { return kind == VcsKind::kHg ? "hg" : "git"; }

VcsKind parse_vcs_kind(std::string_view name) {
  if (name == "hg") return VcsKind::kHg;
  if (name == "git") return VcsKind::kGit;
  throw ValidationError("unknown vcs kind: " + std::string(name));
}

PathFilter cpp_path_filter(std::vector<std::string> extensions) {
  return [exts = std::move(extensions)](std::string_view path) { return is_cpp_path(path, exts); };
}

DiffContent parse_unified_diff(std::string_view text, const PathFilter& filter) {
  DiffContent content;
  std::string old_path, new_path;
  bool keep = false;
  long old_left = 0, new_left = 0;
  std::size_t line_no = 0;

  auto decide = [&] { keep = filter(new_path.empty() ? old_path : new_path); };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;

    if (old_left > 0 || new_left > 0) {
      const char tag = line.empty() ? ' ' : line.front();
      if (tag == ' ' || line == "\r") {
        --old_left;
        --new_left;
        continue;
      }
      if (tag == '+') {
        --new_left;
        if (keep) content.added_lines.push_back(strip_cr(line.substr(1)));
        continue;
      }
      if (tag == '-') {
        --old_left;
        if (keep) content.removed_lines.push_back(strip_cr(line.substr(1)));
        continue;
      }
      if (tag == '\\') continue;
      // Short hunk; fall through and treat the line as a header.
      old_left = new_left = 0;
    }

    if (starts_with(line, "diff ")) {
      old_path.clear();
      new_path.clear();
      if (starts_with(line, "diff --git ")) {
        const std::string_view operands = line.substr(11);
        if (const auto split = operands.find(" b/"); split != std::string_view::npos) {
          old_path = header_path(operands.substr(0, split));
          new_path = header_path(operands.substr(split + 1));
        }
      }
      decide();
    } else if (starts_with(line, "--- ")) {
      old_path = header_path(line.substr(4));
      decide();
    } else if (starts_with(line, "+++ ")) {
      new_path = header_path(line.substr(4));
      decide();
    } else if (starts_with(line, "rename to ")) {
      new_path = header_path(line.substr(10));
      decide();
    } else if (starts_with(line, "@@")) {
      if (!parse_hunk_header(strip_cr(line), old_left, new_left) || old_left < 0 || new_left < 0) {
        throw ParseError("malformed hunk header: " + std::string(line), line_no);
      }
    }
  }
  return content;
}

std::vector<std::string> diff_command(VcsKind kind, const fs::path& repo, const RevisionId& from,
                                      const RevisionId& to) {
  if (kind == VcsKind::kHg) {
    return {"hg", "-R", repo.string(), "diff", "-r", from.id + ":" + to.id};
  }
  return {"git", "-C", repo.string(), "-c", "core.quotepath=off", "diff",
          "--no-color", "--no-ext-diff", "--no-renames", from.id, to.id};
}

std::vector<std::string> archive_command(VcsKind kind, const fs::path& repo,
                                         const RevisionId& revision, const fs::path& destination) {
  if (kind == VcsKind::kHg) {
    return {"hg", "-R", repo.string(), "archive", "-r", revision.id, "-t", "files",
            destination.string()};
  }
  return {"git", "-C", repo.string(), "archive", "--format=tar", "-o", destination.string(),
          revision.id};
}

void verify_revision(const fs::path& repo, VcsKind kind, const RevisionId& revision) {
  if (revision.id.empty()) throw UnknownRevisionError(revision.id);
  std::vector<std::string> argv;
  if (kind == VcsKind::kHg) {
    argv = {"hg", "-R", repo.string(), "log", "-r", revision.id, "--template", "{node}"};
  } else {
    argv = {"git", "-C", repo.string(), "rev-parse", "--verify", "--quiet",
            revision.id + "^{commit}"};
  }
  if (detail::run_process(argv).exit_code != 0) throw UnknownRevisionError(revision.id);
}

namespace {

void require_repo(const fs::path& repo) {
  if (!fs::is_directory(repo)) throw ValidationError("repository not found: " + repo.string());
}

}  // namespace

std::vector<RawDiff> extract_raw_diffs(const fs::path& repo, VcsKind kind,
                                       const std::vector<RevisionId>& revisions) {
  require_repo(repo);
  for (const RevisionId& revision : revisions) verify_revision(repo, kind, revision);
  std::vector<RawDiff> diffs;
  for (std::size_t i = 1; i < revisions.size(); ++i) {
    diffs.push_back({revisions[i], revisions[i - 1],
                     detail::run_checked(diff_command(kind, repo, revisions[i - 1], revisions[i]))});
  }
  return diffs;
}

Changeset to_changeset(const RawDiff& diff, const PathFilter& filter) {
  DiffContent content = parse_unified_diff(diff.text, filter);
  return {diff.revision, diff.parent, std::move(content.added_lines),
          std::move(content.removed_lines)};
}

std::vector<Changeset> extract_changesets(const fs::path& repo, VcsKind kind,
                                          const std::vector<RevisionId>& revisions,
                                          const PathFilter& filter) {
  std::vector<Changeset> out;
  for (const RawDiff& diff : extract_raw_diffs(repo, kind, revisions)) {
    out.push_back(to_changeset(diff, filter));
  }
  return out;
}

TokenStream lex_tree(const fs::path& root, const PathFilter& filter, std::string source_id) {
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::string relative = fs::relative(entry.path(), root).generic_string();
    if (filter(relative)) files.emplace_back(std::move(relative), entry.path());
  }
  std::sort(files.begin(), files.end());
  TokenStream corpus{{}, std::move(source_id)};
  for (const auto& [relative, path] : files) {
    corpus.append(tokenize_source(read_file(path), relative));
  }
  return corpus;
}

TokenStream checkout_corpus(const fs::path& repo, VcsKind kind, const RevisionId& revision,
                            const PathFilter& filter) {
  require_repo(repo);
  verify_revision(repo, kind, revision);
  detail::TempDir scratch("greenmine-checkout");
  const fs::path tree = scratch.path() / "tree";
  if (kind == VcsKind::kHg) {
    detail::run_checked(archive_command(kind, repo, revision, tree));
  } else {
    const fs::path tarball = scratch.path() / "export.tar";
    detail::run_checked(archive_command(kind, repo, revision, tarball));
    fs::create_directory(tree);
    detail::run_checked({"tar", "-xf", tarball.string(), "-C", tree.string()});
  }
  TokenStream corpus = lex_tree(tree, filter, revision.id);
  if (corpus.empty()) {
    throw EmptyCorpusError("no C++ tokens at revision " + revision.id);
  }
  return corpus;
}

DiffDirectory::DiffDirectory(fs::path dir) : dir_(std::move(dir)) {
  if (!fs::is_directory(dir_)) throw ValidationError("diff directory not found: " + dir_.string());
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    const auto underscore = name.find('_');
    if (underscore == std::string::npos || underscore == 0 || !name.ends_with(".diff")) continue;
    std::size_t index = 0;
    auto [p, ec] = std::from_chars(name.data(), name.data() + underscore, index);
    if (ec != std::errc() || p != name.data() + underscore) continue;
    std::string revision = name.substr(underscore + 1, name.size() - underscore - 1 - 5);
    if (revision.empty()) continue;
    entries_.push_back({index, {std::move(revision)}, entry.path()});
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
}

std::string DiffDirectory::file_name(std::size_t index, const RevisionId& revision) {
  std::string digits = std::to_string(index);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return digits + "_" + revision.id + ".diff";
}

std::vector<RawDiff> DiffDirectory::raw_diffs(const std::vector<RevisionId>& revisions) const {
  std::map<RevisionId, const Entry*> by_revision;
  for (const Entry& entry : entries_) by_revision.emplace(entry.revision, &entry);
  std::vector<RawDiff> out;
  std::size_t last_index = 0;
  for (std::size_t i = 1; i < revisions.size(); ++i) {
    const auto found = by_revision.find(revisions[i]);
    if (found == by_revision.end()) throw UnknownRevisionError(revisions[i].id);
    const Entry& entry = *found->second;
    if (i > 1 && entry.index <= last_index) {
      throw ValidationError("diff file " + entry.path.filename().string() +
                            " is out of order with the revision list");
    }
    last_index = entry.index;
    out.push_back({revisions[i], revisions[i - 1], read_file(entry.path)});
  }
  return out;
}

}  // namespace greenmine
