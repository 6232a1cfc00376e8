#include <doctest.h>

#include "fixtures.hpp"
#include "greenmine/error.hpp"
#include "greenmine/process.hpp"
#include "greenmine/vcs.hpp"

using namespace greenmine;
namespace fs = std::filesystem;

namespace {

using Lines = std::vector<std::string>;

const char* const kHgDiff =
    "diff -r 4e3b03de1fd3 -r 7a1c2b3d4e5f widget/src/nsWindow.cpp\n"
    "--- a/widget/src/nsWindow.cpp\tThu Jan 01 00:00:00 1970 +0000\n"
    "+++ b/widget/src/nsWindow.cpp\tThu Jan 01 00:00:00 1970 +0000\n"
    "@@ -1,3 +1,3 @@\n"
    " int a;\n"
    "-int b = 1;\n"
    "+int b = 2;\n"
    " int c;\n"
    "diff -r 4e3b03de1fd3 -r 7a1c2b3d4e5f README.md\n"
    "--- a/README.md\n"
    "+++ b/README.md\n"
    "@@ -1 +1 @@\n"
    "-old text\n"
    "+new text\n";

}  // namespace

TEST_CASE("hg diff keeps only C++ files") {
  const DiffContent d = parse_unified_diff(kHgDiff, cpp_path_filter());
  CHECK(d.added_lines == Lines{"int b = 2;"});
  CHECK(d.removed_lines == Lines{"int b = 1;"});
}

TEST_CASE("hunk bodies that look like headers are content") {
  const std::string diff =
      "--- a/x.cpp\n+++ b/x.cpp\n@@ -1,2 +1,2 @@\n"
      "--- decrement\n"
      "+++ increment\n"
      "-x;\n"
      "+y;\n";
  // Old count 2 covers "--- decrement" and "-x;".
  const DiffContent d = parse_unified_diff(diff, cpp_path_filter());
  CHECK(d.removed_lines == Lines{"-- decrement", "x;"});
  CHECK(d.added_lines == Lines{"++ increment", "y;"});
}

TEST_CASE("new and deleted files") {
  const std::string diff =
      "diff --git a/n.hpp b/n.hpp\nnew file mode 100644\n--- /dev/null\n+++ b/n.hpp\n"
      "@@ -0,0 +1,2 @@\n+#pragma once\n+int f();\n"
      "diff --git a/gone.cc b/gone.cc\ndeleted file mode 100644\n--- a/gone.cc\n+++ /dev/null\n"
      "@@ -1 +0,0 @@\n-int g;\n"
      "\\ No newline at end of file\n";
  const DiffContent d = parse_unified_diff(diff, cpp_path_filter());
  CHECK(d.added_lines == Lines{"#pragma once", "int f();"});
  CHECK(d.removed_lines == Lines{"int g;"});
}

TEST_CASE("rename to a non-C++ path drops the file") {
  const std::string diff =
      "diff --git a/a.cpp b/a.txt\nsimilarity index 90%\nrename from a.cpp\nrename to a.txt\n"
      "--- a/a.cpp\n+++ b/a.txt\n@@ -1 +1 @@\n-x\n+y\n";
  const DiffContent d = parse_unified_diff(diff, cpp_path_filter());
  CHECK(d.added_lines.empty());
  CHECK(d.removed_lines.empty());
}

TEST_CASE("CRLF diffs and blank context lines") {
  const std::string diff = "--- a/w.cpp\r\n+++ b/w.cpp\r\n@@ -1,3 +1,3 @@\r\n a;\r\n\n-b;\r\n+c;\r\n";
  const DiffContent d = parse_unified_diff(diff, cpp_path_filter());
  CHECK(d.added_lines == Lines{"c;"});
  CHECK(d.removed_lines == Lines{"b;"});
}

TEST_CASE("malformed hunk header is a parse error with its line") {
  const std::string diff = "--- a/w.cpp\n+++ b/w.cpp\n@@ -x +1 @@\n";
  try {
    parse_unified_diff(diff, cpp_path_filter());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("empty diff has no lines") {
  const DiffContent d = parse_unified_diff("", cpp_path_filter());
  CHECK(d.added_lines.empty());
  CHECK(d.removed_lines.empty());
}

TEST_CASE("command lines") {
  CHECK(diff_command(VcsKind::kHg, "/r", {"a"}, {"b"}) ==
        Lines{"hg", "-R", "/r", "diff", "-r", "a:b"});
  CHECK(diff_command(VcsKind::kGit, "/r", {"a"}, {"b"}).back() == "b");
  CHECK(parse_vcs_kind("hg") == VcsKind::kHg);
  CHECK_THROWS_AS(parse_vcs_kind("svn"), ValidationError);
}

TEST_CASE("diff directory naming and ordering") {
  CHECK(DiffDirectory::file_name(3, {"abc"}) == "0003_abc.diff");
  detail::TempDir dir("gm-diffdir");
  testing::write_file(dir.path() / "0001_r1.diff", "--- a/a.cpp\n+++ b/a.cpp\n@@ -0,0 +1 @@\n+x;\n");
  testing::write_file(dir.path() / "0002_r2.diff", "");
  testing::write_file(dir.path() / "notes.txt", "ignored");
  const DiffDirectory diffs(dir.path());
  const auto raw = diffs.raw_diffs({{"r0"}, {"r1"}, {"r2"}});
  REQUIRE(raw.size() == 2);
  CHECK(raw[0].parent.id == "r0");
  CHECK(raw[1].revision.id == "r2");
  CHECK_THROWS_AS(diffs.raw_diffs({{"r0"}, {"r9"}}), UnknownRevisionError);
  CHECK_THROWS_AS(diffs.raw_diffs({{"r0"}, {"r2"}, {"r1"}}), ValidationError);
}

TEST_CASE("git repository extraction") {
  detail::TempDir dir("gm-vcs");
  testing::GitRepo repo(dir.path() / "repo");
  repo.write("a.cpp", "int a;\nint b;\n");
  repo.write("notes.md", "hello\n");
  const RevisionId r1 = repo.commit("one");
  repo.write("a.cpp", "int a;\nint c;\n");
  repo.write("notes.md", "bye\n");
  const RevisionId r2 = repo.commit("two");

  const auto changesets = extract_changesets(repo.path(), VcsKind::kGit, {r1, r2}, cpp_path_filter());
  REQUIRE(changesets.size() == 1);
  CHECK(changesets[0].revision == r2);
  CHECK(changesets[0].parent == r1);
  CHECK(changesets[0].added_lines == Lines{"int c;"});
  CHECK(changesets[0].removed_lines == Lines{"int b;"});

  const TokenStream corpus = checkout_corpus(repo.path(), VcsKind::kGit, r1, cpp_path_filter());
  CHECK(corpus.size() == 10);

  CHECK_THROWS_AS(extract_changesets(repo.path(), VcsKind::kGit, {r1, {"deadbeef"}}, cpp_path_filter()),
                  UnknownRevisionError);
  CHECK_THROWS_AS(checkout_corpus(repo.path(), VcsKind::kGit, r1, cpp_path_filter({".hxx"})),
                  EmptyCorpusError);
}
