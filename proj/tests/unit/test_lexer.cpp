#include <doctest.h>

#include <sstream>

#include "greenmine/lexer.hpp"

using namespace greenmine;

namespace {

std::vector<std::string> texts(const TokenStream& stream) {
  std::vector<std::string> out;
  for (const auto& t : stream.tokens) out.push_back(t.text);
  return out;
}

using Words = std::vector<std::string>;

}  // namespace

TEST_CASE("simple declaration") {
  const TokenStream s = tokenize_source("int x = 42;");
  CHECK(texts(s) == Words{"<s>", "int", "x", "=", "42", ";", "</s>"});
  CHECK(s.tokens[1].kind == TokenKind::kKeyword);
  CHECK(s.tokens[2].kind == TokenKind::kIdentifier);
  CHECK(s.tokens[3].kind == TokenKind::kOperator);
  CHECK(s.tokens[4].kind == TokenKind::kNumericLiteral);
  CHECK(s.tokens[5].kind == TokenKind::kPunctuation);
  CHECK(s.tokens[0].is_boundary());
}

TEST_CASE("empty and comment-only input") {
  CHECK(tokenize_source("").empty());
  CHECK(tokenize_source("// just a comment").empty());
  CHECK(tokenize_source("/* a\n b */\n\n").empty());
}

TEST_CASE("each diff line is its own sentence") {
  const std::vector<std::string> lines = {"a=b;", "c++;"};
  CHECK(texts(tokenize_lines(lines)) ==
        Words{"<s>", "a", "=", "b", ";", "</s>", "<s>", "c", "++", ";", "</s>"});
  CHECK(tokenize_lines(std::vector<std::string>{}).empty());
  CHECK(tokenize_lines(std::vector<std::string>{"/* gone */"}).empty());
}

TEST_CASE("maximal munch operators") {
  CHECK(texts(tokenize_source("a<<=b->c...d::e")) ==
        Words{"<s>", "a", "<<=", "b", "->", "c", "...", "d", "::", "e", "</s>"});
  CHECK(texts(tokenize_source("x>>=1; y->*z;")) ==
        Words{"<s>", "x", ">>=", "1", ";", "y", "->*", "z", ";", "</s>"});
}

TEST_CASE("literals stay whole") {
  const TokenStream s = tokenize_source(R"(f("a // b", 'c', 1.5e-3f, 0x1F);)");
  CHECK(texts(s) == Words{"<s>", "f", "(", "\"a // b\"", ",", "'c'", ",", "1.5e-3f", ",", "0x1F",
                          ")", ";", "</s>"});
  CHECK(s.tokens[3].kind == TokenKind::kStringLiteral);
  CHECK(s.tokens[5].kind == TokenKind::kCharLiteral);
  CHECK(s.tokens[7].kind == TokenKind::kNumericLiteral);
}

TEST_CASE("prefixed and raw strings") {
  CHECK(texts(tokenize_source("L\"w\" u8\"x\"")) == Words{"<s>", "L\"w\"", "u8\"x\"", "</s>"});
  const TokenStream raw = tokenize_source("auto s = R\"d(a \"quoted\"\n)d\";");
  REQUIRE(raw.size() == 7);
  CHECK(raw.tokens[4].text == "R\"d(a \"quoted\"\n)d\"");
  CHECK(raw.tokens[4].kind == TokenKind::kStringLiteral);
}

TEST_CASE("line splices join logical lines") {
  CHECK(texts(tokenize_source("#define X \\\n  1\nint y;")) ==
        Words{"<s>", "#", "define", "X", "1", "</s>", "<s>", "int", "y", ";", "</s>"});
}

TEST_CASE("tokens on different physical lines are different sentences") {
  CHECK(texts(tokenize_source("a /* x\ny */ b\nc")) ==
        Words{"<s>", "a", "</s>", "<s>", "b", "</s>", "<s>", "c", "</s>"});
}

TEST_CASE("invalid UTF-8 is replaced, not fatal") {
  const TokenStream s = tokenize_source("x = \"\xff\";");
  REQUIRE(s.size() == 6);
  CHECK(s.tokens[3].text == "\"\xEF\xBF\xBD\"");
}

TEST_CASE("unlexable bytes become punctuation") {
  const TokenStream s = tokenize_source("a @ b");
  REQUIRE(s.size() == 5);
  CHECK(s.tokens[2].text == "@");
  CHECK(s.tokens[2].kind == TokenKind::kPunctuation);
}

TEST_CASE("lexemes reproduce the input modulo whitespace and comments") {
  const std::string source = "int main() { return a+b; } // tail\n";
  std::string joined;
  for (const auto& t : tokenize_source(source).tokens) {
    if (!t.is_boundary()) joined += t.text;
  }
  CHECK(joined == "intmain(){returna+b;}");
}

TEST_CASE("cpp path filter") {
  CHECK(is_cpp_path("widget/src/nsWindow.cpp"));
  CHECK(is_cpp_path("include/A.HPP"));
  CHECK(is_cpp_path("x.c"));
  CHECK_FALSE(is_cpp_path("README.md"));
  CHECK_FALSE(is_cpp_path("Makefile"));
  CHECK_FALSE(is_cpp_path("dir.cpp/readme"));
  const std::vector<std::string> custom = {".ipp"};
  CHECK(is_cpp_path("a/b.ipp", custom));
  CHECK_FALSE(is_cpp_path("a/b.cpp", custom));
}

TEST_CASE("corpus file round trip") {
  const TokenStream s = tokenize_source("s = \"a b\";\nint y;\n");
  std::stringstream file;
  write_corpus(file, s);
  CHECK(file.str() == "s = \"a\\x20b\" ;\nint y ;\n");
  const TokenStream back = read_corpus(file);
  CHECK(sentences(back) == sentences(s));
  CHECK(back.tokens[1].kind == TokenKind::kIdentifier);
  CHECK(back.tokens[7].kind == TokenKind::kKeyword);
}
