#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace greenmine {

enum class TokenKind : std::uint8_t {
  kIdentifier,
  kKeyword,
  kNumericLiteral,
  kStringLiteral,
  kCharLiteral,
  kOperator,
  kPunctuation,
  kBoundary,
};

std::string_view to_string(TokenKind kind);

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknownWord = "<unk>";

struct Token {
  std::string text;
  TokenKind kind = TokenKind::kIdentifier;

  static Token start() { return {std::string(kSentenceStart), TokenKind::kBoundary}; }
  static Token end() { return {std::string(kSentenceEnd), TokenKind::kBoundary}; }

  bool is_boundary() const { return kind == TokenKind::kBoundary; }

  friend bool operator==(const Token&, const Token&) = default;
};

struct TokenStream {
  std::vector<Token> tokens;
  std::string source_id;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }

  // Appends other's tokens; source_id is left unchanged.
  void append(const TokenStream& other);
};

// Lexes a whole C++ source text. Each logical line that produces tokens
// becomes one <s> ... </s> sentence. Comments are dropped, backslash-newline
// splices are removed, and literal contents are kept verbatim.
TokenStream tokenize_source(std::string_view text, std::string source_id = {});

// Lexes each line independently (diff lines with the +/- prefix removed).
TokenStream tokenize_lines(std::span<const std::string> lines, std::string source_id = {});

// Default C++ extensions, lowercase and with the leading dot.
const std::vector<std::string>& default_cpp_extensions();

// True iff the extension of path (case-insensitive) is in extensions.
bool is_cpp_path(std::string_view path,
                 std::span<const std::string> extensions = default_cpp_extensions());

bool is_cpp_keyword(std::string_view word);

// The vocabulary form of a token. Whitespace bytes inside a lexeme (only
// possible in literals) are written as \xHH so a word never contains a blank.
std::string corpus_word(const Token& token);

// Splits a stream into sentences of corpus words. Tokens found outside any
// <s> ... </s> pair form their own sentence.
std::vector<std::vector<std::string>> sentences(const TokenStream& stream);

// Corpus text file: one sentence per line, words separated by one space,
// boundary markers implicit.
void write_corpus(std::ostream& out, const TokenStream& stream);
TokenStream read_corpus(std::istream& in, std::string source_id = {});

}  // namespace greenmine
