#include "greenmine/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

namespace greenmine {

namespace {

constexpr std::array<std::string_view, 74> kKeywords = {
    "and",          "and_eq",      "asm",       "auto",       "bitand",
    "bitor",        "bool",        "break",     "case",       "catch",
    "char",         "class",       "compl",     "const",      "const_cast",
    "continue",     "default",     "delete",    "do",         "double",
    "dynamic_cast", "else",        "enum",      "explicit",   "export",
    "extern",       "false",       "float",     "for",        "friend",
    "goto",         "if",          "inline",    "int",        "long",
    "mutable",      "namespace",   "new",       "not",        "not_eq",
    "operator",     "or",          "or_eq",     "private",    "protected",
    "public",       "register",    "reinterpret_cast", "return", "short",
    "signed",       "sizeof",      "static",    "static_cast", "struct",
    "switch",       "template",    "this",      "throw",      "true",
    "try",          "typedef",     "typeid",    "typename",   "union",
    "unsigned",     "using",       "virtual",   "void",       "volatile",
    "wchar_t",      "while",       "xor",       "xor_eq",
};

// Longest first so the first hit is the maximal munch.
constexpr std::array<std::string_view, 43> kOperators = {
    ">>=", "<<=", "->*", "...", "::", "->", "++", "--", "<<", ">>", "<=",
    ">=",  "==",  "!=",  "&&",  "||", "+=", "-=", "*=", "/=", "%=", "&=",
    "|=",  "^=",  ".*",  "##",  "+",  "-",  "*",  "/",  "%",  "=",  "<",
    ">",   "!",   "~",   "&",   "|",  "^",  "?",  ":",  ".",  "#",
};

constexpr std::string_view kPunctuation = "()[]{};,";

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_blank(char c) {
  return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r';
}

// Length of a well-formed UTF-8 sequence at s, or 0 when ill-formed.
std::size_t utf8_sequence_length(std::string_view s) {
  const auto b0 = static_cast<unsigned char>(s[0]);
  if (b0 < 0x80) return 1;
  std::size_t len;
  unsigned char lo = 0x80, hi = 0xBF;
  if (b0 >= 0xC2 && b0 <= 0xDF) {
    len = 2;
  } else if (b0 >= 0xE0 && b0 <= 0xEF) {
    len = 3;
    if (b0 == 0xE0) lo = 0xA0;
    if (b0 == 0xED) hi = 0x9F;
  } else if (b0 >= 0xF0 && b0 <= 0xF4) {
    len = 4;
    if (b0 == 0xF0) lo = 0x90;
    if (b0 == 0xF4) hi = 0x8F;
  } else {
    return 0;
  }
  if (s.size() < len) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[i]);
    if (b < (i == 1 ? lo : 0x80) || b > (i == 1 ? hi : 0xBF)) return 0;
  }
  return len;
}

std::string sanitize_utf8(std::string_view text) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const std::size_t len = utf8_sequence_length(text.substr(i));
    if (len == 0) {
      out += kReplacement;
      ++i;
    } else {
      out.append(text.substr(i, len));
      i += len;
    }
  }
  return out;
}

struct LexedToken {
  Token token;
  std::size_t line;
  std::size_t end_line;  // differs from line for multi-line raw strings
};

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::vector<LexedToken> run() {
    std::vector<LexedToken> out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (is_blank(c)) {
        ++pos_;
      } else if (c == '\\' && splice_length(pos_) > 0) {
        pos_ += splice_length(pos_);
      } else if (c == '/' && peek(1) == '/') {
        skip_line_comment();
      } else if (c == '/' && peek(1) == '*') {
        skip_block_comment();
      } else {
        const std::size_t start_line = line_;
        Token token = next_token();
        out.push_back({std::move(token), start_line, line_});
      }
    }
    return out;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  // Length of a backslash-newline splice starting at i, 0 if none.
  std::size_t splice_length(std::size_t i) const {
    if (i >= text_.size() || text_[i] != '\\') return 0;
    if (i + 1 < text_.size() && text_[i + 1] == '\n') return 2;
    if (i + 2 < text_.size() && text_[i + 1] == '\r' && text_[i + 2] == '\n') return 3;
    return 0;
  }

  void skip_line_comment() {
    while (pos_ < text_.size() && text_[pos_] != '\n') {
      const std::size_t splice = splice_length(pos_);
      pos_ += splice ? splice : 1;
    }
  }

  void skip_block_comment() {
    pos_ += 2;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '*' && peek(1) == '/') {
        pos_ += 2;
        return;
      }
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  Token make(std::size_t start, TokenKind kind) const {
    return {std::string(text_.substr(start, pos_ - start)), kind};
  }

  Token next_token() {
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (is_ident_start(c)) return identifier_or_prefixed_literal(start);
    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return number(start);
    if (c == '"') return string_literal(start);
    if (c == '\'') return char_literal(start);
    for (std::string_view op : kOperators) {
      if (text_.substr(pos_, op.size()) == op) {
        pos_ += op.size();
        return make(start, TokenKind::kOperator);
      }
    }
    if (kPunctuation.find(c) != std::string_view::npos) {
      ++pos_;
      return make(start, TokenKind::kPunctuation);
    }
    // Anything else is one code point of punctuation; input is valid UTF-8.
    pos_ += std::max<std::size_t>(1, utf8_sequence_length(text_.substr(pos_)));
    return make(start, TokenKind::kPunctuation);
  }

  Token identifier_or_prefixed_literal(std::size_t start) {
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view word = text_.substr(start, pos_ - start);
    const char next = peek(0);
    if (next == '"' && (word == "R" || word == "LR" || word == "uR" || word == "UR" ||
                        word == "u8R")) {
      if (raw_string()) return make(start, TokenKind::kStringLiteral);
    }
    if (word == "L" || word == "u" || word == "U" || word == "u8") {
      if (next == '"') {
        string_literal(pos_);
        return make(start, TokenKind::kStringLiteral);
      }
      if (next == '\'' && closing_quote(pos_) != std::string_view::npos) {
        char_literal(pos_);
        return make(start, TokenKind::kCharLiteral);
      }
    }
    return make(start, is_cpp_keyword(word) ? TokenKind::kKeyword : TokenKind::kIdentifier);
  }

  Token number(std::size_t start) {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if ((c == '+' || c == '-') && pos_ > start) {
        const char prev = text_[pos_ - 1];
        if (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P') {
          ++pos_;
          continue;
        }
        break;
      }
      if (c == '\'' && is_ident_char(peek(1))) {
        pos_ += 2;
        continue;
      }
      if (!is_ident_char(c) && c != '.') break;
      ++pos_;
    }
    return make(start, TokenKind::kNumericLiteral);
  }

  // Consumes a "..." literal starting at open. Unterminated literals stop at
  // the end of the line.
  Token string_literal(std::size_t open) {
    const std::size_t start = pos_;
    pos_ = open + 1;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\\' && splice_length(pos_)) {
        pos_ += splice_length(pos_);
      } else if (c == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] != '\n') {
        pos_ += 2;
      } else if (c == '"') {
        ++pos_;
        break;
      } else if (c == '\n') {
        break;
      } else {
        ++pos_;
      }
    }
    return make(start, TokenKind::kStringLiteral);
  }

  // Position of the quote closing a char literal opened at open, on the same
  // line; npos if there is none.
  std::size_t closing_quote(std::size_t open) const {
    for (std::size_t i = open + 1; i < text_.size(); ++i) {
      const char c = text_[i];
      if (c == '\n') break;
      if (c == '\\' && i + 1 < text_.size() && text_[i + 1] != '\n') {
        ++i;
      } else if (c == '\'') {
        return i;
      }
    }
    return std::string_view::npos;
  }

  Token char_literal(std::size_t open) {
    const std::size_t start = pos_;
    const std::size_t close = closing_quote(open);
    if (close == std::string_view::npos) {
      pos_ = open + 1;
      return make(start, TokenKind::kPunctuation);
    }
    pos_ = close + 1;
    return make(start, TokenKind::kCharLiteral);
  }

  // R"delim( ... )delim". Returns false, consuming nothing, when the
  // delimiter is malformed.
  bool raw_string() {
    const std::size_t quote = pos_;
    const std::size_t paren = text_.find('(', quote + 1);
    if (paren == std::string_view::npos || paren - quote - 1 > 16) return false;
    const std::string_view delim = text_.substr(quote + 1, paren - quote - 1);
    if (delim.find_first_of(" \\)\t\n\"") != std::string_view::npos) return false;
    const std::string terminator = ")" + std::string(delim) + "\"";
    const std::size_t end = text_.find(terminator, paren + 1);
    const std::size_t stop = end == std::string_view::npos ? text_.size() : end + terminator.size();
    line_ += static_cast<std::size_t>(std::count(text_.begin() + pos_, text_.begin() + stop, '\n'));
    pos_ = stop;
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

void append_sentence(std::vector<Token>& out, std::vector<Token>& sentence) {
  if (sentence.empty()) return;
  out.push_back(Token::start());
  std::move(sentence.begin(), sentence.end(), std::back_inserter(out));
  out.push_back(Token::end());
  sentence.clear();
}

TokenKind classify_word(std::string_view word) {
  if (word == kSentenceStart || word == kSentenceEnd) return TokenKind::kBoundary;
  const char c = word.front();
  if (is_digit(c) || (c == '.' && word.size() > 1 && is_digit(word[1])))
    return TokenKind::kNumericLiteral;
  if (word.find('"') != std::string_view::npos && (c == '"' || is_ident_start(c)))
    return TokenKind::kStringLiteral;
  if (word.size() > 1 && word.find('\'') != std::string_view::npos) return TokenKind::kCharLiteral;
  if (is_ident_start(c)) {
    return is_cpp_keyword(word) ? TokenKind::kKeyword : TokenKind::kIdentifier;
  }
  if (word.size() == 1 && kPunctuation.find(c) != std::string_view::npos)
    return TokenKind::kPunctuation;
  if (std::find(kOperators.begin(), kOperators.end(), word) != kOperators.end())
    return TokenKind::kOperator;
  return TokenKind::kPunctuation;
}

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdentifier: return "identifier";
    case TokenKind::kKeyword: return "keyword";
    case TokenKind::kNumericLiteral: return "numeric-literal";
    case TokenKind::kStringLiteral: return "string-literal";
    case TokenKind::kCharLiteral: return "char-literal";
    case TokenKind::kOperator: return "operator";
    case TokenKind::kPunctuation: return "punctuation";
    case TokenKind::kBoundary: return "boundary";
  }
  return "unknown";
}

void TokenStream::append(const TokenStream& other) {
  tokens.insert(tokens.end(), other.tokens.begin(), other.tokens.end());
}

bool is_cpp_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

TokenStream tokenize_source(std::string_view text, std::string source_id) {
  const std::string clean = sanitize_utf8(text);
  TokenStream stream{{}, std::move(source_id)};
  std::vector<Token> sentence;
  std::size_t current_line = 0;
  for (LexedToken& lexed : Scanner(clean).run()) {
    if (lexed.line != current_line) append_sentence(stream.tokens, sentence);
    current_line = lexed.end_line;
    sentence.push_back(std::move(lexed.token));
  }
  append_sentence(stream.tokens, sentence);
  return stream;
}

TokenStream tokenize_lines(std::span<const std::string> lines, std::string source_id) {
  TokenStream stream{{}, std::move(source_id)};
  std::vector<Token> sentence;
  for (const std::string& line : lines) {
    for (LexedToken& lexed : Scanner(sanitize_utf8(line)).run()) {
      sentence.push_back(std::move(lexed.token));
    }
    append_sentence(stream.tokens, sentence);
  }
  return stream;
}

const std::vector<std::string>& default_cpp_extensions() {
  static const std::vector<std::string> kDefault = {".cpp", ".cc", ".cxx", ".c",
                                                    ".h",   ".hpp", ".hxx"};
  return kDefault;
}

bool is_cpp_path(std::string_view path, std::span<const std::string> extensions) {
  const std::size_t slash = path.find_last_of('/');
  const std::string_view name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  const std::size_t dot = name.find_last_of('.');
  if (dot == std::string_view::npos || dot == 0) return false;
  std::string ext(name.substr(dot));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::any_of(extensions.begin(), extensions.end(), [&](const std::string& candidate) {
    if (candidate.size() != ext.size()) return false;
    return std::equal(candidate.begin(), candidate.end(), ext.begin(), [](char a, char b) {
      return std::tolower(static_cast<unsigned char>(a)) == b;
    });
  });
}

std::string corpus_word(const Token& token) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string word;
  word.reserve(token.text.size());
  for (const char c : token.text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
      const auto byte = static_cast<unsigned char>(c);
      word += "\\x";
      word += kHex[byte >> 4];
      word += kHex[byte & 0xF];
    } else {
      word += c;
    }
  }
  return word;
}

std::vector<std::vector<std::string>> sentences(const TokenStream& stream) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (const Token& token : stream.tokens) {
    if (token.is_boundary() && token.text == kSentenceStart) {
      flush();
    } else if (token.is_boundary() && token.text == kSentenceEnd) {
      flush();
    } else {
      current.push_back(corpus_word(token));
    }
  }
  flush();
  return out;
}

void write_corpus(std::ostream& out, const TokenStream& stream) {
  for (const auto& sentence : sentences(stream)) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i) out << ' ';
      out << sentence[i];
    }
    out << '\n';
  }
}

TokenStream read_corpus(std::istream& in, std::string source_id) {
  TokenStream stream{{}, std::move(source_id)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string word;
    bool any = false;
    while (words >> word) {
      if (word == kSentenceStart || word == kSentenceEnd) continue;
      if (!any) stream.tokens.push_back(Token::start());
      any = true;
      const TokenKind kind = classify_word(word);
      stream.tokens.push_back({std::move(word), kind});
    }
    if (any) stream.tokens.push_back(Token::end());
  }
  return stream;
}

}  // namespace greenmine
