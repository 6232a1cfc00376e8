#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "greenmine/error.hpp"
#include "greenmine/lm.hpp"

namespace greenmine {

namespace {

constexpr double kArpaFloor = -99.0;

std::string format_log10(double value) {
  if (!std::isfinite(value) || value < kArpaFloor) value = kArpaFloor;
  if (value == 0.0) return "0";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 10);
  (void)ec;
  return std::string(buffer, end);
}

bool parse_double(std::string_view text, double& out) {
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && p == text.data() + text.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

}  // namespace

void export_arpa(const NGramModel& model, std::ostream& out) {
  const int order = model.order();
  out << "\\data\\\n";
  for (int k = 1; k <= order; ++k) out << "ngram " << k << "=" << model.entries(k).size() << "\n";
  for (int k = 1; k <= order; ++k) {
    out << "\n\\" << k << "-grams:\n";
    std::vector<const std::pair<const NGram, NGramEntry>*> sorted;
    for (const auto& entry : model.entries(k)) sorted.push_back(&entry);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->first < b->first; });
    for (const auto* entry : sorted) {
      out << format_log10(entry->second.log10_prob) << '\t';
      for (std::size_t i = 0; i < entry->first.size(); ++i) {
        if (i) out << ' ';
        out << model.vocabulary().word(entry->first[i]);
      }
      if (k < order && entry->second.log10_backoff != 0.0) {
        out << '\t' << format_log10(entry->second.log10_backoff);
      }
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

NGramModel import_arpa(std::istream& in) {
  std::size_t line_no = 0;
  std::string line;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  // Anything before \data\ is a free-form header.
  bool found_data = false;
  while (next()) {
    if (line == "\\data\\") {
      found_data = true;
      break;
    }
  }
  if (!found_data) throw ParseError("missing \\data\\ section", line_no);

  std::vector<std::size_t> declared;
  while (next()) {
    if (line.empty()) {
      if (!declared.empty()) break;
      continue;
    }
    if (line.rfind("ngram ", 0) != 0) {
      if (line.front() == '\\') break;
      throw ParseError("malformed \\data\\ entry: " + line, line_no);
    }
    const std::string_view field = std::string_view(line).substr(6);
    const auto eq = field.find('=');
    std::size_t k = 0, count = 0;
    if (eq == std::string_view::npos ||
        std::from_chars(field.data(), field.data() + eq, k).ptr != field.data() + eq ||
        std::from_chars(field.data() + eq + 1, field.data() + field.size(), count).ptr !=
            field.data() + field.size() ||
        k != declared.size() + 1) {
      throw ParseError("malformed \\data\\ entry: " + line, line_no);
    }
    declared.push_back(count);
  }
  if (declared.empty()) throw ParseError("empty \\data\\ section", line_no);

  NGramModel model;
  model.order_ = static_cast<int>(declared.size());
  model.entries_.resize(declared.size());

  for (std::size_t k = 1; k <= declared.size(); ++k) {
    const std::string header = "\\" + std::to_string(k) + "-grams:";
    while (line != header) {
      if (!line.empty()) throw ParseError("expected " + header + " section header", line_no);
      if (!next()) throw ParseError("missing " + header + " section", line_no + 1);
    }
    auto& entries = model.entries_[k - 1];
    for (std::size_t i = 0; i < declared[k - 1]; ++i) {
      if (!next()) throw ParseError("unexpected end of file in " + header, line_no + 1);
      const auto fields = split_fields(line);
      if (fields.size() != k + 1 && fields.size() != k + 2) {
        throw ParseError("expected " + std::to_string(k) + " words in " + header, line_no);
      }
      NGramEntry entry;
      if (!parse_double(fields[0], entry.log10_prob)) {
        throw ParseError("bad probability field", line_no);
      }
      if (fields.size() == k + 2 && !parse_double(fields[k + 1], entry.log10_backoff)) {
        throw ParseError("bad back-off field", line_no);
      }
      NGram gram;
      for (std::size_t w = 1; w <= k; ++w) {
        if (k == 1) {
          gram.push_back(model.vocab_.insert(fields[w]));
        } else {
          if (!model.vocab_.contains(fields[w])) {
            throw ParseError("word missing from unigrams: " + std::string(fields[w]), line_no);
          }
          gram.push_back(model.vocab_.lookup(fields[w]));
        }
      }
      if (!entries.emplace(std::move(gram), entry).second) {
        throw ParseError("duplicate n-gram", line_no);
      }
    }
    if (!next()) throw ParseError("unexpected end of file after " + header, line_no + 1);
    if (!line.empty() && line.front() != '\\') {
      throw ParseError("more entries than declared in " + header, line_no);
    }
  }
  while (line.empty() && next()) {
  }
  if (line != "\\end\\") throw ParseError("missing \\end\\ marker", line_no);

  // Closed-vocabulary files have no <unk>; give it the ARPA floor.
  auto& unigrams = model.entries_[0];
  for (const WordId id : {kUnknownId, kStartId, kEndId}) {
    unigrams.try_emplace(NGram{id}, NGramEntry{kArpaFloor, 0.0});
  }
  return model;
}

}  // namespace greenmine
