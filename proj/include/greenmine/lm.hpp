#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "greenmine/lexer.hpp"

namespace greenmine {

using WordId = std::uint32_t;

inline constexpr WordId kUnknownId = 0;
inline constexpr WordId kStartId = 1;
inline constexpr WordId kEndId = 2;

// Word <-> id mapping. Ids 0, 1, 2 are <unk>, <s>, </s>; other words are
// numbered in order of first insertion.
class Vocabulary {
 public:
  Vocabulary();

  WordId insert(std::string_view word);
  // kUnknownId for words never inserted.
  WordId lookup(std::string_view word) const;
  bool contains(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t size() const { return words_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId, Hash, std::equal_to<>> ids_;
};

using NGram = std::vector<WordId>;

struct NGramHash {
  std::size_t operator()(const NGram& gram) const noexcept;
};

template <class Value>
using NGramMap = std::unordered_map<NGram, Value, NGramHash>;

// Raw counts of order-n windows over sentences padded with n-1 <s> markers
// and one </s>. This is all the information a model is estimated from.
struct NGramCounts {
  int order = 3;
  Vocabulary vocabulary;
  NGramMap<std::uint64_t> counts;
  std::size_t sentence_count = 0;
};

NGramCounts count_ngrams(const TokenStream& corpus, int order);
NGramCounts count_ngrams(std::span<const std::vector<std::string>> sentences, int order);

// Plain-text count file: header, vocabulary, then "count<TAB>w1 ... wn".
void write_counts(std::ostream& out, const NGramCounts& counts);
NGramCounts read_counts(std::istream& in);

enum class Smoothing {
  kModifiedKneserNey,
  // Relative frequencies with no discounting or interpolation; unseen
  // events get probability zero. Only meant for tests.
  kMaximumLikelihood,
};

// Discounts for adjusted counts 1, 2 and 3+ at one order.
struct Discounts {
  std::array<double, 3> amount{};
  // n1..n4: number of n-grams with adjusted count 1..4 (index 0 unused).
  std::array<std::uint64_t, 5> count_of_counts{};
  // Set when the closed form was undefined or out of range and clamped.
  bool degenerate = false;

  double operator()(std::uint64_t count) const {
    return count == 0 ? 0.0 : amount[std::min<std::uint64_t>(count, 3) - 1];
  }
};

// Closed-form modified Kneser-Ney discounts from count-of-counts. Undefined
// terms become 0.5 and the rest are clamped to [0, k].
Discounts estimate_discounts(const std::array<std::uint64_t, 5>& count_of_counts);

// Per-context totals over the adjusted counts of its extensions.
struct ContextStats {
  std::uint64_t total = 0;
  // Number of extensions with adjusted count 1, 2 and 3+.
  std::array<std::uint64_t, 3> types{};
};

struct TrainingStats {
  Smoothing smoothing = Smoothing::kModifiedKneserNey;
  std::size_t sentence_count = 0;
  // Indexed by order - 1.
  std::vector<Discounts> discounts;
  std::vector<NGramMap<std::uint64_t>> adjusted_counts;
  // contexts[k - 1] holds the contexts (length k - 1) of order-k n-grams.
  std::vector<NGramMap<ContextStats>> contexts;
};

// Stored form of an n-gram: interpolated probability and, for contexts,
// the back-off weight, both log10.
struct NGramEntry {
  double log10_prob = 0.0;
  double log10_backoff = 0.0;
};

struct EntropyResult {
  double cross_entropy_bits = 0.0;
  double perplexity = 1.0;
  std::size_t token_count = 0;
  std::size_t oov_count = 0;
};

// An interpolated n-gram language model in back-off form. Immutable once
// built; safe to query from many threads.
class NGramModel {
 public:
  int order() const { return order_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  // Present for models estimated here, absent for imported ones.
  const std::optional<TrainingStats>& training() const { return training_; }
  // Stored n-grams of order k, 1 <= k <= order().
  const NGramMap<NGramEntry>& entries(int k) const { return entries_.at(k - 1); }

  // log10 P(word | context). Only the rightmost order()-1 context ids are used.
  double log10_probability(std::span<const WordId> context, WordId word) const;

  friend NGramModel build_model(const NGramCounts& counts, Smoothing smoothing);
  friend NGramModel import_arpa(std::istream& in);

 private:
  int order_ = 0;
  Vocabulary vocab_;
  std::vector<NGramMap<NGramEntry>> entries_;
  std::optional<TrainingStats> training_;
};

NGramModel build_model(const NGramCounts& counts,
                       Smoothing smoothing = Smoothing::kModifiedKneserNey);
NGramModel build_model(const TokenStream& corpus, int order,
                       Smoothing smoothing = Smoothing::kModifiedKneserNey);

// P(word | context) with out-of-vocabulary words mapped to <unk>.
double probability(const NGramModel& model, std::span<const std::string> context,
                   std::string_view word);

// log2 probability of every predicted token (each word and one </s> per
// sentence), in order. OOV words count towards oov_count.
std::vector<double> token_log2_probabilities(const NGramModel& model, const TokenStream& text,
                                             std::size_t* oov_count = nullptr);

// Throws EmptyTextError when text has no scorable token.
EntropyResult cross_entropy(const NGramModel& model, const TokenStream& text);

void export_arpa(const NGramModel& model, std::ostream& out);
// Throws ParseError with the offending line number.
NGramModel import_arpa(std::istream& in);

}  // namespace greenmine
