#include "greenmine/lm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "greenmine/error.hpp"

namespace greenmine {

namespace {

constexpr double kLog2Of10 = 3.321928094887362347870319429489390175864831393;

double safe_log10(double p) {
  return p > 0.0 ? std::log10(p) : -std::numeric_limits<double>::infinity();
}

NGram suffix(const NGram& gram, std::size_t length) {
  return NGram(gram.end() - static_cast<std::ptrdiff_t>(length), gram.end());
}

}  // namespace

Vocabulary::Vocabulary() {
  insert(kUnknownWord);
  insert(kSentenceStart);
  insert(kSentenceEnd);
}

WordId Vocabulary::insert(std::string_view word) {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  const auto id = static_cast<WordId>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(std::string(word), id);
  return id;
}

WordId Vocabulary::lookup(std::string_view word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? kUnknownId : it->second;
}

bool Vocabulary::contains(std::string_view word) const { return ids_.find(word) != ids_.end(); }

std::size_t NGramHash::operator()(const NGram& gram) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const WordId id : gram) {
    h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

NGramCounts count_ngrams(std::span<const std::vector<std::string>> sentences, int order) {
  if (order < 1) throw ValidationError("model order must be at least 1");
  NGramCounts counts;
  counts.order = order;
  const auto pad = static_cast<std::size_t>(order - 1);
  NGram padded;
  for (const auto& sentence : sentences) {
    if (sentence.empty()) continue;
    ++counts.sentence_count;
    padded.assign(pad, kStartId);
    for (const std::string& word : sentence) {
      if (word == kSentenceStart || word == kSentenceEnd) {
        throw ValidationError("boundary marker inside a sentence: " + word);
      }
      padded.push_back(counts.vocabulary.insert(word));
    }
    padded.push_back(kEndId);
    for (std::size_t end = pad + 1; end <= padded.size(); ++end) {
      ++counts.counts[NGram(padded.begin() + static_cast<std::ptrdiff_t>(end - order),
                            padded.begin() + static_cast<std::ptrdiff_t>(end))];
    }
  }
  return counts;
}

NGramCounts count_ngrams(const TokenStream& corpus, int order) {
  const auto sents = sentences(corpus);
  return count_ngrams(sents, order);
}

void write_counts(std::ostream& out, const NGramCounts& counts) {
  out << "greenmine-counts 1\n";
  out << "order " << counts.order << "\n";
  out << "sentences " << counts.sentence_count << "\n";
  out << "vocabulary " << counts.vocabulary.size() - 3 << "\n";
  for (WordId id = 3; id < counts.vocabulary.size(); ++id) out << counts.vocabulary.word(id) << "\n";
  std::vector<const std::pair<const NGram, std::uint64_t>*> sorted;
  sorted.reserve(counts.counts.size());
  for (const auto& entry : counts.counts) sorted.push_back(&entry);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->first < b->first; });
  out << "ngrams " << sorted.size() << "\n";
  for (const auto* entry : sorted) {
    out << entry->second << '\t';
    for (std::size_t i = 0; i < entry->first.size(); ++i) {
      if (i) out << ' ';
      out << counts.vocabulary.word(entry->first[i]);
    }
    out << '\n';
  }
}

NGramCounts read_counts(std::istream& in) {
  std::size_t line_no = 0;
  std::string line;
  auto next = [&]() -> std::string& {
    if (!std::getline(in, line)) throw ParseError("unexpected end of count file", line_no + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto header = [&](std::string_view key) {
    std::istringstream fields(next());
    std::string name;
    long long value = -1;
    if (!(fields >> name >> value) || name != key || value < 0) {
      throw ParseError("expected '" + std::string(key) + " <n>'", line_no);
    }
    return static_cast<std::size_t>(value);
  };
  if (next() != "greenmine-counts 1") throw ParseError("not a greenmine count file", line_no);
  NGramCounts counts;
  counts.order = static_cast<int>(header("order"));
  if (counts.order < 1) throw ParseError("order must be at least 1", line_no);
  counts.sentence_count = header("sentences");
  const std::size_t vocab = header("vocabulary");
  for (std::size_t i = 0; i < vocab; ++i) {
    const std::string& word = next();
    if (word.empty() || counts.vocabulary.contains(word)) {
      throw ParseError("bad vocabulary entry", line_no);
    }
    counts.vocabulary.insert(word);
  }
  const std::size_t grams = header("ngrams");
  for (std::size_t i = 0; i < grams; ++i) {
    std::istringstream fields(next());
    long long count = 0;
    if (!(fields >> count) || count <= 0) throw ParseError("bad n-gram count", line_no);
    NGram gram;
    std::string word;
    while (fields >> word) {
      if (!counts.vocabulary.contains(word)) throw ParseError("word not in vocabulary: " + word, line_no);
      gram.push_back(counts.vocabulary.lookup(word));
    }
    if (gram.size() != static_cast<std::size_t>(counts.order)) {
      throw ParseError("n-gram length does not match order", line_no);
    }
    counts.counts[gram] += static_cast<std::uint64_t>(count);
  }
  return counts;
}

Discounts estimate_discounts(const std::array<std::uint64_t, 5>& n) {
  Discounts d;
  d.count_of_counts = n;
  const double denom = static_cast<double>(n[1]) + 2.0 * static_cast<double>(n[2]);
  const bool have_y = denom > 0.0;
  const double y = have_y ? static_cast<double>(n[1]) / denom : 0.0;
  for (int k = 1; k <= 3; ++k) {
    if (!have_y || n[k] == 0) {
      d.amount[k - 1] = 0.5;
      d.degenerate = true;
      continue;
    }
    const double formula = k - (k + 1) * y * static_cast<double>(n[k + 1]) /
                                   static_cast<double>(n[k]);
    const double clamped = std::max(0.0, std::min(formula, static_cast<double>(k)));
    if (clamped != formula || n[k + 1] == 0) d.degenerate = true;
    d.amount[k - 1] = clamped;
  }
  return d;
}

NGramModel build_model(const NGramCounts& counts, Smoothing smoothing) {
  const int order = counts.order;
  if (order < 1) throw ValidationError("model order must be at least 1");
  if (counts.sentence_count == 0 || counts.counts.empty()) {
    throw EmptyCorpusError("cannot build a language model from a corpus with no sentences");
  }
  const auto n = static_cast<std::size_t>(order);
  const bool ml = smoothing == Smoothing::kMaximumLikelihood;

  // Raw counts of every k-gram of the single-<s> sentence. A padded window
  // with several leading <s> stands for its suffix starting at the last one.
  std::vector<NGramMap<std::uint64_t>> raw(n);
  for (const auto& [window, count] : counts.counts) {
    std::size_t leading = 0;
    while (leading < window.size() && window[leading] == kStartId) ++leading;
    const std::size_t effective = window.size() - (leading > 0 ? leading - 1 : 0);
    for (std::size_t k = 1; k <= effective; ++k) raw[k - 1][suffix(window, k)] += count;
  }

  TrainingStats stats;
  stats.smoothing = smoothing;
  stats.sentence_count = counts.sentence_count;
  stats.adjusted_counts.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    auto& adjusted = stats.adjusted_counts[k - 1];
    if (k == n || ml) {
      adjusted = raw[k - 1];
      continue;
    }
    // Continuation counts: distinct left extensions. Grams starting with
    // <s> cannot be extended to the left and keep their raw counts.
    for (const auto& entry : raw[k]) ++adjusted[suffix(entry.first, k)];
    for (const auto& [gram, count] : raw[k - 1]) {
      if (gram.front() == kStartId) adjusted[gram] = count;
    }
  }

  stats.discounts.resize(n);
  stats.contexts.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    std::array<std::uint64_t, 5> count_of_counts{};
    for (const auto& [gram, count] : stats.adjusted_counts[k - 1]) {
      if (count <= 4) ++count_of_counts[count];
      ContextStats& context = stats.contexts[k - 1][NGram(gram.begin(), gram.end() - 1)];
      context.total += count;
      ++context.types[std::min<std::uint64_t>(count, 3) - 1];
    }
    stats.discounts[k - 1] = ml ? Discounts{{0.0, 0.0, 0.0}, count_of_counts, false}
                                : estimate_discounts(count_of_counts);
  }

  auto gamma = [&](std::size_t k, const ContextStats& context) {
    const Discounts& d = stats.discounts[k - 1];
    double mass = 0.0;
    for (int j = 0; j < 3; ++j) mass += d.amount[j] * static_cast<double>(context.types[j]);
    return mass / static_cast<double>(context.total);
  };

  NGramModel model;
  model.order_ = order;
  model.vocab_ = counts.vocabulary;
  model.entries_.resize(n);

  // Interpolated probabilities, lowest order first.
  std::vector<NGramMap<double>> probs(n);
  const auto& unigram_context = stats.contexts[0].at(NGram{});
  const double uniform = 1.0 / static_cast<double>(model.vocab_.size() - 1);
  const double unigram_gamma = ml ? 0.0 : gamma(1, unigram_context);
  for (WordId id = 0; id < model.vocab_.size(); ++id) {
    if (id == kStartId) continue;
    const NGram gram{id};
    const auto found = stats.adjusted_counts[0].find(gram);
    const std::uint64_t count = found == stats.adjusted_counts[0].end() ? 0 : found->second;
    const double discounted =
        std::max(0.0, static_cast<double>(count) - stats.discounts[0](count));
    probs[0][gram] = discounted / static_cast<double>(unigram_context.total) +
                     unigram_gamma * uniform;
  }
  for (std::size_t k = 2; k <= n; ++k) {
    for (const auto& [gram, count] : stats.adjusted_counts[k - 1]) {
      const NGram context(gram.begin(), gram.end() - 1);
      const ContextStats& totals = stats.contexts[k - 1].at(context);
      const double discounted =
          std::max(0.0, static_cast<double>(count) - stats.discounts[k - 1](count));
      const double lower = probs[k - 2].at(suffix(gram, k - 1));
      const double g = ml ? 0.0 : gamma(k, totals);
      probs[k - 1][gram] = discounted / static_cast<double>(totals.total) + g * lower;
    }
  }

  for (std::size_t k = 1; k <= n; ++k) {
    auto& entries = model.entries_[k - 1];
    for (const auto& [gram, p] : probs[k - 1]) entries[gram].log10_prob = safe_log10(p);
    if (k == 1) entries[NGram{kStartId}].log10_prob = -99.0;
    if (k == n) continue;
    for (auto& [gram, entry] : entries) {
      const auto context = stats.contexts[k].find(gram);
      if (context != stats.contexts[k].end()) {
        entry.log10_backoff = ml ? safe_log10(0.0) : safe_log10(gamma(k + 1, context->second));
      }
    }
  }
  model.training_ = std::move(stats);
  return model;
}

NGramModel build_model(const TokenStream& corpus, int order, Smoothing smoothing) {
  return build_model(count_ngrams(corpus, order), smoothing);
}

double NGramModel::log10_probability(std::span<const WordId> context, WordId word) const {
  const std::size_t max_context = static_cast<std::size_t>(order_ - 1);
  if (context.size() > max_context) context = context.subspan(context.size() - max_context);

  NGram key;
  key.reserve(context.size() + 1);
  double result = 0.0;
  std::size_t matched = 0;
  bool found = false;
  for (std::size_t len = context.size() + 1; len-- > 0;) {
    key.assign(context.end() - static_cast<std::ptrdiff_t>(len), context.end());
    key.push_back(word);
    const auto& table = entries_[len];
    if (auto it = table.find(key); it != table.end()) {
      result = it->second.log10_prob;
      matched = len;
      found = true;
      break;
    }
  }
  if (!found) return -std::numeric_limits<double>::infinity();
  for (std::size_t len = matched + 1; len <= context.size(); ++len) {
    key.assign(context.end() - static_cast<std::ptrdiff_t>(len), context.end());
    const auto& table = entries_[len - 1];
    if (auto it = table.find(key); it != table.end()) result += it->second.log10_backoff;
  }
  return result;
}

double probability(const NGramModel& model, std::span<const std::string> context,
                   std::string_view word) {
  std::vector<WordId> ids;
  ids.reserve(context.size());
  for (const std::string& w : context) ids.push_back(model.vocabulary().lookup(w));
  return std::pow(10.0, model.log10_probability(ids, model.vocabulary().lookup(word)));
}

std::vector<double> token_log2_probabilities(const NGramModel& model, const TokenStream& text,
                                             std::size_t* oov_count) {
  std::vector<double> out;
  std::size_t oov = 0;
  const std::size_t history = static_cast<std::size_t>(std::max(model.order() - 1, 0));
  std::vector<WordId> context;
  for (const auto& sentence : sentences(text)) {
    context.assign(1, kStartId);
    auto score = [&](WordId id) {
      const std::span<const WordId> view(context);
      out.push_back(model.log10_probability(
                        view.subspan(view.size() - std::min(view.size(), history)), id) *
                    kLog2Of10);
      context.push_back(id);
    };
    for (const std::string& word : sentence) {
      const WordId id = model.vocabulary().lookup(word);
      if (id == kUnknownId && word != kUnknownWord) ++oov;
      score(id);
    }
    score(kEndId);
  }
  if (oov_count) *oov_count = oov;
  return out;
}

EntropyResult cross_entropy(const NGramModel& model, const TokenStream& text) {
  EntropyResult result;
  const std::vector<double> scores = token_log2_probabilities(model, text, &result.oov_count);
  if (scores.empty()) throw EmptyTextError("text has no scorable tokens");
  double total = 0.0;
  for (const double s : scores) total += s;
  result.token_count = scores.size();
  result.cross_entropy_bits = -total / static_cast<double>(scores.size());
  result.perplexity = std::exp2(result.cross_entropy_bits);
  return result;
}

}  // namespace greenmine
