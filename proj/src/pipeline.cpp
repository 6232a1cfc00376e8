#include "greenmine/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "greenmine/error.hpp"
#include "greenmine/parallel.hpp"

namespace greenmine {

namespace fs = std::filesystem;

RepoCorpusSource::RepoCorpusSource(fs::path repo, VcsKind kind, PathFilter filter)
    : repo_(std::move(repo)), kind_(kind), filter_(std::move(filter)) {}

TokenStream RepoCorpusSource::corpus(const RevisionId& revision) const {
  std::lock_guard lock(mutex_);
  return checkout_corpus(repo_, kind_, revision, filter_);
}

DirectoryCorpusSource::DirectoryCorpusSource(fs::path dir) : dir_(std::move(dir)) {
  if (!fs::is_directory(dir_)) throw ValidationError("corpus directory not found: " + dir_.string());
}

fs::path DirectoryCorpusSource::file_for(const fs::path& dir, const RevisionId& revision) {
  return dir / (revision.id + ".txt");
}

TokenStream DirectoryCorpusSource::corpus(const RevisionId& revision) const {
  const fs::path path = file_for(dir_, revision);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnknownRevisionError(revision.id);
  TokenStream corpus = read_corpus(in, revision.id);
  if (corpus.empty()) throw EmptyCorpusError("no C++ tokens at revision " + revision.id);
  return corpus;
}

LexedChangeset lex_changeset(const Changeset& changeset) {
  LexedChangeset out;
  out.revision = changeset.revision;
  out.parent = changeset.parent;
  out.added_line_count = changeset.added_lines.size();
  out.removed_line_count = changeset.removed_lines.size();
  out.added = tokenize_lines(changeset.added_lines, changeset.revision.id + ":added");
  out.removed = tokenize_lines(changeset.removed_lines, changeset.revision.id + ":removed");
  return out;
}

std::vector<LexedChangeset> lex_changesets(const std::vector<Changeset>& changesets) {
  std::vector<LexedChangeset> out;
  out.reserve(changesets.size());
  for (const auto& changeset : changesets) out.push_back(lex_changeset(changeset));
  return out;
}

std::string_view to_string(SkipReason reason) {
  switch (reason) {
    case SkipReason::kNoAddedLines:
      return "no-added-lines";
    case SkipReason::kNoRemovedLines:
      return "no-removed-lines";
    case SkipReason::kEmptyAfterLexing:
      return "empty-after-lexing";
  }
  return "";
}

const StreamScore& stream_score(const EntropyRecord& record, Stream stream) {
  return stream == Stream::kAdded ? record.added : record.removed;
}

std::vector<DeltaRecord> defined_points(const std::vector<EntropyRecord>& records, Stream stream) {
  std::vector<DeltaRecord> points;
  for (const auto& record : records) {
    const StreamScore& score = stream_score(record, stream);
    if (score.entropy_bits) points.push_back({record.revision, *score.entropy_bits, record.delta_watts});
  }
  return points;
}

std::vector<std::pair<const LexedChangeset*, double>> join_deltas(
    const std::vector<LexedChangeset>& changesets, const std::vector<EnergyDelta>& deltas) {
  std::map<RevisionId, const LexedChangeset*> by_revision;
  for (const auto& changeset : changesets) {
    if (!by_revision.emplace(changeset.revision, &changeset).second) {
      throw ValidationError("changeset listed twice: " + changeset.revision.id);
    }
  }
  std::vector<std::pair<const LexedChangeset*, double>> joined;
  joined.reserve(deltas.size());
  for (const auto& delta : deltas) {
    const auto found = by_revision.find(delta.revision);
    if (found == by_revision.end()) {
      throw ValidationError("no changeset for profiled revision " + delta.revision.id);
    }
    if (!found->second) throw ValidationError("energy delta listed twice: " + delta.revision.id);
    joined.emplace_back(found->second, delta.delta_watts);
    found->second = nullptr;
  }
  for (const auto& [revision, changeset] : by_revision) {
    if (changeset) throw ValidationError("no energy delta for changeset " + revision.id);
  }
  return joined;
}

namespace {

StreamScore score_stream(const NGramModel& model, std::size_t line_count, const TokenStream& text,
                         SkipReason no_lines) {
  StreamScore score;
  if (line_count == 0) {
    score.skipped = no_lines;
    return score;
  }
  if (text.empty()) {
    score.skipped = SkipReason::kEmptyAfterLexing;
    return score;
  }
  const EntropyResult result = cross_entropy(model, text);
  score.entropy_bits = result.cross_entropy_bits;
  score.token_count = result.token_count;
  score.oov_count = result.oov_count;
  return score;
}

}  // namespace

std::vector<EntropyRecord> score_changesets(
    const NGramModel& model, const std::vector<std::pair<const LexedChangeset*, double>>& joined,
    unsigned jobs) {
  std::vector<EntropyRecord> records(joined.size());
  detail::parallel_for(joined.size(), jobs, [&](std::size_t i) {
    const LexedChangeset& changeset = *joined[i].first;
    EntropyRecord& record = records[i];
    record.revision = changeset.revision;
    record.delta_watts = joined[i].second;
    record.added = score_stream(model, changeset.added_line_count, changeset.added,
                                SkipReason::kNoAddedLines);
    record.removed = score_stream(model, changeset.removed_line_count, changeset.removed,
                                  SkipReason::kNoRemovedLines);
  });
  return records;
}

namespace {

std::optional<double> try_pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2) return std::nullopt;
  try {
    return pearson(x, y);
  } catch (const UndefinedStatisticError&) {
    return std::nullopt;
  }
}

void split_points(std::span<const DeltaRecord> points, std::vector<double>& entropy,
                  std::vector<double>& delta) {
  entropy.clear();
  delta.clear();
  for (const auto& p : points) {
    entropy.push_back(p.entropy);
    delta.push_back(p.delta_watts);
  }
}

}  // namespace

Correlation correlate(std::span<const DeltaRecord> points) {
  std::vector<double> entropy, delta;
  split_points(points, entropy, delta);
  return {try_pearson(entropy, delta), points.size()};
}

std::string_view to_string(OutlierPolicy policy) {
  switch (policy) {
    case OutlierPolicy::kOn:
      return "on";
    case OutlierPolicy::kOff:
      return "off";
    case OutlierPolicy::kBoth:
      return "both";
  }
  return "";
}

OutlierPolicy parse_outlier_policy(std::string_view name) {
  if (name == "on") return OutlierPolicy::kOn;
  if (name == "off") return OutlierPolicy::kOff;
  if (name == "both") return OutlierPolicy::kBoth;
  throw ValidationError("unknown outlier policy: " + std::string(name));
}

PermutationBaseline permutation_baseline(std::span<const DeltaRecord> points,
                                         std::size_t permutations, std::uint64_t seed) {
  PermutationBaseline baseline{permutations, std::nullopt};
  std::vector<double> entropy, delta;
  split_points(points, entropy, delta);
  if (permutations == 0 || points.size() < 2) return baseline;

  // Explicit Fisher-Yates over raw engine output; std::shuffle and the
  // standard distributions are not specified bit-for-bit across libraries.
  std::mt19937_64 rng(seed);
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t k = 0; k < permutations; ++k) {
    for (std::size_t i = delta.size() - 1; i > 0; --i) {
      std::swap(delta[i], delta[rng() % (i + 1)]);
    }
    if (const auto r = try_pearson(entropy, delta)) {
      sum += std::abs(*r);
      ++defined;
    }
  }
  if (defined) baseline.mean_abs_r = sum / static_cast<double>(defined);
  return baseline;
}

namespace {

StreamAnalysis analyze_stream(const std::vector<EntropyRecord>& records, Stream stream,
                              const Part1Options& options, std::uint64_t seed) {
  StreamAnalysis analysis;
  const std::vector<DeltaRecord> points = defined_points(records, stream);
  analysis.skipped = records.size() - points.size();
  analysis.all = correlate(points);
  if (points.size() >= 4) {
    const OutlierSplit split = filter_entropy_outliers(points);
    analysis.without_outliers = correlate(split.kept);
    for (const auto& r : split.flagged) analysis.outliers.push_back(r.revision);
  } else {
    analysis.without_outliers = analysis.all;
  }
  analysis.baseline = permutation_baseline(points, options.permutations, seed);
  return analysis;
}

NGramModel corpus_model(const CorpusSource& source, const RevisionId& revision, int order,
                        std::size_t* token_count = nullptr) {
  const TokenStream corpus = source.corpus(revision);
  if (token_count) *token_count = corpus.size();
  return build_model(corpus, order);
}

}  // namespace

Part1Result run_part1(const CorpusSource& source, const RevisionId& corpus_revision,
                      const std::vector<LexedChangeset>& changesets,
                      const std::vector<EnergyDelta>& deltas, const Part1Options& options) {
  if (options.order < 1) throw ValidationError("order must be at least 1");
  const auto joined = join_deltas(changesets, deltas);

  Part1Result result;
  result.corpus_revision = corpus_revision;
  const NGramModel model = corpus_model(source, corpus_revision, options.order, &result.corpus_tokens);
  result.records = score_changesets(model, joined, options.jobs);

  // Each stream gets its own generator so one stream's size cannot shift
  // the other's permutations.
  result.added = analyze_stream(result.records, Stream::kAdded, options, options.seed);
  result.removed = analyze_stream(result.records, Stream::kRemoved, options, options.seed + 1);
  if (result.added.all.n_points < 2 && result.removed.all.n_points < 2) {
    throw ValidationError("fewer than two scorable changesets in either stream");
  }
  return result;
}

std::vector<WindowResult> run_part2(const CorpusSource& source,
                                    const std::vector<RevisionId>& revisions,
                                    const std::vector<LexedChangeset>& changesets,
                                    const std::vector<EnergyDelta>& deltas,
                                    const Part2Options& options) {
  if (options.order < 1) throw ValidationError("order must be at least 1");
  if (options.window < 2) throw ValidationError("window must be at least 2");
  if (options.stride < 1) throw ValidationError("stride must be at least 1");
  if (deltas.size() + 1 != revisions.size()) {
    throw ValidationError("expected one energy delta per revision after the first");
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i].revision != revisions[i + 1]) {
      throw ValidationError("energy deltas are not in revision order at " + deltas[i].revision.id);
    }
  }
  // joined[k] belongs to revisions[k + 1].
  const auto joined = join_deltas(changesets, deltas);

  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i + options.window < revisions.size(); i += options.stride) {
    starts.push_back(i);
  }
  std::vector<WindowResult> results(starts.size());
  detail::parallel_for(starts.size(), options.jobs, [&](std::size_t w) {
    const std::size_t i = starts[w];
    WindowResult& window = results[w];
    window.corpus_revision = revisions[i];
    window.corpus_index = i;
    window.window_size = options.window;
    const std::vector<std::pair<const LexedChangeset*, double>> slice(
        joined.begin() + static_cast<std::ptrdiff_t>(i),
        joined.begin() + static_cast<std::ptrdiff_t>(i + options.window));
    window.n_points = slice.size();
    try {
      const NGramModel model = corpus_model(source, revisions[i], options.order);
      const auto records = score_changesets(model, slice, 1);
      window.added = correlate(defined_points(records, Stream::kAdded));
      window.removed = correlate(defined_points(records, Stream::kRemoved));
    } catch (const Error& e) {
      window.error = e.what();
    }
  });
  return results;
}

GroupBoxes box_groups(const GroupedEntropies& groups) {
  auto box = [](const std::vector<GroupEntry>& entries) -> std::optional<BoxSummary> {
    if (entries.empty()) return std::nullopt;
    std::vector<double> values;
    for (const auto& e : entries) values.push_back(e.entropy);
    return box_summary(values);
  };
  return {box(groups.low), box(groups.medium), box(groups.high)};
}

Part3Result run_part3(const std::vector<EntropyRecord>& records) {
  Part3Result result;
  result.added = group_by_abs_delta(defined_points(records, Stream::kAdded));
  result.removed = group_by_abs_delta(defined_points(records, Stream::kRemoved));
  result.added_boxes = box_groups(result.added);
  result.removed_boxes = box_groups(result.removed);
  return result;
}

}  // namespace greenmine
