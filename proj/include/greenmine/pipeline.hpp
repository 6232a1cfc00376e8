#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "greenmine/energy.hpp"
#include "greenmine/lexer.hpp"
#include "greenmine/lm.hpp"
#include "greenmine/stats.hpp"
#include "greenmine/vcs.hpp"

namespace greenmine {

// Where corpus snapshots come from: a live checkout or pre-lexed files.
class CorpusSource {
 public:
  virtual ~CorpusSource() = default;
  // Throws UnknownRevisionError or EmptyCorpusError.
  virtual TokenStream corpus(const RevisionId& revision) const = 0;
};

// Checks revisions out of a repository. Checkouts are serialized.
class RepoCorpusSource : public CorpusSource {
 public:
  RepoCorpusSource(std::filesystem::path repo, VcsKind kind, PathFilter filter);
  TokenStream corpus(const RevisionId& revision) const override;

 private:
  std::filesystem::path repo_;
  VcsKind kind_;
  PathFilter filter_;
  mutable std::mutex mutex_;
};

// Reads "<revision>.txt" corpus files written by write_corpus.
class DirectoryCorpusSource : public CorpusSource {
 public:
  explicit DirectoryCorpusSource(std::filesystem::path dir);
  TokenStream corpus(const RevisionId& revision) const override;

  static std::filesystem::path file_for(const std::filesystem::path& dir,
                                        const RevisionId& revision);

 private:
  std::filesystem::path dir_;
};

// A changeset with both line streams lexed.
struct LexedChangeset {
  RevisionId revision;
  RevisionId parent;
  std::size_t added_line_count = 0;
  std::size_t removed_line_count = 0;
  TokenStream added;
  TokenStream removed;
};

LexedChangeset lex_changeset(const Changeset& changeset);
std::vector<LexedChangeset> lex_changesets(const std::vector<Changeset>& changesets);

enum class SkipReason { kNoAddedLines, kNoRemovedLines, kEmptyAfterLexing };

std::string_view to_string(SkipReason reason);

struct StreamScore {
  std::optional<double> entropy_bits;
  std::size_t token_count = 0;
  std::size_t oov_count = 0;
  std::optional<SkipReason> skipped;
};

struct EntropyRecord {
  RevisionId revision;
  double delta_watts = 0.0;
  StreamScore added;
  StreamScore removed;
};

enum class Stream { kAdded, kRemoved };

const StreamScore& stream_score(const EntropyRecord& record, Stream stream);

// Records of one stream that carry an entropy, as (revision, entropy, delta).
std::vector<DeltaRecord> defined_points(const std::vector<EntropyRecord>& records, Stream stream);

// Pairs every changeset with the delta of the same revision. Throws
// ValidationError unless the two lists name the same revisions exactly once.
std::vector<std::pair<const LexedChangeset*, double>> join_deltas(
    const std::vector<LexedChangeset>& changesets, const std::vector<EnergyDelta>& deltas);

// Scores both streams of every joined changeset against model.
std::vector<EntropyRecord> score_changesets(
    const NGramModel& model, const std::vector<std::pair<const LexedChangeset*, double>>& joined,
    unsigned jobs);

struct Correlation {
  std::optional<double> r;  // absent with < 2 points or zero variance
  std::size_t n_points = 0;
};

Correlation correlate(std::span<const DeltaRecord> points);

enum class OutlierPolicy { kOn, kOff, kBoth };

std::string_view to_string(OutlierPolicy policy);
OutlierPolicy parse_outlier_policy(std::string_view name);

struct PermutationBaseline {
  std::size_t permutations = 0;
  std::optional<double> mean_abs_r;
};

// Mean |r| after shuffling the deltas against the entropies.
PermutationBaseline permutation_baseline(std::span<const DeltaRecord> points,
                                         std::size_t permutations, std::uint64_t seed);

struct StreamAnalysis {
  Correlation all;
  Correlation without_outliers;
  std::vector<RevisionId> outliers;
  PermutationBaseline baseline;
  std::size_t skipped = 0;
};

struct Part1Options {
  int order = 3;
  OutlierPolicy outliers = OutlierPolicy::kBoth;
  std::size_t permutations = 100;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

struct Part1Result {
  RevisionId corpus_revision;
  std::size_t corpus_tokens = 0;
  std::vector<EntropyRecord> records;
  StreamAnalysis added;
  StreamAnalysis removed;
};

// One model from the corpus at corpus_revision scores every changeset.
// Throws EmptyCorpusError, or ValidationError when neither stream has two
// scorable records.
Part1Result run_part1(const CorpusSource& source, const RevisionId& corpus_revision,
                      const std::vector<LexedChangeset>& changesets,
                      const std::vector<EnergyDelta>& deltas, const Part1Options& options);

struct Part2Options {
  int order = 3;
  std::size_t window = 35;
  std::size_t stride = 1;
  unsigned jobs = 1;
};

struct WindowResult {
  RevisionId corpus_revision;
  std::size_t corpus_index = 0;
  std::size_t window_size = 0;
  Correlation added;
  Correlation removed;
  std::size_t n_points = 0;  // changesets in the window
  std::string error;         // set when the window could not be evaluated
};

// revisions is the profile order; changesets and deltas cover revisions[1..].
// Corpus i (stepping by stride) is scored on changesets i+1 .. i+window.
// Windows running past the end are omitted.
std::vector<WindowResult> run_part2(const CorpusSource& source,
                                    const std::vector<RevisionId>& revisions,
                                    const std::vector<LexedChangeset>& changesets,
                                    const std::vector<EnergyDelta>& deltas,
                                    const Part2Options& options);

struct GroupBoxes {
  std::optional<BoxSummary> low;
  std::optional<BoxSummary> medium;
  std::optional<BoxSummary> high;
};

struct Part3Result {
  GroupedEntropies added;
  GroupedEntropies removed;
  GroupBoxes added_boxes;
  GroupBoxes removed_boxes;
};

GroupBoxes box_groups(const GroupedEntropies& groups);

// Groups each stream's defined records by z-score of |delta|.
Part3Result run_part3(const std::vector<EntropyRecord>& records);

}  // namespace greenmine
