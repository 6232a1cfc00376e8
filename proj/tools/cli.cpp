#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "greenmine/energy.hpp"
#include "greenmine/error.hpp"
#include "greenmine/lexer.hpp"
#include "greenmine/lm.hpp"
#include "greenmine/pipeline.hpp"
#include "greenmine/report.hpp"
#include "greenmine/vcs.hpp"

namespace greenmine::cli {

namespace fs = std::filesystem;

namespace {

// Bad flag combinations found after parsing; exits with kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string repo;
  std::string diff_dir;
  std::string corpus_dir;
  std::string vcs = "git";
  std::string profile;
  std::string revisions;
  std::string corpus_rev;
  std::string out = ".";
  std::string outliers = "both";
  std::string cpp_ext;
  int order = 3;
  std::size_t window = 35;
  std::size_t stride = 1;
  std::size_t permutations = 100;
  unsigned jobs = 1;
  std::uint64_t seed = 1;
  bool write_corpora = false;
};

struct LmConfig {
  std::vector<std::string> inputs;
  std::string model;
  std::string out;
  std::string format = "text";
  int order = 3;
};

std::vector<std::string> extensions(const RunConfig& config) {
  if (config.cpp_ext.empty()) return default_cpp_extensions();
  std::vector<std::string> exts;
  std::stringstream list(config.cpp_ext);
  for (std::string ext; std::getline(list, ext, ',');) {
    if (ext.empty()) continue;
    if (ext.front() != '.') ext.insert(ext.begin(), '.');
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    exts.push_back(ext);
  }
  if (exts.empty()) throw UsageError("--cpp-ext lists no extension");
  return exts;
}

void require_source(const RunConfig& config) {
  if (config.repo.empty() == config.diff_dir.empty()) {
    throw UsageError("exactly one of --repo and --diff-dir is required");
  }
}

std::vector<RevisionId> read_revision_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<RevisionId> revisions;
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    revisions.push_back({line.substr(start)});
  }
  return revisions;
}

std::vector<RawDiff> raw_diffs(const RunConfig& config, const std::vector<RevisionId>& revisions) {
  if (!config.repo.empty()) {
    return extract_raw_diffs(config.repo, parse_vcs_kind(config.vcs), revisions);
  }
  return DiffDirectory(config.diff_dir).raw_diffs(revisions);
}

std::vector<Changeset> changesets(const RunConfig& config, const std::vector<RevisionId>& revisions) {
  const PathFilter filter = cpp_path_filter(extensions(config));
  std::vector<Changeset> out;
  for (const RawDiff& diff : raw_diffs(config, revisions)) out.push_back(to_changeset(diff, filter));
  return out;
}

std::unique_ptr<CorpusSource> corpus_source(const RunConfig& config) {
  if (!config.repo.empty()) {
    return std::make_unique<RepoCorpusSource>(config.repo, parse_vcs_kind(config.vcs),
                                              cpp_path_filter(extensions(config)));
  }
  if (config.corpus_dir.empty()) {
    throw UsageError("--diff-dir needs --corpus-dir for the corpus snapshots");
  }
  return std::make_unique<DirectoryCorpusSource>(config.corpus_dir);
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw Error("failed writing " + path.string());
}

std::string changeset_text(const Changeset& changeset) {
  std::string text = "revision " + changeset.revision.id + "\nparent " + changeset.parent.id + "\n";
  for (const auto& line : changeset.added_lines) text += "+" + line + "\n";
  for (const auto& line : changeset.removed_lines) text += "-" + line + "\n";
  return text;
}

int cmd_extract(const RunConfig& config, std::ostream& out) {
  require_source(config);
  if (config.profile.empty() == config.revisions.empty()) {
    throw UsageError("exactly one of --profile and --revisions is required");
  }
  if (config.write_corpora && config.repo.empty()) {
    throw UsageError("--write-corpora needs --repo");
  }
  const std::vector<RevisionId> revisions = config.profile.empty()
                                                ? read_revision_list(config.revisions)
                                                : load_profile(fs::path(config.profile)).revisions();
  if (revisions.size() < 2) throw ValidationError("need at least two revisions");

  const fs::path out_dir = config.out;
  const fs::path diff_dir = out_dir / "diffs";
  const fs::path changeset_dir = out_dir / "changesets";
  fs::create_directories(diff_dir);
  fs::create_directories(changeset_dir);

  const PathFilter filter = cpp_path_filter(extensions(config));
  const std::vector<RawDiff> diffs = raw_diffs(config, revisions);
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    const std::string name = DiffDirectory::file_name(i + 1, diffs[i].revision);
    write_text(diff_dir / name, diffs[i].text);
    const std::string stem = name.substr(0, name.size() - 5);
    write_text(changeset_dir / (stem + ".changeset"), changeset_text(to_changeset(diffs[i], filter)));
  }
  if (config.write_corpora) {
    const fs::path corpus_dir = out_dir / "corpora";
    fs::create_directories(corpus_dir);
    const VcsKind kind = parse_vcs_kind(config.vcs);
    for (const RevisionId& revision : revisions) {
      std::ofstream file(DirectoryCorpusSource::file_for(corpus_dir, revision),
                         std::ios::binary | std::ios::trunc);
      write_corpus(file, checkout_corpus(config.repo, kind, revision, filter));
      if (!file.flush()) throw Error("failed writing corpus for " + revision.id);
    }
  }
  out << "extracted " << diffs.size() << " changesets into " << out_dir.string() << "\n";
  return kExitOk;
}

void print_correlation(std::ostream& out, std::string_view label, const Correlation& c) {
  out << label << ": r = " << (c.r ? format_number(*c.r) : "undefined") << " over " << c.n_points
      << " changesets\n";
}

int cmd_analyze(const std::string& part, const RunConfig& config, std::ostream& out,
                std::ostream& err) {
  require_source(config);
  const OutlierPolicy policy = parse_outlier_policy(config.outliers);
  const EnergyProfile profile = load_profile(fs::path(config.profile));
  const std::vector<EnergyDelta> deltas = compute_deltas(profile);
  const std::vector<RevisionId> revisions = profile.revisions();
  const std::unique_ptr<CorpusSource> source = corpus_source(config);
  const std::vector<LexedChangeset> lexed = lex_changesets(changesets(config, revisions));
  const fs::path out_dir = config.out;
  const unsigned jobs = config.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : config.jobs;

  write_profile_report(out_dir, profile);
  const RevisionId corpus_revision =
      config.corpus_rev.empty() ? revisions.front() : RevisionId{config.corpus_rev};

  if (part == "part1") {
    const Part1Options options{config.order, policy, config.permutations, config.seed, jobs};
    const Part1Result result = run_part1(*source, corpus_revision, lexed, deltas, options);
    write_part1_reports(out_dir, result, options);
    print_correlation(out, "added", result.added.all);
    print_correlation(out, "removed", result.removed.all);
    if (policy != OutlierPolicy::kOff) {
      print_correlation(out, "added without outliers", result.added.without_outliers);
      print_correlation(out, "removed without outliers", result.removed.without_outliers);
    }
  } else if (part == "part2") {
    const Part2Options options{config.order, config.window, config.stride, jobs};
    const std::vector<WindowResult> windows = run_part2(*source, revisions, lexed, deltas, options);
    write_part2_reports(out_dir, windows);
    if (windows.empty()) {
      err << "warning: " << revisions.size() << " revisions leave no full window of "
          << config.window << " changesets\n";
    }
    std::size_t failed = 0;
    for (const auto& w : windows) {
      if (!w.error.empty()) {
        ++failed;
        err << "warning: window at " << w.corpus_revision.id << ": " << w.error << "\n";
      }
    }
    out << windows.size() << " windows, " << failed << " failed\n";
  } else {
    const Part1Options options{config.order, policy, 0, config.seed, jobs};
    const Part1Result scored = run_part1(*source, corpus_revision, lexed, deltas, options);
    const Part3Result result = run_part3(scored.records);
    write_part3_reports(out_dir, result);
    auto counts = [&](std::string_view label, const GroupedEntropies& g) {
      out << label << ": low " << g.low.size() << ", medium " << g.medium.size() << ", high "
          << g.high.size() << "\n";
    };
    counts("added", result.added);
    counts("removed", result.removed);
  }
  return kExitOk;
}

TokenStream read_text_input(const std::string& path, const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  if (format == "cpp") {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return tokenize_source(text, path);
  }
  return read_corpus(in, path);
}

NGramModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read model " + path);
  std::string first;
  while (std::getline(in, first)) {
    if (!first.empty() && first.back() == '\r') first.pop_back();
    if (!first.empty()) break;
  }
  in.clear();
  in.seekg(0);
  if (first.rfind("greenmine-counts", 0) == 0) return build_model(read_counts(in));
  return import_arpa(in);
}

int cmd_lm_build(const LmConfig& config, std::ostream& out) {
  TokenStream corpus;
  for (const auto& input : config.inputs) corpus.append(read_text_input(input, config.format));
  if (corpus.empty()) throw EmptyCorpusError("training input has no tokens");
  const NGramCounts counts = count_ngrams(corpus, config.order);
  std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + config.out);
  write_counts(file, counts);
  if (!file.flush()) throw Error("failed writing " + config.out);
  out << "order " << counts.order << ", " << counts.sentence_count << " sentences, "
      << counts.vocabulary.size() << " vocabulary entries\n";
  return kExitOk;
}

int cmd_lm_score(const LmConfig& config, std::ostream& out) {
  const NGramModel model = load_model(config.model);
  out << "file\tcross_entropy_bits\tperplexity\ttokens\toov\n";
  for (const auto& input : config.inputs) {
    const EntropyResult r = cross_entropy(model, read_text_input(input, config.format));
    out << input << '\t' << format_number(r.cross_entropy_bits) << '\t'
        << format_number(r.perplexity) << '\t' << r.token_count << '\t' << r.oov_count << '\n';
  }
  return kExitOk;
}

int cmd_lm_export(const LmConfig& config, std::ostream& out) {
  const NGramModel model = load_model(config.model);
  if (config.out.empty() || config.out == "-") {
    export_arpa(model, out);
    return kExitOk;
  }
  std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + config.out);
  export_arpa(model, file);
  if (!file.flush()) throw Error("failed writing " + config.out);
  return kExitOk;
}

void add_source_options(CLI::App& cmd, RunConfig& config) {
  auto* repo = cmd.add_option("--repo", config.repo, "Repository to mine")
                   ->check(CLI::ExistingDirectory);
  auto* diffs = cmd.add_option("--diff-dir", config.diff_dir,
                               "Directory of <index>_<revision>.diff files (offline mode)")
                    ->check(CLI::ExistingDirectory);
  repo->excludes(diffs);
  cmd.add_option("--vcs", config.vcs, "Version control system")
      ->check(CLI::IsMember({"hg", "git"}))
      ->capture_default_str();
  cmd.add_option("--cpp-ext", config.cpp_ext,
                 "Comma-separated C++ extensions (default .cpp,.cc,.cxx,.c,.h,.hpp,.hxx)");
  cmd.add_option("--out", config.out, "Output directory")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mine C++ changesets, score them with n-gram models and correlate the "
               "cross-entropy with energy deltas."};
  app.name("greenmine");
  app.set_config("--config", "", "TOML or INI file of option values; flags take precedence");
  app.require_subcommand(1);

  RunConfig config;
  LmConfig lm;

  CLI::App* extract = app.add_subcommand("extract", "Write per-revision diffs and C++ changesets");
  add_source_options(*extract, config);
  extract->add_option("--profile", config.profile, "Energy profile CSV giving the revision order")
      ->check(CLI::ExistingFile);
  extract->add_option("--revisions", config.revisions, "File with one revision per line")
      ->check(CLI::ExistingFile);
  extract->add_flag("--write-corpora", config.write_corpora,
                    "Also lex every revision into corpora/<revision>.txt");

  std::string part;
  CLI::App* analyze = app.add_subcommand("analyze", "Run one of the three analyses");
  analyze->add_option("part", part, "part1, part2 or part3")
      ->required()
      ->check(CLI::IsMember({"part1", "part2", "part3"}));
  add_source_options(*analyze, config);
  analyze->add_option("--profile", config.profile, "Energy profile CSV (revision,mean_watts)")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--corpus-dir", config.corpus_dir,
                      "Lexed corpora (<revision>.txt) for offline mode")
      ->check(CLI::ExistingDirectory);
  analyze->add_option("--corpus-rev", config.corpus_rev,
                      "Corpus revision for part1 and part3 (default: first profiled revision)");
  analyze->add_option("--order", config.order, "n-gram order")
      ->check(CLI::Range(1, 9))
      ->capture_default_str();
  analyze->add_option("--window", config.window, "Changesets scored per corpus in part2")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  analyze->add_option("--stride", config.stride, "Revisions between part2 corpora")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  analyze->add_option("--outliers", config.outliers,
                      "Report correlations with outliers (off), without (on) or both")
      ->check(CLI::IsMember({"on", "off", "both"}))
      ->capture_default_str();
  analyze->add_option("--permutations", config.permutations,
                      "Shuffles for the part1 permutation baseline")
      ->capture_default_str();
  analyze->add_option("--jobs", config.jobs, "Worker threads (0: one per core)")
      ->capture_default_str();
  analyze->add_option("--seed", config.seed, "Seed for the permutation baseline")
      ->capture_default_str();

  CLI::App* lm_cmd = app.add_subcommand("lm", "Standalone language-model tools");
  lm_cmd->require_subcommand(1);
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", lm.format,
                    "Input format: text (one sentence per line) or cpp (C++ source)")
        ->check(CLI::IsMember({"text", "cpp"}))
        ->capture_default_str();
  };
  CLI::App* lm_build = lm_cmd->add_subcommand("build", "Count n-grams of a training corpus");
  lm_build->add_option("inputs", lm.inputs, "Training files")->required()->check(CLI::ExistingFile);
  lm_build->add_option("--order", lm.order, "n-gram order")
      ->check(CLI::Range(1, 9))
      ->capture_default_str();
  lm_build->add_option("--out", lm.out, "Model (count) file to write")->required();
  add_format(lm_build);
  CLI::App* lm_score = lm_cmd->add_subcommand("score", "Cross-entropy of texts under a model");
  lm_score->add_option("--model", lm.model, "Count file or ARPA file")
      ->required()
      ->check(CLI::ExistingFile);
  lm_score->add_option("inputs", lm.inputs, "Texts to score")->required()->check(CLI::ExistingFile);
  add_format(lm_score);
  CLI::App* lm_export = lm_cmd->add_subcommand("export", "Write a model in ARPA format");
  lm_export->add_option("--model", lm.model, "Count file or ARPA file")
      ->required()
      ->check(CLI::ExistingFile);
  lm_export->add_option("--out", lm.out, "ARPA file to write (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (extract->parsed()) return cmd_extract(config, out);
    if (analyze->parsed()) return cmd_analyze(part, config, out, err);
    if (lm_build->parsed()) return cmd_lm_build(lm, out);
    if (lm_score->parsed()) return cmd_lm_score(lm, out);
    if (lm_export->parsed()) return cmd_lm_export(lm, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun with --help for more information.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace greenmine::cli
