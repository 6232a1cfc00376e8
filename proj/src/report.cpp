#include "greenmine/report.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "greenmine/error.hpp"

namespace greenmine {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string format_number(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  (void)ec;
  return std::string(buffer, end);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

namespace {

std::string optional_number(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string();
}

Json json_number(const std::optional<double>& value) {
  return value ? Json(*value) : Json(nullptr);
}

Json json_correlation(const Correlation& c) {
  return Json{{"r", json_number(c.r)}, {"n_points", c.n_points}};
}

std::string skip_text(const EntropyRecord& record) {
  std::string text;
  auto add = [&](const StreamScore& score, std::string_view stream) {
    if (!score.skipped) return;
    if (!text.empty()) text += ';';
    if (*score.skipped == SkipReason::kEmptyAfterLexing) {
      text += stream;
      text += ':';
    }
    text += to_string(*score.skipped);
  };
  add(record.added, "added");
  add(record.removed, "removed");
  return text;
}

Json stream_summary(const StreamAnalysis& analysis, const Part1Options& options) {
  Json out;
  out["scored"] = analysis.all.n_points;
  out["skipped"] = analysis.skipped;
  if (options.outliers != OutlierPolicy::kOn) out["with_outliers"] = json_correlation(analysis.all);
  if (options.outliers != OutlierPolicy::kOff) {
    out["without_outliers"] = json_correlation(analysis.without_outliers);
    Json flagged = Json::array();
    for (const auto& revision : analysis.outliers) flagged.push_back(revision.id);
    out["outlier_revisions"] = std::move(flagged);
  }
  out["permutation_baseline"] = Json{{"permutations", analysis.baseline.permutations},
                                     {"mean_abs_r", json_number(analysis.baseline.mean_abs_r)}};
  return out;
}

Json json_box(const std::optional<BoxSummary>& box) {
  if (!box) return nullptr;
  return Json{{"min", box->min},       {"q1", box->q1}, {"median", box->median},
              {"q3", box->q3},         {"max", box->max}, {"count", box->count}};
}

Json json_groups(const GroupedEntropies& groups, const GroupBoxes& boxes) {
  auto members = [](const std::vector<GroupEntry>& entries) {
    Json list = Json::array();
    for (const auto& e : entries) list.push_back(Json{{"revision", e.revision.id}, {"entropy_bits", e.entropy}});
    return list;
  };
  Json out;
  out["mean_abs_delta"] = groups.mean_abs_delta;
  out["std_abs_delta"] = groups.std_abs_delta;
  out["low"] = Json{{"box", json_box(boxes.low)}, {"members", members(groups.low)}};
  out["medium"] = Json{{"box", json_box(boxes.medium)}, {"members", members(groups.medium)}};
  out["high"] = Json{{"box", json_box(boxes.high)}, {"members", members(groups.high)}};
  out["medians"] = Json{{"low", boxes.low ? Json(boxes.low->median) : Json(nullptr)},
                        {"medium", boxes.medium ? Json(boxes.medium->median) : Json(nullptr)},
                        {"high", boxes.high ? Json(boxes.high->median) : Json(nullptr)}};
  return out;
}

template <class Writer>
fs::path write_file(const fs::path& dir, const std::string& name, Writer&& writer) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  writer(out);
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
  return path;
}

}  // namespace

void write_part1_records(std::ostream& out, const std::vector<EntropyRecord>& records) {
  out << "revision,delta_watts,added_entropy_bits,added_tokens,removed_entropy_bits,"
         "removed_tokens,skipped_reason\n";
  for (const auto& r : records) {
    out << csv_field(r.revision.id) << ',' << format_number(r.delta_watts) << ','
        << optional_number(r.added.entropy_bits) << ',' << r.added.token_count << ','
        << optional_number(r.removed.entropy_bits) << ',' << r.removed.token_count << ','
        << csv_field(skip_text(r)) << '\n';
  }
}

void write_part1_summary(std::ostream& out, const Part1Result& result, const Part1Options& options) {
  Json summary;
  summary["corpus_revision"] = result.corpus_revision.id;
  summary["corpus_tokens"] = result.corpus_tokens;
  summary["order"] = options.order;
  summary["seed"] = options.seed;
  summary["outlier_policy"] = std::string(to_string(options.outliers));
  summary["records"] = result.records.size();
  summary["added"] = stream_summary(result.added, options);
  summary["removed"] = stream_summary(result.removed, options);
  out << summary.dump(2) << '\n';
}

void write_part2_windows(std::ostream& out, const std::vector<WindowResult>& windows) {
  out << "corpus_index,corpus_revision,window_size,n_points,added_points,added_r,removed_points,"
         "removed_r,error\n";
  for (const auto& w : windows) {
    out << w.corpus_index << ',' << csv_field(w.corpus_revision.id) << ',' << w.window_size << ','
        << w.n_points << ',' << w.added.n_points << ',' << optional_number(w.added.r) << ','
        << w.removed.n_points << ',' << optional_number(w.removed.r) << ',' << csv_field(w.error)
        << '\n';
  }
}

void write_part3_groups(std::ostream& out, const Part3Result& result) {
  Json groups;
  groups["rule"] = "z = (|delta| - mean) / sample std; low z <= 0, medium 0 < z <= 1, high z > 1";
  groups["added"] = json_groups(result.added, result.added_boxes);
  groups["removed"] = json_groups(result.removed, result.removed_boxes);
  out << groups.dump(2) << '\n';
}

void write_profile_plot(std::ostream& out, const EnergyProfile& profile) {
  out << "index,revision,mean_watts\n";
  for (std::size_t i = 0; i < profile.entries.size(); ++i) {
    out << i << ',' << csv_field(profile.entries[i].revision.id) << ','
        << format_number(profile.entries[i].mean_watts) << '\n';
  }
}

void write_entropy_plot(std::ostream& out, const std::vector<DeltaRecord>& points) {
  out << "revision,delta_watts,entropy_bits\n";
  for (const auto& p : points) {
    out << csv_field(p.revision.id) << ',' << format_number(p.delta_watts) << ','
        << format_number(p.entropy) << '\n';
  }
}

void write_window_plot(std::ostream& out, const std::vector<WindowResult>& windows, Stream stream) {
  out << "corpus_index,corpus_revision,r\n";
  for (const auto& w : windows) {
    const Correlation& c = stream == Stream::kAdded ? w.added : w.removed;
    out << w.corpus_index << ',' << csv_field(w.corpus_revision.id) << ',' << optional_number(c.r)
        << '\n';
  }
}

void write_group_plot(std::ostream& out, const GroupedEntropies& groups) {
  out << "group,revision,entropy_bits\n";
  auto rows = [&](std::string_view name, const std::vector<GroupEntry>& entries) {
    for (const auto& e : entries) {
      out << name << ',' << csv_field(e.revision.id) << ',' << format_number(e.entropy) << '\n';
    }
  };
  rows("low", groups.low);
  rows("medium", groups.medium);
  rows("high", groups.high);
}

std::vector<fs::path> write_part1_reports(const fs::path& out_dir, const Part1Result& result,
                                          const Part1Options& options) {
  auto plot_points = [&](Stream stream) {
    std::vector<DeltaRecord> points = defined_points(result.records, stream);
    if (options.outliers == OutlierPolicy::kOff) return points;
    return filter_entropy_outliers(points).kept;
  };
  return {
      write_file(out_dir, "part1_records.csv",
                 [&](std::ostream& o) { write_part1_records(o, result.records); }),
      write_file(out_dir, "part1_summary.json",
                 [&](std::ostream& o) { write_part1_summary(o, result, options); }),
      write_file(out_dir, "plot_added_entropy_vs_delta.csv",
                 [&](std::ostream& o) { write_entropy_plot(o, plot_points(Stream::kAdded)); }),
      write_file(out_dir, "plot_removed_entropy_vs_delta.csv",
                 [&](std::ostream& o) { write_entropy_plot(o, plot_points(Stream::kRemoved)); }),
  };
}

std::vector<fs::path> write_part2_reports(const fs::path& out_dir,
                                          const std::vector<WindowResult>& windows) {
  return {
      write_file(out_dir, "part2_windows.csv",
                 [&](std::ostream& o) { write_part2_windows(o, windows); }),
      write_file(out_dir, "plot_added_window_correlation.csv",
                 [&](std::ostream& o) { write_window_plot(o, windows, Stream::kAdded); }),
      write_file(out_dir, "plot_removed_window_correlation.csv",
                 [&](std::ostream& o) { write_window_plot(o, windows, Stream::kRemoved); }),
  };
}

std::vector<fs::path> write_part3_reports(const fs::path& out_dir, const Part3Result& result) {
  return {
      write_file(out_dir, "part3_groups.json",
                 [&](std::ostream& o) { write_part3_groups(o, result); }),
      write_file(out_dir, "plot_added_groups.csv",
                 [&](std::ostream& o) { write_group_plot(o, result.added); }),
      write_file(out_dir, "plot_removed_groups.csv",
                 [&](std::ostream& o) { write_group_plot(o, result.removed); }),
  };
}

fs::path write_profile_report(const fs::path& out_dir, const EnergyProfile& profile) {
  return write_file(out_dir, "plot_energy_profile.csv",
                    [&](std::ostream& o) { write_profile_plot(o, profile); });
}

}  // namespace greenmine
