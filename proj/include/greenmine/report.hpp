#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "greenmine/energy.hpp"
#include "greenmine/pipeline.hpp"

namespace greenmine {

// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

// CSV field, quoted when it holds a comma, quote or line break.
std::string csv_field(std::string_view text);

void write_part1_records(std::ostream& out, const std::vector<EntropyRecord>& records);
void write_part1_summary(std::ostream& out, const Part1Result& result, const Part1Options& options);
void write_part2_windows(std::ostream& out, const std::vector<WindowResult>& windows);
void write_part3_groups(std::ostream& out, const Part3Result& result);

// Plot data, one CSV per chart.
void write_profile_plot(std::ostream& out, const EnergyProfile& profile);
void write_entropy_plot(std::ostream& out, const std::vector<DeltaRecord>& points);
void write_window_plot(std::ostream& out, const std::vector<WindowResult>& windows, Stream stream);
void write_group_plot(std::ostream& out, const GroupedEntropies& groups);

// Files written into out_dir by each analysis. Existing files are replaced.
std::vector<std::filesystem::path> write_part1_reports(const std::filesystem::path& out_dir,
                                                       const Part1Result& result,
                                                       const Part1Options& options);
std::vector<std::filesystem::path> write_part2_reports(const std::filesystem::path& out_dir,
                                                       const std::vector<WindowResult>& windows);
std::vector<std::filesystem::path> write_part3_reports(const std::filesystem::path& out_dir,
                                                       const Part3Result& result);
std::filesystem::path write_profile_report(const std::filesystem::path& out_dir,
                                           const EnergyProfile& profile);

}  // namespace greenmine
