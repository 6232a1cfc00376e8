#include "greenmine/energy.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include "greenmine/error.hpp"

namespace greenmine {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<RevisionId> EnergyProfile::revisions() const {
  std::vector<RevisionId> out;
  out.reserve(entries.size());
  for (const auto& entry : entries) out.push_back(entry.revision);
  return out;
}

EnergyProfile load_profile(std::istream& in) {
  EnergyProfile profile;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = trim(view);
    if (view.empty()) continue;

    const auto comma = view.find(',');
    if (!have_header) {
      if (comma == std::string_view::npos || trim(view.substr(0, comma)) != "revision" ||
          trim(view.substr(comma + 1)) != "mean_watts") {
        throw ParseError("expected header \"revision,mean_watts\"", line_no);
      }
      have_header = true;
      continue;
    }
    if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("expected two fields", line_no);
    }
    const std::string revision(trim(view.substr(0, comma)));
    const std::string_view watts_text = trim(view.substr(comma + 1));
    if (revision.empty()) throw ParseError("empty revision", line_no);

    double watts = 0.0;
    auto [p, ec] = std::from_chars(watts_text.data(), watts_text.data() + watts_text.size(), watts);
    if (ec != std::errc() || p != watts_text.data() + watts_text.size() || watts_text.empty()) {
      throw ParseError("mean_watts is not a number: \"" + std::string(watts_text) + "\"", line_no);
    }
    if (!std::isfinite(watts) || watts <= 0.0) {
      throw ParseError("mean_watts must be finite and positive", line_no);
    }
    if (!seen.insert(revision).second) throw ParseError("duplicate revision " + revision, line_no);
    profile.entries.push_back({{revision}, watts});
  }
  if (!have_header) throw ParseError("missing header \"revision,mean_watts\"", line_no);
  return profile;
}

EnergyProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read profile " + path.string());
  try {
    return load_profile(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::vector<EnergyDelta> compute_deltas(const EnergyProfile& profile) {
  if (profile.entries.size() < 2) {
    throw ValidationError("an energy profile needs at least two revisions");
  }
  std::vector<EnergyDelta> deltas;
  deltas.reserve(profile.entries.size() - 1);
  for (std::size_t i = 1; i < profile.entries.size(); ++i) {
    deltas.push_back({profile.entries[i].revision,
                      profile.entries[i].mean_watts - profile.entries[i - 1].mean_watts});
  }
  return deltas;
}

}  // namespace greenmine
