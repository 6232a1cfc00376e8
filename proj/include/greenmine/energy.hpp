#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "greenmine/vcs.hpp"

namespace greenmine {

struct EnergyEntry {
  RevisionId revision;
  double mean_watts = 0.0;
};

// Mean power per revision, in mined revision order.
struct EnergyProfile {
  std::vector<EnergyEntry> entries;

  std::vector<RevisionId> revisions() const;
};

struct EnergyDelta {
  RevisionId revision;  // the latter revision of the pair
  double delta_watts = 0.0;
};

// Reads "revision,mean_watts" CSV (UTF-8, LF or CRLF). Errors name the
// 1-based file line.
EnergyProfile load_profile(std::istream& in);
EnergyProfile load_profile(const std::filesystem::path& path);

// watts[i] - watts[i-1], attributed to revision i. Needs >= 2 entries.
std::vector<EnergyDelta> compute_deltas(const EnergyProfile& profile);

}  // namespace greenmine
