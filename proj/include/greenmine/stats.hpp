#pragma once

#include <span>
#include <vector>

#include "greenmine/vcs.hpp"

namespace greenmine {

// Sample Pearson correlation. Throws ValidationError on a length mismatch or
// fewer than two points, UndefinedStatisticError when either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> values);
// n-1 denominator. Needs at least two values.
double sample_stddev(std::span<const double> values);

// Linear interpolation between order statistics (R type 7), p in [0, 1].
// sorted must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double p);

struct BoxSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

BoxSummary box_summary(std::span<const double> values);

struct DeltaRecord {
  RevisionId revision;
  double entropy = 0.0;
  double delta_watts = 0.0;
};

struct GroupEntry {
  RevisionId revision;
  double entropy = 0.0;
};

// Records split by z-score of |delta|: low z <= 0 (z < -1 included),
// medium 0 < z <= 1, high z > 1.
struct GroupedEntropies {
  std::vector<GroupEntry> low;
  std::vector<GroupEntry> medium;
  std::vector<GroupEntry> high;
  double mean_abs_delta = 0.0;
  double std_abs_delta = 0.0;
};

GroupedEntropies group_by_abs_delta(std::span<const DeltaRecord> records);

struct OutlierSplit {
  std::vector<DeltaRecord> kept;
  std::vector<DeltaRecord> flagged;
};

// Tukey fences on entropy: outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR] is flagged,
// values on a fence are kept. Input order is preserved in both parts.
OutlierSplit filter_entropy_outliers(std::span<const DeltaRecord> records);

}  // namespace greenmine
