#include "greenmine/stats.hpp"

#include <algorithm>
#include <cmath>

#include "greenmine/error.hpp"

namespace greenmine {

double mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty sequence");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) throw ValidationError("standard deviation needs at least two values");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: sequences differ in length");
  if (x.size() < 2) throw ValidationError("pearson: need at least two points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedStatisticError("pearson: constant input");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of an empty sequence");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxSummary box_summary(std::span<const double> values) {
  if (values.empty()) throw ValidationError("box summary of an empty sequence");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return {sorted.front(),
          quantile_sorted(sorted, 0.25),
          quantile_sorted(sorted, 0.5),
          quantile_sorted(sorted, 0.75),
          sorted.back(),
          sorted.size()};
}

GroupedEntropies group_by_abs_delta(std::span<const DeltaRecord> records) {
  if (records.size() < 2) throw ValidationError("grouping needs at least two records");
  std::vector<double> abs_delta;
  abs_delta.reserve(records.size());
  for (const auto& r : records) abs_delta.push_back(std::abs(r.delta_watts));

  GroupedEntropies groups;
  groups.mean_abs_delta = mean(abs_delta);
  groups.std_abs_delta = sample_stddev(abs_delta);
  if (groups.std_abs_delta == 0.0) {
    throw UndefinedStatisticError("all energy deltas have the same magnitude");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double z = (abs_delta[i] - groups.mean_abs_delta) / groups.std_abs_delta;
    GroupEntry entry{records[i].revision, records[i].entropy};
    if (z <= 0.0) {
      groups.low.push_back(std::move(entry));
    } else if (z <= 1.0) {
      groups.medium.push_back(std::move(entry));
    } else {
      groups.high.push_back(std::move(entry));
    }
  }
  return groups;
}

OutlierSplit filter_entropy_outliers(std::span<const DeltaRecord> records) {
  OutlierSplit split;
  if (records.empty()) return split;
  std::vector<double> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(r.entropy);
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_sorted(sorted, 0.25);
  const double q3 = quantile_sorted(sorted, 0.75);
  const double iqr = q3 - q1;
  const double low = q1 - 1.5 * iqr;
  const double high = q3 + 1.5 * iqr;
  for (const auto& r : records) {
    (r.entropy < low || r.entropy > high ? split.flagged : split.kept).push_back(r);
  }
  return split;
}

}  // namespace greenmine
