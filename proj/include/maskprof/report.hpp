#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maskprof/object_factors.hpp"
#include "maskprof/scene_factors.hpp"

namespace maskprof {

constexpr int kHistogramBins = 100;

struct FactorStats {
  long n = 0;
  double mean = 0.0;
  double median = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
  double range_lo = 0.0;  // binning range; [0,1] for bounded factors,
  double range_hi = 1.0;  // [0, observed p99] otherwise
  std::array<long, kHistogramBins> histogram{};
};

struct FactorReport {
  std::string dataset_id;
  std::map<std::string, FactorStats> per_factor;
  std::map<std::string, long> missing_counts;
};

// nullopt range means "unbounded: bin over [0, observed p99]".
std::optional<std::pair<double, double>> declared_range(const std::string& factor);

// Bin index for a value in a report's range: min(floor((v-lo)/(hi-lo)*bins),
// bins-1), clamped into the range first.
int histogram_bin(double v, double lo, double hi);

FactorReport build_report(const std::vector<ObjectFactorRow>& object_rows,
                          const std::vector<SceneFactorRow>& scene_rows,
                          const std::string& dataset_id);

// Builds from profile CSV columns (sentinels = empty cells).
FactorReport build_report_from_columns(
    const std::map<std::string, std::vector<std::optional<double>>>& columns,
    const std::string& dataset_id);

struct FactorComparison {
  double median_diff = 0.0;  // median(b) - median(a)
  double rank_ab = 0.5;      // P(sample of a < sample of b), exact on the bins
};

struct ComparisonRecord {
  std::string dataset_a;
  std::string dataset_b;
  std::map<std::string, FactorComparison> per_factor;
};

// Throws StructuralError when the factor sets differ. The rank statistic
// treats each bin as uniform over its interval, so reports with different
// binning ranges compare exactly.
ComparisonRecord compare_reports(const FactorReport& a, const FactorReport& b);

// Deterministic SVG text: one histogram panel per factor, overlaid series for
// comparisons.
std::string render_svg(const FactorReport& report);
std::string render_svg(const FactorReport& a, const FactorReport& b);

std::string report_to_json(const FactorReport& report);
std::string comparison_to_json(const ComparisonRecord& record);

}  // namespace maskprof
