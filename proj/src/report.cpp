#include "maskprof/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "maskprof/errors.hpp"

namespace maskprof {

using nlohmann::json;

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted.front();
  const double h = (sorted.size() - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - lo;
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

FactorStats stats_for(const std::string& factor, std::vector<double> values) {
  FactorStats s;
  s.n = static_cast<long>(values.size());
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  s.median = quantile(values, 0.5);
  s.p5 = quantile(values, 0.05);
  s.p95 = quantile(values, 0.95);
  if (auto range = declared_range(factor)) {
    s.range_lo = range->first;
    s.range_hi = range->second;
  } else {
    s.range_lo = 0.0;
    s.range_hi = quantile(values, 0.99);
  }
  for (double v : values) ++s.histogram[histogram_bin(v, s.range_lo, s.range_hi)];
  return s;
}

// P(X < Y) for X uniform on [a0,a1], Y uniform on [b0,b1]; zero-width
// intervals are point masses. Exact, so reports with different binning ranges
// compare consistently.
double prob_less(double a0, double a1, double b0, double b1) {
  const bool pa = a1 <= a0, pb = b1 <= b0;
  if (pa && pb) return a0 < b0 ? 1.0 : (a0 == b0 ? 0.5 : 0.0);
  if (pa) {
    const double t = (b1 - a0) / (b1 - b0);
    return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  }
  if (pb) {
    const double t = (b0 - a0) / (a1 - a0);
    return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  }
  // integral of F_X over [b0,b1], divided by the interval length
  const double w = a1 - a0;
  double integral = 0.0;
  const double mid_lo = std::max(b0, a0), mid_hi = std::min(b1, a1);
  if (mid_hi > mid_lo)
    integral += ((mid_hi - a0) * (mid_hi - a0) - (mid_lo - a0) * (mid_lo - a0)) / (2.0 * w);
  if (b1 > a1) integral += b1 - std::max(b0, a1);
  return integral / (b1 - b0);
}

std::vector<std::string> factor_order(const FactorReport& r) {
  std::vector<std::string> names;
  for (const auto& [name, stats] : r.per_factor) names.push_back(name);
  return names;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void svg_panel(std::string& out, int panel_index, const std::string& name,
               const FactorStats* a, const FactorStats* b) {
  const int px = 20, py = 20 + panel_index * 170;
  const int plot_w = 500, plot_h = 120;
  out += "<g class=\"panel\" transform=\"translate(" + std::to_string(px) + "," +
         std::to_string(py) + ")\">\n";
  out += "<text x=\"0\" y=\"12\" font-size=\"12\" font-family=\"monospace\">" + name;
  if (a && a->n > 0) {
    out += " (n=" + std::to_string(a->n);
    if (b) out += " vs n=" + std::to_string(b->n);
    out += ", range [" + fmt6(a->range_lo) + "," + fmt6(a->range_hi) + "])";
  } else {
    out += " (n=0)";
  }
  out += "</text>\n";
  out += "<rect x=\"0\" y=\"20\" width=\"" + std::to_string(plot_w) + "\" height=\"" +
         std::to_string(plot_h) + "\" fill=\"none\" stroke=\"#888\"/>\n";
  auto draw = [&](const FactorStats& s, const char* fill, double opacity) {
    long peak = 1;
    for (long c : s.histogram) peak = std::max(peak, c);
    const double bar_w = static_cast<double>(plot_w) / kHistogramBins;
    for (int i = 0; i < kHistogramBins; ++i) {
      if (s.histogram[i] == 0) continue;
      const double h = plot_h * static_cast<double>(s.histogram[i]) / peak;
      out += "<rect x=\"" + fmt6(i * bar_w) + "\" y=\"" + fmt6(20 + plot_h - h) + "\" width=\"" +
             fmt6(bar_w) + "\" height=\"" + fmt6(h) + "\" fill=\"" + fill + "\" opacity=\"" +
             fmt6(opacity) + "\"/>\n";
    }
  };
  if (a && a->n > 0) draw(*a, "#1f77b4", b ? 0.6 : 0.9);
  if (b && b->n > 0) draw(*b, "#ff7f0e", 0.6);
  out += "</g>\n";
}

std::string render_panels(const FactorReport& a, const FactorReport* b) {
  const auto names = factor_order(a);
  const int height = 20 + std::max<std::size_t>(names.size(), 1) * 170;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"" +
                    std::to_string(height) + "\">\n";
  if (names.empty()) {
    out += "<g class=\"panel\"><text x=\"20\" y=\"40\" font-size=\"12\" "
           "font-family=\"monospace\">n=0</text></g>\n";
  }
  int idx = 0;
  for (const auto& name : names) {
    const FactorStats* sb = nullptr;
    if (b) {
      auto it = b->per_factor.find(name);
      if (it != b->per_factor.end()) sb = &it->second;
    }
    svg_panel(out, idx++, name, &a.per_factor.at(name), sb);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace

std::optional<std::pair<double, double>> declared_range(const std::string& factor) {
  static const std::map<std::string, std::pair<double, double>> bounded = {
      {"color_gradient", {0.0, 1.0}},
      {"shape_concavity", {0.0, 1.0}},
      {"non_rectangularity", {0.0, 1.0}},
      {"incompactness_pp", {0.0, 1.0}},
      {"incompactness_schwartzberg", {0.0, 1.0}},
      {"discontinuity", {0.0, 1.0}},
      {"color_similarity", {0.0, 1.0}},
      {"shape_variation", {0.0, 1.0}},
      {"boundary_shape_similarity", {0.0, 1.0}},
  };
  auto it = bounded.find(factor);
  if (it == bounded.end()) return std::nullopt;
  return it->second;
}

int histogram_bin(double v, double lo, double hi) {
  if (hi <= lo) return 0;
  if (v <= lo) return 0;
  if (v >= hi) return kHistogramBins - 1;
  const int bin = static_cast<int>((v - lo) / (hi - lo) * kHistogramBins);
  return std::min(bin, kHistogramBins - 1);
}

FactorReport build_report_from_columns(
    const std::map<std::string, std::vector<std::optional<double>>>& columns,
    const std::string& dataset_id) {
  FactorReport report;
  report.dataset_id = dataset_id;
  for (const auto& [name, cells] : columns) {
    std::vector<double> values;
    long missing = 0;
    for (const auto& c : cells) {
      if (c)
        values.push_back(*c);
      else
        ++missing;
    }
    report.per_factor[name] = stats_for(name, std::move(values));
    report.missing_counts[name] = missing;
  }
  return report;
}

FactorReport build_report(const std::vector<ObjectFactorRow>& object_rows,
                          const std::vector<SceneFactorRow>& scene_rows,
                          const std::string& dataset_id) {
  std::map<std::string, std::vector<std::optional<double>>> columns;
  for (const auto& r : object_rows) {
    columns["color_gradient"].push_back(r.color_gradient);
    columns["shape_concavity"].push_back(r.shape_concavity);
    columns["color_count"].push_back(static_cast<double>(r.color_count));
    columns["color_entropy"].push_back(r.color_entropy);
    columns["non_rectangularity"].push_back(r.non_rectangularity);
    columns["incompactness_pp"].push_back(r.incompactness_pp);
    columns["incompactness_schwartzberg"].push_back(r.incompactness_schwartzberg);
    columns["discontinuity"].push_back(r.discontinuity);
    columns["decentralization"].push_back(r.decentralization);
  }
  for (const auto& r : scene_rows) {
    columns["color_similarity"].push_back(r.color_similarity);
    columns["shape_variation"].push_back(r.shape_variation);
    columns["color_similarity_chamfer"].push_back(r.color_similarity_chamfer);
    columns["color_similarity_hausdorff"].push_back(r.color_similarity_hausdorff);
    columns["boundary_shape_similarity"].push_back(r.boundary_shape_similarity);
    columns["boundary_shape_entropy"].push_back(r.boundary_shape_entropy);
    columns["centroid_proximity"].push_back(r.centroid_proximity);
    columns["chamfer_proximity"].push_back(r.chamfer_proximity);
  }
  return build_report_from_columns(columns, dataset_id);
}

ComparisonRecord compare_reports(const FactorReport& a, const FactorReport& b) {
  if (factor_order(a) != factor_order(b))
    throw StructuralError("compare: reports cover different factor sets");
  ComparisonRecord record;
  record.dataset_a = a.dataset_id;
  record.dataset_b = b.dataset_id;
  for (const auto& [name, sa] : a.per_factor) {
    const FactorStats& sb = b.per_factor.at(name);
    FactorComparison cmp;
    cmp.median_diff = sb.median - sa.median;
    if (sa.n > 0 && sb.n > 0) {
      const double wa = (sa.range_hi - sa.range_lo) / kHistogramBins;
      const double wb = (sb.range_hi - sb.range_lo) / kHistogramBins;
      double p = 0.0;
      for (int i = 0; i < kHistogramBins; ++i) {
        if (sa.histogram[i] == 0) continue;
        const double a0 = sa.range_lo + i * wa, a1 = sa.range_lo + (i + 1) * wa;
        for (int j = 0; j < kHistogramBins; ++j) {
          if (sb.histogram[j] == 0) continue;
          const double b0 = sb.range_lo + j * wb, b1 = sb.range_lo + (j + 1) * wb;
          p += static_cast<double>(sa.histogram[i]) * static_cast<double>(sb.histogram[j]) *
               prob_less(a0, a1, b0, b1);
        }
      }
      cmp.rank_ab = p / (static_cast<double>(sa.n) * static_cast<double>(sb.n));
    }
    record.per_factor[name] = cmp;
  }
  return record;
}

std::string render_svg(const FactorReport& report) { return render_panels(report, nullptr); }

std::string render_svg(const FactorReport& a, const FactorReport& b) {
  return render_panels(a, &b);
}

std::string report_to_json(const FactorReport& report) {
  json factors = json::object();
  for (const auto& [name, s] : report.per_factor) {
    json f;
    f["n"] = s.n;
    f["mean"] = s.mean;
    f["median"] = s.median;
    f["p5"] = s.p5;
    f["p95"] = s.p95;
    f["range"] = {s.range_lo, s.range_hi};
    f["histogram"] = s.histogram;
    factors[name] = std::move(f);
  }
  json doc;
  doc["dataset_id"] = report.dataset_id;
  doc["bins"] = kHistogramBins;
  doc["factors"] = std::move(factors);
  doc["missing_counts"] = report.missing_counts;
  return doc.dump(2) + "\n";
}

std::string comparison_to_json(const ComparisonRecord& record) {
  json factors = json::object();
  for (const auto& [name, c] : record.per_factor) {
    json f;
    f["median_diff"] = c.median_diff;
    f["rank_ab"] = c.rank_ab;
    factors[name] = std::move(f);
  }
  json doc;
  doc["a"] = record.dataset_a;
  doc["b"] = record.dataset_b;
  doc["factors"] = std::move(factors);
  return doc.dump(2) + "\n";
}

}  // namespace maskprof
