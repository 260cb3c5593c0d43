#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "maskprof/image.hpp"
#include "maskprof/manifest.hpp"

namespace maskprof {

// value >= threshold -> foreground
BinaryMask binarize(const SoftMask& mask, double threshold = 0.5);

// |a n b| / |a u b|; 0 when the union is empty. Throws StructuralError on a
// dimension mismatch.
double iou(const BinaryMask& a, const BinaryMask& b);

struct MatchRecord {
  int pred = -1;
  int gt = -1;
  double iou = 0.0;
};

struct MatchResult {
  std::vector<MatchRecord> matches;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  // TP flag per kept prediction, aligned with `order` below (confidence
  // descending, ties by index); feeds the dataset-wide AP sweep.
  std::vector<int> order;
  std::vector<bool> is_tp;
};

// Greedy one-to-one matching: predictions sorted by confidence descending
// (ties by index) each claim the unclaimed GT with the highest IoU if that
// IoU exceeds the threshold. Empty prediction masks must be dropped upstream.
MatchResult match_greedy(const std::vector<BinaryMask>& preds,
                         const std::vector<double>& confidences,
                         const std::vector<BinaryMask>& gts, double iou_threshold = 0.5);

// Area under the interpolated precision-recall curve (all-point
// interpolation); entries are (confidence, is_tp) over the whole dataset.
double average_precision(std::vector<std::pair<double, bool>> entries, long total_gt);

struct PqStats {
  double iou_sum = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double pq() const {
    const double den = tp + 0.5 * fp + 0.5 * fn;
    return den == 0.0 ? 0.0 : iou_sum / den;
  }
};

// PQ matching on one image: soft predictions are first resolved into a
// non-overlapping partition (per pixel, the highest value >= 0.5 wins; ties by
// lower index), then pairs with IoU above the threshold are matched.
PqStats panoptic_match(const std::vector<SoftMask>& preds, const std::vector<BinaryMask>& gts,
                       double iou_threshold = 0.5);

inline double panoptic_quality(const std::vector<SoftMask>& preds,
                               const std::vector<BinaryMask>& gts, double iou_threshold = 0.5) {
  return panoptic_match(preds, gts, iou_threshold).pq();
}

struct ImageEval {
  std::string scene_id;
  std::vector<MatchRecord> matches;
  int tp = 0, fp = 0, fn = 0;
};

struct EvalResult {
  double ap = 0.0;
  double pq = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double iou_threshold = 0.5;
  long num_images = 0;
  long num_gt_objects = 0;
  std::vector<ImageEval> per_image;
};

// AP is aggregated dataset-wide; PQ, precision and recall are micro-averaged.
EvalResult evaluate(const std::vector<Prediction>& preds, const std::vector<Scene>& gts,
                    double iou_threshold = 0.5);
EvalResult evaluate(const std::filesystem::path& pred_manifest,
                    const std::filesystem::path& gt_manifest, double iou_threshold = 0.5);

}  // namespace maskprof
