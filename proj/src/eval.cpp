#include "maskprof/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "maskprof/errors.hpp"

namespace maskprof {

BinaryMask binarize(const SoftMask& mask, double threshold) {
  BinaryMask out = BinaryMask::zeros(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.values.size(); ++i)
    out.bits[i] = mask.values[i] >= threshold ? 1 : 0;
  return out;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height)
    throw StructuralError("iou: mask dimension mismatch");
  long inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    inter += a.bits[i] & b.bits[i];
    uni += a.bits[i] | b.bits[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

MatchResult match_greedy(const std::vector<BinaryMask>& preds,
                         const std::vector<double>& confidences,
                         const std::vector<BinaryMask>& gts, double iou_threshold) {
  MatchResult result;
  result.order.resize(preds.size());
  std::iota(result.order.begin(), result.order.end(), 0);
  std::stable_sort(result.order.begin(), result.order.end(), [&](int a, int b) {
    return confidences[a] > confidences[b];
  });
  std::vector<bool> gt_claimed(gts.size(), false);
  result.is_tp.assign(preds.size(), false);
  for (std::size_t rank = 0; rank < result.order.size(); ++rank) {
    const int p = result.order[rank];
    int best_gt = -1;
    double best_iou = iou_threshold;  // strictly above threshold required
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gt_claimed[g]) continue;
      const double v = iou(preds[p], gts[g]);
      if (v > best_iou) {
        best_iou = v;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0) {
      gt_claimed[best_gt] = true;
      result.matches.push_back({p, best_gt, best_iou});
      result.is_tp[rank] = true;
      ++result.tp;
    } else {
      ++result.fp;
    }
  }
  result.fn = static_cast<int>(gts.size()) - result.tp;
  return result;
}

double average_precision(std::vector<std::pair<double, bool>> entries, long total_gt) {
  if (total_gt <= 0 || entries.empty()) return 0.0;
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> precision, recall;
  long tp = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].second) ++tp;
    precision.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(total_gt));
  }
  // all-point interpolation: running max of precision from the right
  for (std::size_t i = precision.size() - 1; i-- > 0;)
    precision[i] = std::max(precision[i], precision[i + 1]);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < precision.size(); ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

PqStats panoptic_match(const std::vector<SoftMask>& preds, const std::vector<BinaryMask>& gts,
                       double iou_threshold) {
  PqStats stats;
  int width = 0, height = 0;
  if (!gts.empty()) {
    width = gts.front().width;
    height = gts.front().height;
  } else if (!preds.empty()) {
    width = preds.front().width;
    height = preds.front().height;
  }
  // argmax resolution into a non-overlapping partition
  std::vector<BinaryMask> resolved(preds.size(), BinaryMask::zeros(width, height));
  const std::size_t n = static_cast<std::size_t>(width) * height;
  for (std::size_t i = 0; i < n; ++i) {
    int best = -1;
    float best_v = 0.0f;
    for (std::size_t p = 0; p < preds.size(); ++p) {
      const float v = preds[p].values[i];
      if (v >= 0.5f && v > best_v) {
        best_v = v;
        best = static_cast<int>(p);
      }
    }
    if (best >= 0) resolved[best].bits[i] = 1;
  }
  std::vector<int> kept;
  for (std::size_t p = 0; p < resolved.size(); ++p)
    if (resolved[p].count() > 0) kept.push_back(static_cast<int>(p));

  // pairs above threshold, matched greedily by IoU (unique for non-overlapping
  // masks on both sides)
  struct Pair {
    double iou;
    int p, g;
  };
  std::vector<Pair> pairs;
  for (int p : kept)
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double v = iou(resolved[p], gts[g]);
      if (v > iou_threshold) pairs.push_back({v, p, static_cast<int>(g)});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.p != b.p) return a.p < b.p;
    return a.g < b.g;
  });
  std::vector<bool> p_used(preds.size(), false), g_used(gts.size(), false);
  for (const Pair& pr : pairs) {
    if (p_used[pr.p] || g_used[pr.g]) continue;
    p_used[pr.p] = true;
    g_used[pr.g] = true;
    stats.iou_sum += pr.iou;
    ++stats.tp;
  }
  stats.fp = static_cast<int>(kept.size()) - stats.tp;
  stats.fn = static_cast<int>(gts.size()) - stats.tp;
  return stats;
}

EvalResult evaluate(const std::vector<Prediction>& preds, const std::vector<Scene>& gts,
                    double iou_threshold) {
  std::map<std::string, const Prediction*> pred_by_id;
  for (const auto& p : preds) pred_by_id[p.id] = &p;
  std::map<std::string, const Scene*> gt_by_id;
  for (const auto& g : gts) gt_by_id[g.id] = &g;
  std::string missing;
  for (const auto& [id, p] : pred_by_id)
    if (!gt_by_id.count(id)) missing += " " + id + " (no ground truth)";
  for (const auto& [id, g] : gt_by_id)
    if (!pred_by_id.count(id)) missing += " " + id + " (no prediction)";
  if (!missing.empty()) throw EvalError("unmatched scene ids:" + missing);

  EvalResult result;
  result.iou_threshold = iou_threshold;
  PqStats pq_total;
  long tp = 0, fp = 0, fn = 0;
  std::vector<std::pair<double, bool>> ap_entries;
  for (const auto& gt : gts) {
    const Prediction& pred = *pred_by_id[gt.id];
    // empty binarized predictions can never reach the IoU threshold; they are
    // neither TP nor FP
    std::vector<BinaryMask> bin;
    std::vector<double> conf;
    for (std::size_t i = 0; i < pred.masks.size(); ++i) {
      BinaryMask b = binarize(pred.masks[i], 0.5);
      if (b.count() == 0) continue;
      bin.push_back(std::move(b));
      conf.push_back(pred.confidences[i]);
    }
    const MatchResult match = match_greedy(bin, conf, gt.objects, iou_threshold);
    ImageEval img;
    img.scene_id = gt.id;
    img.matches = match.matches;
    img.tp = match.tp;
    img.fp = match.fp;
    img.fn = match.fn;
    result.per_image.push_back(std::move(img));
    tp += match.tp;
    fp += match.fp;
    fn += match.fn;
    for (std::size_t rank = 0; rank < match.order.size(); ++rank)
      ap_entries.emplace_back(conf[match.order[rank]], match.is_tp[rank]);

    const PqStats pq = panoptic_match(pred.masks, gt.objects, iou_threshold);
    pq_total.iou_sum += pq.iou_sum;
    pq_total.tp += pq.tp;
    pq_total.fp += pq.fp;
    pq_total.fn += pq.fn;
    result.num_gt_objects += static_cast<long>(gt.objects.size());
  }
  result.num_images = static_cast<long>(gts.size());
  result.ap = average_precision(std::move(ap_entries), result.num_gt_objects);
  result.pq = pq_total.pq();
  result.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  result.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  return result;
}

EvalResult evaluate(const std::filesystem::path& pred_manifest,
                    const std::filesystem::path& gt_manifest, double iou_threshold) {
  return evaluate(load_predictions(pred_manifest), load_dataset(gt_manifest), iou_threshold);
}

}  // namespace maskprof
