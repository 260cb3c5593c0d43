#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "maskprof/errors.hpp"
#include "maskprof/eval.hpp"
#include "maskprof/manifest.hpp"
#include "maskprof/png_io.hpp"
#include "test_support.hpp"

using namespace maskprof;
using namespace test_support;
namespace fs = std::filesystem;

namespace {

SoftMask soft_from(const BinaryMask& m, float value = 1.0f) {
  SoftMask s;
  s.width = m.width;
  s.height = m.height;
  s.values.resize(m.bits.size(), 0.0f);
  for (std::size_t i = 0; i < m.bits.size(); ++i)
    if (m.bits[i]) s.values[i] = value;
  return s;
}

// Exhaustive optimal assignment: max number of (pred, gt) pairs with IoU
// strictly above the threshold.
int optimal_tp(const std::vector<BinaryMask>& preds, const std::vector<BinaryMask>& gts,
               double thresh) {
  std::vector<std::vector<double>> ious(preds.size(), std::vector<double>(gts.size()));
  for (std::size_t p = 0; p < preds.size(); ++p)
    for (std::size_t g = 0; g < gts.size(); ++g) ious[p][g] = iou(preds[p], gts[g]);
  int best = 0;
  std::vector<int> assign(preds.size(), -1);
  std::vector<bool> used(gts.size(), false);
  auto recurse = [&](auto&& self, std::size_t p, int count) -> void {
    if (p == preds.size()) {
      best = std::max(best, count);
      return;
    }
    self(self, p + 1, count);  // leave p unmatched
    for (std::size_t g = 0; g < gts.size(); ++g)
      if (!used[g] && ious[p][g] > thresh) {
        used[g] = true;
        self(self, p + 1, count + 1);
        used[g] = false;
      }
  };
  recurse(recurse, 0, 0);
  return best;
}

}  // namespace

TEST_CASE("binarize") {
  SoftMask zeros;
  zeros.width = 4;
  zeros.height = 4;
  zeros.values.assign(16, 0.0f);
  CHECK(binarize(zeros).count() == 0);

  SoftMask ones = zeros;
  ones.values.assign(16, 1.0f);
  CHECK(binarize(ones).count() == 16);

  SoftMask mixed = zeros;
  mixed.values[0] = 0.4f;
  mixed.values[1] = 0.6f;
  const BinaryMask b = binarize(mixed);
  CHECK(b.bits[0] == 0);
  CHECK(b.bits[1] == 1);
}

TEST_CASE("iou") {
  const BinaryMask a = rect_mask(10, 10, 1, 1, 2, 2);
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, rect_mask(10, 10, 6, 6, 2, 2)) == 0.0);
  // 2x2 overlapping a shifted 2x2 by 2 pixels -> 2/6
  CHECK(iou(a, rect_mask(10, 10, 1, 2, 2, 2)) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
  CHECK_THROWS_AS(iou(a, rect_mask(8, 8, 0, 0, 2, 2)), StructuralError);
}

TEST_CASE("greedy matching basics") {
  std::vector<BinaryMask> gts = {rect_mask(20, 20, 1, 1, 4, 4), rect_mask(20, 20, 10, 10, 4, 4)};
  const MatchResult perfect = match_greedy(gts, {0.3, 0.9}, gts, 0.5);
  CHECK(perfect.tp == 2);
  CHECK(perfect.fp == 0);
  CHECK(perfect.fn == 0);

  const MatchResult none = match_greedy({}, {}, gts, 0.5);
  CHECK(none.tp == 0);
  CHECK(none.fn == 2);

  // two predictions both overlapping one GT best: higher confidence wins
  std::vector<BinaryMask> preds = {rect_mask(20, 20, 1, 1, 4, 4), rect_mask(20, 20, 1, 1, 4, 5)};
  std::vector<BinaryMask> single_gt = {rect_mask(20, 20, 1, 1, 4, 4)};
  const MatchResult conflict = match_greedy(preds, {0.5, 0.8}, single_gt, 0.5);
  CHECK(conflict.tp == 1);
  CHECK(conflict.fp == 1);
  REQUIRE(conflict.matches.size() == 1);
  CHECK(conflict.matches[0].pred == 1);  // the 0.8-confidence one
  CHECK(conflict.tp == optimal_tp(preds, single_gt, 0.5));
}

TEST_CASE("average precision hand example") {
  // 2 GTs; predictions: correct@0.9, incorrect@0.8, correct@0.7
  std::vector<std::pair<double, bool>> entries = {{0.9, true}, {0.8, false}, {0.7, true}};
  CHECK(average_precision(entries, 2) == doctest::Approx(0.5 * 1.0 + 0.5 * (2.0 / 3.0)).epsilon(1e-12));
  CHECK(average_precision(entries, 2) == doctest::Approx(0.8333).epsilon(1e-4));

  CHECK(average_precision({{0.9, true}, {0.5, true}}, 2) == 1.0);
  CHECK(average_precision({}, 2) == 0.0);
}

TEST_CASE("panoptic quality formula cases") {
  const BinaryMask gt = rect_mask(20, 20, 2, 2, 5, 10);
  CHECK(panoptic_quality({soft_from(gt)}, {gt}) == doctest::Approx(1.0).epsilon(1e-12));

  // IoU 0.6: 5x10 gt vs mask covering 3/5 of it... use 30 of 50 px plus 0 extra
  BinaryMask partial = rect_mask(20, 20, 2, 2, 5, 6);  // 30 px, IoU 30/50 = 0.6
  CHECK(panoptic_quality({soft_from(partial)}, {gt}) == doctest::Approx(0.6).epsilon(1e-12));

  // 2 GTs, one matched at 0.8, one missed, one unmatched pred -> 0.8/(1+0.5+0.5)
  BinaryMask gt2 = rect_mask(20, 20, 12, 12, 5, 5);
  BinaryMask match80 = rect_mask(20, 20, 2, 2, 5, 8);  // 40 px on 50 -> IoU 0.8
  BinaryMask stray = rect_mask(20, 20, 12, 2, 4, 4);
  const double pq = panoptic_quality({soft_from(match80), soft_from(stray)}, {gt, gt2});
  CHECK(pq == doctest::Approx(0.8 / 2.0).epsilon(1e-12));
}

TEST_CASE("greedy matches the optimal-assignment oracle when overlaps are unique") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    // random disjoint-ish GT rectangles and perturbed predictions
    const int k = 1 + static_cast<int>(draw_below(rng, 5));
    std::vector<BinaryMask> gts, preds;
    std::vector<double> confs;
    for (int i = 0; i < k; ++i) {
      const int gx = 2 + static_cast<int>(draw_below(rng, 40));
      const int gy = 2 + static_cast<int>(draw_below(rng, 40));
      const int gw = 4 + static_cast<int>(draw_below(rng, 8));
      const int gh = 4 + static_cast<int>(draw_below(rng, 8));
      gts.push_back(rect_mask(64, 64, gx, gy, gw, gh));
    }
    const int np = 1 + static_cast<int>(draw_below(rng, 5));
    for (int i = 0; i < np; ++i) {
      const int base = static_cast<int>(draw_below(rng, k));
      int x0 = 2, y0 = 2, w = 4, h = 4;
      // perturb the chosen GT box
      const BinaryMask& g = gts[base];
      int gx0 = 64, gy0 = 64, gx1 = -1, gy1 = -1;
      for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
          if (g.get(x, y)) {
            gx0 = std::min(gx0, x);
            gy0 = std::min(gy0, y);
            gx1 = std::max(gx1, x);
            gy1 = std::max(gy1, y);
          }
      x0 = std::max(0, gx0 + static_cast<int>(draw_below(rng, 7)) - 3);
      y0 = std::max(0, gy0 + static_cast<int>(draw_below(rng, 7)) - 3);
      w = std::max(1, gx1 - gx0 + 1 + static_cast<int>(draw_below(rng, 5)) - 2);
      h = std::max(1, gy1 - gy0 + 1 + static_cast<int>(draw_below(rng, 5)) - 2);
      w = std::min(w, 63 - x0);
      h = std::min(h, 63 - y0);
      preds.push_back(rect_mask(64, 64, x0, y0, std::max(1, w), std::max(1, h)));
      confs.push_back(draw_unit(rng));
    }
    // uniqueness: every prediction has at most one above-threshold GT
    bool unique = true;
    for (const auto& p : preds) {
      int above = 0;
      for (const auto& g : gts)
        if (iou(p, g) > 0.5) ++above;
      if (above > 1) unique = false;
    }
    if (!unique) continue;
    ++checked;
    const MatchResult greedy = match_greedy(preds, confs, gts, 0.5);
    CHECK(greedy.tp == optimal_tp(preds, gts, 0.5));
  }
  CHECK(checked >= 150);
}

TEST_CASE("evaluate end to end via manifests") {
  const fs::path dir = fs::temp_directory_path() / "maskprof_test_eval";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Rng rng(31);
  std::vector<Scene> scenes;
  for (int i = 0; i < 2; ++i) {
    Scene s;
    s.id = "e" + std::to_string(i);
    s.image = RgbImage::filled(32, 32, {10, 10, 10});
    s.objects.push_back(random_blob(rng, 32, 32, 9, 9, 5));
    s.objects.push_back(random_blob(rng, 32, 32, 22, 22, 5));
    scenes.push_back(std::move(s));
  }
  save_dataset(scenes, dir / "gt");

  // predictions identical to GT
  fs::create_directories(dir / "pred");
  {
    std::string manifest = R"({"images":[)";
    for (int i = 0; i < 2; ++i) {
      std::vector<SoftMask> masks;
      for (const auto& m : scenes[i].objects) masks.push_back(soft_from(m));
      save_soft_masks(dir / "pred", scenes[i].id, masks);
      if (i) manifest += ",";
      manifest += R"({"id":"e)" + std::to_string(i) + R"(","image":"../gt/images/e)" +
                  std::to_string(i) + R"(.png","masks":["masks/e)" + std::to_string(i) +
                  R"(_0.png","masks/e)" + std::to_string(i) + R"(_1.png"]})";
    }
    manifest += "]}";
    std::ofstream(dir / "pred" / "manifest.json") << manifest;
  }
  const EvalResult perfect = evaluate(dir / "pred" / "manifest.json", dir / "gt" / "manifest.json");
  CHECK(perfect.ap == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(perfect.pq == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(perfect.precision == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(perfect.recall == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(perfect.num_images == 2);
  CHECK(perfect.num_gt_objects == 4);
}

TEST_CASE("evaluate: empty predictions give all zeros") {
  Rng rng(32);
  std::vector<Scene> gts;
  Scene s;
  s.id = "z";
  s.image = RgbImage::filled(16, 16, {0, 0, 0});
  s.objects.push_back(rect_mask(16, 16, 2, 2, 5, 5));
  gts.push_back(s);
  std::vector<Prediction> preds(1);
  preds[0].id = "z";
  const EvalResult r = evaluate(preds, gts);
  CHECK(r.ap == 0.0);
  CHECK(r.pq == 0.0);
  CHECK(r.precision == 0.0);
  CHECK(r.recall == 0.0);
}

TEST_CASE("evaluate: mismatched scene ids raise an error naming them") {
  std::vector<Scene> gts(1);
  gts[0].id = "present";
  gts[0].image = RgbImage::filled(8, 8, {0, 0, 0});
  std::vector<Prediction> preds(1);
  preds[0].id = "absent";
  try {
    evaluate(preds, gts);
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    const std::string what = e.what();
    CHECK(what.find("present") != std::string::npos);
    CHECK(what.find("absent") != std::string::npos);
  }
}

TEST_CASE("adding a false positive never increases precision, AP or PQ") {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    Scene gt;
    gt.id = "m";
    gt.image = RgbImage::filled(48, 48, {0, 0, 0});
    gt.objects.push_back(random_blob(rng, 48, 48, 12, 12, 6));
    gt.objects.push_back(random_blob(rng, 48, 48, 34, 30, 6));

    std::vector<Prediction> preds(1);
    preds[0].id = "m";
    for (const auto& m : gt.objects) {
      preds[0].masks.push_back(soft_from(m, 0.9f));
      preds[0].confidences.push_back(0.9);
    }
    const EvalResult before = evaluate(preds, {gt});
    // inject a stray prediction that overlaps nothing
    preds[0].masks.push_back(soft_from(rect_mask(48, 48, 44, 1, 3, 3), 0.95f));
    preds[0].confidences.push_back(0.95);
    const EvalResult after = evaluate(preds, {gt});
    CHECK(after.precision <= before.precision + 1e-12);
    CHECK(after.ap <= before.ap + 1e-12);
    CHECK(after.pq <= before.pq + 1e-12);
    CHECK(after.recall == doctest::Approx(before.recall).epsilon(1e-12));
  }
}

TEST_CASE("uniform 2x upscale leaves all metrics unchanged") {
  Rng rng(34);
  Scene gt;
  gt.id = "s";
  gt.image = RgbImage::filled(32, 32, {0, 0, 0});
  gt.objects.push_back(random_blob(rng, 32, 32, 9, 9, 5));
  gt.objects.push_back(random_blob(rng, 32, 32, 22, 22, 5));
  std::vector<Prediction> preds(1);
  preds[0].id = "s";
  preds[0].masks.push_back(soft_from(random_blob(rng, 32, 32, 10, 9, 5), 0.8f));
  preds[0].masks.push_back(soft_from(random_blob(rng, 32, 32, 21, 23, 5), 0.6f));
  preds[0].confidences = {0.8, 0.6};
  const EvalResult small = evaluate(preds, {gt});

  Scene gt2 = gt;
  gt2.image = upscale2(gt.image);
  gt2.objects.clear();
  for (const auto& m : gt.objects) gt2.objects.push_back(upscale2(m));
  std::vector<Prediction> preds2(1);
  preds2[0].id = "s";
  for (const auto& m : preds[0].masks) {
    BinaryMask b = binarize(m, 0.5);
    SoftMask up = soft_from(upscale2(b), 0.0f);
    for (std::size_t i = 0; i < up.values.size(); ++i) up.values[i] = 0.0f;
    // preserve the original soft values blockwise
    for (int y = 0; y < up.height; ++y)
      for (int x = 0; x < up.width; ++x)
        up.values[static_cast<std::size_t>(y) * up.width + x] = m.get(x / 2, y / 2);
    preds2[0].masks.push_back(std::move(up));
  }
  preds2[0].confidences = preds[0].confidences;
  const EvalResult big = evaluate(preds2, {gt2});
  CHECK(small.ap == doctest::Approx(big.ap).epsilon(1e-12));
  CHECK(small.pq == doctest::Approx(big.pq).epsilon(1e-12));
  CHECK(small.precision == doctest::Approx(big.precision).epsilon(1e-12));
  CHECK(small.recall == doctest::Approx(big.recall).epsilon(1e-12));
}
