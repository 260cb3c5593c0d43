#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "maskprof/ablation.hpp"
#include "maskprof/errors.hpp"
#include "maskprof/object_factors.hpp"
#include "maskprof/scene_factors.hpp"
#include "test_support.hpp"

using namespace maskprof;
using namespace test_support;

namespace {

Scene scene_with(int w, int h, const std::vector<std::pair<BinaryMask, Rgb>>& objects) {
  Scene s;
  s.id = "test_scene";
  s.image = RgbImage::filled(w, h, {0, 0, 0});
  for (const auto& [mask, color] : objects) {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (mask.get(x, y)) s.image.at(x, y) = color;
    s.objects.push_back(mask);
  }
  return s;
}

Scene random_scene(Rng& rng, int n_objects) {
  Scene s;
  s.id = "rand_" + std::to_string(rng() % 1000000);
  s.image = RgbImage::filled(64, 64, {0, 0, 0});
  const int centers[4][2] = {{12, 12}, {12, 46}, {46, 12}, {46, 46}};
  for (int k = 0; k < n_objects; ++k) {
    const BinaryMask m = random_blob(rng, 64, 64, centers[k][0], centers[k][1], 7);
    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x)
        if (m.get(x, y))
          s.image.at(x, y) = {static_cast<std::uint8_t>(draw_below(rng, 256)),
                              static_cast<std::uint8_t>(draw_below(rng, 256)),
                              static_cast<std::uint8_t>(draw_below(rng, 256))};
    s.objects.push_back(m);
  }
  return s;
}

bool images_equal(const Scene& a, const Scene& b) {
  return a.image == b.image && a.objects == b.objects;
}

}  // namespace

TEST_CASE("C: already uniform objects leave the image unchanged") {
  const Scene s = scene_with(32, 32, {{rect_mask(32, 32, 2, 2, 6, 6), {40, 80, 120}},
                                      {rect_mask(32, 32, 20, 20, 5, 5), {200, 10, 30}}});
  CHECK(images_equal(ablate_C(s), s));
}

TEST_CASE("C: two-pixel object averages with round-half-up") {
  Scene s = scene_with(8, 8, {{rect_mask(8, 8, 2, 2, 2, 1), {0, 0, 0}}});
  s.image.at(3, 2) = {255, 255, 255};
  const Scene out = ablate_C(s);
  CHECK(out.image.at(2, 2) == Rgb{128, 128, 128});
  CHECK(out.image.at(3, 2) == Rgb{128, 128, 128});
}

TEST_CASE("C: gradient becomes exactly zero for every object") {
  Rng rng(100);
  for (int trial = 0; trial < 8; ++trial) {
    const Scene s = random_scene(rng, 2 + static_cast<int>(draw_below(rng, 3)));
    const Scene out = ablate_C(s);
    for (const auto& mask : out.objects) {
      const auto g = object_color_gradient(derive_instance(mask, out.image), out.image);
      if (g) CHECK(*g == 0.0);
    }
    // idempotence
    CHECK(images_equal(ablate_C(out), out));
  }
}

TEST_CASE("S: convex objects give back an identical scene") {
  const Scene s = scene_with(32, 32, {{rect_mask(32, 32, 2, 2, 6, 6), {40, 80, 120}},
                                      {rect_mask(32, 32, 20, 20, 5, 5), {200, 10, 30}}});
  CHECK(images_equal(ablate_S(s), s));
}

TEST_CASE("S: plus sign fills its corners with nearest-arm colors") {
  // plus at (2,1),(1,2),(2,2),(3,2),(2,3); distinct arm colors
  Scene s;
  s.id = "plus";
  s.image = RgbImage::filled(8, 8, {0, 0, 0});
  BinaryMask m = BinaryMask::zeros(8, 8);
  auto paint = [&](int x, int y, Rgb c) {
    m.set(x, y, 1);
    s.image.at(x, y) = c;
  };
  paint(2, 1, {10, 0, 0});   // top
  paint(1, 2, {0, 20, 0});   // left
  paint(2, 2, {0, 0, 30});   // center
  paint(3, 2, {40, 40, 0});  // right
  paint(2, 3, {0, 50, 50});  // bottom
  s.objects.push_back(m);
  const Scene out = ablate_S(s);
  REQUIRE(out.objects[0].count() == 9);
  // each corner ties between two arm pixels; the smaller row-major index wins
  CHECK(out.image.at(1, 1) == Rgb{10, 0, 0});  // top (2,1) beats left (1,2)
  CHECK(out.image.at(3, 1) == Rgb{10, 0, 0});  // top (2,1) beats right (3,2)
  CHECK(out.image.at(1, 3) == Rgb{0, 20, 0});  // left (1,2) beats bottom (2,3)
  CHECK(out.image.at(3, 3) == Rgb{40, 40, 0});  // right (3,2) beats bottom (2,3)
  // original pixels keep their colors
  CHECK(out.image.at(2, 2) == Rgb{0, 0, 30});
}

TEST_CASE("S: concavity becomes exactly zero and the op is idempotent") {
  Rng rng(200);
  for (int trial = 0; trial < 8; ++trial) {
    const Scene s = random_scene(rng, 2);
    const Scene out = ablate_S(s);
    for (const auto& mask : out.objects)
      CHECK(object_shape_concavity(derive_instance(mask, out.image)) == 0.0);
    CHECK(images_equal(ablate_S(out), out));
  }
}

TEST_CASE("S: an object fully covered by a later hull is dropped, with provenance") {
  // object 0: two pixels far apart whose hull is covered by object 1's hull
  Scene s;
  s.id = "cover";
  s.image = RgbImage::filled(16, 16, {0, 0, 0});
  BinaryMask small = BinaryMask::zeros(16, 16);
  small.set(6, 6, 1);
  s.objects.push_back(small);
  // later object: ring whose hull covers (6,6)
  BinaryMask ring = BinaryMask::zeros(16, 16);
  for (int i = 3; i <= 9; ++i) {
    ring.set(i, 3, 1);
    ring.set(i, 9, 1);
    ring.set(3, i, 1);
    ring.set(9, i, 1);
  }
  s.objects.push_back(ring);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x)
      if (small.get(x, y) || ring.get(x, y)) s.image.at(x, y) = {99, 99, 99};
  SceneProvenance prov;
  prov.id = s.id;
  const Scene out = ablate_S(s, &prov);
  CHECK(out.objects.size() == 1);
  REQUIRE(prov.dropped_objects.size() == 1);
  CHECK(prov.dropped_objects[0] == 0);
}

TEST_CASE("T: masks unchanged, deterministic, distinct textures") {
  Rng rng(300);
  const Scene s = random_scene(rng, 3);
  const auto& bank = builtin_texture_bank();
  const Scene a = ablate_T(s, bank, 12345);
  const Scene b = ablate_T(s, bank, 12345);
  CHECK(a.objects == s.objects);
  CHECK(images_equal(a, b));

  // distinct indices over many seeded draws
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    SceneProvenance prov;
    prov.id = s.id;
    prov.texture_assignment.assign(s.objects.size(), -1);
    ablate_T(s, bank, seed, &prov);
    std::set<int> seen(prov.texture_assignment.begin(), prov.texture_assignment.end());
    CHECK(seen.size() == s.objects.size());
    for (int t : prov.texture_assignment) {
      CHECK(t >= 0);
      CHECK(t < static_cast<int>(bank.size()));
    }
  }
}

TEST_CASE("T: bank smaller than K is a configuration error") {
  Rng rng(301);
  const Scene s = random_scene(rng, 3);
  std::vector<RgbImage> tiny(2, RgbImage::filled(128, 128, {1, 2, 3}));
  CHECK_THROWS_AS(ablate_T(s, tiny, 0), ConfigError);
}

TEST_CASE("U: object already at target stays identical") {
  const BinaryMask m = rect_mask(32, 32, 10, 10, 6, 8);  // diag 10
  const Scene s = scene_with(32, 32, {{m, {77, 0, 33}}});
  const Scene out = ablate_U(s, 10.0);
  CHECK(images_equal(out, s));
}

TEST_CASE("U: doubling a 10px diagonal lands within one pixel of 20") {
  const BinaryMask m = rect_mask(64, 64, 20, 20, 6, 8);
  const Scene s = scene_with(64, 64, {{m, {77, 0, 33}}});
  SceneProvenance prov;
  prov.scale_factors.assign(1, 1.0);
  const Scene out = ablate_U(s, 20.0, &prov);
  REQUIRE(out.objects.size() == 1);
  const double diag = derive_instance(out.objects[0], out.image).bbox_diagonal;
  CHECK(std::abs(diag - 20.0) <= 1.0);
}

TEST_CASE("U: scaled scenes reach low shape variation") {
  Rng rng(400);
  for (int trial = 0; trial < 6; ++trial) {
    const Scene s = random_scene(rng, 3);
    SceneProvenance prov;
    prov.scale_factors.assign(3, 1.0);
    const Scene out = ablate_U(s, 18.0, &prov);
    if (out.objects.size() != 3 || !prov.canvas_clipped.empty() || !prov.occluded.empty())
      continue;
    std::vector<ObjectInstance> objs;
    for (const auto& m : out.objects) objs.push_back(derive_instance(m, out.image));
    CHECK(*inter_object_shape_variation(objs) <= 2.0 / (255.0 * std::numbers::sqrt2));
  }
}

TEST_CASE("U: empty visible masks are dropped with provenance") {
  // identical masks scale identically, so the later one exactly covers the
  // earlier one
  Scene s;
  s.id = "u_drop";
  s.image = RgbImage::filled(32, 32, {0, 0, 0});
  const BinaryMask m = rect_mask(32, 32, 14, 14, 4, 4);
  s.objects.push_back(m);
  s.objects.push_back(m);
  for (int y = 14; y < 18; ++y)
    for (int x = 14; x < 18; ++x) s.image.at(x, y) = {50, 50, 50};
  SceneProvenance prov;
  prov.scale_factors.assign(2, 1.0);
  const Scene out = ablate_U(s, 14.0, &prov);
  CHECK(out.objects.size() == 1);
  REQUIRE(prov.dropped_objects.size() == 1);
  CHECK(prov.dropped_objects[0] == 0);
}

TEST_CASE("engine: empty op set is the identity") {
  Rng rng(500);
  const Scene s = random_scene(rng, 2);
  const AblatedScene out = ablate(s, AblationSpec{});
  CHECK(images_equal(out.scene, s));
}

TEST_CASE("engine: C+S yields zero gradient and zero concavity") {
  Rng rng(600);
  const Scene s = random_scene(rng, 3);
  AblationSpec spec = parse_ops("C,S");
  const AblatedScene out = ablate(s, spec);
  for (const auto& mask : out.scene.objects) {
    const ObjectInstance inst = derive_instance(mask, out.scene.image);
    const auto g = object_color_gradient(inst, out.scene.image);
    if (g) CHECK(*g == 0.0);
    CHECK(object_shape_concavity(inst) == 0.0);
  }
}

TEST_CASE("engine: full C+S+T+U run satisfies all four post-conditions") {
  Rng rng(700);
  const Scene s = random_scene(rng, 3);
  AblationSpec spec = parse_ops("u,t,s,c");  // order and case are irrelevant
  spec.target_diagonal = 16.0;
  spec.seed = 9;
  const AblatedScene out = ablate(s, spec);
  REQUIRE(out.scene.objects.size() == 3);
  REQUIRE(out.provenance.canvas_clipped.empty());
  REQUIRE(out.provenance.occluded.empty());

  std::vector<ObjectInstance> objs;
  for (const auto& mask : out.scene.objects)
    objs.push_back(derive_instance(mask, out.scene.image));
  for (const auto& inst : objs) {
    const auto g = object_color_gradient(inst, out.scene.image);
    if (g) CHECK(*g == 0.0);
    CHECK(object_shape_concavity(inst) == 0.0);
  }
  CHECK(*inter_object_shape_variation(objs) <= 2.0 / (255.0 * std::numbers::sqrt2));
  // distinctive textures averaged by C stay far apart
  const Scene before_t = ablate(s, parse_ops("")).scene;
  std::vector<ObjectInstance> orig;
  for (const auto& mask : s.objects) orig.push_back(derive_instance(mask, s.image));
  CHECK(*inter_object_color_similarity(objs) < 0.55);
}

TEST_CASE("engine: canonical op order is S,U,T,C") {
  AblationSpec spec = parse_ops("c,t,u,s");
  CHECK(spec.canonical_ops() == std::vector<std::string>{"S", "U", "T", "C"});
  CHECK_THROWS_AS(parse_ops("C,X"), ConfigError);
}

TEST_CASE("engine: deterministic output for identical input") {
  Rng rng(800);
  const Scene s = random_scene(rng, 3);
  AblationSpec spec = parse_ops("C,S,T,U");
  spec.target_diagonal = 20.0;
  spec.seed = 4;
  const AblatedScene a = ablate(s, spec);
  const AblatedScene b = ablate(s, spec);
  CHECK(images_equal(a.scene, b.scene));
  CHECK(a.provenance.texture_assignment == b.provenance.texture_assignment);
  CHECK(a.provenance.scale_factors == b.provenance.scale_factors);
}

TEST_CASE("engine: background outside final masks is exactly black") {
  Rng rng(900);
  for (const char* ops : {"C", "S", "T", "U", "C,S,T,U"}) {
    const Scene s = random_scene(rng, 2);
    AblationSpec spec = parse_ops(ops);
    spec.target_diagonal = 20.0;
    const AblatedScene out = ablate(s, spec);
    BinaryMask covered = BinaryMask::zeros(64, 64);
    for (const auto& m : out.scene.objects)
      for (std::size_t i = 0; i < m.bits.size(); ++i) covered.bits[i] |= m.bits[i];
    for (std::size_t i = 0; i < covered.bits.size(); ++i)
      if (!covered.bits[i]) CHECK(out.scene.image.pixels[i] == Rgb{0, 0, 0});
  }
}

TEST_CASE("builtin texture bank: six 128x128 textures with distant mean colors") {
  const auto& bank = builtin_texture_bank();
  REQUIRE(bank.size() == 6);
  std::vector<std::array<double, 3>> means;
  for (const auto& tex : bank) {
    REQUIRE(tex.width == 128);
    REQUIRE(tex.height == 128);
    double r = 0, g = 0, b = 0;
    for (const auto& p : tex.pixels) {
      r += p.r;
      g += p.g;
      b += p.b;
    }
    const double n = static_cast<double>(tex.pixels.size());
    means.push_back({r / n, g / n, b / n});
  }
  const double min_required = 0.5 * 255.0 * std::sqrt(3.0);
  for (std::size_t i = 0; i < means.size(); ++i)
    for (std::size_t j = i + 1; j < means.size(); ++j) {
      const double d = std::sqrt(std::pow(means[i][0] - means[j][0], 2) +
                                 std::pow(means[i][1] - means[j][1], 2) +
                                 std::pow(means[i][2] - means[j][2], 2));
      CHECK(d >= min_required);
    }
  // textures carry visible structure, not flat color
  for (const auto& tex : bank) {
    std::set<std::uint32_t> colors;
    for (const auto& p : tex.pixels)
      colors.insert((std::uint32_t(p.r) << 16) | (p.g << 8) | p.b);
    CHECK(colors.size() >= 3);
  }
}

TEST_CASE("U idempotence up to raster rounding") {
  Rng rng(1000);
  for (int trial = 0; trial < 5; ++trial) {
    const Scene s = random_scene(rng, 2);
    SceneProvenance p1, p2;
    p1.scale_factors.assign(2, 1.0);
    const Scene once = ablate_U(s, 22.0, &p1);
    if (once.objects.size() != 2) continue;
    p2.scale_factors.assign(2, 1.0);
    const Scene twice = ablate_U(once, 22.0, &p2);
    if (twice.objects.size() != 2) continue;
    for (std::size_t k = 0; k < 2; ++k) {
      const double d1 = derive_instance(once.objects[k], once.image).bbox_diagonal;
      const double d2 = derive_instance(twice.objects[k], twice.image).bbox_diagonal;
      CHECK(std::abs(d1 - d2) <= 1.5);
    }
  }
}
