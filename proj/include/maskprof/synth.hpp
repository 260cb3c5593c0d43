#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maskprof/image.hpp"

namespace maskprof {

enum class SynthStyle { dsprites, tetris, complex_scenes };

SynthStyle parse_style(const std::string& name);
std::string style_name(SynthStyle style);

struct GeneratorConfig {
  SynthStyle style = SynthStyle::dsprites;
  long count = 0;
  std::uint64_t seed = 0;
  int canvas = 128;
  int k_min = 2;
  int k_max = 6;
};

// Deterministic per (config.seed, scene index); scenes are independent, so
// generation parallelizes without affecting the output.
Scene generate_scene(const GeneratorConfig& config, long index);

std::vector<Scene> generate(const GeneratorConfig& config);

// Drops objects outside [min_pixels, max_pixels], then scenes left with K
// outside [2,6]; blanks the background behind the remaining masks.
std::vector<Scene> curate(const std::vector<Scene>& raw, long min_pixels, long max_pixels);

// Single-scene curation step; returns false when the scene must be dropped.
bool curate_scene(Scene& scene, long min_pixels, long max_pixels);

}  // namespace maskprof
