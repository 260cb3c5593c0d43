#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "maskprof/ablation.hpp"
#include "maskprof/object_factors.hpp"
#include "maskprof/scene_factors.hpp"
#include "maskprof/synth.hpp"

namespace maskprof {

// Dataset-level drivers shared by the CLI and the acceptance suite. Scenes are
// processed in parallel chunks; outputs are merged in manifest order, so
// results do not depend on the thread count.

struct DatasetRows {
  std::vector<ObjectFactorRow> object_rows;
  std::vector<SceneFactorRow> scene_rows;
};

DatasetRows profile_scene(const Scene& scene, FactorSet set);

// `dataset` may be a dataset directory (containing manifest.json) or a
// manifest path.
DatasetRows profile_dataset(const std::filesystem::path& dataset, FactorSet set);

// Writes object_factors.csv and scene_factors.csv into out_dir.
void profile_to_csv(const std::filesystem::path& dataset, FactorSet set,
                    const std::filesystem::path& out_dir);

void generate_dataset(const GeneratorConfig& config, const std::filesystem::path& out_dir);

struct CurateStats {
  long scenes_in = 0;
  long scenes_kept = 0;
  long objects_dropped = 0;
};
CurateStats curate_dataset(const std::filesystem::path& in, const std::filesystem::path& out,
                           long min_pixels, long max_pixels);

struct AblateStats {
  long scenes = 0;
  long objects_dropped = 0;
};
// Mirrors the input manifest layout into out_dir and writes provenance.json.
// Warnings about dropped objects go to stderr unless quiet.
AblateStats ablate_dataset(const std::filesystem::path& in, const std::filesystem::path& out,
                           const AblationSpec& spec, bool quiet);

std::filesystem::path resolve_manifest(const std::filesystem::path& dataset);

}  // namespace maskprof
