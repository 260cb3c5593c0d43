#include "maskprof/pipeline.hpp"

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "maskprof/errors.hpp"
#include "maskprof/manifest.hpp"
#include "maskprof/rows_csv.hpp"

namespace maskprof {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
constexpr long kChunk = 128;  // scenes per parallel chunk, bounds memory
}

std::filesystem::path resolve_manifest(const fs::path& dataset) {
  if (fs::is_directory(dataset)) {
    const fs::path manifest = dataset / "manifest.json";
    if (!fs::exists(manifest))
      throw LoadError("no manifest.json in directory: " + dataset.string());
    return manifest;
  }
  if (!fs::exists(dataset)) throw LoadError("dataset not found: " + dataset.string());
  return dataset;
}

DatasetRows profile_scene(const Scene& scene, FactorSet set) {
  DatasetRows rows;
  const SceneRasterContext ctx = make_raster_context(scene.image);
  std::vector<ObjectInstance> instances;
  instances.reserve(scene.objects.size());
  for (const auto& mask : scene.objects) instances.push_back(derive_instance(mask, scene.image));
  for (std::size_t k = 0; k < instances.size(); ++k)
    rows.object_rows.push_back(compute_object_factors(scene.id, static_cast<int>(k),
                                                      instances[k], scene.image, ctx, set));
  rows.scene_rows.push_back(compute_scene_factors(scene.id, instances, scene.image, set));
  return rows;
}

DatasetRows profile_dataset(const fs::path& dataset, FactorSet set) {
  const auto entries = read_manifest(resolve_manifest(dataset));
  DatasetRows all;
  for (long chunk_start = 0; chunk_start < static_cast<long>(entries.size());
       chunk_start += kChunk) {
    const long chunk_end = std::min(chunk_start + kChunk, static_cast<long>(entries.size()));
    std::vector<DatasetRows> results(chunk_end - chunk_start);
#pragma omp parallel for schedule(dynamic)
    for (long i = chunk_start; i < chunk_end; ++i)
      results[i - chunk_start] = profile_scene(load_scene(entries[i]), set);
    for (auto& r : results) {
      all.object_rows.insert(all.object_rows.end(), r.object_rows.begin(), r.object_rows.end());
      all.scene_rows.insert(all.scene_rows.end(), r.scene_rows.begin(), r.scene_rows.end());
    }
  }
  return all;
}

void profile_to_csv(const fs::path& dataset, FactorSet set, const fs::path& out_dir) {
  const DatasetRows rows = profile_dataset(dataset, set);
  fs::create_directories(out_dir);
  write_object_rows(out_dir / "object_factors.csv", rows.object_rows, set);
  write_scene_rows(out_dir / "scene_factors.csv", rows.scene_rows, set);
}

void generate_dataset(const GeneratorConfig& config, const fs::path& out_dir) {
  DatasetWriter writer(out_dir);
  for (long chunk_start = 0; chunk_start < config.count; chunk_start += kChunk) {
    const long chunk_end = std::min(chunk_start + kChunk, config.count);
    std::vector<Scene> scenes(chunk_end - chunk_start);
#pragma omp parallel for schedule(dynamic)
    for (long i = chunk_start; i < chunk_end; ++i)
      scenes[i - chunk_start] = generate_scene(config, i);
    for (const auto& s : scenes) writer.add(s);
  }
  writer.finish();
}

CurateStats curate_dataset(const fs::path& in, const fs::path& out, long min_pixels,
                           long max_pixels) {
  const auto entries = read_manifest(resolve_manifest(in));
  CurateStats stats;
  stats.scenes_in = static_cast<long>(entries.size());
  DatasetWriter writer(out);
  for (long chunk_start = 0; chunk_start < stats.scenes_in; chunk_start += kChunk) {
    const long chunk_end = std::min(chunk_start + kChunk, stats.scenes_in);
    std::vector<Scene> kept(chunk_end - chunk_start);
    std::vector<int> survived(chunk_end - chunk_start, 0);
    std::vector<long> dropped(chunk_end - chunk_start, 0);
#pragma omp parallel for schedule(dynamic)
    for (long i = chunk_start; i < chunk_end; ++i) {
      Scene scene = load_scene(entries[i]);
      const long before = static_cast<long>(scene.objects.size());
      if (curate_scene(scene, min_pixels, max_pixels)) {
        dropped[i - chunk_start] = before - static_cast<long>(scene.objects.size());
        kept[i - chunk_start] = std::move(scene);
        survived[i - chunk_start] = 1;
      } else {
        dropped[i - chunk_start] = before;
      }
    }
    for (long i = 0; i < chunk_end - chunk_start; ++i) {
      stats.objects_dropped += dropped[i];
      if (survived[i]) {
        writer.add(kept[i]);
        ++stats.scenes_kept;
      }
    }
  }
  writer.finish();
  return stats;
}

AblateStats ablate_dataset(const fs::path& in, const fs::path& out, const AblationSpec& spec,
                           bool quiet) {
  const auto entries = read_manifest(resolve_manifest(in));
  AblateStats stats;
  stats.scenes = static_cast<long>(entries.size());
  DatasetWriter writer(out);
  json prov_scenes = json::array();
  for (long chunk_start = 0; chunk_start < stats.scenes; chunk_start += kChunk) {
    const long chunk_end = std::min(chunk_start + kChunk, stats.scenes);
    std::vector<AblatedScene> results(chunk_end - chunk_start);
#pragma omp parallel for schedule(dynamic)
    for (long i = chunk_start; i < chunk_end; ++i)
      results[i - chunk_start] = ablate(load_scene(entries[i]), spec);
    for (long i = chunk_start; i < chunk_end; ++i) {
      AblatedScene& res = results[i - chunk_start];
      const ManifestEntry& entry = entries[i];
      // mirror the input mask layout; dropped objects leave their slots out
      std::vector<std::string> mask_rels;
      std::size_t next_drop = 0;
      for (std::size_t k = 0; k < entry.mask_rels.size(); ++k) {
        if (next_drop < res.provenance.dropped_objects.size() &&
            res.provenance.dropped_objects[next_drop] == static_cast<int>(k)) {
          ++next_drop;
          continue;
        }
        mask_rels.push_back(entry.mask_rels[k]);
      }
      writer.add(res.scene, entry.image_rel, mask_rels);
      if (!res.provenance.dropped_objects.empty()) {
        stats.objects_dropped += static_cast<long>(res.provenance.dropped_objects.size());
        if (!quiet) {
          std::cerr << "warning: scene " << res.scene.id << " dropped "
                    << res.provenance.dropped_objects.size() << " fully covered object(s)\n";
        }
      }
      json ps;
      ps["id"] = res.provenance.id;
      ps["dropped_objects"] = res.provenance.dropped_objects;
      if (spec.op_t)
        ps["texture_assignment"] = res.provenance.texture_assignment;
      else
        ps["texture_assignment"] = nullptr;
      if (spec.op_u) {
        ps["scale_factors"] = res.provenance.scale_factors;
        ps["canvas_clipped"] = res.provenance.canvas_clipped;
      } else {
        ps["scale_factors"] = nullptr;
        ps["canvas_clipped"] = json::array();
      }
      ps["occluded"] = res.provenance.occluded;
      prov_scenes.push_back(std::move(ps));
    }
  }
  writer.finish();
  json prov;
  prov["ops"] = spec.canonical_ops();
  prov["seed"] = spec.seed;
  if (spec.op_u)
    prov["target_diagonal"] = spec.target_diagonal;
  else
    prov["target_diagonal"] = nullptr;
  prov["scenes"] = std::move(prov_scenes);
  std::ofstream pf(out / "provenance.json");
  if (!pf) throw LoadError("cannot write provenance.json in " + out.string());
  pf << prov.dump(2) << "\n";
  return stats;
}

}  // namespace maskprof
