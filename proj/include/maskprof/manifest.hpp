#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "maskprof/image.hpp"

namespace maskprof {

// One record of the JSON manifest:
//   {"images": [{"id": ..., "image": relpath, "masks": [relpath, ...]}]}
// All paths are relative to the manifest file.
struct ManifestEntry {
  std::string id;
  std::filesystem::path image_path;               // resolved, absolute
  std::vector<std::filesystem::path> mask_paths;  // resolved, absolute
  std::string image_rel;
  std::vector<std::string> mask_rels;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path);

// Loads one scene; masks binarize at pixel > 127. Throws LoadError for missing
// files and StructuralError for dimension mismatches or empty masks.
Scene load_scene(const ManifestEntry& entry);

std::vector<Scene> load_dataset(const std::filesystem::path& manifest_path);

// Writes dir/manifest.json plus images/<id>.png and masks/<id>_<k>.png.
void save_dataset(const std::vector<Scene>& scenes, const std::filesystem::path& dir);

// Incremental writer used by the chunked pipeline drivers.
class DatasetWriter {
 public:
  explicit DatasetWriter(const std::filesystem::path& dir);
  // Writes the scene's files under the given relative paths (defaults used
  // when empty) and records the manifest entry.
  void add(const Scene& scene, const std::string& image_rel = {},
           const std::vector<std::string>& mask_rels = {});
  void finish();  // writes manifest.json

 private:
  std::filesystem::path dir_;
  std::vector<ManifestEntry> entries_;
};

// Predictions use the same manifest layout; mask PNGs are read as soft masks
// (value / 255).
struct Prediction {
  std::string id;
  std::vector<SoftMask> masks;
  std::vector<double> confidences;  // mean soft value over the full canvas
};

std::vector<Prediction> load_predictions(const std::filesystem::path& manifest_path);

void save_soft_masks(const std::filesystem::path& dir, const std::string& id,
                     const std::vector<SoftMask>& masks);

}  // namespace maskprof
