#include "maskprof/manifest.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "maskprof/errors.hpp"
#include "maskprof/png_io.hpp"

namespace maskprof {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<ManifestEntry> read_manifest(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw LoadError("cannot open manifest: " + manifest_path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw StructuralError("invalid manifest JSON in " + manifest_path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("images") || !doc["images"].is_array())
    throw StructuralError("manifest missing \"images\" array: " + manifest_path.string());

  const fs::path base = manifest_path.parent_path();
  std::vector<ManifestEntry> entries;
  std::set<std::string> ids;
  for (const auto& item : doc["images"]) {
    ManifestEntry e;
    e.id = item.at("id").get<std::string>();
    if (!ids.insert(e.id).second)
      throw StructuralError("duplicate scene id in manifest: " + e.id);
    e.image_rel = item.at("image").get<std::string>();
    e.image_path = base / e.image_rel;
    for (const auto& m : item.at("masks")) {
      e.mask_rels.push_back(m.get<std::string>());
      e.mask_paths.push_back(base / e.mask_rels.back());
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

Scene load_scene(const ManifestEntry& entry) {
  Scene scene;
  scene.id = entry.id;
  if (!fs::exists(entry.image_path))
    throw LoadError("missing image file: " + entry.image_path.string());
  scene.image = read_png_rgb(entry.image_path);
  for (const auto& mp : entry.mask_paths) {
    if (!fs::exists(mp)) throw LoadError("missing mask file: " + mp.string());
    int w = 0, h = 0;
    const auto bytes = read_png_gray(mp, &w, &h);
    if (w != scene.image.width || h != scene.image.height)
      throw StructuralError("mask dimensions " + std::to_string(w) + "x" + std::to_string(h) +
                            " do not match image " + std::to_string(scene.image.width) + "x" +
                            std::to_string(scene.image.height) + " for " + mp.string());
    BinaryMask mask = BinaryMask::zeros(w, h);
    bool any = false;
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      if (bytes[i] > 127) {
        mask.bits[i] = 1;
        any = true;
      }
    }
    if (!any) throw StructuralError("empty mask rejected at load: " + mp.string());
    scene.objects.push_back(std::move(mask));
  }
  return scene;
}

std::vector<Scene> load_dataset(const fs::path& manifest_path) {
  std::vector<Scene> scenes;
  for (const auto& entry : read_manifest(manifest_path)) scenes.push_back(load_scene(entry));
  return scenes;
}

DatasetWriter::DatasetWriter(const fs::path& dir) : dir_(dir) {
  fs::create_directories(dir_ / "images");
  fs::create_directories(dir_ / "masks");
}

void DatasetWriter::add(const Scene& scene, const std::string& image_rel,
                        const std::vector<std::string>& mask_rels) {
  ManifestEntry e;
  e.id = scene.id;
  e.image_rel = image_rel.empty() ? "images/" + scene.id + ".png" : image_rel;
  fs::create_directories((dir_ / e.image_rel).parent_path());
  write_png_rgb(dir_ / e.image_rel, scene.image);
  for (std::size_t k = 0; k < scene.objects.size(); ++k) {
    std::string rel = k < mask_rels.size() && !mask_rels[k].empty()
                          ? mask_rels[k]
                          : "masks/" + scene.id + "_" + std::to_string(k) + ".png";
    fs::create_directories((dir_ / rel).parent_path());
    const BinaryMask& m = scene.objects[k];
    std::vector<std::uint8_t> bytes(m.bits.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = m.bits[i] ? 255 : 0;
    write_png_gray(dir_ / rel, m.width, m.height, bytes);
    e.mask_rels.push_back(std::move(rel));
  }
  entries_.push_back(std::move(e));
}

void DatasetWriter::finish() {
  json images = json::array();
  for (const auto& e : entries_) {
    json item;
    item["id"] = e.id;
    item["image"] = e.image_rel;
    item["masks"] = e.mask_rels;
    images.push_back(std::move(item));
  }
  json doc;
  doc["images"] = std::move(images);
  std::ofstream out(dir_ / "manifest.json");
  if (!out) throw LoadError("cannot write manifest in " + dir_.string());
  out << doc.dump(2) << "\n";
}

void save_dataset(const std::vector<Scene>& scenes, const fs::path& dir) {
  DatasetWriter writer(dir);
  for (const auto& s : scenes) writer.add(s);
  writer.finish();
}

std::vector<Prediction> load_predictions(const fs::path& manifest_path) {
  std::vector<Prediction> preds;
  for (const auto& entry : read_manifest(manifest_path)) {
    Prediction p;
    p.id = entry.id;
    for (const auto& mp : entry.mask_paths) {
      if (!fs::exists(mp)) throw LoadError("missing mask file: " + mp.string());
      int w = 0, h = 0;
      const auto bytes = read_png_gray(mp, &w, &h);
      SoftMask m;
      m.width = w;
      m.height = h;
      m.values.resize(bytes.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < bytes.size(); ++i) {
        m.values[i] = static_cast<float>(bytes[i] / 255.0);
        sum += m.values[i];
      }
      p.confidences.push_back(bytes.empty() ? 0.0 : sum / static_cast<double>(bytes.size()));
      p.masks.push_back(std::move(m));
    }
    preds.push_back(std::move(p));
  }
  return preds;
}

void save_soft_masks(const fs::path& dir, const std::string& id,
                     const std::vector<SoftMask>& masks) {
  fs::create_directories(dir / "masks");
  for (std::size_t k = 0; k < masks.size(); ++k) {
    const SoftMask& m = masks[k];
    std::vector<std::uint8_t> bytes(m.values.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
      const float v = std::min(1.0f, std::max(0.0f, m.values[i]));
      bytes[i] = static_cast<std::uint8_t>(v * 255.0f + 0.5f);
    }
    write_png_gray(dir / "masks" / (id + "_" + std::to_string(k) + ".png"), m.width, m.height,
                   bytes);
  }
}

}  // namespace maskprof
