#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maskprof/image.hpp"

namespace maskprof {

// Which dataset transforms to apply. Whatever order ops are listed in, the
// engine applies S, then U, then T, then C; C last means a combined C+T run
// averages the freshly applied texture.
struct AblationSpec {
  bool op_c = false;  // mean-color fill
  bool op_s = false;  // convex-hull fill
  bool op_t = false;  // distinctive texture replacement
  bool op_u = false;  // uniform size normalization
  std::vector<RgbImage> texture_bank;
  double target_diagonal = 0.0;
  std::uint64_t seed = 0;

  bool any() const { return op_c || op_s || op_t || op_u; }
  // Canonical application order, e.g. {"S","U","T","C"}.
  std::vector<std::string> canonical_ops() const;
};

// Parses specs like "C,S,T,U" (any order or case); throws ConfigError on
// unknown ops.
AblationSpec parse_ops(const std::string& ops);

struct SceneProvenance {
  std::string id;
  std::vector<int> dropped_objects;           // original indices
  std::vector<int> texture_assignment;        // bank index per original object, -1 if unset
  std::vector<double> scale_factors;          // effective scale per original object
  std::vector<int> canvas_clipped;            // original indices clipped by the canvas (U)
  std::vector<int> occluded;                  // original indices trimmed by a later object
};

struct AblatedScene {
  Scene scene;
  SceneProvenance provenance;
};

// Individual transforms. Each is deterministic and leaves object count intact
// except for the documented drop cases, which are recorded in provenance.
Scene ablate_C(const Scene& scene);
Scene ablate_S(const Scene& scene, SceneProvenance* prov = nullptr);
Scene ablate_T(const Scene& scene, const std::vector<RgbImage>& texture_bank, std::uint64_t seed,
               SceneProvenance* prov = nullptr);
Scene ablate_U(const Scene& scene, double target_diagonal, SceneProvenance* prov = nullptr);

// Applies the requested ops in the fixed S -> U -> T -> C order. The per-scene
// texture seed is derived from spec.seed and the scene id, so results do not
// depend on manifest order. Background pixels outside all final masks are
// forced to (0,0,0) whenever at least one op ran.
AblatedScene ablate(const Scene& scene, const AblationSpec& spec);

// Six bundled procedurally generated blotchy textures (128x128) with pairwise
// mean-color distance >= 0.5 * 255 * sqrt(3).
const std::vector<RgbImage>& builtin_texture_bank();

// Loads PNG textures from a directory (sorted by filename), center-cropping
// each to 128x128. Throws ConfigError if fewer than 6 usable textures exist.
std::vector<RgbImage> load_texture_bank(const std::string& dir);

}  // namespace maskprof
