#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "maskprof/object_factors.hpp"
#include "maskprof/scene_factors.hpp"

namespace maskprof {

// Missing values (undefined-factor sentinels) serialize as empty cells.
void write_object_rows(const std::filesystem::path& path,
                       const std::vector<ObjectFactorRow>& rows, FactorSet set);
void write_scene_rows(const std::filesystem::path& path, const std::vector<SceneFactorRow>& rows,
                      FactorSet set);

// Minimal CSV reader for the factor row files (no quoting; ids must not
// contain commas).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::filesystem::path& path);

// Numeric column with empty cells as nullopt; throws StructuralError if the
// column does not exist.
std::vector<std::optional<double>> numeric_column(const CsvTable& table,
                                                  const std::string& name);

}  // namespace maskprof
