#include "maskprof/rows_csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "maskprof/errors.hpp"

namespace maskprof {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

void check_id(const std::string& id) {
  if (id.find_first_of(",\n\r") != std::string::npos)
    throw StructuralError("scene id not CSV-safe: " + id);
}

}  // namespace

void write_object_rows(const std::filesystem::path& path,
                       const std::vector<ObjectFactorRow>& rows, FactorSet set) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  out << "scene_id,object_index";
  if (set != FactorSet::candidates) out << ",color_gradient,shape_concavity";
  if (set != FactorSet::primary)
    out << ",color_count,color_entropy,non_rectangularity,incompactness_pp,"
           "incompactness_schwartzberg,discontinuity,decentralization";
  out << "\n";
  for (const auto& r : rows) {
    check_id(r.scene_id);
    out << r.scene_id << "," << r.object_index;
    if (set != FactorSet::candidates)
      out << "," << fmt(r.color_gradient) << "," << fmt(r.shape_concavity);
    if (set != FactorSet::primary)
      out << "," << r.color_count << "," << fmt(r.color_entropy) << ","
          << fmt(r.non_rectangularity) << "," << fmt(r.incompactness_pp) << ","
          << fmt(r.incompactness_schwartzberg) << "," << fmt(r.discontinuity) << ","
          << fmt(r.decentralization);
    out << "\n";
  }
}

void write_scene_rows(const std::filesystem::path& path, const std::vector<SceneFactorRow>& rows,
                      FactorSet set) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  out << "scene_id,K";
  if (set != FactorSet::candidates) out << ",color_similarity,shape_variation";
  if (set != FactorSet::primary)
    out << ",color_similarity_chamfer,color_similarity_hausdorff,boundary_shape_similarity,"
           "boundary_shape_entropy,centroid_proximity,chamfer_proximity";
  out << "\n";
  for (const auto& r : rows) {
    check_id(r.scene_id);
    out << r.scene_id << "," << r.k;
    if (set != FactorSet::candidates)
      out << "," << fmt(r.color_similarity) << "," << fmt(r.shape_variation);
    if (set != FactorSet::primary)
      out << "," << fmt(r.color_similarity_chamfer) << "," << fmt(r.color_similarity_hausdorff)
          << "," << fmt(r.boundary_shape_similarity) << "," << fmt(r.boundary_shape_entropy)
          << "," << fmt(r.centroid_proximity) << "," << fmt(r.chamfer_proximity);
    out << "\n";
  }
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.eof()) break;
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size())
        fields.resize(table.header.size());
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

std::vector<std::optional<double>> numeric_column(const CsvTable& table,
                                                  const std::string& name) {
  const int col = table.column(name);
  if (col < 0) throw StructuralError("missing CSV column: " + name);
  std::vector<std::optional<double>> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const std::string& cell = row[col];
    if (cell.empty())
      out.push_back(std::nullopt);
    else
      out.push_back(std::stod(cell));
  }
  return out;
}

}  // namespace maskprof
