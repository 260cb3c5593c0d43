#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "maskprof/ablation.hpp"
#include "maskprof/errors.hpp"
#include "maskprof/eval.hpp"
#include "maskprof/pipeline.hpp"
#include "maskprof/report.hpp"
#include "maskprof/rows_csv.hpp"
#include "maskprof/synth.hpp"

namespace fs = std::filesystem;
using namespace maskprof;

namespace {

FactorSet parse_factor_set(const std::string& name) {
  if (name == "primary") return FactorSet::primary;
  if (name == "candidates") return FactorSet::candidates;
  if (name == "all") return FactorSet::all;
  throw ConfigError("unknown factor set '" + name + "' (expected primary, candidates or all)");
}

std::map<std::string, std::vector<std::optional<double>>> load_factor_columns(
    const fs::path& dir) {
  std::map<std::string, std::vector<std::optional<double>>> columns;
  auto absorb = [&](const fs::path& file, const std::vector<std::string>& skip) {
    if (!fs::exists(file)) return;
    const CsvTable table = read_csv(file);
    for (const auto& name : table.header) {
      if (std::find(skip.begin(), skip.end(), name) != skip.end()) continue;
      columns[name] = numeric_column(table, name);
    }
  };
  absorb(dir / "object_factors.csv", {"scene_id", "object_index"});
  absorb(dir / "scene_factors.csv", {"scene_id", "K"});
  if (columns.empty())
    throw LoadError("no factor CSV files found in " + dir.string());
  return columns;
}

int run(int argc, char** argv) {
  CLI::App app{"instance-segmentation dataset profiler, ablation factory and evaluator"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand too
  std::uint64_t global_seed = 0;
  int jobs = 0;
  bool quiet = false;
  app.add_option("--seed", global_seed, "default seed for seeded subcommands");
  app.add_option("--jobs", jobs, "parallelism degree (default: available cores)");
  app.add_flag("--quiet", quiet, "suppress progress and warning output");

  // generate
  auto* gen = app.add_subcommand("generate", "generate a synthetic dataset");
  std::string gen_style = "dsprites";
  long gen_count = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--style", gen_style, "dsprites | tetris | complex")->required();
  gen->add_option("--count", gen_count, "number of scenes")->required();
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output dataset directory")->required();

  // curate
  auto* cur = app.add_subcommand("curate", "filter objects/scenes by size");
  std::string cur_in, cur_out;
  long cur_min = 0, cur_max = 0;
  cur->add_option("--in", cur_in, "input dataset directory or manifest")->required();
  cur->add_option("--min-pixels", cur_min, "minimum object size, pixels")->required();
  cur->add_option("--max-pixels", cur_max, "maximum object size, pixels")->required();
  cur->add_option("--out", cur_out, "output dataset directory")->required();

  // profile
  auto* prof = app.add_subcommand("profile", "compute complexity factor rows");
  std::string prof_in, prof_out, prof_factors = "all";
  prof->add_option("--in", prof_in, "input dataset directory or manifest")->required();
  prof->add_option("--factors", prof_factors, "primary | candidates | all");
  prof->add_option("--out", prof_out, "output directory for CSV rows")->required();

  // ablate
  auto* abl = app.add_subcommand("ablate", "apply C/S/T/U transforms");
  std::string abl_in, abl_out, abl_ops, abl_textures;
  double abl_target = 0.0;
  std::uint64_t abl_seed = 0;
  abl->add_option("--in", abl_in, "input dataset directory or manifest")->required();
  abl->add_option("--ops", abl_ops, "subset of C,S,T,U (any order)")->required();
  abl->add_option("--target-diagonal", abl_target, "target bbox diagonal for U, pixels");
  abl->add_option("--textures", abl_textures, "texture PNG directory (default: bundled bank)");
  auto* abl_seed_opt = abl->add_option("--seed", abl_seed, "texture assignment seed");
  abl->add_option("--out", abl_out, "output dataset directory")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "segmentation metrics (AP/PQ/precision/recall)");
  std::string ev_pred, ev_gt, ev_out;
  double ev_iou = 0.5;
  ev->add_option("--pred", ev_pred, "predictions manifest")->required();
  ev->add_option("--gt", ev_gt, "ground-truth manifest")->required();
  ev->add_option("--iou", ev_iou, "IoU threshold (default 0.5)");
  ev->add_option("--out", ev_out, "output metrics JSON file")->required();

  // report
  auto* rep = app.add_subcommand("report", "distribution report from factor rows");
  std::string rep_in, rep_compare, rep_svg;
  rep->add_option("--in", rep_in, "directory with factor CSV rows")->required();
  rep->add_option("--compare", rep_compare, "second rows directory to compare against");
  rep->add_option("--svg", rep_svg, "output directory for report JSON and SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (jobs > 0) omp_set_num_threads(jobs);

  try {
    if (gen->parsed()) {
      GeneratorConfig config;
      config.style = parse_style(gen_style);
      config.count = gen_count;
      config.seed = gen_seed_opt->count() ? gen_seed : global_seed;
      generate_dataset(config, gen_out);
      if (!quiet)
        std::cerr << "generated " << gen_count << " " << gen_style << " scenes in " << gen_out
                  << "\n";
    } else if (cur->parsed()) {
      const CurateStats stats = curate_dataset(cur_in, cur_out, cur_min, cur_max);
      if (!quiet)
        std::cerr << "kept " << stats.scenes_kept << "/" << stats.scenes_in << " scenes, dropped "
                  << stats.objects_dropped << " objects\n";
    } else if (prof->parsed()) {
      profile_to_csv(prof_in, parse_factor_set(prof_factors), prof_out);
      if (!quiet) std::cerr << "factor rows written to " << prof_out << "\n";
    } else if (abl->parsed()) {
      AblationSpec spec = parse_ops(abl_ops);
      spec.seed = abl_seed_opt->count() ? abl_seed : global_seed;
      spec.target_diagonal = abl_target;
      if (spec.op_u && abl_target <= 0.0)
        throw ConfigError("--target-diagonal must be positive when U is requested");
      if (!abl_textures.empty()) spec.texture_bank = load_texture_bank(abl_textures);
      const AblateStats stats = ablate_dataset(abl_in, abl_out, spec, quiet);
      if (!quiet)
        std::cerr << "ablated " << stats.scenes << " scenes (" << stats.objects_dropped
                  << " objects dropped) into " << abl_out << "\n";
    } else if (ev->parsed()) {
      if (ev_iou <= 0.0 || ev_iou >= 1.0) throw ConfigError("--iou must be in (0,1)");
      const EvalResult result = evaluate(fs::path(ev_pred), fs::path(ev_gt), ev_iou);
      nlohmann::json doc;
      doc["ap"] = result.ap;
      doc["pq"] = result.pq;
      doc["precision"] = result.precision;
      doc["recall"] = result.recall;
      doc["iou_threshold"] = result.iou_threshold;
      doc["num_images"] = result.num_images;
      doc["num_gt_objects"] = result.num_gt_objects;
      std::ofstream out(ev_out);
      if (!out) throw LoadError("cannot write " + ev_out);
      out << doc.dump(2) << "\n";
      if (!quiet) {
        // human-readable summary on the 0-100 scale; the JSON stays 0-1
        std::printf("AP %.1f / PQ %.1f / Precision %.1f / Recall %.1f (IoU>%.2g, %ld images)\n",
                    100.0 * result.ap, 100.0 * result.pq, 100.0 * result.precision,
                    100.0 * result.recall, result.iou_threshold, result.num_images);
      }
    } else if (rep->parsed()) {
      fs::create_directories(rep_svg);
      const FactorReport report_a = build_report_from_columns(
          load_factor_columns(rep_in), fs::path(rep_in).filename().string());
      std::ofstream(rep_svg / fs::path("report.json")) << report_to_json(report_a);
      if (rep_compare.empty()) {
        std::ofstream(rep_svg / fs::path("report.svg")) << render_svg(report_a);
      } else {
        const FactorReport report_b = build_report_from_columns(
            load_factor_columns(rep_compare), fs::path(rep_compare).filename().string());
        const ComparisonRecord cmp = compare_reports(report_a, report_b);
        std::ofstream(rep_svg / fs::path("comparison.json")) << comparison_to_json(cmp);
        std::ofstream(rep_svg / fs::path("report.svg")) << render_svg(report_a, report_b);
      }
      if (!quiet) std::cerr << "report written to " << rep_svg << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
