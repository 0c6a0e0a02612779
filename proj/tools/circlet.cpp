// circlet: sparse circle-valued coordinates from landmark persistent
// cohomology. Subcommands: run, synth, reproduce, diagram.

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "circlet/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string input;
  std::string kind = "points";
  std::string delimiter = ",";
  bool header = false;
  std::size_t landmarks = 50;
  std::string sampling = "maxmin";
  std::size_t start = 0;
  std::uint64_t seed = 0;
  int prime = 47;
  double t = 0.5;
  std::vector<std::string> classes;
  std::string weights = "paper";
  std::string solver = "iterative";
  double tol = 1e-10;
  std::string mode = "harmonic";
  bool turns = false;
  std::string out, diagram, svg, meta, dump_filtration, dump_cocycle;
};

void add_input_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--input", f.input, "input CSV file")->required();
  cmd->add_option("--kind", f.kind, "input kind: points|matrix")
      ->check(CLI::IsMember({"points", "matrix"}));
  cmd->add_option("--delimiter", f.delimiter, "CSV field delimiter");
  cmd->add_flag("--header", f.header, "skip one header line");
}

void add_pipeline_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--landmarks", f.landmarks, "number of landmarks");
  cmd->add_option("--sampling", f.sampling, "maxmin|random")
      ->check(CLI::IsMember({"maxmin", "random"}));
  cmd->add_option("--start", f.start, "maxmin start index");
  cmd->add_option("--seed", f.seed, "seed for random sampling");
  cmd->add_option("--prime", f.prime, "coefficient prime q > 2");
  cmd->add_option("--t", f.t, "scale interpolation parameter in (0,1)");
}

circlet::RunConfig to_config(const CommonFlags& f) {
  circlet::RunConfig cfg;
  cfg.input_path = f.input;
  cfg.input_is_matrix = f.kind == "matrix";
  if (f.delimiter.size() != 1)
    throw circlet::argument_error("--delimiter must be a single character");
  cfg.delimiter = f.delimiter[0];
  cfg.header = f.header;
  cfg.landmarks = f.landmarks;
  cfg.sampling = f.sampling == "maxmin" ? circlet::SamplingMethod::Maxmin
                                        : circlet::SamplingMethod::Random;
  cfg.start = f.start;
  cfg.seed = f.seed;
  cfg.q = f.prime;
  cfg.t = f.t;
  for (const auto& c : f.classes)
    cfg.classes.push_back(circlet::ClassSpec::parse(c));
  cfg.weights.rule = f.weights == "paper"
                         ? circlet::EdgeWeightRule::PaperDefault
                         : circlet::EdgeWeightRule::Uniform;
  cfg.solver = f.solver == "iterative" ? circlet::SolverKind::Iterative
                                       : circlet::SolverKind::DenseSvd;
  cfg.tol = f.tol;
  cfg.mode = f.mode == "harmonic" ? circlet::CoordinateMode::Harmonic
                                  : circlet::CoordinateMode::Integer;
  cfg.turns = f.turns;
  cfg.out_csv = f.out;
  cfg.diagram_json = f.diagram;
  cfg.svg_path = f.svg;
  cfg.meta_json = f.meta;
  cfg.dump_filtration = f.dump_filtration;
  cfg.dump_cocycle = f.dump_cocycle;
  return cfg;
}

int reproduce_figure(const std::string& figure, const std::string& outdir) {
  circlet::RunConfig cfg;
  circlet::SynthCloud cloud;
  if (figure == "circle") {
    cloud = circlet::gen_noisy_circle(1000, 0.1, 1);
    cfg.landmarks = 50;
  } else if (figure == "torus") {
    cloud = circlet::gen_torus(1000, 2);
    cfg.landmarks = 100;
    cfg.classes = {circlet::ClassSpec::parse("0"), circlet::ClassSpec::parse("1")};
  } else {
    cloud = circlet::gen_klein(1000, 3);
    cfg.landmarks = 100;
    cfg.q = 13;
  }
  cfg.out_csv = outdir + "/" + figure + "_coords.csv";
  cfg.diagram_json = outdir + "/" + figure + "_diagram.json";
  cfg.meta_json = outdir + "/" + figure + "_meta.json";
  if (cloud.source.kind() == circlet::SourceKind::PointCloud)
    cfg.svg_path = outdir + "/" + figure + ".svg";

  const auto res = circlet::run_pipeline(cfg, cloud.source);
  circlet::write_artifacts(cfg, cloud.source, res);
  if (cloud.source.kind() == circlet::SourceKind::PointCloud)
    circlet::write_point_cloud_csv(outdir + "/" + figure + "_data.csv",
                                   cloud.source, ',');
  else
    circlet::write_matrix_csv(outdir + "/" + figure + "_data.csv", cloud.source,
                              ',');
  std::cout << res.metadata.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse circular coordinates from landmark persistent cohomology",
               "circlet"};
  app.require_subcommand(1);
  // optional key=value config file; command-line flags take precedence
  app.set_config("--config");

  CommonFlags f;

  auto* run = app.add_subcommand("run", "run the full pipeline on a data set");
  add_input_flags(run, f);
  add_pipeline_flags(run, f);
  run->add_option("--class", f.classes,
                  "persistence class: most-persistent, K, or K1+K2 "
                  "(repeatable; one output column each)");
  run->add_option("--weights", f.weights, "edge weights: paper|uniform")
      ->check(CLI::IsMember({"paper", "uniform"}));
  run->add_option("--solver", f.solver, "iterative|dense-svd")
      ->check(CLI::IsMember({"iterative", "dense-svd"}));
  run->add_option("--tol", f.tol, "iterative solver tolerance");
  run->add_option("--mode", f.mode, "harmonic|integer")
      ->check(CLI::IsMember({"harmonic", "integer"}));
  run->add_flag("--turns", f.turns, "emit coordinates in [0,1) instead of radians");
  run->add_option("--out", f.out, "coordinates CSV output path");
  run->add_option("--diagram", f.diagram, "persistence diagram JSON output path");
  run->add_option("--svg", f.svg, "scatter SVG output path");
  run->add_option("--meta", f.meta, "run metadata JSON output path");
  run->add_option("--dump-filtration", f.dump_filtration,
                  "debug: dump the Rips filtration as CSV");
  run->add_option("--dump-cocycle", f.dump_cocycle,
                  "debug: dump the lifted integer cocycle as CSV");

  std::string shape = "circle";
  std::size_t synth_n = 1000;
  double sigma = 0.1;
  std::uint64_t synth_seed = 0;
  std::string synth_out, synth_meta;
  auto* synth = app.add_subcommand("synth", "generate a synthetic data set");
  synth->add_option("--shape", shape, "circle|torus|klein")
      ->check(CLI::IsMember({"circle", "torus", "klein"}));
  synth->add_option("--n", synth_n, "number of points");
  synth->add_option("--sigma", sigma, "noise level (circle only)");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--out", synth_out, "data CSV output path")->required();
  synth->add_option("--meta", synth_meta, "generating-angle CSV output path");

  std::string figure = "circle", outdir = ".";
  auto* repro = app.add_subcommand("reproduce", "rebuild a synthetic figure");
  repro->add_option("--figure", figure, "circle|torus|klein")
      ->check(CLI::IsMember({"circle", "torus", "klein"}));
  repro->add_option("--outdir", outdir, "output directory");

  auto* diag = app.add_subcommand("diagram", "persistence diagram only");
  add_input_flags(diag, f);
  add_pipeline_flags(diag, f);
  diag->add_option("--out", f.diagram, "diagram JSON output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto cfg = to_config(f);
      const auto res = circlet::run_pipeline_files(cfg);
      std::cout << res.metadata.dump(2) << "\n";
    } else if (synth->parsed()) {
      circlet::SynthCloud cloud;
      if (shape == "circle")
        cloud = circlet::gen_noisy_circle(synth_n, sigma, synth_seed);
      else if (shape == "torus")
        cloud = circlet::gen_torus(synth_n, synth_seed);
      else
        cloud = circlet::gen_klein(synth_n, synth_seed);
      if (cloud.source.kind() == circlet::SourceKind::PointCloud)
        circlet::write_point_cloud_csv(synth_out, cloud.source, ',');
      else
        circlet::write_matrix_csv(synth_out, cloud.source, ',');
      if (!synth_meta.empty()) {
        std::ofstream m(synth_meta);
        if (!m) throw circlet::format_error("cannot write file: " + synth_meta);
        for (std::size_t i = 0; i < cloud.angle1.size(); ++i) {
          m << circlet::format_double(cloud.angle1[i]);
          if (!cloud.angle2.empty())
            m << "," << circlet::format_double(cloud.angle2[i]);
          m << "\n";
        }
      }
    } else if (repro->parsed()) {
      return reproduce_figure(figure, outdir);
    } else if (diag->parsed()) {
      auto cfg = to_config(f);
      cfg.out_csv.clear();
      cfg.svg_path.clear();
      cfg.meta_json.clear();
      circlet::DistanceSource src =
          cfg.input_is_matrix
              ? circlet::load_distance_matrix(cfg.input_path, cfg.delimiter,
                                              cfg.header)
              : circlet::load_point_cloud(cfg.input_path, cfg.delimiter,
                                          cfg.header);
      const auto ls = cfg.sampling == circlet::SamplingMethod::Maxmin
                          ? circlet::maxmin_landmarks(src, cfg.landmarks, cfg.start)
                          : circlet::random_landmarks(src, cfg.landmarks, cfg.seed);
      const auto lmat = circlet::landmark_matrix(src, ls);
      double diam = 0.0;
      for (double d : lmat) diam = std::max(diam, d);
      const auto filt = circlet::build_rips(
          lmat, static_cast<int>(cfg.landmarks), diam, 2);
      const auto dgm = circlet::persistent_cohomology(filt, cfg.q);
      circlet::write_json(cfg.diagram_json, circlet::diagram_to_json(dgm));
    }
  } catch (const circlet::pipeline_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  } catch (const circlet::no_qualifying_class_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const circlet::lift_failure_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
