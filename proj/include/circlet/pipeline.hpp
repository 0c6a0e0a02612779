#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "circlet/cohomology.hpp"
#include "circlet/coords.hpp"
#include "circlet/errors.hpp"
#include "circlet/filtration.hpp"
#include "circlet/harmonic.hpp"
#include "circlet/integer_lift.hpp"
#include "circlet/landmarks.hpp"
#include "circlet/metric.hpp"
#include "circlet/output.hpp"
#include "circlet/synth.hpp"

namespace circlet {

inline constexpr const char* kToolVersion = "circlet 0.1.0";

// A class selector as given on the command line: "most-persistent", a rank
// "K", or an integer combination "K1+K2" of ranks among qualifying pairs.
struct ClassSpec {
  bool most_persistent = true;
  std::vector<std::size_t> ranks;
  std::string text = "most-persistent";

  static ClassSpec parse(const std::string& s) {
    ClassSpec spec;
    spec.text = s;
    if (s == "most-persistent") return spec;
    spec.most_persistent = false;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      const std::size_t plus = s.find('+', pos);
      const std::string tok =
          s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
      try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(tok, &used);
        if (used != tok.size() || tok.empty()) throw std::invalid_argument(tok);
        spec.ranks.push_back(v);
      } catch (const std::exception&) {
        throw argument_error("bad --class selector '" + s +
                             "': expected most-persistent, K, or K1+K2");
      }
      if (plus == std::string::npos) break;
      pos = plus + 1;
    }
    return spec;
  }
};

struct RunConfig {
  std::string input_path;
  bool input_is_matrix = false;
  char delimiter = ',';
  bool header = false;

  std::size_t landmarks = 50;
  SamplingMethod sampling = SamplingMethod::Maxmin;
  std::size_t start = 0;
  std::uint64_t seed = 0;

  int q = 47;
  double t = 0.5;
  std::vector<ClassSpec> classes;  // empty = most-persistent

  WeightScheme weights;
  SolverKind solver = SolverKind::Iterative;
  double tol = 1e-10;
  CoordinateMode mode = CoordinateMode::Harmonic;
  bool turns = false;

  std::string out_csv;
  std::string diagram_json;
  std::string svg_path;
  std::string meta_json;
  std::string dump_filtration;
  std::string dump_cocycle;
};

// Stage-tagged wrapper so the CLI can report where a run failed and with
// which exit code (2 for the user-facing no-qualifying-class / lift-failure
// conditions, 1 for everything else).
struct pipeline_error : error {
  std::string stage;
  int exit_code;
  pipeline_error(std::string stage_, int code, const std::string& msg)
      : error("stage " + stage_ + ": " + msg),
        stage(std::move(stage_)),
        exit_code(code) {}
};

struct ClassResult {
  std::string selector;
  std::string path;  // "single", "cocycle" or "map"
  std::vector<std::pair<double, double>> pairs;  // (birth, death) used
  std::vector<double> alphas;
  bool lift_ok = true;
  double residual = 0.0;
  int iterations = 0;
  CoordinateModel model;  // the evaluated model ("map" path: first part)
  AngleAssignment assignment;
};

struct PipelineResult {
  LandmarkSet landmark_set;
  RipsFiltration filtration;
  std::vector<PersistencePair> diagram;
  std::vector<ClassResult> classes;
  nlohmann::ordered_json metadata;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct SingleClassModel {
  ScaleChoice scale;
  IntegerCochain eta;
  std::optional<HarmonicPair> harmonic;
  CoordinateModel model;
};

// Build the coordinate model for one qualifying pair (by rank, or the most
// persistent one).
inline SingleClassModel build_class_model(const RunConfig& cfg,
                                          const RipsFiltration& filt,
                                          const std::vector<PersistencePair>& dgm,
                                          double r_L,
                                          std::optional<std::size_t> rank,
                                          const LandmarkSet& ls,
                                          const std::string& class_id) {
  const ScaleChoice sc = choose_scale(dgm, r_L, cfg.t, rank);
  const double two_alpha = 2.0 * sc.alpha;
  const RipsFiltration filt2a = restrict_filtration(filt, two_alpha);
  const EdgeCochainQ rep = representative_at_scale(sc.pair, filt, two_alpha, cfg.q);
  const IntegerCochain eta = lift_cocycle(rep, filt2a, cfg.q);

  if (cfg.mode == CoordinateMode::Integer) {
    return {sc, eta, std::nullopt,
            CoordinateModel::from_integer(ls.indices, sc.alpha, filt2a, eta,
                                          cfg.q, class_id)};
  }
  HarmonicPair hp =
      harmonic_smooth(eta, filt2a, cfg.weights, cfg.solver, cfg.tol);
  CoordinateModel model(ls.indices, sc.alpha, hp.tau, filt2a, hp.theta,
                        CoordinateMode::Harmonic, cfg.q, class_id);
  return {sc, eta, std::move(hp), std::move(model)};
}

}  // namespace detail

// Execute the full pipeline on an already-loaded source. Every stage is
// timed; failures are rethrown as pipeline_error tagged with the stage name.
inline PipelineResult run_pipeline(const RunConfig& cfg,
                                   const DistanceSource& src) {
  PipelineResult res;
  nlohmann::ordered_json timings;
  const auto wall0 = detail::Clock::now();

  const auto run_stage = [&](const char* name, auto&& body) {
    const auto t0 = detail::Clock::now();
    try {
      body();
    } catch (const no_qualifying_class_error& e) {
      throw pipeline_error(name, 2, e.what());
    } catch (const lift_failure_error& e) {
      throw pipeline_error(name, 2, e.what());
    } catch (const pipeline_error&) {
      throw;
    } catch (const error& e) {
      throw pipeline_error(name, 1, e.what());
    }
    timings[name] = detail::ms_since(t0);
  };

  run_stage("landmarks", [&] {
    res.landmark_set = cfg.sampling == SamplingMethod::Maxmin
                           ? maxmin_landmarks(src, cfg.landmarks, cfg.start)
                           : random_landmarks(src, cfg.landmarks, cfg.seed);
  });

  std::vector<double> lmat;
  run_stage("filtration", [&] {
    lmat = landmark_matrix(src, res.landmark_set);
    double diam = 0.0;
    for (double d : lmat) diam = std::max(diam, d);
    if (diam <= 0.0) throw argument_error("landmark set has zero diameter");
    res.filtration = build_rips(lmat, static_cast<int>(cfg.landmarks), diam, 2);
  });

  run_stage("cohomology", [&] {
    res.diagram = persistent_cohomology(res.filtration, cfg.q);
  });

  std::vector<ClassSpec> classes = cfg.classes;
  if (classes.empty()) classes.push_back(ClassSpec{});
  const double r_L = res.landmark_set.r_L;

  double harmonic_ms = 0.0, eval_ms = 0.0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const ClassSpec& spec = classes[c];
    const std::string class_id = spec.text;

    const auto t0 = detail::Clock::now();
    try {
      if (spec.most_persistent || spec.ranks.size() == 1) {
        const std::optional<std::size_t> rank =
            spec.most_persistent ? std::optional<std::size_t>{}
                                 : std::optional<std::size_t>{spec.ranks[0]};
        auto scm = detail::build_class_model(cfg, res.filtration, res.diagram,
                                             r_L, rank, res.landmark_set,
                                             class_id);
        ClassResult cr{class_id,
                       "single",
                       {{scm.scale.pair.birth, scm.scale.pair.death}},
                       {scm.scale.alpha},
                       true,
                       scm.harmonic ? scm.harmonic->residual : 0.0,
                       scm.harmonic ? scm.harmonic->iterations : 0,
                       scm.model,
                       {}};
        if (c == 0 && !cfg.dump_cocycle.empty())
          write_cocycle_csv(cfg.dump_cocycle, scm.eta);
        const auto te = detail::Clock::now();
        cr.assignment = evaluate_all(cr.model, src);
        eval_ms += detail::ms_since(te);
        res.classes.push_back(std::move(cr));
      } else {
        // integer combination of several classes
        const auto qual = qualifying_pairs(res.diagram, r_L);
        std::vector<const PersistencePair*> parts;
        for (std::size_t rank : spec.ranks) {
          if (rank >= qual.size())
            throw argument_error("class rank " + std::to_string(rank) +
                                 " out of range (" + std::to_string(qual.size()) +
                                 " qualifying pairs)");
          parts.push_back(&res.diagram[qual[rank]]);
        }
        double birth = 0.0, death = std::numeric_limits<double>::infinity();
        for (const auto* p : parts) {
          birth = std::max(birth, p->birth);
          death = std::min(death, p->death);
        }
        if (std::max(birth, r_L) < death / 2.0) {
          // intervals co-alive: combine cocycle representatives upstream
          const double alpha =
              cfg.t * std::max(birth, r_L) + (1.0 - cfg.t) * death / 2.0;
          const double two_alpha = 2.0 * alpha;
          const RipsFiltration filt2a =
              restrict_filtration(res.filtration, two_alpha);
          EdgeCochainQ sum;
          for (const auto* p : parts) {
            const EdgeCochainQ rep =
                representative_at_scale(*p, res.filtration, two_alpha, cfg.q);
            sum.insert(sum.end(), rep.begin(), rep.end());
          }
          std::sort(sum.begin(), sum.end(),
                    [](const EdgeValue& a, const EdgeValue& b) {
                      return std::tie(a.i, a.j) < std::tie(b.i, b.j);
                    });
          EdgeCochainQ merged;
          for (std::size_t r = 0; r < sum.size();) {
            int v = 0;
            const auto key = std::tie(sum[r].i, sum[r].j);
            std::size_t r0 = r;
            while (r < sum.size() && std::tie(sum[r].i, sum[r].j) == key)
              v = (v + sum[r++].value) % cfg.q;
            if (v != 0) merged.push_back({sum[r0].i, sum[r0].j, v});
          }
          const IntegerCochain eta = lift_cocycle(merged, filt2a, cfg.q);
          ClassResult cr;
          cr.selector = class_id;
          cr.path = "cocycle";
          for (const auto* p : parts) cr.pairs.push_back({p->birth, p->death});
          cr.alphas = {alpha};
          if (cfg.mode == CoordinateMode::Integer) {
            cr.model = CoordinateModel::from_integer(res.landmark_set.indices,
                                                     alpha, filt2a, eta, cfg.q,
                                                     class_id);
          } else {
            const HarmonicPair hp =
                harmonic_smooth(eta, filt2a, cfg.weights, cfg.solver, cfg.tol);
            cr.residual = hp.residual;
            cr.iterations = hp.iterations;
            cr.model = CoordinateModel(res.landmark_set.indices, alpha, hp.tau,
                                       filt2a, hp.theta, cfg.mode, cfg.q,
                                       class_id);
          }
          const auto te = detail::Clock::now();
          cr.assignment = evaluate_all(cr.model, src);
          eval_ms += detail::ms_since(te);
          res.classes.push_back(std::move(cr));
        } else {
          // no common scale: combine at map level instead
          ClassResult cr;
          cr.selector = class_id;
          cr.path = "map";
          std::vector<AngleAssignment> partials;
          std::optional<CoordinateModel> first_model;
          for (std::size_t rank : spec.ranks) {
            auto scm = detail::build_class_model(
                cfg, res.filtration, res.diagram, r_L, rank, res.landmark_set,
                class_id + "[" + std::to_string(rank) + "]");
            cr.pairs.push_back({scm.scale.pair.birth, scm.scale.pair.death});
            cr.alphas.push_back(scm.scale.alpha);
            if (scm.harmonic) {
              cr.residual += scm.harmonic->residual;
              cr.iterations += scm.harmonic->iterations;
            }
            const auto te = detail::Clock::now();
            partials.push_back(evaluate_all(scm.model, src));
            eval_ms += detail::ms_since(te);
            if (!first_model) first_model = std::move(scm.model);
          }
          cr.assignment =
              combine(partials, std::vector<int>(partials.size(), 1));
          cr.model = std::move(*first_model);
          res.classes.push_back(std::move(cr));
        }
      }
    } catch (const pipeline_error&) {
      throw;
    } catch (const no_qualifying_class_error& e) {
      throw pipeline_error("cohomology", 2, e.what());
    } catch (const lift_failure_error& e) {
      throw pipeline_error("integer_lift", 2, e.what());
    } catch (const convergence_error& e) {
      throw pipeline_error("harmonic", 1, e.what());
    } catch (const error& e) {
      throw pipeline_error("coords", 1, e.what());
    }
    harmonic_ms += detail::ms_since(t0);
  }
  // per-class time excluding evaluation, which is reported separately
  timings["classes"] = std::max(harmonic_ms - eval_ms, 0.0);
  timings["evaluate"] = eval_ms;
  timings["total"] = detail::ms_since(wall0);

  // run metadata (always complete, even for a later artifact-write failure)
  nlohmann::ordered_json meta;
  meta["tool"] = kToolVersion;
  meta["n_points"] = src.size();
  meta["landmarks"] = res.landmark_set.indices.size();
  meta["sampling"] =
      res.landmark_set.method == SamplingMethod::Maxmin ? "maxmin" : "random";
  meta["seed_or_start"] = res.landmark_set.seed_or_start;
  meta["r_L"] = res.landmark_set.r_L;
  meta["q"] = cfg.q;
  meta["t"] = cfg.t;
  meta["mode"] =
      cfg.mode == CoordinateMode::Harmonic ? "harmonic" : "integer";
  meta["weights"] = cfg.weights.rule == EdgeWeightRule::PaperDefault
                        ? "paper"
                        : "uniform";
  meta["solver"] =
      cfg.solver == SolverKind::Iterative ? "iterative" : "dense-svd";
  meta["tol"] = cfg.tol;
  nlohmann::ordered_json cls = nlohmann::ordered_json::array();
  for (const auto& cr : res.classes) {
    nlohmann::ordered_json c;
    c["selector"] = cr.selector;
    c["path"] = cr.path;
    nlohmann::ordered_json prs = nlohmann::ordered_json::array();
    for (const auto& [b, d] : cr.pairs) prs.push_back({b, d});
    c["pairs"] = prs;
    c["alpha"] = cr.alphas;
    c["lift"] = cr.lift_ok ? "ok" : "failed";
    c["residual"] = cr.residual;
    c["iterations"] = cr.iterations;
    c["markers"] = cr.assignment.marker_count();
    cls.push_back(std::move(c));
  }
  meta["classes"] = std::move(cls);
  meta["timings_ms"] = std::move(timings);
  res.metadata = std::move(meta);
  return res;
}

inline void write_artifacts(const RunConfig& cfg, const DistanceSource& src,
                            const PipelineResult& res) {
  try {
    if (!cfg.dump_filtration.empty())
      write_filtration_csv(cfg.dump_filtration, res.filtration);
    if (!cfg.out_csv.empty()) {
      std::vector<std::pair<std::string, AngleAssignment>> cols;
      for (std::size_t c = 0; c < res.classes.size(); ++c)
        cols.push_back({c == 0 ? "angle" : "angle_" + std::to_string(c + 1),
                        res.classes[c].assignment});
      write_coords_csv(cfg.out_csv, cols, cfg.turns);
    }
    if (!cfg.diagram_json.empty())
      write_json(cfg.diagram_json, diagram_to_json(res.diagram));
    if (!cfg.meta_json.empty()) write_json(cfg.meta_json, res.metadata);
    if (!cfg.svg_path.empty() && !res.classes.empty())
      write_svg_scatter(cfg.svg_path, src, res.classes.front().assignment,
                        res.landmark_set.indices);
  } catch (const error& e) {
    throw pipeline_error("output", 1, e.what());
  }
}

/// Load input per config, run, write artifacts.
inline PipelineResult run_pipeline_files(const RunConfig& cfg) {
  DistanceSource src = DistanceSource::from_points({0.0}, 1);
  try {
    src = cfg.input_is_matrix
              ? load_distance_matrix(cfg.input_path, cfg.delimiter, cfg.header)
              : load_point_cloud(cfg.input_path, cfg.delimiter, cfg.header);
  } catch (const error& e) {
    throw pipeline_error("metric_io", 1, e.what());
  }
  PipelineResult res = run_pipeline(cfg, src);
  write_artifacts(cfg, src, res);
  return res;
}

}  // namespace circlet
