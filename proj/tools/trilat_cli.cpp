// trilat: simulate, reconstruct and verify unlabeled trilateration data.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "trilat/io.hpp"
#include "trilat/reconstruct.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kUnmatched = 1,
  kNoBase = 2,
  kMalformed = 3,
  kInvalidSpec = 4,
};

struct GenArgs {
  int dim = 2;
  int points = 4;
  std::string mode = "loop";
  int extra = 0;
  int max_hops = 4;
  int scale = 1;
  std::uint64_t seed_config = 1;
  std::uint64_t seed_ensemble = 2;
  std::uint64_t seed_shuffle = 3;
  std::string out_dataset = "dataset.json";
  std::string out_truth = "truth.json";
  std::string out_ensemble = "ensemble.json";
};

struct ReconArgs {
  std::string dataset;
  double tol = trilat::kDefaultTol;
  std::string rank_strategy;
  int bound = 0;
  bool restricted = false;
  std::string plot;
  std::string out = "recovered.json";
  std::string labeling = "labeling.json";
};

struct VerifyArgs {
  std::string truth;
  std::string recovered;
  double tol = 1e-7;
  int max_scale = 8;
};

int run_gen(const GenArgs& a) {
  trilat::EnsembleOptions eo;
  try {
    eo.mode = trilat::mode_from_string(a.mode);
  } catch (const trilat::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidSpec;
  }
  if (a.dim < 2 || a.points < a.dim + 2 || a.extra < 0 || a.scale < 1 || a.max_hops < 1) {
    std::cerr << "error: invalid spec (need d >= 2, n >= d+2, extra >= 0, scale >= 1)\n";
    return kInvalidSpec;
  }
  eo.n = a.points;
  eo.dim = a.dim;
  eo.extra = a.extra;
  eo.max_hops = a.max_hops;
  eo.seed = a.seed_ensemble;
  try {
    const trilat::Configuration truth = trilat::random_configuration(a.points, a.dim, a.seed_config);
    const trilat::MeasurementEnsemble ens = trilat::build_trilateration_ensemble(eo).scaled(a.scale);
    const trilat::Measurement m = trilat::measure(ens, truth, a.seed_shuffle);
    std::vector<trilat::Path> ordered;
    for (int label : m.labels) ordered.push_back(ens.provenance.at(static_cast<size_t>(label)));
    trilat::write_file(a.out_dataset, trilat::dataset_to_json(m.data));
    trilat::write_file(a.out_truth, trilat::configuration_to_json(truth));
    trilat::write_file(a.out_ensemble, trilat::paths_to_json(ordered));
    std::cout << "wrote " << m.data.values.size() << " values (bound " << m.data.bound << ")\n";
  } catch (const trilat::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidSpec;
  }
  return kOk;
}

int run_reconstruct(const ReconArgs& a) {
  trilat::DataSet data;
  try {
    data = trilat::dataset_from_json(trilat::read_file(a.dataset));
  } catch (const trilat::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  }
  if (!a.plot.empty() && data.dim != 2) {
    std::cerr << "error: --plot is only available for d = 2\n";
    return kInvalidSpec;
  }
  trilat::ReconstructOptions o;
  o.tol = a.tol;
  o.bound_override = a.bound;
  o.restricted_ensemble = a.restricted;
  try {
    if (!a.rank_strategy.empty()) o.strategy = trilat::rank_strategy_from_string(a.rank_strategy);
    const trilat::ReconstructionResult r = trilat::reconstruct(data, o);
    trilat::write_file(a.out, trilat::configuration_to_json(r.configuration));
    trilat::write_file(a.labeling, trilat::labeling_to_json(r.labeling, data));
    if (!a.plot.empty()) {
      std::vector<trilat::Path> paths;
      for (const auto& e : r.labeling) paths.push_back(e.path);
      trilat::write_file(a.plot, trilat::render_svg(r.configuration, paths));
    }
    std::cout << "recovered " << r.configuration.size() << " points explaining "
              << r.explained_count << " of " << data.values.size() << " values ("
              << r.candidate_bases << " candidate bases)\n";
  } catch (const trilat::NoBaseFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoBase;
  } catch (const trilat::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidSpec;
  }
  return kOk;
}

int run_verify(const VerifyArgs& a) {
  trilat::Configuration truth, recovered;
  try {
    truth = trilat::configuration_from_json(trilat::read_file(a.truth));
    recovered = trilat::configuration_from_json(trilat::read_file(a.recovered));
  } catch (const trilat::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  }
  if (truth.dim() != recovered.dim()) {
    std::cerr << "error: dimension mismatch\n";
    return kMalformed;
  }
  const trilat::VerifyVerdict v = trilat::verify(truth, recovered, a.max_scale, a.tol);
  if (!v.matched) {
    std::cout << "unmatched\n";
    return kUnmatched;
  }
  std::printf("matched scale=%d max_residual=%.3g\n", v.scale, v.max_residual);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct point sets from unlabeled path and loop lengths"};
  app.require_subcommand(1);

  GenArgs g;
  auto* gen = app.add_subcommand("gen", "simulate a configuration and its data set");
  gen->add_option("--dim", g.dim, "ambient dimension d");
  gen->add_option("--points", g.points, "number of points n");
  gen->add_option("--mode", g.mode, "path or loop");
  gen->add_option("--extra", g.extra, "number of distractor measurements");
  gen->add_option("--max-hops", g.max_hops, "edges per distractor");
  gen->add_option("--scale", g.scale, "traverse every measurement this many times");
  gen->add_option("--seed-config", g.seed_config);
  gen->add_option("--seed-ensemble", g.seed_ensemble);
  gen->add_option("--seed-shuffle", g.seed_shuffle);
  gen->add_option("--dataset", g.out_dataset, "output data set file");
  gen->add_option("--truth", g.out_truth, "output configuration file");
  gen->add_option("--ensemble", g.out_ensemble, "output ensemble file");

  ReconArgs r;
  auto* rec = app.add_subcommand("reconstruct", "recover a configuration from a data set");
  rec->add_option("dataset", r.dataset)->required();
  rec->add_option("--tol", r.tol, "geometric tolerance");
  rec->add_option("--rank-strategy", r.rank_strategy)
      ->check(CLI::IsMember({"brute", "reduced", "distinct"}));
  rec->add_option("--bound", r.bound, "override the data set's multiplicity bound");
  rec->add_flag("--restricted", r.restricted, "data use only hub pings and triangles");
  rec->add_option("--plot", r.plot, "write an SVG plot (d = 2 only)");
  rec->add_option("--out", r.out, "output configuration file");
  rec->add_option("--labeling", r.labeling, "output explanation file");

  VerifyArgs v;
  auto* ver = app.add_subcommand("verify", "compare a recovered configuration with the truth");
  ver->add_option("truth", v.truth)->required();
  ver->add_option("recovered", v.recovered)->required();
  ver->add_option("--tol", v.tol, "relative length tolerance");
  ver->add_option("--max-scale", v.max_scale, "largest integer scale tried");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidSpec;
  }

  try {
    if (*gen) return run_gen(g);
    if (*rec) return run_reconstruct(r);
    if (*ver) return run_verify(v);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidSpec;
  }
  return kOk;
}
