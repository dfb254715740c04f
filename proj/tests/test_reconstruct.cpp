#include <doctest.h>

#include <random>

#include "trilat/reconstruct.hpp"

using namespace trilat;

namespace {

struct Trial {
  Configuration truth;
  MeasurementEnsemble ensemble;
  Measurement measurement;
};

Trial simulate(int n, int d, Mode mode, int extra, std::uint64_t seed, int scale = 1) {
  EnsembleOptions o;
  o.n = n;
  o.dim = d;
  o.mode = mode;
  o.extra = extra;
  o.seed = seed;
  Trial t;
  t.truth = random_configuration(n, d, seed + 1000);
  t.ensemble = build_trilateration_ensemble(o).scaled(scale);
  t.measurement = measure(t.ensemble, t.truth, seed + 2000);
  return t;
}

void check_round_trip(int n, int d, Mode mode, int extra, std::uint64_t seed) {
  CAPTURE(n);
  CAPTURE(d);
  CAPTURE(extra);
  CAPTURE(seed);
  const Trial t = simulate(n, d, mode, extra, seed);
  const ReconstructionResult r = reconstruct(t.measurement.data);
  CHECK(r.configuration.size() == n);
  const VerifyVerdict v = verify(t.truth, r.configuration, 1);
  CHECK(v.matched);
  CHECK(v.scale == 1);
  CHECK(v.max_residual < 1e-7);
  CHECK(certificate_residual(r, t.measurement.data) < 1e-9);
}

}  // namespace

TEST_CASE("planar round trips") {
  std::uint64_t seed = 1;
  for (Mode mode : {Mode::kPath, Mode::kLoop})
    for (int n = 4; n <= 8; ++n)
      for (int extra : {0, 5, 10}) check_round_trip(n, 2, mode, extra, seed++);
}

TEST_CASE("spatial round trips") {
  std::uint64_t seed = 100;
  for (Mode mode : {Mode::kPath, Mode::kLoop})
    for (int n = 5; n <= 6; ++n)
      for (int extra : {0, 5}) check_round_trip(n, 3, mode, extra, seed++);
}

TEST_CASE("explanations are consistent with the ground truth paths") {
  const Trial t = simulate(6, 2, Mode::kLoop, 0, 7);
  const ReconstructionResult r = reconstruct(t.measurement.data);
  CHECK(r.explained_count == static_cast<int>(t.measurement.data.values.size()));
  const VerifyVerdict v = verify(t.truth, r.configuration, 1);
  REQUIRE(v.matched);
  for (const auto& e : r.labeling) {
    // relabel the explanation onto truth vertices and re-measure
    Path p;
    for (int x : e.path.vertices) p.vertices.push_back(v.relabeling[x]);
    const double re = apply_functional(functional_from_path(p, 6), t.truth);
    CHECK(re == doctest::Approx(t.measurement.data.values[e.value_index]).epsilon(1e-9));
  }
}

TEST_CASE("base search and single steps") {
  const Trial t = simulate(5, 2, Mode::kPath, 0, 9);
  const auto bases = find_candidate_bases(t.measurement.data);
  REQUIRE(bases.size() >= 1);
  for (const auto& b : bases) {
    CHECK(b.value_indices.size() == 6u);
    CHECK(b.embedded.size() == 4);
  }
  PartialReconstruction p = start_from_base(bases[0], t.measurement.data);
  CHECK(p.explained_count() == 6);
  const auto next = trilaterate_step(p, t.measurement.data);
  REQUIRE(next.has_value());
  CHECK(next->points.size() == 5);
  CHECK(next->explained_count() == 9);
  REQUIRE(next->history.size() == 1u);
  CHECK(next->history[0].new_vertex == 4);
  CHECK_FALSE(trilaterate_step(*next, t.measurement.data).has_value());
}

TEST_CASE("scaled ensembles reconstruct a scaled copy") {
  const Trial t = simulate(6, 2, Mode::kLoop, 3, 11, 3);
  const ReconstructionResult r = reconstruct(t.measurement.data);
  const VerifyVerdict v = verify(t.truth, r.configuration, 4);
  REQUIRE(v.matched);
  CHECK(v.scale == 3);
}

TEST_CASE("nearly collinear triples do not produce ghost points") {
  // vertices 0, 1, 3 of this configuration are collinear to about 1e-7
  EnsembleOptions o;
  o.n = 7;
  o.dim = 2;
  o.mode = Mode::kLoop;
  o.extra = 10;
  o.seed = 752;
  const Configuration truth = random_configuration(7, 2, 752 * 7 + 1);
  const Measurement m = measure(build_trilateration_ensemble(o), truth, 752 * 7 + 2);
  const ReconstructionResult r = reconstruct(m.data);
  CHECK(r.configuration.size() == 7);
  CHECK(verify(truth, r.configuration, 1).matched);
  CHECK(certificate_residual(r, m.data) < 1e-7);
}

TEST_CASE("random noise yields no base") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (Mode mode : {Mode::kPath, Mode::kLoop}) {
    DataSet data;
    data.dim = 2;
    data.mode = mode;
    data.bound = 2;
    for (int i = 0; i < 15; ++i) data.values.push_back(u(rng));
    CHECK_THROWS_AS(reconstruct(data), NoBaseFound);
  }
}

TEST_CASE("one-dimensional data are rejected") {
  DataSet data;
  data.dim = 1;
  data.values = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(reconstruct(data), InvalidArgument);
  data.dim = 2;
  CHECK_THROWS_AS(reconstruct(data), NoBaseFound);
}

TEST_CASE("verify handles reflections, subsets and scales") {
  const Configuration c = random_configuration(6, 2, 51);
  Eigen::MatrixXd m = c.rows();
  m.col(0) *= -1.0;
  Eigen::Matrix2d rot;
  rot << 0.6, -0.8, 0.8, 0.6;
  const Configuration moved(Eigen::MatrixXd(m * rot.transpose()));
  std::vector<int> perm{3, 1, 5, 0, 2, 4};
  const VerifyVerdict v = verify(c, moved.subset(perm), 1);
  REQUIRE(v.matched);
  CHECK(v.relabeling == perm);
  CHECK(v.max_residual < 1e-12);

  const VerifyVerdict s = verify(c, moved.scaled(2.0), 3);
  REQUIRE(s.matched);
  CHECK(s.scale == 2);

  const Configuration other = random_configuration(6, 2, 52);
  CHECK_FALSE(verify(c, other, 3).matched);
}

TEST_CASE("strategies are configurable") {
  ReconstructOptions o;
  CHECK(effective_strategy(o, 2) == RankStrategy::kBrute);
  CHECK(effective_strategy(o, 3) == RankStrategy::kReduced);
  o.strategy = RankStrategy::kReduced;
  const Trial t = simulate(5, 2, Mode::kLoop, 2, 13);
  const auto r = reconstruct(t.measurement.data, o);
  CHECK(verify(t.truth, r.configuration, 1).matched);
  o.strategy = RankStrategy::kDistinctValues;
  CHECK_THROWS_AS(reconstruct(t.measurement.data, o), InvalidArgument);
  o.restricted_ensemble = true;
  const Trial clean = simulate(5, 2, Mode::kLoop, 0, 14);
  CHECK(verify(clean.truth, reconstruct(clean.measurement.data, o).configuration, 1).matched);
}
