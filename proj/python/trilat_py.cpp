#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "trilat/io.hpp"
#include "trilat/membership.hpp"
#include "trilat/reconstruct.hpp"

namespace py = pybind11;
using namespace trilat;

namespace {

DataSet make_dataset(std::vector<double> values, int dim, const std::string& mode, int bound) {
  DataSet d;
  d.values = std::move(values);
  d.dim = dim;
  d.mode = mode_from_string(mode);
  d.bound = bound;
  return d;
}

ReconstructOptions make_options(double tol, const std::optional<std::string>& strategy,
                                bool restricted) {
  ReconstructOptions o;
  o.tol = tol;
  if (strategy) o.strategy = rank_strategy_from_string(*strategy);
  o.restricted_ensemble = restricted;
  return o;
}

py::list labeling_list(const std::vector<Explanation>& labeling) {
  py::list out;
  for (const auto& e : labeling) out.append(py::make_tuple(e.value_index, e.path.vertices));
  return out;
}

}  // namespace

PYBIND11_MODULE(_trilat, m) {
  m.doc() = "Reconstruction of point sets from unlabeled path and loop lengths";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NoBaseFound>(m, "NoBaseFound", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("random_configuration",
        [](int n, int d, std::uint64_t seed) { return random_configuration(n, d, seed).rows(); },
        py::arg("n"), py::arg("d"), py::arg("seed"));

  m.def(
      "simulate",
      [](const Eigen::MatrixXd& points, const std::string& mode, int extra, int max_hops,
         std::uint64_t seed_ensemble, std::uint64_t seed_shuffle, int scale) {
        const Configuration cfg(points);
        EnsembleOptions eo;
        eo.n = cfg.size();
        eo.dim = cfg.dim();
        eo.mode = mode_from_string(mode);
        eo.extra = extra;
        eo.max_hops = max_hops;
        eo.seed = seed_ensemble;
        const MeasurementEnsemble ens = build_trilateration_ensemble(eo).scaled(scale);
        const Measurement meas = measure(ens, cfg, seed_shuffle);
        std::vector<std::vector<int>> paths;
        for (int l : meas.labels) paths.push_back(ens.provenance.at(static_cast<size_t>(l)).vertices);
        py::dict out;
        out["values"] = meas.data.values;
        out["bound"] = meas.data.bound;
        out["paths"] = paths;
        return out;
      },
      py::arg("points"), py::arg("mode") = "loop", py::arg("extra") = 0, py::arg("max_hops") = 4,
      py::arg("seed_ensemble") = 0, py::arg("seed_shuffle") = 0, py::arg("scale") = 1,
      "Measure a configuration with a random trilateration ensemble; values come shuffled.");

  m.def(
      "reconstruct",
      [](std::vector<double> values, int dim, const std::string& mode, int bound, double tol,
         std::optional<std::string> strategy, bool restricted) {
        const DataSet data = make_dataset(std::move(values), dim, mode, bound);
        ReconstructionResult r;
        {
          py::gil_scoped_release release;
          r = reconstruct(data, make_options(tol, strategy, restricted));
        }
        return py::make_tuple(r.configuration.rows(), labeling_list(r.labeling));
      },
      py::arg("values"), py::arg("dim"), py::arg("mode"), py::arg("bound"),
      py::arg("tol") = kDefaultTol, py::arg("strategy") = py::none(),
      py::arg("restricted") = false,
      "Returns (points, labeling) with labeling a list of (value_index, path).");

  m.def(
      "verify",
      [](const Eigen::MatrixXd& truth, const Eigen::MatrixXd& recovered, int max_scale,
         double tol) {
        const VerifyVerdict v = verify(Configuration(truth), Configuration(recovered), max_scale, tol);
        py::dict out;
        out["matched"] = v.matched;
        out["scale"] = v.scale;
        out["relabeling"] = v.relabeling;
        out["max_residual"] = v.max_residual;
        return out;
      },
      py::arg("truth"), py::arg("recovered"), py::arg("max_scale") = 8, py::arg("tol") = 1e-7);

  m.def(
      "cayley_menger_det",
      [](const Eigen::VectorXd& sq, int d) { return cayley_menger_det(sq, d); }, py::arg("sq"),
      py::arg("d"));

  m.def(
      "is_member",
      [](std::vector<double> w, int d, const std::string& kind) {
        if (kind == "identity") return membership_L(w, d).member;
        const CanonicalKind k = kind == "trilat" ? CanonicalKind::kTrilat : CanonicalKind::kBase;
        if (kind != "trilat" && kind != "base") throw InvalidArgument("kind: identity, base or trilat");
        return membership_L(w, canonical_matrix(k, d)).member;
      },
      py::arg("w"), py::arg("d"), py::arg("kind") = "identity");

  m.def(
      "canonical_matrix",
      [](const std::string& kind, int d) {
        if (kind != "base" && kind != "trilat") throw InvalidArgument("kind: base or trilat");
        return canonical_matrix(kind == "base" ? CanonicalKind::kBase : CanonicalKind::kTrilat, d)
            .entries;
      },
      py::arg("kind"), py::arg("d"));

  m.def(
      "find_integer_relation",
      [](std::vector<double> w, std::int64_t bound) -> std::optional<std::vector<std::int64_t>> {
        const RelationCertificate c = find_integer_relation_brute(w, bound);
        if (!c.is_relation()) return std::nullopt;
        return c.coefficients;
      },
      py::arg("w"), py::arg("bound"));

  m.def(
      "is_singular_L24",
      [](std::vector<double> l) -> std::optional<std::string> {
        const SingularityVerdict v = is_singular_L24(l);
        if (!v.singular) return std::nullopt;
        return v.stratum->describe();
      },
      py::arg("lengths"));

  m.def("dataset_to_json", [](std::vector<double> values, int dim, const std::string& mode,
                              int bound) { return dataset_to_json(make_dataset(values, dim, mode, bound)); },
        py::arg("values"), py::arg("dim"), py::arg("mode"), py::arg("bound"));
}
