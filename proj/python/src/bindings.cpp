// Thin Python layer. Graph and slice handles are opaque; structured results
// come back as JSON text and are decoded on the Python side.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "slicewalk/cli.hpp"
#include "slicewalk/counting.hpp"
#include "slicewalk/error.hpp"
#include "slicewalk/graph_gen.hpp"
#include "slicewalk/report.hpp"
#include "slicewalk/slices.hpp"
#include "slicewalk/spectra.hpp"
#include "slicewalk/verify.hpp"
#include "slicewalk/walks.hpp"

namespace py = pybind11;
using namespace slicewalk;

namespace {

using BipPtr = std::shared_ptr<BipartiteGraph>;
using GraphPtr = std::shared_ptr<Graph>;
using SliceHandle = std::shared_ptr<Slice>;

GenOptions gen_opts(const std::string& method) {
  GenOptions o;
  o.method = gen_method_from_string(method);
  return o;
}

CountingOptions counting_opts(double eps, double delta, std::uint64_t seed, int repetitions) {
  CountingOptions o;
  o.epsilon = eps;
  o.delta = delta;
  o.seed = seed;
  o.repetitions = repetitions;
  return o;
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = kVersion;

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<EmptyLink>(m, "EmptyLink", PyExc_RuntimeError);

  py::class_<BipartiteGraph, BipPtr>(m, "BipartiteGraph")
      .def_static("from_edges",
                  [](int nx, int ny, const std::vector<std::pair<int, int>>& e) {
                    return std::make_shared<BipartiteGraph>(BipartiteGraph::from_edges(nx, ny, e));
                  })
      .def_property_readonly("x_count", &BipartiteGraph::x_count)
      .def_property_readonly("y_count", &BipartiteGraph::y_count)
      .def("edges", &BipartiteGraph::edges)
      .def("lambda2", [](const BipartiteGraph& g) { return graph_spectrum(g).lambda2; });

  py::class_<Graph, GraphPtr>(m, "Graph")
      .def_static("from_edges",
                  [](int n, const std::vector<std::pair<int, int>>& e) {
                    return std::make_shared<Graph>(Graph::from_edges(n, e));
                  })
      .def_property_readonly("vertex_count", &Graph::vertex_count)
      .def("edges", &Graph::edges)
      .def("lambda2", [](const Graph& g) { return graph_spectrum(g).lambda2; });

  m.def(
      "gen_bipartite_regular",
      [](int n_side, int degree, std::uint64_t seed, const std::string& method) -> BipPtr {
        return std::make_shared<BipartiteGraph>(gen_bipartite_regular(n_side, degree, seed, gen_opts(method)));
      },
      py::arg("n_side"), py::arg("degree"), py::arg("seed") = 0, py::arg("method") = "auto");
  m.def(
      "gen_regular",
      [](int n, int degree, std::uint64_t seed, const std::string& method) -> GraphPtr {
        return std::make_shared<Graph>(gen_regular(n, degree, seed, gen_opts(method)));
      },
      py::arg("n"), py::arg("degree"), py::arg("seed") = 0, py::arg("method") = "auto");

  py::class_<Slice, SliceHandle>(m, "Slice")
      .def_property_readonly("kind", [](const Slice& s) { return to_string(s.kind()); })
      .def_property_readonly("facet_size", &Slice::facet_size)
      .def("is_facet", &Slice::is_facet)
      .def("format_facet", &Slice::format_facet);

  m.def(
      "two_sided_slice", [](BipPtr g, int kx, int ky) -> SliceHandle { return std::make_shared<TwoSidedSlice>(g, kx, ky); },
      py::arg("graph"), py::arg("k_x"), py::arg("k_y"));
  m.def(
      "one_sided_slice",
      [](BipPtr g, int k, double lambda) -> SliceHandle { return std::make_shared<OneSidedSlice>(g, k, lambda); },
      py::arg("graph"), py::arg("k"), py::arg("lambda_"));
  m.def(
      "regular_slice", [](GraphPtr g, int k) -> SliceHandle { return std::make_shared<RegularSlice>(g, k); },
      py::arg("graph"), py::arg("k"));

  m.def(
      "exact_distribution",
      [](const Slice& s, std::size_t cap) {
        auto d = exact_distribution(s, cap);
        return py::make_tuple(d.facets, d.prob);
      },
      py::arg("slice"), py::arg("cap") = 2000);

  m.def(
      "sample_json",
      [](SliceHandle s, std::uint64_t steps, std::uint64_t seed, bool lazy) {
        ChainConfig c;
        c.steps = steps;
        c.seed = seed;
        c.lazy = lazy;
        auto r = run_chain(s, c);
        Json j;
        j["initial"] = r.initial;
        j["samples"] = r.samples;
        j["report"] = to_json(r.report);
        return dump(j);
      },
      py::arg("slice"), py::arg("steps"), py::arg("seed") = 0, py::arg("lazy") = true);

  m.def(
      "exact_partition", [](const BipartiteGraph& g, double lambda) { return static_cast<double>(exact_partition(g, lambda)); },
      py::arg("graph"), py::arg("lambda_"));
  m.def(
      "exact_slice_count", [](const BipartiteGraph& g, int kx, int ky) { return static_cast<double>(exact_slice_count(g, kx, ky)); },
      py::arg("graph"), py::arg("k_x"), py::arg("k_y"));
  m.def(
      "exact_one_sided_partition",
      [](const BipartiteGraph& g, int k, double lambda) { return static_cast<double>(exact_one_sided_partition(g, k, lambda)); },
      py::arg("graph"), py::arg("k"), py::arg("lambda_"));

  m.def(
      "estimate_two_sided_count_json",
      [](const BipartiteGraph& g, int kx, int ky, double eps, double delta, std::uint64_t seed, int reps) {
        return dump(to_json(estimate_two_sided_count(g, kx, ky, counting_opts(eps, delta, seed, reps))));
      },
      py::arg("graph"), py::arg("k_x"), py::arg("k_y"), py::arg("eps") = 0.1, py::arg("delta") = 0.1,
      py::arg("seed") = 0, py::arg("repetitions") = 0);
  m.def(
      "estimate_one_sided_partition_json",
      [](const BipartiteGraph& g, int k, double lambda, double eps, double delta, std::uint64_t seed, int reps) {
        return dump(to_json(estimate_one_sided_partition(g, k, lambda, counting_opts(eps, delta, seed, reps))));
      },
      py::arg("graph"), py::arg("k"), py::arg("lambda_"), py::arg("eps") = 0.1, py::arg("delta") = 0.1,
      py::arg("seed") = 0, py::arg("repetitions") = 0);

  m.def(
      "verify_two_sided_json",
      [](const BipartiteGraph& g, int kx, int ky) { return dump(to_json(verify_top_link_two_sided(g, kx, ky))); },
      py::arg("graph"), py::arg("k_x"), py::arg("k_y"));
  m.def(
      "verify_one_sided_json",
      [](const BipartiteGraph& g, int k, double lambda) { return dump(to_json(verify_top_link_one_sided(g, k, lambda))); },
      py::arg("graph"), py::arg("k"), py::arg("lambda_"));
  m.def(
      "verify_regular_json", [](const Graph& g, int k) { return dump(to_json(verify_top_link_regular(g, k))); },
      py::arg("graph"), py::arg("k"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int rc;
        {
          py::gil_scoped_release nogil;
          rc = cli_dispatch(args, out, err);
        }
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"));
}
