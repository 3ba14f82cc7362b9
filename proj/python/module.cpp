// Python bindings for the core operations: lattice arithmetic, toroid
// summaries and certificate generation.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chirex/verifier.hpp"

namespace py = pybind11;
using namespace chirex;

namespace {

LatticeSpec make_spec(int n, int64_t a, int k, bool allow_small_a) {
  return LatticeSpec::make(n, a, k, allow_small_a);
}

py::dict toroid_summary(int n, int64_t a, int k, bool allow_small_a) {
  ToroidContext ctx(make_spec(n, a, k, allow_small_a));
  py::dict d;
  d["name"] = lattice_name(ctx.spec());
  d["schlafli"] = ctx.schlafli();
  d["white_count"] = ctx.white_count();
  d["flag_count"] = ctx.flag_count();
  d["facet_count"] = ctx.facet_count();
  return d;
}

std::string certify_json(int n, int64_t a, int k, uint64_t p, bool allow_small_a,
                         std::vector<std::string> checks, int threads,
                         uint64_t seed) {
  ToroidContext ctx(make_spec(n, a, k, allow_small_a));
  Extension ext(ctx, {ctx.spec(), p});
  VerifyOptions opt;
  opt.threads = threads;
  opt.seed = seed;
  return certificate_json(certify(ext, opt, std::move(checks))).dump(2);
}

}  // namespace

PYBIND11_MODULE(_chirex, m) {
  m.doc() = "chiral extensions of cubic regular toroids: core operations";

  m.def(
      "reduce",
      [](int n, int64_t a, int k, bool allow_small_a, const Vec& t) {
        return chirex::reduce(make_spec(n, a, k, allow_small_a), t).rep;
      },
      py::arg("n"), py::arg("a"), py::arg("k"), py::arg("allow_small_a"),
      py::arg("t"), "Canonical representative of a translation class.");

  m.def(
      "quotient_order",
      [](int n, int64_t a, int k, bool allow_small_a) {
        return chirex::quotient_order(make_spec(n, a, k, allow_small_a));
      },
      py::arg("n"), py::arg("a"), py::arg("k"), py::arg("allow_small_a") = false,
      "Number of translation classes of the quotient lattice.");

  m.def("toroid_summary", &toroid_summary, py::arg("n"), py::arg("a"), py::arg("k"),
        py::arg("allow_small_a") = false,
        "Schlafli symbol, flag counts and name of a cubic regular toroid.");

  m.def("certify_json", &certify_json, py::arg("n"), py::arg("a"), py::arg("k"),
        py::arg("p"), py::arg("allow_small_a") = false,
        py::arg("checks") = std::vector<std::string>{}, py::arg("threads") = 1,
        py::arg("seed") = 12345,
        "Run the requested verification checks on the extension and return the "
        "certificate as a JSON string.");
}
