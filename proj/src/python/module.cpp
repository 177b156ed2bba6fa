#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "philab/besov.hpp"
#include "philab/cli.hpp"
#include "philab/config.hpp"
#include "philab/error.hpp"
#include "philab/report.hpp"
#include "philab/sphere.hpp"

namespace py = pybind11;
using namespace philab;

namespace {

RunConfig resolve(const std::string& subcommand, const std::string& config_text, std::optional<std::uint64_t> seed,
                  std::optional<int> threads, std::optional<double> tol) {
  Overrides o;
  o.seed = seed;
  o.threads = threads;
  o.tol = tol;
  return resolve_config(subcommand, parse_toml(config_text, "<string>"), o);
}

std::string run(const std::string& subcommand, const std::string& config_text, std::optional<std::uint64_t> seed,
                std::optional<int> threads, std::optional<double> tol) {
  const RunConfig cfg = resolve(subcommand, config_text, seed, threads, tol);
  ExperimentResult r;
  {
    py::gil_scoped_release release;
    r = run_experiment(cfg);
  }
  auto j = result_json(r, cfg.hash(), utc_timestamp());
  j["exit_status"] = exit_status(r);
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  return dump_json(j);
}

double hemisphere(const std::string& config_text, const std::vector<double>& xi, int sign) {
  const RunConfig cfg = resolve("cancel", config_text, std::nullopt, std::nullopt, std::nullopt);
  const auto kernel = make_kernel(cfg.section("kernel"));
  const auto phi = make_phi(cfg.section("phi"));
  if (static_cast<int>(xi.size()) != kernel.dim()) throw ValidationError("xi: expected one entry per dimension");
  const int nodes = cfg.section("numerics").at("sphere_nodes").get<int>();
  const auto rule = SphereRule::for_dim(kernel.dim(), nodes);
  return hemisphere_functional(kernel, phi, sign, normalized(Vec(std::span<const double>(xi))), rule);
}

}  // namespace

PYBIND11_MODULE(_philab, m) {
  m.doc() = "Bindings for the philab experiment runner.";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("run", &run, py::arg("subcommand"), py::arg("config") = "", py::arg("seed") = py::none(),
        py::arg("threads") = py::none(), py::arg("tol") = py::none(),
        "Run a subcommand on TOML config text and return the artifact as JSON text. Nothing is written to disk.");
  m.def(
      "config_hash",
      [](const std::string& subcommand, const std::string& config_text, std::optional<std::uint64_t> seed) {
        return resolve(subcommand, config_text, seed, std::nullopt, std::nullopt).hash();
      },
      py::arg("subcommand"), py::arg("config") = "", py::arg("seed") = py::none());
  m.def(
      "resolved_config",
      [](const std::string& subcommand, const std::string& config_text) {
        return dump_json(resolve(subcommand, config_text, std::nullopt, std::nullopt, std::nullopt).snapshot);
      },
      py::arg("subcommand"), py::arg("config") = "");
  m.def("hemisphere_functional", &hemisphere, py::arg("config"), py::arg("xi"), py::arg("sign") = 1,
        "Integral of Phi(sign K) over the half sphere facing xi, for the kernel and phi in the config.");
  m.def("new_simple_ratio", &new_simple_ratio, py::arg("p"), py::arg("big_z"), py::arg("z"));
  m.attr("schema_version") = kArtifactSchemaVersion;
}
