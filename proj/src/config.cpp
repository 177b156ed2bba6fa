#include "philab/config.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "philab/error.hpp"
#include "philab/sphere_table.hpp"

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

namespace philab {

using json = nlohmann::ordered_json;

namespace {

const std::array<const char*, 11> kSubcommands = {"cancel", "psi",       "conv",      "blowup",        "ratio",   "besov",
                                                  "interaction", "chain", "theorem41", "demo-gradient", "selftest"};

json from_toml(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = from_toml(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(from_toml(v));
    return out;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  throw ValidationError("config: dates and times are not supported");
}

std::string where(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

// Shape-checks a user value against the default and returns it in the default's
// form (integers widen to floats where a float is expected).
json coerce(const json& def, const json& value, const std::string& at) {
  if (def.is_null()) return value;
  if (def.is_boolean()) {
    if (!value.is_boolean()) throw ValidationError(at + ": expected a boolean");
    return value;
  }
  if (def.is_string()) {
    if (!value.is_string()) throw ValidationError(at + ": expected a string");
    return value;
  }
  if (def.is_number_integer()) {
    if (!value.is_number_integer()) throw ValidationError(at + ": expected an integer");
    return value;
  }
  if (def.is_number()) {
    if (!value.is_number()) throw ValidationError(at + ": expected a number");
    return value.get<double>();
  }
  if (def.is_array()) {
    if (!value.is_array()) throw ValidationError(at + ": expected an array");
    return value;
  }
  if (def.is_object()) {
    if (!value.is_object()) throw ValidationError(at + ": expected a table");
    return value;
  }
  return value;
}

json merge(const std::string& section, json defaults, const json& given) {
  if (given.is_null()) return defaults;
  if (!given.is_object()) throw ValidationError("[" + section + "] must be a table");
  for (const auto& [k, v] : given.items()) {
    if (!defaults.contains(k)) throw ValidationError(where(section, k) + ": unknown key");
    defaults[k] = coerce(defaults[k], v, where(section, k));
  }
  return defaults;
}

std::vector<double> numbers(const json& a, const std::string& at) {
  std::vector<double> out;
  if (!a.is_array()) throw ValidationError(at + ": expected an array of numbers");
  for (const auto& v : a) {
    if (!v.is_number()) throw ValidationError(at + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json float_array(const json& a, const std::string& at) {
  json out = json::array();
  for (double v : numbers(a, at)) out.push_back(v);
  return out;
}

json int_array(const json& a, const std::string& at) {
  json out = json::array();
  if (!a.is_array()) throw ValidationError(at + ": expected an array of integers");
  for (const auto& v : a) {
    if (!v.is_number_integer()) throw ValidationError(at + ": expected an array of integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

json unit_vector(int dim, int axis, double value) {
  json v = json::array();
  for (int i = 0; i < dim; ++i) v.push_back(i == axis ? value : 0.0);
  return v;
}

json filled(int dim, const json& value) {
  json v = json::array();
  for (int i = 0; i < dim; ++i) v.push_back(value);
  return v;
}

std::string type_of(const json& given, const std::string& section, const std::string& fallback) {
  if (given.is_null() || !given.contains("type")) return fallback;
  if (!given["type"].is_string()) throw ValidationError(where(section, "type") + ": expected a string");
  return given["type"].get<std::string>();
}

std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty()) return p;
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal().string();
}

json fourier_json(const json& given, const std::string& at) {
  json out = {{"constant", 0.0}, {"cos", json::array()}, {"sin", json::array()}};
  out = merge(at, out, given);
  out["cos"] = float_array(out["cos"], at + ".cos");
  out["sin"] = float_array(out["sin"], at + ".sin");
  return out;
}

builtin::FourierSeries fourier_of(const json& s) {
  builtin::FourierSeries f;
  f.constant = s.at("constant").get<double>();
  f.cos = s.at("cos").get<std::vector<double>>();
  f.sin = s.at("sin").get<std::vector<double>>();
  return f;
}

json resolve_kernel(const json& given, const std::string& subcommand, const std::filesystem::path& base) {
  const std::string type = type_of(given, "kernel", subcommand == "demo-gradient" ? "riesz_gradient" : "identity");
  json def;
  if (type == "identity") def = {{"type", type}, {"dim", 2}, {"alpha", 1.0}};
  else if (type == "riesz_gradient") def = {{"type", type}, {"dim", 2}};
  else if (type == "fourier") def = {{"type", type}, {"alpha", 1.0}, {"components", json::array()}};
  else if (type == "table") def = {{"type", type}, {"alpha", 1.0}, {"path", ""}};
  else throw ValidationError("[kernel] type: unknown kernel '" + type + "'");
  json k = merge("kernel", def, given);
  if (type == "fourier") {
    json comps = json::array();
    for (const auto& c : k["components"]) comps.push_back(fourier_json(c, "kernel.components"));
    if (comps.empty()) throw ValidationError("[kernel] components: at least one component is required");
    k["components"] = comps;
  }
  if (type == "table") {
    if (k["path"].get<std::string>().empty()) throw ValidationError("[kernel] path: a table file is required");
    k["path"] = resolve_path(k["path"].get<std::string>(), base);
  }
  if (k.contains("dim")) {
    const int d = k["dim"].get<int>();
    if (d != 2 && d != 3) throw ValidationError("[kernel] dim: must be 2 or 3");
  }
  if (subcommand == "demo-gradient" && (type != "riesz_gradient" || k["dim"].get<int>() != 2))
    throw ValidationError("[kernel] demo-gradient uses the planar gradient kernel (type = \"riesz_gradient\", dim = 2)");
  return k;
}

json resolve_phi(const json& given, const HomogeneousKernel& kernel, const std::filesystem::path& base) {
  const std::string type = type_of(given, "phi", "quadratic");
  const int m = kernel.target_dim();
  const int d = kernel.dim();
  const double p_natural = d / (d - kernel.alpha());
  json def;
  if (type == "quadratic") {
    json id = json::array();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) id.push_back(i == j ? 1.0 : 0.0);
    def = {{"type", type}, {"matrix", id}};
  } else if (type == "trace_free_quadratic") {
    def = {{"type", type}};
  } else if (type == "norm_power" || type == "first_component") {
    def = {{"type", type}, {"target_dim", m}, {"p", p_natural}};
  } else if (type == "angular") {
    def = {{"type", type}, {"p", p_natural}, {"series", fourier_json(json(), "phi.series")}};
  } else if (type == "table") {
    def = {{"type", type}, {"p", p_natural}, {"path", ""}};
  } else {
    throw ValidationError("[phi] type: unknown integrand '" + type + "'");
  }
  json f = merge("phi", def, given);
  if (type == "quadratic") {
    f["matrix"] = float_array(f["matrix"], "[phi] matrix");
    if (static_cast<int>(f["matrix"].size()) != m * m)
      throw ValidationError("[phi] matrix: expected " + std::to_string(m * m) + " entries for target dimension " +
                            std::to_string(m));
  }
  if (type == "angular") f["series"] = fourier_json(f["series"], "phi.series");
  if (type == "table") {
    if (f["path"].get<std::string>().empty()) throw ValidationError("[phi] path: a table file is required");
    f["path"] = resolve_path(f["path"].get<std::string>(), base);
  }
  return f;
}

json resolve_domain(const json& given, int dim) {
  const std::string type = type_of(given, "domain", "ball");
  json def;
  if (type == "ball") def = {{"type", type}, {"center", filled(dim, 0.0)}, {"radius", 1.0}};
  else if (type == "half_space") def = {{"type", type}, {"normal", unit_vector(dim, dim - 1, 1.0)}, {"offset", 0.0}};
  else if (type == "graph_disk")
    def = {{"type", type},         {"center", filled(2, 0.0)}, {"radius", 1.0}, {"amplitude", 0.1},
           {"profile", "cosine"}, {"frequency", 3},                    {"beta", 1.0}};
  else throw ValidationError("[domain] type: unknown domain '" + type + "'");
  json out = merge("domain", def, given);
  for (const char* key : {"center", "normal"}) {
    if (!out.contains(key)) continue;
    out[key] = float_array(out[key], where("domain", key));
    if (static_cast<int>(out[key].size()) != dim)
      throw ValidationError(where("domain", key) + ": dimension does not match the kernel (d=" + std::to_string(dim) +
                            ")");
  }
  return out;
}

json resolve_source(const json& given, int dim) {
  json out = merge("source", {{"points", json::array()}, {"bumps", json::array()}}, given);
  for (const auto& [key, width] : {std::pair<const char*, int>{"points", dim + 1}, {"bumps", dim + 2}}) {
    json rows = json::array();
    for (const auto& row : out[key]) {
      json r = float_array(row, where("source", key));
      if (static_cast<int>(r.size()) != width)
        throw ValidationError(where("source", key) + ": each entry needs " + std::to_string(width) + " numbers");
      rows.push_back(r);
    }
    out[key] = rows;
  }
  return out;
}

json experiment_defaults(const std::string& sub, int dim) {
  if (sub == "cancel") return {{"xi_count", 360}, {"tolerance", 0.0}};
  if (sub == "psi")
    return {{"boundary_point", json::array()}, {"sign", 1}, {"rho_min", 0.01}, {"rho_max", 100.0}, {"count", 41}};
  if (sub == "conv") {
    return {{"grid_origin", filled(dim, -1.5)},
            {"grid_spacing", 0.1},
            {"grid_extents", filled(dim, 30)},
            {"piece_mode", "full"},
            {"piece_n", 0},
            {"binary", false}};
  }
  if (sub == "blowup")
    return {{"variant", "bounded"},         {"boundary_point", json::array()},
            {"n_list", {16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0}},
            {"offset", 0.0},                {"radial", true},
            {"cross_check_n", json::array()}, {"cross_check_tol", 0.01}};
  if (sub == "ratio")
    return {{"sampler", "point_masses"}, {"max_count", 8},  {"box", json::array()},
            {"zero_mean", false},        {"scale_cap", 64.0}, {"trials", 32}};
  if (sub == "besov" || sub == "interaction") return {{"n_lo", -2}, {"n_hi", 6}};
  if (sub == "chain") return {{"root_generation", 0}, {"root_index", json::array()}, {"delta", 0.2}, {"m_max", 20}};
  if (sub == "theorem41")
    return {{"n_list", {0, 1, 2, 3, 4, 5, 6}}, {"mode", "tripled"}, {"compute_lhs", true}};
  if (sub == "demo-gradient") return {{"levels", {6, 8, 10, 12, 14}}};
  return json::object();
}

json resolve_experiment(const std::string& sub, const json& given, const Domain& domain, int dim) {
  json e = merge("experiment", experiment_defaults(sub, dim), given);
  const auto at = [](const char* k) { return where("experiment", k); };
  if (sub == "cancel" && e["xi_count"].get<int>() < 1) throw ValidationError(at("xi_count") + ": must be positive");
  if (sub == "psi") {
    e["boundary_point"] = float_array(e["boundary_point"], at("boundary_point"));
    if (!(e["rho_min"].get<double>() > 0.0 && e["rho_max"].get<double>() > e["rho_min"].get<double>()))
      throw ValidationError(at("rho_min") + ": need 0 < rho_min < rho_max");
    if (e["count"].get<int>() < 2) throw ValidationError(at("count") + ": need at least 2 radii");
    if (std::abs(e["sign"].get<int>()) != 1) throw ValidationError(at("sign") + ": must be 1 or -1");
  }
  if (sub == "conv") {
    e["grid_origin"] = float_array(e["grid_origin"], at("grid_origin"));
    e["grid_extents"] = int_array(e["grid_extents"], at("grid_extents"));
    if (static_cast<int>(e["grid_origin"].size()) != dim) throw ValidationError(at("grid_origin") + ": wrong dimension");
    if (static_cast<int>(e["grid_extents"].size()) < dim)
      throw ValidationError(at("grid_extents") + ": wrong dimension");
    json ext = json::array();
    for (int i = 0; i < dim; ++i) {
      if (e["grid_extents"][i].get<int>() < 1) throw ValidationError(at("grid_extents") + ": must be positive");
      ext.push_back(e["grid_extents"][i]);
    }
    e["grid_extents"] = ext;
    if (!(e["grid_spacing"].get<double>() > 0.0)) throw ValidationError(at("grid_spacing") + ": must be positive");
    const std::string mode = e["piece_mode"];
    if (mode != "full" && mode != "single" && mode != "cumulative")
      throw ValidationError(at("piece_mode") + ": expected full, single or cumulative");
  }
  if (sub == "blowup") {
    const std::string v = e["variant"];
    if (v != "bounded" && v != "half_space" && v != "far_translation")
      throw ValidationError(at("variant") + ": expected bounded, half_space or far_translation");
    if (v == "bounded" && !domain.bounded()) throw ValidationError(at("variant") + ": bounded variant on an unbounded domain");
    if (v != "bounded" && domain.kind() != "half_space")
      throw ValidationError(at("variant") + ": half-space variants need a half-space domain");
    e["boundary_point"] = float_array(e["boundary_point"], at("boundary_point"));
    e["n_list"] = float_array(e["n_list"], at("n_list"));
    e["cross_check_n"] = float_array(e["cross_check_n"], at("cross_check_n"));
    if (e["n_list"].size() < 4) throw ValidationError(at("n_list") + ": needs at least 4 values for a fit");
    if (e["offset"].get<double>() == 0.0) e["offset"] = v == "bounded" ? 2.0 : 1.0;
    if (!(e["offset"].get<double>() > 0.0)) throw ValidationError(at("offset") + ": must be positive");
    if (v == "bounded" && e["boundary_point"].empty()) {
      Vec low(dim);
      low[dim - 1] = -4.0 * domain.diameter();
      e["boundary_point"] = domain.nearest_boundary_point(domain.bounding_box().center() + low).to_vector();
    }
  }
  if (sub == "ratio") {
    const std::string s = e["sampler"];
    if (s != "point_masses" && s != "boundary_bumps")
      throw ValidationError(at("sampler") + ": expected point_masses or boundary_bumps");
    if (e["max_count"].get<int>() < 1) throw ValidationError(at("max_count") + ": must be positive");
    if (e["trials"].get<int>() < 1) throw ValidationError(at("trials") + ": must be positive");
    e["box"] = float_array(e["box"], at("box"));
    if (!e["box"].empty() && static_cast<int>(e["box"].size()) != 2 * dim)
      throw ValidationError(at("box") + ": expected lower corner then upper corner");
    if (!domain.bounded() && !e["zero_mean"].get<bool>())
      throw ValidationError(at("zero_mean") + ": sampled functions on a half-space must have zero mean");
    if (s == "boundary_bumps" && dim != 2) throw ValidationError(at("sampler") + ": boundary bumps are planar only");
  }
  if (sub == "besov" || sub == "interaction") {
    if (e["n_hi"].get<int>() < e["n_lo"].get<int>()) throw ValidationError(at("n_hi") + ": must be >= n_lo");
  }
  if (sub == "chain") {
    e["root_index"] = int_array(e["root_index"], at("root_index"));
    if (!e["root_index"].empty() && static_cast<int>(e["root_index"].size()) != dim)
      throw ValidationError(at("root_index") + ": wrong dimension");
    const double delta = e["delta"].get<double>();
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError(at("delta") + ": must lie in (0, 1)");
    const int m = e["m_max"].get<int>();
    if (m < 0 || m > 40) throw ValidationError(at("m_max") + ": must lie in [0, 40]");
  }
  if (sub == "theorem41") {
    e["n_list"] = int_array(e["n_list"], at("n_list"));
    if (e["n_list"].empty()) throw ValidationError(at("n_list") + ": must not be empty");
    const std::string mode = e["mode"];
    if (mode != "tripled" && mode != "plain") throw ValidationError(at("mode") + ": expected tripled or plain");
  }
  if (sub == "demo-gradient") {
    e["levels"] = int_array(e["levels"], at("levels"));
    if (e["levels"].size() < 2) throw ValidationError(at("levels") + ": need at least 2 levels");
  }
  return e;
}

json resolve_numerics(const json& given) {
  json n = merge("numerics",
                 {{"tol", 1e-8},
                  {"method", "automatic"},
                  {"max_depth", 14},
                  {"cell_depth", 7},
                  {"cell_gauss", 3},
                  {"pv_level", 14},
                  {"truncation_radius", 0.0},
                  {"tail_constant", 0.0},
                  {"sphere_nodes", 4096},
                  {"psi_nodes", 1024},
                  {"conv_tol", 1e-10},
                  {"angular_nodes", 24}},
                 given);
  if (!(n["tol"].get<double>() > 0.0)) throw ValidationError("[numerics] tol: must be positive");
  const std::string m = n["method"];
  if (m != "automatic" && m != "plane" && m != "cells")
    throw ValidationError("[numerics] method: expected automatic, plane or cells");
  for (const char* k : {"max_depth", "cell_depth", "cell_gauss", "pv_level", "sphere_nodes", "psi_nodes", "angular_nodes"})
    if (n[k].get<int>() < 1) throw ValidationError(where("numerics", k) + ": must be positive");
  return n;
}

bool needs_source(const std::string& sub) {
  return sub == "conv" || sub == "besov" || sub == "interaction" || sub == "chain" || sub == "theorem41" ||
         sub == "demo-gradient";
}

}  // namespace

bool known_subcommand(const std::string& name) {
  for (const char* s : kSubcommands)
    if (name == s) return true;
  return false;
}

json parse_toml(const std::string& text, const std::string& source_name) {
  try {
    return from_toml(toml::parse(text, source_name));
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source_name << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw ValidationError(os.str());
  }
}

std::string config_hash(const json& snapshot) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : snapshot.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunConfig::hash() const { return config_hash(snapshot); }

RunConfig resolve_config(const std::string& subcommand, const json& raw, const Overrides& overrides,
                         const std::filesystem::path& base_dir) {
  if (!known_subcommand(subcommand)) throw ValidationError("unknown subcommand '" + subcommand + "'");
  if (!raw.is_object()) throw ValidationError("config: top level must be a table");
  static const std::set<std::string> top = {"seed", "kernel", "phi", "domain", "source", "experiment", "numerics"};
  for (const auto& [k, v] : raw.items())
    if (!top.count(k)) throw ValidationError("config: unknown top-level key '" + k + "'");
  const auto get = [&](const char* k) { return raw.contains(k) ? raw[k] : json(); };

  RunConfig cfg;
  cfg.subcommand = subcommand;
  if (raw.contains("seed")) {
    if (!raw["seed"].is_number_integer() || raw["seed"].get<std::int64_t>() < 0)
      throw ValidationError("config: seed must be a non-negative integer");
    cfg.seed = raw["seed"].get<std::uint64_t>();
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.threads) {
    if (*overrides.threads < 0) throw ValidationError("--threads must be non-negative");
    cfg.threads = *overrides.threads;
  }
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;

  json kernel = resolve_kernel(get("kernel"), subcommand, base_dir);
  const HomogeneousKernel k = make_kernel(kernel);
  json phi = resolve_phi(get("phi"), k, base_dir);
  const PhiIntegrand f = make_phi(phi);
  if (f.target_dim() != k.target_dim())
    throw ValidationError("[phi] acts on R^" + std::to_string(f.target_dim()) + " but the kernel takes values in R^" +
                          std::to_string(k.target_dim()));
  if (subcommand != "conv" && subcommand != "selftest") check_homogeneity(k.dim(), k.alpha(), f.p());

  json domain = resolve_domain(get("domain"), k.dim());
  const Domain omega = make_domain(domain);
  json source = resolve_source(get("source"), k.dim());
  if (needs_source(subcommand) && source["points"].empty() && source["bumps"].empty())
    throw ValidationError("[source] " + subcommand + " needs at least one point mass or bump");
  json experiment = resolve_experiment(subcommand, get("experiment"), omega, k.dim());
  json numerics = resolve_numerics(get("numerics"));
  if (overrides.tol) {
    if (!(*overrides.tol > 0.0)) throw ValidationError("--tol must be positive");
    numerics["tol"] = *overrides.tol;
  }

  cfg.snapshot = {{"subcommand", subcommand}, {"seed", cfg.seed},     {"kernel", kernel},
                  {"phi", phi},               {"domain", domain},     {"source", source},
                  {"experiment", experiment}, {"numerics", numerics}};
  return cfg;
}

RunConfig load_config(const std::string& subcommand, const std::optional<std::filesystem::path>& path,
                      const Overrides& overrides) {
  if (!path) return resolve_config(subcommand, json::object(), overrides, std::filesystem::current_path());
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw ValidationError("config: cannot open " + path->string());
  std::stringstream ss;
  ss << in.rdbuf();
  const json raw = parse_toml(ss.str(), path->string());
  return resolve_config(subcommand, raw, overrides, std::filesystem::absolute(*path).parent_path());
}

HomogeneousKernel make_kernel(const json& s) {
  const std::string type = s.at("type");
  if (type == "identity") return builtin::identity_kernel(s.at("dim").get<int>(), s.at("alpha").get<double>());
  if (type == "riesz_gradient") return builtin::riesz_gradient_kernel(s.at("dim").get<int>());
  if (type == "fourier") {
    std::vector<builtin::FourierSeries> comps;
    for (const auto& c : s.at("components")) comps.push_back(fourier_of(c));
    return builtin::fourier_kernel(s.at("alpha").get<double>(), std::move(comps));
  }
  if (type == "table")
    return builtin::table_kernel(s.at("alpha").get<double>(), SphereTable::load_csv(s.at("path").get<std::string>()));
  throw ValidationError("[kernel] type: unknown kernel '" + type + "'");
}

PhiIntegrand make_phi(const json& s) {
  const std::string type = s.at("type");
  if (type == "quadratic") {
    const auto m = s.at("matrix").get<std::vector<double>>();
    const int dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m.size()))));
    return builtin::quadratic_phi(dim, m);
  }
  if (type == "trace_free_quadratic") return builtin::trace_free_quadratic_phi();
  if (type == "norm_power") return builtin::norm_power_phi(s.at("target_dim").get<int>(), s.at("p").get<double>());
  if (type == "first_component")
    return builtin::first_component_phi(s.at("target_dim").get<int>(), s.at("p").get<double>());
  if (type == "angular") return builtin::angular_phi(s.at("p").get<double>(), fourier_of(s.at("series")));
  if (type == "table")
    return builtin::table_phi(s.at("p").get<double>(), SphereTable::load_csv(s.at("path").get<std::string>()));
  throw ValidationError("[phi] type: unknown integrand '" + type + "'");
}

Domain make_domain(const json& s) {
  const std::string type = s.at("type");
  if (type == "ball") return Domain::ball(Vec(s.at("center").get<std::vector<double>>()), s.at("radius").get<double>());
  if (type == "half_space")
    return Domain::half_space(Vec(s.at("normal").get<std::vector<double>>()), s.at("offset").get<double>());
  if (type == "graph_disk") {
    BoundaryProfile prof;
    const std::string kind = s.at("profile");
    if (kind == "cosine") prof.kind = BoundaryProfile::Kind::cosine;
    else if (kind == "holder") prof.kind = BoundaryProfile::Kind::holder;
    else throw ValidationError("[domain] profile: expected cosine or holder");
    prof.frequency = s.at("frequency").get<int>();
    prof.beta = s.at("beta").get<double>();
    return Domain::graph_disk(Vec(s.at("center").get<std::vector<double>>()), s.at("radius").get<double>(),
                              s.at("amplitude").get<double>(), prof);
  }
  throw ValidationError("[domain] type: unknown domain '" + type + "'");
}

SourceFunction make_source(const json& s, int dim) {
  SourceFunction f(dim);
  std::vector<PointMass> masses;
  for (const auto& row : s.at("points")) {
    const auto v = row.get<std::vector<double>>();
    masses.push_back({Vec(std::vector<double>(v.begin(), v.begin() + dim)), v[dim]});
  }
  if (!masses.empty()) f.add(SourceFunction::point_masses(std::move(masses)));
  for (const auto& row : s.at("bumps")) {
    const auto v = row.get<std::vector<double>>();
    if (!(v[dim] > 0.0)) throw ValidationError("[source] bumps: scale must be positive");
    f.add(SourceFunction::bump(Vec(std::vector<double>(v.begin(), v.begin() + dim)), v[dim], v[dim + 1]));
  }
  return f;
}

IntegrationSettings make_integration(const json& n, int threads) {
  IntegrationSettings st;
  st.tol = n.at("tol").get<double>();
  const std::string m = n.at("method");
  st.method = m == "plane"   ? IntegrationSettings::Method::plane
              : m == "cells" ? IntegrationSettings::Method::cells
                             : IntegrationSettings::Method::automatic;
  st.max_depth = n.at("max_depth").get<int>();
  st.cell_depth = n.at("cell_depth").get<int>();
  st.cell_gauss = n.at("cell_gauss").get<int>();
  st.pv_level = n.at("pv_level").get<int>();
  st.truncation_radius = n.at("truncation_radius").get<double>();
  st.tail_constant = n.at("tail_constant").get<double>();
  st.conv.tol = n.at("conv_tol").get<double>();
  st.conv.angular_nodes = n.at("angular_nodes").get<int>();
  st.threads = threads;
  return st;
}

}  // namespace philab
