#pragma once

// JSON scenario files: one scenario per file, unknown keys rejected.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "richwave/richwave.hpp"

namespace richwave::cli {

using nlohmann::json;

struct Grid1d {
  double x_min = -5.0;
  double x_max = 5.0;
  std::size_t points = 201;

  std::vector<double> nodes() const {
    std::vector<double> xs(points);
    for (std::size_t k = 0; k < points; ++k)
      xs[k] = points == 1 ? x_min : x_min + (x_max - x_min) * static_cast<double>(k) / static_cast<double>(points - 1);
    return xs;
  }
};

struct Box {
  double t1, t2, A, B;
};

struct SolveBlock {
  std::vector<double> times;
  Grid1d grid;
  std::vector<Box> boxes;
  double residual_tol = 1e-8;
};

struct PlateauBlock {
  std::optional<double> L;
  std::vector<double> factors{1.1, 2.0};
  std::size_t samples = 32;
  double plateau_tol = 1e-9;
  double shift_tol = 1e-8;
};

struct AsymptoticsBlock {
  std::vector<double> times{5.0, 10.0, 20.0, 40.0, 80.0};
  Grid1d samples{-3.0, 3.0, 121};
  std::vector<std::size_t> components;  ///< empty: every component
  double cross_check_tol = 1e-8;
};

struct StabilityBlock {
  PiecewiseProfile perturbation;
  std::vector<double> amplitudes{0.1, 0.05, 0.025};
  std::vector<double> times = default_stability_times();
  double max_spread = 2.0;
};

struct OracleBlock {
  double T = 2.0;
  std::vector<std::size_t> grids{400, 800, 1600};
  double cfl = 0.9;
  double margin = 1.0;
  double ratio_lo = 1.4;
  double ratio_hi = 2.6;
};

struct ScenarioConfig {
  std::string name;
  std::string model;  ///< "bi" or "abi"
  double a = 1.0;
  PiecewiseProfile profile;
  double tolerance = kDefaultQuadratureTol;
  std::optional<std::string> output;
  std::optional<SolveBlock> solve;
  std::optional<PlateauBlock> plateau;
  std::optional<AsymptoticsBlock> asymptotics;
  std::optional<StabilityBlock> stability;
  std::optional<OracleBlock> oracle;

  RichSystem system() const { return model == "bi" ? model_bi(a) : model_abi(a); }
};

namespace detail {

inline void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ScenarioError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ScenarioError(where + ": unknown key '" + k + "'");
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ScenarioError(where + ": expected a number");
  return j.get<double>();
}

inline std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ScenarioError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ScenarioError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

inline Grid1d grid(const json& j, const std::string& where) {
  only_keys(j, where, {"x_min", "x_max", "points"});
  Grid1d g;
  if (j.contains("x_min")) g.x_min = number(j["x_min"], where + ".x_min");
  if (j.contains("x_max")) g.x_max = number(j["x_max"], where + ".x_max");
  if (j.contains("points")) g.points = count(j["points"], where + ".points");
  if (g.points == 0 || !(g.x_max >= g.x_min)) throw ScenarioError(where + ": need points >= 1 and x_max >= x_min");
  return g;
}

inline PiecewiseProfile profile(const json& j, const std::string& where, const std::filesystem::path& base,
                                std::size_t n) {
  only_keys(j, where, {"breakpoints", "file"});
  if (j.contains("breakpoints") == j.contains("file"))
    throw ScenarioError(where + ": give exactly one of 'breakpoints' or 'file'");
  PiecewiseProfile p;
  if (j.contains("file")) {
    if (!j["file"].is_string()) throw ScenarioError(where + ".file: expected a string");
    std::filesystem::path path = j["file"].get<std::string>();
    if (path.is_relative()) path = base / path;
    std::ifstream in(path);
    if (!in) throw ScenarioError(where + ": cannot open " + path.string());
    p = read_profile(in);
  } else {
    const json& rows = j["breakpoints"];
    if (!rows.is_array() || rows.empty()) throw ScenarioError(where + ".breakpoints: expected a non-empty array");
    std::vector<double> xs;
    std::vector<State> vs;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto row = numbers(rows[k], where + ".breakpoints[" + std::to_string(k) + "]");
      if (row.size() != n + 1)
        throw ScenarioError(where + ".breakpoints[" + std::to_string(k) + "]: expected x and " + std::to_string(n) +
                            " values");
      xs.push_back(row[0]);
      vs.emplace_back(std::span<const double>(row.data() + 1, n));
    }
    try {
      p = PiecewiseProfile(std::move(xs), std::move(vs));
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(where + ": " + e.what());
    }
  }
  if (p.components() != n)
    throw ScenarioError(where + ": profile has " + std::to_string(p.components()) + " components, model needs " +
                        std::to_string(n));
  return p;
}

}  // namespace detail

/// Parses a scenario; relative profile files resolve against base.
inline ScenarioConfig parse_scenario(const json& j, const std::filesystem::path& base = ".") {
  using namespace detail;
  only_keys(j, "scenario",
            {"name", "model", "profile", "tolerance", "output", "solve", "plateau", "asymptotics", "stability", "oracle"});
  ScenarioConfig c;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ScenarioError("name: expected a string");
    c.name = j["name"].get<std::string>();
  }
  if (!j.contains("model")) throw ScenarioError("scenario: missing 'model'");
  const json& m = j["model"];
  only_keys(m, "model", {"kind", "a"});
  if (!m.contains("kind") || !m["kind"].is_string()) throw ScenarioError("model.kind: expected \"bi\" or \"abi\"");
  c.model = m["kind"].get<std::string>();
  if (c.model != "bi" && c.model != "abi") throw ScenarioError("model.kind: expected \"bi\" or \"abi\"");
  if (m.contains("a")) c.a = number(m["a"], "model.a");
  RichSystem sys = [&] {
    try {
      return c.system();
    } catch (const std::exception& e) {
      throw ScenarioError(std::string("model: ") + e.what());
    }
  }();
  if (!j.contains("profile")) throw ScenarioError("scenario: missing 'profile'");
  c.profile = profile(j["profile"], "profile", base, sys.size());
  try {
    require_admissible(sys, c.profile);
  } catch (const DomainError& e) {
    throw ScenarioError(std::string("profile: ") + e.what());
  }
  if (j.contains("tolerance")) {
    c.tolerance = number(j["tolerance"], "tolerance");
    if (!(c.tolerance > 0.0)) throw ScenarioError("tolerance: must be positive");
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ScenarioError("output: expected a string");
    c.output = j["output"].get<std::string>();
  }

  if (j.contains("solve")) {
    const json& s = j["solve"];
    only_keys(s, "solve", {"times", "grid", "boxes", "residual_tol"});
    SolveBlock b;
    if (!s.contains("times") || !s.contains("grid")) throw ScenarioError("solve: needs 'times' and 'grid'");
    b.times = numbers(s["times"], "solve.times");
    for (double t : b.times)
      if (!(t >= 0.0)) throw ScenarioError("solve.times: times must be >= 0");
    b.grid = grid(s["grid"], "solve.grid");
    if (s.contains("boxes")) {
      if (!s["boxes"].is_array()) throw ScenarioError("solve.boxes: expected an array");
      for (std::size_t k = 0; k < s["boxes"].size(); ++k) {
        const auto v = numbers(s["boxes"][k], "solve.boxes[" + std::to_string(k) + "]");
        if (v.size() != 4 || !(v[1] > v[0]) || !(v[0] >= 0.0) || !(v[3] > v[2]))
          throw ScenarioError("solve.boxes[" + std::to_string(k) + "]: expected [t1, t2, A, B] with t2 > t1 >= 0, B > A");
        b.boxes.push_back({v[0], v[1], v[2], v[3]});
      }
    }
    if (s.contains("residual_tol")) b.residual_tol = number(s["residual_tol"], "solve.residual_tol");
    c.solve = b;
  }

  if (j.contains("plateau")) {
    const json& s = j["plateau"];
    only_keys(s, "plateau", {"L", "factors", "samples", "plateau_tol", "shift_tol"});
    PlateauBlock b;
    if (s.contains("L")) b.L = number(s["L"], "plateau.L");
    if (s.contains("factors")) b.factors = numbers(s["factors"], "plateau.factors");
    for (double f : b.factors)
      if (!(f > 1.0)) throw ScenarioError("plateau.factors: each factor must exceed 1");
    if (s.contains("samples")) b.samples = count(s["samples"], "plateau.samples");
    if (s.contains("plateau_tol")) b.plateau_tol = number(s["plateau_tol"], "plateau.plateau_tol");
    if (s.contains("shift_tol")) b.shift_tol = number(s["shift_tol"], "plateau.shift_tol");
    c.plateau = b;
  }

  if (j.contains("asymptotics")) {
    const json& s = j["asymptotics"];
    only_keys(s, "asymptotics", {"times", "samples", "components", "cross_check_tol"});
    AsymptoticsBlock b;
    if (s.contains("times")) b.times = numbers(s["times"], "asymptotics.times");
    if (s.contains("samples")) b.samples = grid(s["samples"], "asymptotics.samples");
    if (s.contains("components")) {
      if (!s["components"].is_array()) throw ScenarioError("asymptotics.components: expected an array");
      for (const auto& v : s["components"]) {
        const std::size_t i = count(v, "asymptotics.components");
        if (i >= sys.size()) throw ScenarioError("asymptotics.components: index out of range");
        b.components.push_back(i);
      }
    }
    if (s.contains("cross_check_tol")) b.cross_check_tol = number(s["cross_check_tol"], "asymptotics.cross_check_tol");
    c.asymptotics = b;
  }

  if (j.contains("stability")) {
    const json& s = j["stability"];
    only_keys(s, "stability", {"perturbation", "amplitudes", "times", "max_spread"});
    if (!s.contains("perturbation")) throw ScenarioError("stability: missing 'perturbation'");
    StabilityBlock b;
    b.perturbation = profile(s["perturbation"], "stability.perturbation", base, sys.size());
    if (s.contains("amplitudes")) b.amplitudes = numbers(s["amplitudes"], "stability.amplitudes");
    if (s.contains("times")) b.times = numbers(s["times"], "stability.times");
    if (s.contains("max_spread")) b.max_spread = number(s["max_spread"], "stability.max_spread");
    c.stability = b;
  }

  if (j.contains("oracle")) {
    const json& s = j["oracle"];
    only_keys(s, "oracle", {"T", "grids", "cfl", "margin", "ratio_lo", "ratio_hi"});
    OracleBlock b;
    if (s.contains("T")) b.T = number(s["T"], "oracle.T");
    if (s.contains("grids")) {
      b.grids.clear();
      if (!s["grids"].is_array()) throw ScenarioError("oracle.grids: expected an array");
      for (const auto& v : s["grids"]) b.grids.push_back(count(v, "oracle.grids"));
    }
    if (s.contains("cfl")) b.cfl = number(s["cfl"], "oracle.cfl");
    if (s.contains("margin")) b.margin = number(s["margin"], "oracle.margin");
    if (s.contains("ratio_lo")) b.ratio_lo = number(s["ratio_lo"], "oracle.ratio_lo");
    if (s.contains("ratio_hi")) b.ratio_hi = number(s["ratio_hi"], "oracle.ratio_hi");
    if (!(b.T > 0.0) || !(b.cfl > 0.0 && b.cfl <= 1.0)) throw ScenarioError("oracle: need T > 0 and 0 < cfl <= 1");
    c.oracle = b;
  }
  return c;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("config " + path.string() + ": " + e.what());
  }
  return parse_scenario(j, path.parent_path());
}

}  // namespace richwave::cli
