#pragma once

// The six CLI commands. Each writes CSV files into an output directory and
// returns the list of verification failures; exceptions signal hard errors.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "richwave/richwave.hpp"
#include "scenario_config.hpp"

namespace richwave::cli {

struct Failure {
  std::string check;
  std::string detail;
};

struct CommandResult {
  std::vector<Failure> failures;
  std::vector<std::string> files;
};

/// Shortest decimal form, used in file names.
inline std::string short_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Csv {
 public:
  Csv(const std::filesystem::path& path, const std::vector<std::string>& header, CommandResult& res)
      : out_(path, std::ios::binary) {
    if (!out_) throw ScenarioError("cannot write " + path.string());
    res.files.push_back(path.filename().string());
    row(header);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) out_ << (k ? "," : "") << csv_field(fields[k]);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline std::string fmt(double v) { return format_number(v); }
inline std::string fmt(std::size_t v) { return std::to_string(v); }
inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline std::vector<std::string> component_names(std::size_t n, const std::string& prefix = "w") {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

template <class Block>
const Block& need(const std::optional<Block>& b, const char* name) {
  if (!b) throw ScenarioError(std::string("config has no '") + name + "' block");
  return *b;
}

inline CommandResult cmd_solve(const ScenarioConfig& cfg, const std::filesystem::path& out, double tol) {
  const SolveBlock& blk = need(cfg.solve, "solve");
  CommandResult res;
  const LagrangianSolution sol(cfg.system(), cfg.profile, tol);
  const std::size_t n = sol.system().size();
  const auto xs = blk.grid.nodes();

  for (double t : blk.times) {
    std::vector<std::string> header{"x"};
    for (auto& s : component_names(n)) header.push_back(s);
    Csv csv(out / ("solution_t" + short_number(t) + ".csv"), header, res);
    std::optional<TimeSlice> slice;
    if (t > 0.0) {
      try {
        slice.emplace(sol.slice(t));
      } catch (const std::exception& e) {
        res.failures.push_back({"solve-slice", "t=" + fmt(t) + ": " + e.what()});
      }
    }
    for (double x : xs) {
      std::vector<std::string> row{fmt(x)};
      try {
        if (t > 0.0 && !slice) throw std::runtime_error("no slice");
        const State w = t == 0.0 ? sol.initial()(x) : (*slice)(x);
        for (std::size_t i = 0; i < n; ++i) row.push_back(fmt(w[i]));
      } catch (const std::exception& e) {
        row.resize(1);
        for (std::size_t i = 0; i < n; ++i) row.push_back("nan");
        if (slice) res.failures.push_back({"solve-cell", "t=" + fmt(t) + " x=" + fmt(x) + ": " + e.what()});
      }
      csv.row(row);
    }
  }

  std::vector<std::string> header{"t1", "t2", "A", "B", "conservation"};
  for (auto& s : component_names(n, "entropy_")) header.push_back(s);
  header.push_back("passed");
  Csv csv(out / "residuals.csv", header, res);
  for (const Box& b : blk.boxes) {
    std::vector<std::string> row{fmt(b.t1), fmt(b.t2), fmt(b.A), fmt(b.B)};
    try {
      const auto r = sol.weak_residuals(b.t1, b.t2, b.A, b.B);
      bool ok = true;
      for (double v : r) {
        row.push_back(fmt(v));
        ok = ok && v <= blk.residual_tol;
      }
      row.push_back(yes_no(ok));
      if (!ok)
        res.failures.push_back({"weak-residual", "box [" + fmt(b.t1) + "," + fmt(b.t2) + "]x[" + fmt(b.A) + "," +
                                                     fmt(b.B) + "] exceeds " + fmt(blk.residual_tol)});
    } catch (const std::exception& e) {
      for (std::size_t k = 0; k <= n; ++k) row.push_back("nan");
      row.push_back("no");
      res.failures.push_back({"weak-residual", e.what()});
    }
    csv.row(row);
  }
  return res;
}

inline CommandResult cmd_plateau(const ScenarioConfig& cfg, const std::filesystem::path& out, double tol) {
  const PlateauBlock& blk = need(cfg.plateau, "plateau");
  CommandResult res;
  const LagrangianSolution sol(cfg.system(), cfg.profile, tol);
  const WavePattern pat = blk.L ? WavePattern(sol, *blk.L) : WavePattern(sol);
  const std::size_t n = sol.system().size();

  {
    Csv csv(out / "intersections.csv", {"p", "q", "t_pq"}, res);
    for (const auto& p : pat.table().pairs) csv.row({fmt(p.p + 1), fmt(p.q + 1), fmt(p.t)});
  }
  {
    Csv csv(out / "pattern.csv", {"key", "value"}, res);
    csv.row({"L", fmt(pat.L())});
    csv.row({"t_L", fmt(pat.t_L())});
    csv.row({"families", fmt(pat.families())});
    for (std::size_t q = 0; q < pat.families(); ++q)
      csv.row({"wave_speed_" + std::to_string(q + 1), fmt(pat.wave_speed(q))});
  }
  {
    std::vector<std::string> header{"plateau"};
    for (auto& s : component_names(n)) header.push_back(s);
    Csv csv(out / "plateaus.csv", header, res);
    for (std::size_t r = 0; r < pat.plateaus().size(); ++r) {
      std::vector<std::string> row{fmt(r)};
      for (std::size_t i = 0; i < n; ++i) row.push_back(fmt(pat.plateau(r)[i]));
      csv.row(row);
    }
  }

  Csv ver(out / "verification.csv",
          {"factor", "t", "t_shift", "ordered", "max_plateau_error", "max_shift_error", "passed"}, res);
  Csv dom(out / "domains.csv", {"t", "domain", "samples", "max_error", "tolerance", "passed"}, res);
  if (!pat.table().has_intersections()) return res;
  for (double f : blk.factors) {
    const double t = f * pat.t_L();
    const auto rep = verify_decomposition(sol, pat, t, blk.samples, -1.0, blk.plateau_tol, blk.shift_tol);
    ver.row({fmt(f), fmt(rep.t), fmt(rep.t_shift), yes_no(rep.ordered), fmt(rep.max_plateau_error),
             fmt(rep.max_shift_error), yes_no(rep.passed())});
    for (const auto& c : rep.checks)
      dom.row({fmt(rep.t), to_string(c.label), fmt(c.samples), fmt(c.max_error), fmt(c.tolerance), yes_no(c.passed())});
    if (!rep.passed()) res.failures.push_back({"plateau-verification", "t = " + fmt(f) + " t_L"});
  }
  return res;
}

inline CommandResult cmd_asymptotics(const ScenarioConfig& cfg, const std::filesystem::path& out, double tol) {
  const AsymptoticsBlock& blk = need(cfg.asymptotics, "asymptotics");
  CommandResult res;
  const LagrangianSolution sol(cfg.system(), cfg.profile, tol);
  const auto& sys = sol.system();
  std::vector<std::size_t> comps = blk.components;
  if (comps.empty())
    for (std::size_t i = 0; i < sys.size(); ++i) comps.push_back(i);
  const auto xs = blk.samples.nodes();

  Csv cross(out / "crosscheck.csv", {"component", "route", "max_abs_diff", "tolerance", "passed"}, res);
  for (std::size_t i : comps) {
    const std::string tag = std::to_string(i + 1);
    const ShapeFunction shape = build_shape_generic(sol, i);
    {
      Csv csv(out / ("shape_" + tag + ".csv"), {"x", "psi", "psi_prime", "phi"}, res);
      for (double x : xs) csv.row({fmt(x), fmt(shape(x)), fmt(shape.slope(x)), fmt(shape.inverse(x))});
    }
    {
      const DecayReport rep = decay_curve(sol, shape, blk.times);
      std::vector<std::string> header{"t"};
      for (std::size_t c : rep.components) header.push_back("d" + std::to_string(c + 1));
      header.push_back("total");
      Csv csv(out / ("decay_" + tag + ".csv"), header, res);
      for (std::size_t k = 0; k < rep.times.size(); ++k) {
        std::vector<std::string> row{fmt(rep.times[k])};
        for (double d : rep.distances[k]) row.push_back(fmt(d));
        row.push_back(fmt(rep.totals[k]));
        csv.row(row);
      }
    }

    std::optional<ShapeFunction> model;
    try {
      if (sys.kind() != ModelKind::generic) {
        const auto slots = born_infeld_slots(sys);
        if (i == slots.mu) model = bi_shape(sol, BiSide::slow);
        else if (i == slots.lambda) model = bi_shape(sol, BiSide::fast);
        else if (sys.kind() == ModelKind::augmented_born_infeld) model = abi_shape(sol);
      }
    } catch (const OrderingError& e) {
      cross.row({tag, "model", "", fmt(blk.cross_check_tol), "n/a"});
      continue;
    }
    if (!model) continue;
    double gap = 0.0;
    for (double x : xs) gap = std::max(gap, std::abs(shape(x) - (*model)(x)));
    const bool ok = gap <= blk.cross_check_tol;
    cross.row({tag, to_string(model->route), fmt(gap), fmt(blk.cross_check_tol), yes_no(ok)});
    if (!ok) res.failures.push_back({"shape-crosscheck", "component " + tag + " vs " + to_string(model->route)});
  }
  return res;
}

inline CommandResult cmd_stability(const ScenarioConfig& cfg, const std::filesystem::path& out, double tol) {
  const StabilityBlock& blk = need(cfg.stability, "stability");
  CommandResult res;
  const RichSystem sys = cfg.system();
  const auto sweep = stability_sweep(sys, cfg.profile, blk.perturbation, blk.amplitudes, blk.times, tol);
  const std::size_t n = sys.size();

  std::vector<std::string> header{"amplitude", "R0", "t", "R", "ratio"};
  for (auto& s : component_names(n, "R_")) header.push_back(s);
  Csv csv(out / "stability.csv", header, res);
  Csv lem(out / "sensitivity.csv",
          {"amplitude", "R0", "sup_z0", "sup_x0", "sup_compose", "ratio_z0", "ratio_x0", "ratio_compose"}, res);
  for (const auto& r : sweep.reports) {
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      std::vector<std::string> row{fmt(r.amplitude), fmt(r.R0), fmt(r.times[k]), fmt(r.R[k]), fmt(r.ratio(k))};
      for (double v : r.R_components[k]) row.push_back(fmt(v));
      csv.row(row);
      if (r.times[k] == 0.0 && r.R[k] != r.R0)
        res.failures.push_back({"stability-initial", "R_0 != R0 at amplitude " + fmt(r.amplitude)});
    }
    const auto& l = r.sensitivity;
    lem.row({fmt(r.amplitude), fmt(l.R0), fmt(l.sup_z0), fmt(l.sup_x0), fmt(l.sup_compose), fmt(l.ratio_z0),
             fmt(l.ratio_x0), fmt(l.ratio_compose)});
  }
  {
    Csv sp(out / "spread.csv", {"t", "spread"}, res);
    for (std::size_t k = 0; k < sweep.spread.size(); ++k) sp.row({fmt(blk.times[k]), fmt(sweep.spread[k])});
  }
  Csv sum(out / "summary.csv", {"key", "value"}, res);
  sum.row({"max_spread", fmt(sweep.max_spread())});
  sum.row({"c_hat_spread", fmt(sweep.c_hat_spread)});
  sum.row({"monotone", yes_no(sweep.monotone)});
  if (!(sweep.max_spread() < blk.max_spread))
    res.failures.push_back({"stability-spread", "max spread " + fmt(sweep.max_spread()) + " >= " + fmt(blk.max_spread)});
  return res;
}

inline CommandResult cmd_oracle(const ScenarioConfig& cfg, const std::filesystem::path& out, double tol) {
  const OracleBlock& blk = need(cfg.oracle, "oracle");
  CommandResult res;
  const LagrangianSolution sol(cfg.system(), cfg.profile, tol);
  const auto tab = run_and_compare(sol, blk.T, blk.grids, blk.margin, blk.cfl);
  Csv csv(out / "oracle.csv", {"J", "dx", "l1_error", "ratio", "order"}, res);
  for (const auto& r : tab.rows) csv.row({fmt(r.J), fmt(r.dx), fmt(r.error), fmt(r.ratio), fmt(r.order)});
  const bool ok = tab.first_order(blk.ratio_lo, blk.ratio_hi);
  Csv sum(out / "summary.csv", {"key", "value"}, res);
  sum.row({"T", fmt(tab.T)});
  sum.row({"x_min", fmt(tab.x_min)});
  sum.row({"x_max", fmt(tab.x_max)});
  sum.row({"first_order", yes_no(ok)});
  if (!ok) res.failures.push_back({"oracle-order", "errors not decreasing with ratios in [" + fmt(blk.ratio_lo) + ", " +
                                                       fmt(blk.ratio_hi) + "]"});
  return res;
}

inline CommandResult cmd_validate(const ScenarioConfig& cfg, const std::filesystem::path& out, double) {
  CommandResult res;
  const RichSystem sys = cfg.system();
  std::vector<State> probes = cfg.profile.values();
  const auto diag = validate_system(sys, probes);
  Csv csv(out / "validate.csv", {"check", "probe", "passed", "value", "detail"}, res);
  for (const auto& e : diag.entries) {
    csv.row({e.check, fmt(e.probe), yes_no(e.passed), fmt(e.value), e.detail});
    if (!e.passed) res.failures.push_back({e.check, "probe " + fmt(e.probe) + (e.detail.empty() ? "" : ": " + e.detail)});
  }
  return res;
}

}  // namespace richwave::cli
