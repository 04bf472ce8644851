// richwave <solve|plateau|asymptotics|stability|oracle|validate> --config <path> [--out <dir>] [--tol <float>]
//
// Exit codes: 0 all checks passed, 1 verification failures, 2 usage or
// config error, 3 numerical error. Failures go to stderr and failures.csv.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"

namespace fs = std::filesystem;
using namespace richwave;
using namespace richwave::cli;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void write_failures(const fs::path& out, const std::string& command, const std::vector<Failure>& failures) {
  std::ofstream f(out / "failures.csv", std::ios::binary);
  f << "command,check,detail\n";
  for (const auto& e : failures) {
    f << csv_field(command) << ',' << csv_field(e.check) << ',' << csv_field(e.detail) << '\n';
    std::fprintf(stderr, "FAIL %s %s: %s\n", command.c_str(), e.check.c_str(), e.detail.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  using Command = std::function<CommandResult(const ScenarioConfig&, const fs::path&, double)>;
  const std::map<std::string, Command> commands{{"solve", cmd_solve},         {"plateau", cmd_plateau},
                                                {"asymptotics", cmd_asymptotics}, {"stability", cmd_stability},
                                                {"oracle", cmd_oracle},       {"validate", cmd_validate}};

  CLI::App app{"Exact solutions and verification runs for linearly degenerate rich systems"};
  std::string command, config, out_dir;
  double tol = 0.0;
  app.add_option("command", command, "solve | plateau | asymptotics | stability | oracle | validate")
      ->required()
      ->check(CLI::IsMember({"solve", "plateau", "asymptotics", "stability", "oracle", "validate"}));
  app.add_option("--config", config, "scenario JSON file")->required();
  app.add_option("--out", out_dir, "output directory (default: config 'output' or ./richwave-out)");
  app.add_option("--tol", tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  ScenarioConfig cfg;
  fs::path out;
  try {
    cfg = load_scenario(config);
    out = !out_dir.empty() ? fs::path(out_dir) : fs::path(cfg.output.value_or("richwave-out"));
    fs::create_directories(out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  if (tol <= 0.0) tol = cfg.tolerance;

  CommandResult res;
  int code = 0;
  try {
    res = commands.at(command)(cfg, out, tol);
    code = res.failures.empty() ? 0 : kExitFailed;
  } catch (const ScenarioError& e) {
    res.failures.push_back({"config", e.what()});
    code = kExitConfig;
  } catch (const std::exception& e) {
    res.failures.push_back({"error", e.what()});
    code = kExitNumeric;
  }
  write_failures(out, command, res.failures);
  for (const auto& f : res.files) std::printf("%s\n", (out / f).string().c_str());
  std::printf("%s: %s (%zu failures)\n", command.c_str(), code == 0 ? "ok" : "FAILED", res.failures.size());
  return code;
}
