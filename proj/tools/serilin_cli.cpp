// Experiment runner: `serilin list`, `serilin run <preset|config.json>...`, `serilin schema`.
#include "serilin/errors.hpp"
#include "serilin/experiments.hpp"
#include "serilin/io.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

namespace {

using nlohmann::json;
using namespace serilin;

constexpr int kExitSchema = 2;
constexpr int kExitSolver = 3;
constexpr int kExitOther = 1;

struct Failure {
  int code;
  json body;
};

Failure classify(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    return {kExitSchema, {{"kind", "schema"}, {"message", e.what()}}};
  } catch (const SingularForcingError& e) {
    return {kExitSolver, {{"kind", "singular-forcing"}, {"message", e.what()}, {"order", e.order()}, {"point", e.point()}}};
  } catch (const SolverError& e) {
    return {kExitSolver, {{"kind", "solver"}, {"message", e.what()}, {"order", e.order()}, {"step", e.step()}}};
  } catch (const ArgumentError& e) {
    return {kExitSchema, {{"kind", "argument"}, {"message", e.what()}}};
  } catch (const DomainError& e) {
    return {kExitSchema, {{"kind", "domain"}, {"message", e.what()}}};
  } catch (const InternalError& e) {
    return {kExitSolver, {{"kind", "internal"}, {"message", e.what()}}};
  } catch (const std::exception& e) {
    return {kExitOther, {{"kind", "unexpected"}, {"message", e.what()}}};
  }
}

json load_target(const std::string& target) {
  if (const Preset* p = find_preset(target)) return p->config;
  if (!std::filesystem::exists(target)) throw ConfigError("'" + target + "' is neither a preset nor a readable file");
  try {
    return read_json(target);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Series solutions of nonlinear advection-diffusion: experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SERILIN_VERSION));

  auto* list = app.add_subcommand("list", "List bundled presets");
  bool listJson = false;
  list->add_flag("--json", listJson, "Print presets with their default configs as JSON");

  auto* schema = app.add_subcommand("schema", "Print the run-config JSON schema");

  auto* run = app.add_subcommand("run", "Run presets or config files");
  std::vector<std::string> targets;
  std::string outDir = "results";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  run->add_option("targets", targets, "Preset names or config.json paths")->required();
  run->add_option("--out", outDir, "Output directory (SERILIN_OUT overrides)");
  run->add_option("--seed", seed, "Seed override for random forcing");
  run->add_option("--jobs", jobs, "Worker threads for independent targets")->check(CLI::Range(1u, 256u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitSchema;
  }

  if (*list) {
    if (listJson) {
      json out = json::array();
      for (const Preset& p : presets()) out.push_back({{"name", p.name}, {"description", p.description}, {"config", p.config}});
      std::cout << out.dump(2) << '\n';
    } else {
      for (const Preset& p : presets()) std::cout << p.name << "  " << p.description << '\n';
    }
    return 0;
  }
  if (*schema) {
    std::cout << config_schema().dump(2) << '\n';
    return 0;
  }

  if (const char* env = std::getenv("SERILIN_OUT"); env && *env) outDir = env;

  // Validate everything before running anything.
  std::vector<json> configs;
  for (const auto& t : targets) {
    try {
      configs.push_back(normalize_config(load_target(t)));
    } catch (...) {
      Failure f = classify(std::current_exception());
      f.body["target"] = t;
      std::cerr << json{{"error", f.body}}.dump() << '\n';
      return f.code;
    }
  }

  std::mutex ioMutex;
  std::atomic<std::size_t> next{0};
  std::vector<int> codes(configs.size(), 0);
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      const std::filesystem::path dir = std::filesystem::path(outDir) / configs[i]["name"].get<std::string>();
      try {
        const RunOutcome out = run_experiment(configs[i], dir, seed);
        std::lock_guard lock(ioMutex);
        std::cout << json{{"target", targets[i]},
                          {"status", "ok"},
                          {"directory", dir.string()},
                          {"summary", out.summary},
                          {"warnings", out.warnings}}
                         .dump()
                  << '\n';
      } catch (...) {
        Failure f = classify(std::current_exception());
        f.body["target"] = targets[i];
        codes[i] = f.code;
        const json err{{"error", f.body}};
        try {
          std::filesystem::create_directories(dir);
          write_json(dir / "error.json", err);
        } catch (...) {
        }
        std::lock_guard lock(ioMutex);
        std::cerr << err.dump() << '\n';
      }
    }
  };
  const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(configs.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (int c : codes)
    if (c != 0) return c;
  return 0;
}
