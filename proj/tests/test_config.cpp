#include "serilin/experiments.hpp"
#include "serilin/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace serilin;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("serilin-test-" + tag + "-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

json base(const std::string& experiment) { return {{"schema_version", 1}, {"experiment", experiment}}; }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("presets normalize") {
    CHECK(presets().size() == 10);
    for (const Preset& p : presets()) {
      const json n = normalize_config(p.config);
      CHECK(n["name"] == p.name);
      CHECK(normalize_config(n) == n);
      CHECK(find_preset(p.name) == &p);
    }
    CHECK(find_preset("missing") == nullptr);
  }

  TEST_CASE("defaults are filled") {
    const json n = normalize_config(base("dirichlet"));
    CHECK(n["cells"] == 2048);
    CHECK(n["norm"] == "l1");
    CHECK(n["seed"] == 0);
    const json f = normalize_config(base("fem-evolution"));
    CHECK(f["cases"][0]["refeed_every"] == 0);
    CHECK(f["cases"][0]["half_width"] == 6.0);
  }

  TEST_CASE("invalid configs are rejected") {
    CHECK_THROWS_AS(normalize_config(json::array()), ConfigError);
    CHECK_THROWS_AS(normalize_config(json{{"experiment", "dirichlet"}}), ConfigError);
    CHECK_THROWS_AS(normalize_config(json{{"schema_version", 2}, {"experiment", "dirichlet"}}), ConfigError);
    CHECK_THROWS_AS(normalize_config(base("nope")), ConfigError);
    auto bad = [](json c, const std::string& key, json v) {
      c[key] = std::move(v);
      return c;
    };
    CHECK_THROWS_AS(normalize_config(bad(base("dirichlet"), "bogus", 1)), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("dirichlet"), "cells", "many")), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("dirichlet"), "cells", 12.5)), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("dirichlet"), "cells", 4)), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("dirichlet"), "p_values", json::array())), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("dirichlet"), "p_values", {1.0})), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("dirichlet"), "series", {"other"})), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("cosine-squared"), "grid_size", 500)), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("cosine-squared"), "dealias", 1)), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("fem-evolution"), "cases", {json{{"q", 1}}})), ConfigError);
    CHECK_THROWS_AS(normalize_config(bad(base("delta-ic"), "seed", -1)), ConfigError);
  }

  TEST_CASE("schema lists every experiment") {
    const json s = config_schema();
    CHECK(s["$schema"] == "https://json-schema.org/draft/2020-12/schema");
    const auto names = s["properties"]["experiment"]["enum"];
    CHECK(names.size() == 7);
    CHECK(s["oneOf"].size() == names.size());
    for (const auto& v : s["oneOf"]) {
      CHECK(v["additionalProperties"] == false);
      CHECK(v["properties"].contains("seed"));
    }
    for (const Preset& p : presets())
      CHECK(std::find(names.begin(), names.end(), p.config["experiment"]) != names.end());
  }

  TEST_CASE("number formatting round-trips") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-300, 300);
    for (int i = 0; i < 1000; ++i) {
      const double v = std::ldexp(mant(rng), ex(rng));
      CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  }

  TEST_CASE("runs are deterministic") {
    const std::vector<json> configs = {
        [] {
          json c = base("dirichlet");
          c["cells"] = 64;
          c["order"] = 4;
          c["p_values"] = {2.5};
          return c;
        }(),
        [] {
          json c = base("delta-ic");
          c["points"] = 101;
          c["order"] = 3;
          return c;
        }(),
        [] {
          json c = base("turbulence");
          c["grid_size"] = 64;
          c["k_max"] = 16;
          c["fit_lo"] = 2;
          c["fit_hi"] = 20;
          c["dt"] = 1e-3;
          c["t_final"] = 0.05;
          c["seed"] = 9;
          return c;
        }(),
        [] {
          json c = base("fem-evolution");
          c["t_final"] = 0.1;
          c["dx"] = 0.05;
          c["cases"] = {json{{"p", 3.0}, {"order", 2}}};
          return c;
        }()};
    for (const json& c : configs) {
      TempDir a("a"), b("b");
      const RunOutcome ra = run_experiment(c, a.path), rb = run_experiment(c, b.path);
      REQUIRE(!ra.artifacts.empty());
      CHECK(ra.artifacts == rb.artifacts);
      CHECK(ra.summary == rb.summary);
      for (const auto& name : ra.artifacts) CHECK(slurp(a.path / name) == slurp(b.path / name));
      const json manifest = json::parse(slurp(a.path / "manifest.json"));
      CHECK(manifest["config"] == normalize_config(c));
    }
  }

  TEST_CASE("seed override changes the forcing") {
    json c = base("turbulence");
    c["grid_size"] = 64;
    c["k_max"] = 16;
    c["fit_lo"] = 2;
    c["fit_hi"] = 20;
    c["dt"] = 1e-3;
    c["t_final"] = 0.02;
    TempDir a("s1"), b("s2");
    const RunOutcome ra = run_experiment(c, a.path, 1), rb = run_experiment(c, b.path, 2);
    CHECK(json::parse(slurp(a.path / "manifest.json"))["seed"] == 1);
    CHECK(ra.summary != rb.summary);
  }
}
