// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bendbeam/error.hpp"
#include "bendbeam/scenario.hpp"

using namespace bendbeam;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal() {
  return json::parse(R"({
    "units": "SI",
    "name": "mini",
    "frequencies_hz": [150e9],
    "z_list_m": [0.0, 1.0, 2.0],
    "sources": [{
      "name": "s",
      "kind": "footprint",
      "aperture": {"x_min_m": -0.1, "x_max_m": 0.0, "y_width_m": 0.1},
      "beams": [{"trajectory": {"kind": "parabolic", "beta_per_m": 0.01, "x0_m": 0.0, "z0_m": 0.0}}]
    }],
    "metrics": {"enabled": ["lobe_track", "field_slices"]}
  })");
}

std::string pointer_of(const json& doc) {
  try {
    parse_scenario(doc.dump());
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "<accepted>";
}

fs::path tmp(const std::string& leaf) {
  const fs::path p = fs::path(BENDBEAM_TEST_TMP) / "scenario" / leaf;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string exe = BENDBEAM_CLI;
  if (exe.empty()) return -1;
  const std::string cmd = "\"" + exe + "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(rc);
#else
  return rc;
#endif
}

}  // namespace

TEST_CASE("minimal config parses") {
  const Scenario sc = parse_scenario(minimal().dump());
  CHECK(sc.name == "mini");
  CHECK(sc.sources.size() == 1);
  CHECK(sc.z_list_m.size() == 3);
}

TEST_CASE("validation errors carry the offending pointer") {
  json d = minimal();
  d.erase("units");
  CHECK(pointer_of(d) == "/units");

  d = minimal();
  d["units"] = "imperial";
  CHECK(pointer_of(d) == "/units");

  d = minimal();
  d["colour"] = "red";
  CHECK(pointer_of(d) == "/colour");

  d = minimal();
  d["sources"][0]["aperture"]["x_mim_m"] = 1.0;
  CHECK(pointer_of(d) == "/sources/0/aperture/x_mim_m");

  d = minimal();
  d["z_list_m"] = json::array();
  CHECK(pointer_of(d) == "/z_list_m");

  d = minimal();
  d["z_list_m"] = {2.0, 1.0};
  CHECK(pointer_of(d).rfind("/z_list_m", 0) == 0);

  d = minimal();
  d["frequencies_hz"] = {-1.0};
  CHECK(pointer_of(d).rfind("/frequencies_hz", 0) == 0);

  d = minimal();
  d["sources"][0]["beams"][0]["trajectory"]["kind"] = "spiral";
  CHECK(pointer_of(d) == "/sources/0/beams/0/trajectory/kind");

  d = minimal();
  d["metrics"]["enabled"] = {"nonsense"};
  CHECK(pointer_of(d).rfind("/metrics/enabled", 0) == 0);

  d = minimal();
  d["sweep"] = {{"pointer", "/sweep/values"}, {"values", {1}}};
  CHECK(pointer_of(d) == "/sweep/pointer");

  d = minimal();
  d["sweep"] = {{"pointer", "/no/such/key"}, {"values", {1}}};
  CHECK(pointer_of(d) == "/sweep/pointer");

  CHECK_THROWS_AS(parse_scenario("{ not json"), ValidationError);
}

TEST_CASE("array sources") {
  json d = minimal();
  d["sources"][0]["kind"] = "array";
  d["sources"][0]["array"] = {{"spacing_wavelengths", 0.5}, {"bit_depth", 2}};
  const Scenario sc = parse_scenario(d.dump());
  CHECK(sc.sources[0].kind == SourceKind::array);
  CHECK(sc.sources[0].array.bit_depth == 2);

  d["sources"][0]["array"]["spacing_wavelengths"] = 0.0;
  CHECK(pointer_of(d) == "/sources/0/array/spacing_wavelengths");

  d["sources"][0]["array"]["spacing_wavelengths"] = 0.5;
  d["sources"][0]["array"]["active_fraction"] = 1.5;
  CHECK(pointer_of(d) == "/sources/0/array/active_fraction");

  d["sources"][0]["array"].erase("active_fraction");
  const std::string csv = codeword_csv(parse_scenario(d.dump()));
  CHECK(csv.rfind("element_index,x_m,amplitude,phase_rad,active\n", 0) == 0);
  // 0.1 m at lambda/2 spacing
  const auto lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines - 1 == 101);

  CHECK_THROWS_AS(codeword_csv(parse_scenario(minimal().dump())), ValidationError);
}

TEST_CASE("preset registry") {
  const auto& ps = list_presets();
  CHECK(ps.size() >= 15);
  bool found = false;
  for (const PresetInfo& p : ps) {
    if (p.name == "fig4") {
      found = true;
      CHECK(p.description == "blockage resilience sweep");
    }
    CHECK_NOTHROW(parse_scenario(preset_config(p.name)));
  }
  CHECK(found);
  try {
    preset_config("fig99");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("fig3b") != std::string::npos);
    CHECK(msg.find("fig12") != std::string::npos);
  }
}

TEST_CASE("reduced-resolution mode") {
  Scenario sc = parse_scenario(preset_config("fig9a"));
  sc.metrics.realizations = 100;
  sc.metrics.max_exported_slices = 16;
  apply_reduced_resolution(sc);
  CHECK(sc.z_list_m.size() <= 12);
  CHECK(sc.metrics.realizations <= 8);
  CHECK(sc.metrics.max_exported_slices <= 3);
  CHECK(sc.reduced);
}

TEST_CASE("manifest carries derived quantities") {
  for (const auto& [name, zmax] : {std::pair{"fig9a", 15.811388300841896}, std::pair{"fig3b", 24.494897427831781}}) {
    Scenario sc = parse_scenario(preset_config(name));
    sc.reduced = true;
    const RunSummary r = run_scenario(sc, tmp(name));
    const json m = json::parse(r.manifest_json);
    CHECK(m == json::parse(slurp(r.directory / "manifest.json")));
    for (const char* k : {"config", "derived", "files", "grids", "notes", "run", "source_index", "summary", "tool", "version"})
      CHECK(m.contains(k));
    const json& b = m["derived"][0]["sources"][0]["beams"][0];
    CHECK(b["z_max_m"].get<double>() == doctest::Approx(zmax).epsilon(1e-9));
    CHECK(m["run"]["precision"] == "reduced");
    CHECK(m["run"]["z_list_m"].size() <= 12);
    for (const auto& f : m["files"]) CHECK(fs::exists(r.directory / f.get<std::string>()));
  }
}

TEST_CASE("runs are deterministic") {
  Scenario sc = parse_scenario(preset_config("figA"));
  sc.reduced = true;
  const RunSummary a = run_scenario(sc, tmp("det_a"));
  const RunSummary b = run_scenario(sc, tmp("det_b"));
  REQUIRE(a.files == b.files);
  std::size_t csvs = 0;
  for (const std::string& f : a.files) {
    if (fs::path(f).extension() != ".csv") continue;
    ++csvs;
    CHECK(slurp(a.directory / f) == slurp(b.directory / f));
  }
  CHECK(csvs > 0);
}

TEST_CASE("slice files") {
  Scenario sc = parse_scenario(minimal().dump());
  const RunSummary r = run_scenario(sc, tmp("slices"));
  std::size_t bins = 0;
  for (const std::string& f : r.files) {
    const fs::path p = r.directory / f;
    if (p.extension() != ".bin") continue;
    ++bins;
    fs::path side = p;
    side.replace_extension(".json");
    REQUIRE(fs::exists(side));
    const json meta = json::parse(slurp(side));
    for (const char* k : {"byte_order", "data", "format", "frequency_hz", "layout", "source", "x", "z_m"}) CHECK(meta.contains(k));
    CHECK(meta["format"] == "complex64");
    CHECK(fs::file_size(p) == 8 * meta["x"]["count"].get<std::size_t>());
  }
  CHECK(bins == 3);
}

TEST_CASE("memory cap") {
  json d = minimal();
  d["memory_cap_bytes"] = 1024;
  CHECK_THROWS_AS(run_scenario(parse_scenario(d.dump()), tmp("cap")), ResourceError);
}

TEST_CASE("sweeps") {
  json d = minimal();
  d["sweep"] = {{"pointer", "/sources/0/beams/0/trajectory/beta_per_m"}, {"values", {0.005, 0.01}}};
  const RunSummary r = run_sweep(d.dump(), tmp("sweep"));
  CHECK(fs::exists(r.directory / "sweep_summary.csv"));
  const std::string csv = slurp(r.directory / "sweep_summary.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

  json f = minimal();
  f["frequencies_hz"] = {100e9, 150e9};
  const RunSummary g = run_sweep(f.dump(), tmp("fsweep"));
  CHECK(fs::exists(g.directory / "frequency_sweep.csv"));
}

TEST_CASE("command line exit codes") {
  if (std::string(BENDBEAM_CLI).empty()) return;
  const fs::path dir = tmp("cli");
  const auto write = [&](const std::string& leaf, const std::string& text) {
    std::ofstream(dir / leaf) << text;
    return (dir / leaf).string();
  };
  CHECK(cli("list-presets") == 0);
  CHECK(cli("--bogus-flag") == 2);
  CHECK(cli("preset fig99") == 2);
  CHECK(cli("run \"" + write("bad.json", R"({"units":"SI"})") + "\"") == 2);
  json capped = minimal();
  capped["memory_cap_bytes"] = 1024;
  CHECK(cli("run \"" + write("cap.json", capped.dump()) + "\" --out \"" + (dir / "cap").string() + "\"") == 3);
  CHECK(cli("run \"" + write("ok.json", minimal().dump()) + "\" --out \"" + (dir / "ok").string() + "\"") == 0);
  CHECK(fs::exists(dir / "ok" / "manifest.json"));
  CHECK(cli("preset fig9a --ci --seed 3 --out \"" + (dir / "p").string() + "\"") == 0);
  CHECK(json::parse(slurp(dir / "p" / "manifest.json"))["run"]["seed"] == 3);
}
