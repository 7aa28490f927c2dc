// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bendbeam/error.hpp"
#include "bendbeam/scenario.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kValidation = 2, kResource = 3 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bendbeam::ValidationError("/", "cannot read config file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path output_dir(const std::string& flag, const bendbeam::Scenario& sc) {
  if (!flag.empty()) return flag;
  if (!sc.output_dir.empty()) return sc.output_dir;
  return fs::path("out") / sc.name;
}

void report(const bendbeam::RunSummary& r) {
  std::cout << r.directory.string() << "\n";
  for (const std::string& f : r.files) std::cout << "  " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curved-beam near-field wavefront simulator"};
  app.set_version_flag("--version", bendbeam::library_version());
  app.require_subcommand(1);

  std::string config, out, preset, source;
  std::uint64_t seed = 0;
  bool ci = false;
  std::size_t freq_index = 0;

  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config, "JSON config")->required();
  run->add_option("--out", out, "output directory");
  run->add_option("--seed", seed, "override the config seed");
  run->add_flag("--ci", ci, "reduced resolution");

  auto* pre = app.add_subcommand("preset", "run a built-in preset");
  pre->add_option("name", preset, "preset name")->required();
  pre->add_option("--out", out, "output directory");
  pre->add_option("--seed", seed, "override the preset seed");
  pre->add_flag("--ci", ci, "reduced resolution");

  auto* show = app.add_subcommand("show-preset", "print a preset's config");
  show->add_option("name", preset, "preset name")->required();

  auto* list = app.add_subcommand("list-presets", "list presets");

  auto* cw = app.add_subcommand("codeword", "write the codeword CSV of an array source");
  cw->add_option("config", config, "JSON config")->required();
  cw->add_option("--out", out, "CSV file (default stdout)");
  cw->add_option("--source", source, "source name (default: first array source)");
  cw->add_option("--frequency-index", freq_index, "index into frequencies_hz");

  auto* sweep = app.add_subcommand("sweep", "parameter or frequency sweep");
  sweep->add_option("config", config, "JSON config")->required();
  sweep->add_option("--out", out, "output directory");
  sweep->add_option("--seed", seed, "override the config seed");
  sweep->add_flag("--ci", ci, "reduced resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  const auto seed_override = [&](CLI::App* sub) -> std::optional<std::uint64_t> {
    if (sub->count("--seed")) return seed;
    return std::nullopt;
  };

  try {
    if (*list) {
      for (const auto& p : bendbeam::list_presets()) std::cout << p.name << "\t" << p.description << "\n";
      return kOk;
    }
    if (*show) {
      std::cout << bendbeam::preset_config(preset);
      return kOk;
    }
    if (*run || *pre) {
      CLI::App* sub = *run ? run : pre;
      bendbeam::Scenario sc =
          bendbeam::parse_scenario(*run ? read_file(config) : bendbeam::preset_config(preset));
      if (auto s = seed_override(sub)) sc.seed = *s;
      if (ci) sc.reduced = true;
      report(bendbeam::run_scenario(sc, output_dir(out, sc)));
      return kOk;
    }
    if (*cw) {
      const bendbeam::Scenario sc = bendbeam::parse_scenario(read_file(config));
      const std::string csv =
          bendbeam::codeword_csv(sc, source.empty() ? std::nullopt : std::optional<std::string>(source), freq_index);
      if (out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream f(out, std::ios::binary);
        f << csv;
        if (!f) throw std::runtime_error("cannot write " + out);
      }
      return kOk;
    }
    if (*sweep) {
      const std::string text = read_file(config);
      const bendbeam::Scenario sc = bendbeam::parse_scenario(text);
      report(bendbeam::run_sweep(text, output_dir(out, sc), ci, seed_override(sweep)));
      return kOk;
    }
  } catch (const bendbeam::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const bendbeam::ResourceError& e) {
    std::cerr << "resource cap exceeded: " << e.what() << "\n";
    return kResource;
  } catch (const bendbeam::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
