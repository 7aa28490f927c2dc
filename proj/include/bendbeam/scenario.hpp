// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bendbeam/codeword.hpp"
#include "bendbeam/footprint.hpp"
#include "bendbeam/oracle.hpp"
#include "bendbeam/propagation.hpp"
#include "bendbeam/trajectory.hpp"

namespace bendbeam {

enum class SourceKind { footprint, array, airy, aaf };
enum class TrajectoryKind { parabolic, circular, numeric, linear };

struct BeamConfig {
  TrajectoryKind kind = TrajectoryKind::parabolic;
  ParabolicTrajectory parabola;
  double radius_m = 1.0;
  std::optional<NumericTrajectory> numeric;
  double angle_rad = 0.0;  ///< linear steering toward +x
  PhaseRegime regime = PhaseRegime::paraxial;
  std::optional<cplx> weight;  ///< default 1/sqrt(number of beams)
  bool mirror = false;         ///< use phi(-x)
  std::optional<double> x_min_m;
  std::optional<double> x_max_m;
};

struct ArraySettings {
  std::optional<double> spacing_m;
  double spacing_wavelengths = 0.5;  ///< used when spacing_m is unset
  std::optional<int> bit_depth;
  ElementModel model = ElementModel::point;
  double active_fraction = 1.0;
  std::size_t stride = 1;  ///< keep every stride-th column (1 = all)

  double spacing(const Medium& medium) const noexcept {
    return spacing_m ? *spacing_m : spacing_wavelengths * medium.wavelength_m;
  }
};

struct SourceConfig {
  std::string name;
  SourceKind kind = SourceKind::footprint;
  bool closed_form = false;  ///< airy / aaf: sample the closed form instead of propagating
  AmplitudeWindow window;
  std::vector<BeamConfig> beams;
  ArraySettings array;
  AiryParams airy;
};

struct RxProbe {
  std::string name;
  double x_m = 0.0;
  double y_m = 0.0;
  double z_m = 0.0;
  double side_m = 0.1;
};

/// Strip (2D) or disk (3D) blockers centred on the line of sight from the
/// origin to a probe.
struct BlockageSweep {
  std::string rx;
  std::vector<double> widths_m;
  std::vector<double> z_m;
};

struct MetricSettings {
  std::vector<std::string> enabled;
  std::vector<int> quantization_bits{0, 1, 2, 3, 4, 5};  ///< 0 = continuous
  std::vector<double> subarray_fractions{0.5};
  std::size_t realizations = 100;
  std::size_t periodic_stride = 2;
  std::optional<BlockageSweep> blockage;
  std::optional<double> cross_section_z_m;
  double tube_fwhm = 1.5;
  std::optional<double> reference_z_m;
  std::size_t max_exported_slices = 16;

  bool has(std::string_view name) const;
};

struct SweepSettings {
  std::string pointer;              ///< JSON pointer into the config
  std::vector<std::string> values;  ///< JSON text of each value
};

struct Scenario {
  std::string name = "scenario";
  std::string description;
  std::vector<double> frequencies_hz;
  bool three_d = false;
  std::vector<SourceConfig> sources;
  std::vector<double> z_list_m;
  std::vector<Blocker> blockers;
  std::vector<RxProbe> rx_probes;
  DomainOptions domain;
  std::optional<std::pair<double, double>> x_range_m;
  std::optional<double> y_half_width_m;
  BorderPolicy border = BorderPolicy::report;
  MetricSettings metrics;
  std::uint64_t seed = 0;
  bool reduced = false;  ///< reduced-resolution CI mode
  std::string output_dir;
  std::optional<SweepSettings> sweep;
  std::string config_json;  ///< the document as parsed

  const RxProbe& probe(std::string_view name) const;
};

/// Metric names accepted under "metrics.enabled".
const std::vector<std::string>& metric_names();

/// Parses and fully validates a config document. Errors are ValidationError
/// carrying the JSON pointer of the offending key.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// CI mode: lambda/2 grid, capped z-list, realizations and exports.
void apply_reduced_resolution(Scenario& scenario);

struct PresetInfo {
  std::string name;
  std::string description;
};

const std::vector<PresetInfo>& list_presets();
/// Config text of a preset. Unknown names raise ValidationError listing the
/// valid ones.
std::string preset_config(std::string_view name);

struct RunSummary {
  std::filesystem::path directory;
  std::vector<std::string> files;  ///< relative to directory, sorted
  std::string manifest_json;
};

/// Writes manifest.json, metric CSVs and field slices under `out_dir`.
RunSummary run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Runs the config once per value of its "sweep" block, each in its own
/// subdirectory, plus sweep_summary.csv. Without a sweep block the config is
/// run once as a frequency sweep.
RunSummary run_sweep(std::string_view json_text, const std::filesystem::path& out_dir, bool reduced = false,
                     std::optional<std::uint64_t> seed = std::nullopt);

/// Codeword CSV of an array source at one of the configured frequencies.
/// Defaults to the first array source.
std::string codeword_csv(const Scenario& scenario, std::optional<std::string> source = std::nullopt,
                         std::size_t frequency_index = 0);

std::string library_version();

}  // namespace bendbeam
