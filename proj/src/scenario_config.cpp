// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bendbeam/error.hpp"
#include "bendbeam/scenario.hpp"
#include "scenario_detail.hpp"

namespace bendbeam {

using nlohmann::json;

namespace {

// Read-only view of a JSON value that knows its own pointer.
class Node {
 public:
  Node(const json& value, std::string path) : v_(&value), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }
  const json& raw() const noexcept { return *v_; }

  [[noreturn]] void fail(const std::string& what) const { throw ValidationError(path_.empty() ? "/" : path_, what); }

  void expect_object() const {
    if (!v_->is_object()) fail("expected an object");
  }

  bool has(const char* key) const { return v_->is_object() && v_->contains(key); }

  Node at(const char* key) const {
    expect_object();
    auto it = v_->find(key);
    if (it == v_->end()) throw ValidationError(path_ + "/" + key, "missing required key");
    return Node(*it, path_ + "/" + key);
  }

  std::optional<Node> get(const char* key) const {
    expect_object();
    auto it = v_->find(key);
    if (it == v_->end() || it->is_null()) return std::nullopt;
    return Node(*it, path_ + "/" + key);
  }

  void only(std::initializer_list<const char*> keys) const {
    expect_object();
    for (const auto& item : v_->items()) {
      const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; });
      if (!known) throw ValidationError(path_ + "/" + item.key(), "unknown key");
    }
  }

  double number() const {
    if (!v_->is_number()) fail("expected a number");
    const double d = v_->get<double>();
    if (!std::isfinite(d)) fail("expected a finite number");
    return d;
  }
  double positive() const {
    const double d = number();
    if (!(d > 0.0)) fail("must be positive");
    return d;
  }
  double nonnegative() const {
    const double d = number();
    if (!(d >= 0.0)) fail("must be non-negative");
    return d;
  }
  std::int64_t integer() const {
    if (!v_->is_number_integer()) fail("expected an integer");
    return v_->get<std::int64_t>();
  }
  std::size_t count(std::size_t min = 0) const {
    const std::int64_t i = integer();
    if (i < static_cast<std::int64_t>(min)) fail("must be at least " + std::to_string(min));
    return static_cast<std::size_t>(i);
  }
  std::string string() const {
    if (!v_->is_string()) fail("expected a string");
    return v_->get<std::string>();
  }
  bool boolean() const {
    if (!v_->is_boolean()) fail("expected true or false");
    return v_->get<bool>();
  }
  std::vector<Node> items() const {
    if (!v_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < v_->size(); ++i) out.emplace_back((*v_)[i], path_ + "/" + std::to_string(i));
    return out;
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const Node& n : items()) out.push_back(n.number());
    return out;
  }
  template <class E>
  E choice(std::initializer_list<std::pair<const char*, E>> options) const {
    const std::string s = string();
    std::string names;
    for (const auto& [name, value] : options) {
      if (s == name) return value;
      names += names.empty() ? name : std::string(", ") + name;
    }
    fail("unknown value \"" + s + "\" (expected one of: " + names + ")");
  }

 private:
  const json* v_;
  std::string path_;
};

template <class F>
auto guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ValidationError(path, e.what());
  }
}

std::vector<double> parse_z_list(const Node& n) {
  std::vector<double> z;
  if (n.raw().is_array()) {
    z = n.numbers();
  } else {
    n.only({"start_m", "stop_m", "count"});
    const double a = n.at("start_m").nonnegative();
    const double b = n.at("stop_m").nonnegative();
    const std::size_t c = n.at("count").count();
    if (c == 1) {
      z = {a};
    } else {
      for (std::size_t i = 0; i < c; ++i) z.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(c - 1));
    }
  }
  if (z.empty()) n.fail("empty z-list");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] >= 0.0)) throw ValidationError(n.path() + "/" + std::to_string(i), "z must be non-negative");
    if (i > 0 && !(z[i] > z[i - 1])) throw ValidationError(n.path() + "/" + std::to_string(i), "z-list must be strictly ascending");
  }
  return z;
}

AmplitudeWindow parse_aperture(const Node& n) {
  n.only({"x_min_m", "x_max_m", "y_width_m", "level_v_per_m", "taper"});
  AmplitudeWindow w;
  w.x_min_m = n.at("x_min_m").number();
  w.x_max_m = n.at("x_max_m").number();
  if (!(w.x_max_m > w.x_min_m)) n.at("x_max_m").fail("must exceed x_min_m");
  if (auto y = n.get("y_width_m")) w.y_width_m = y->positive();
  if (auto l = n.get("level_v_per_m")) w.level_v_per_m = l->positive();
  if (auto t = n.get("taper")) {
    t->only({"kind", "alpha_per_m", "sigma_m", "center_m"});
    w.kind = t->at("kind").choice<TaperKind>(
        {{"uniform", TaperKind::uniform}, {"exponential", TaperKind::exponential}, {"gaussian", TaperKind::gaussian}});
    if (w.kind == TaperKind::exponential) w.alpha_per_m = t->at("alpha_per_m").nonnegative();
    if (w.kind == TaperKind::gaussian) {
      w.sigma_m = t->at("sigma_m").positive();
      if (auto c = t->get("center_m")) w.center_m = c->number();
    }
  }
  return w;
}

BeamConfig parse_beam(const Node& n) {
  n.only({"trajectory", "regime", "weight", "mirror", "x_min_m", "x_max_m"});
  BeamConfig b;
  const Node t = n.at("trajectory");
  b.kind = t.at("kind").choice<TrajectoryKind>({{"parabolic", TrajectoryKind::parabolic},
                                                {"circular", TrajectoryKind::circular},
                                                {"numeric", TrajectoryKind::numeric},
                                                {"linear", TrajectoryKind::linear}});
  switch (b.kind) {
    case TrajectoryKind::parabolic:
      t.only({"kind", "beta_per_m", "x0_m", "z0_m"});
      b.parabola.beta_per_m = t.at("beta_per_m").positive();
      if (auto v = t.get("x0_m")) b.parabola.x0_m = v->number();
      if (auto v = t.get("z0_m")) b.parabola.z0_m = v->number();
      break;
    case TrajectoryKind::circular:
      t.only({"kind", "radius_m"});
      b.radius_m = t.at("radius_m").positive();
      break;
    case TrajectoryKind::numeric: {
      t.only({"kind", "z_m", "x_m"});
      const std::vector<double> z = t.at("z_m").numbers();
      const std::vector<double> x = t.at("x_m").numbers();
      if (z.size() != x.size()) t.at("x_m").fail("needs one sample per z");
      if (z.size() < 8) t.at("z_m").fail("needs at least 8 samples");
      const double dz = (z.back() - z.front()) / static_cast<double>(z.size() - 1);
      for (std::size_t i = 1; i < z.size(); ++i) {
        if (std::abs(z[i] - z[i - 1] - dz) > 1e-9 * std::max(1.0, std::abs(dz)))
          throw ValidationError(t.path() + "/z_m/" + std::to_string(i), "z samples must be uniformly spaced");
      }
      b.numeric = guarded(t.path(), [&] { return NumericTrajectory(make_grid(z.front(), dz, z.size()), x); });
      break;
    }
    case TrajectoryKind::linear:
      t.only({"kind", "angle_rad"});
      b.angle_rad = t.at("angle_rad").number();
      if (!(std::abs(b.angle_rad) < kPi / 2)) t.at("angle_rad").fail("must lie in (-pi/2, pi/2)");
      break;
  }
  if (auto r = n.get("regime")) {
    b.regime = r->choice<PhaseRegime>({{"paraxial", PhaseRegime::paraxial},
                                       {"nonparaxial", PhaseRegime::nonparaxial},
                                       {"numeric", PhaseRegime::numeric}});
  }
  if (auto w = n.get("weight")) {
    if (w->raw().is_array()) {
      const std::vector<double> c = w->numbers();
      if (c.size() != 2) w->fail("complex weight must be [re, im]");
      b.weight = cplx(c[0], c[1]);
    } else {
      b.weight = cplx(w->number(), 0.0);
    }
  }
  if (auto m = n.get("mirror")) b.mirror = m->boolean();
  if (auto v = n.get("x_min_m")) b.x_min_m = v->number();
  if (auto v = n.get("x_max_m")) b.x_max_m = v->number();
  return b;
}

ArraySettings parse_array(const Node& n) {
  n.only({"spacing_m", "spacing_wavelengths", "bit_depth", "element_model", "active_fraction", "stride"});
  ArraySettings a;
  if (n.has("spacing_m") && n.has("spacing_wavelengths")) n.fail("give spacing_m or spacing_wavelengths, not both");
  if (auto v = n.get("spacing_m")) a.spacing_m = v->positive();
  if (auto v = n.get("spacing_wavelengths")) a.spacing_wavelengths = v->positive();
  if (auto v = n.get("bit_depth")) {
    const std::int64_t b = v->integer();
    if (b < 1 || b > 30) v->fail("bit depth must be in 1..30");
    a.bit_depth = static_cast<int>(b);
  }
  if (auto v = n.get("element_model")) {
    a.model = v->choice<ElementModel>({{"point", ElementModel::point}, {"zero_order_hold", ElementModel::zero_order_hold}});
  }
  if (auto v = n.get("active_fraction")) {
    a.active_fraction = v->number();
    if (!(a.active_fraction > 0.0 && a.active_fraction <= 1.0)) v->fail("must lie in (0, 1]");
  }
  if (auto v = n.get("stride")) a.stride = v->count(1);
  if (a.stride > 1 && a.active_fraction < 1.0) n.fail("use either stride or active_fraction");
  return a;
}

AiryParams parse_airy(const Node& n) {
  n.only({"beta_per_m", "alpha_per_m", "x0_m", "z0_m", "amplitude_v_per_m"});
  AiryParams p;
  p.beta_per_m = n.at("beta_per_m").positive();
  if (auto v = n.get("alpha_per_m")) p.alpha_per_m = v->nonnegative();
  if (auto v = n.get("x0_m")) p.x0_m = v->number();
  if (auto v = n.get("z0_m")) p.z0_m = v->number();
  if (auto v = n.get("amplitude_v_per_m")) p.amplitude = v->positive();
  return p;
}

SourceConfig parse_source(const Node& n, bool three_d) {
  n.only({"name", "kind", "evaluation", "aperture", "beams", "array", "airy"});
  SourceConfig s;
  s.name = n.at("name").string();
  if (s.name.empty() || s.name.find_first_of("/\\ \t\n") != std::string::npos)
    n.at("name").fail("source names must be non-empty without spaces or slashes");
  s.kind = n.at("kind").choice<SourceKind>({{"footprint", SourceKind::footprint},
                                            {"array", SourceKind::array},
                                            {"airy", SourceKind::airy},
                                            {"aaf", SourceKind::aaf}});
  if (auto e = n.get("evaluation")) s.closed_form = e->choice<bool>({{"propagate", false}, {"closed_form", true}});

  const bool closed_kind = s.kind == SourceKind::airy || s.kind == SourceKind::aaf;
  if (closed_kind) {
    for (const char* k : {"aperture", "beams", "array"}) {
      if (n.has(k)) throw ValidationError(n.path() + "/" + k, "not used by airy / aaf sources");
    }
    s.airy = parse_airy(n.at("airy"));
    if (three_d) n.at("kind").fail("airy / aaf sources are 2D only");
    return s;
  }
  if (n.has("airy")) throw ValidationError(n.path() + "/airy", "only used by airy / aaf sources");
  if (s.closed_form) n.at("evaluation").fail("closed_form applies to airy / aaf sources only");
  s.window = parse_aperture(n.at("aperture"));
  const auto beams = n.at("beams").items();
  if (beams.empty()) n.at("beams").fail("needs at least one beam");
  for (const Node& b : beams) s.beams.push_back(parse_beam(b));
  for (std::size_t i = 0; i < s.beams.size(); ++i) {
    const auto [lo, hi] = detail::beam_window(s, s.beams[i]);
    if (!(hi > lo)) {
      throw ValidationError(beams[i].path(), "beam window is empty after clipping to the aperture and the real part of its phase");
    }
  }
  if (s.kind == SourceKind::array) {
    s.array = n.has("array") ? parse_array(n.at("array")) : ArraySettings{};
    if (s.beams.size() != 1) n.at("beams").fail("array sources take exactly one beam");
    if (s.beams[0].mirror) beams[0].fail("array beams cannot be mirrored");
    if (std::abs(s.window.x_max_m) > 1e-12) n.at("aperture").at("x_max_m").fail("array apertures end at x = 0");
  } else if (n.has("array")) {
    throw ValidationError(n.path() + "/array", "only used by array sources");
  }
  return s;
}

}  // namespace

bool MetricSettings::has(std::string_view name) const {
  return std::find(enabled.begin(), enabled.end(), name) != enabled.end();
}

const RxProbe& Scenario::probe(std::string_view name) const {
  for (const RxProbe& p : rx_probes) {
    if (p.name == name) return p;
  }
  throw ValidationError("/rx_probes", "no probe named \"" + std::string(name) + "\"");
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"field_slices", "lobe_track",    "on_axis",      "tube_power",
                                              "rx_power",     "blockage_sweep", "k_content",   "order_shares",
                                              "quantization", "subarray",       "frequency_sweep"};
  return names;
}

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError("/", std::string("not valid JSON: ") + e.what());
  }
  const Node root(doc, "");
  root.expect_object();
  root.only({"units", "name", "description", "frequencies_hz", "mode", "grid", "sources", "z_list_m", "blockers",
             "rx_probes", "metrics", "seed", "memory_cap_bytes", "output_dir", "precision", "sweep"});

  Scenario sc;
  if (root.at("units").string() != "SI") root.at("units").fail("units must be \"SI\"");
  if (auto v = root.get("name")) sc.name = v->string();
  if (auto v = root.get("description")) sc.description = v->string();

  const Node freqs = root.at("frequencies_hz");
  sc.frequencies_hz = freqs.raw().is_array() ? freqs.numbers() : std::vector<double>{freqs.number()};
  if (sc.frequencies_hz.empty()) freqs.fail("needs at least one frequency");
  for (std::size_t i = 0; i < sc.frequencies_hz.size(); ++i) {
    if (!(sc.frequencies_hz[i] > 0.0)) throw ValidationError(freqs.path() + "/" + std::to_string(i), "must be positive");
  }

  if (auto v = root.get("mode")) sc.three_d = v->choice<bool>({{"2d", false}, {"3d", true}});
  sc.domain.three_d = sc.three_d;

  if (auto g = root.get("grid")) {
    g->only({"step_wavelengths", "padding_factor", "margin_fwhm", "min_margin_m", "extra_lateral_m", "x_range_m",
             "y_half_width_m", "border_policy"});
    if (auto v = g->get("step_wavelengths")) sc.domain.step_wavelengths = v->positive();
    if (auto v = g->get("padding_factor")) {
      sc.domain.padding_factor = v->number();
      if (!(sc.domain.padding_factor >= 1.0)) v->fail("must be >= 1");
    }
    if (auto v = g->get("margin_fwhm")) sc.domain.margin_fwhm = v->nonnegative();
    if (auto v = g->get("min_margin_m")) sc.domain.min_margin_m = v->nonnegative();
    if (auto v = g->get("extra_lateral_m")) sc.domain.extra_lateral_m = v->nonnegative();
    if (auto v = g->get("x_range_m")) {
      const std::vector<double> r = v->numbers();
      if (r.size() != 2 || !(r[1] > r[0])) v->fail("expected [lo, hi] with hi > lo");
      sc.x_range_m = std::pair{r[0], r[1]};
    }
    if (auto v = g->get("y_half_width_m")) sc.y_half_width_m = v->positive();
    if (auto v = g->get("border_policy")) {
      sc.border = v->choice<BorderPolicy>(
          {{"enforce", BorderPolicy::enforce}, {"report", BorderPolicy::report}, {"ignore", BorderPolicy::ignore}});
    }
  }

  const Node sources = root.at("sources");
  for (const Node& s : sources.items()) sc.sources.push_back(parse_source(s, sc.three_d));
  if (sc.sources.empty()) sources.fail("needs at least one source");
  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < sc.sources.size(); ++i) {
      if (!seen.insert(sc.sources[i].name).second)
        throw ValidationError(sources.path() + "/" + std::to_string(i) + "/name", "duplicate source name");
    }
  }

  sc.z_list_m = parse_z_list(root.at("z_list_m"));

  if (auto bl = root.get("blockers")) {
    for (const Node& b : bl->items()) {
      b.only({"z_m", "x_m", "y_m", "width_m"});
      Blocker k;
      k.z_m = b.at("z_m").positive();
      if (auto v = b.get("x_m")) k.center_x_m = v->number();
      if (auto v = b.get("y_m")) k.center_y_m = v->number();
      k.width_m = b.at("width_m").positive();
      if (k.z_m > sc.z_list_m.back()) b.at("z_m").fail("blocker lies beyond the last z plane");
      sc.blockers.push_back(k);
    }
    if (!sc.blockers.empty()) {
      for (std::size_t i = 0; i < sc.sources.size(); ++i) {
        if (sc.sources[i].closed_form)
          throw ValidationError(sources.path() + "/" + std::to_string(i) + "/evaluation", "blockers need a propagated source");
      }
    }
  }

  if (auto rx = root.get("rx_probes")) {
    std::set<std::string> seen;
    for (const Node& p : rx->items()) {
      p.only({"name", "x_m", "y_m", "z_m", "side_m"});
      RxProbe r;
      r.name = p.at("name").string();
      if (!seen.insert(r.name).second) p.at("name").fail("duplicate probe name");
      r.x_m = p.at("x_m").number();
      if (auto v = p.get("y_m")) r.y_m = v->number();
      r.z_m = p.at("z_m").positive();
      if (auto v = p.get("side_m")) r.side_m = v->positive();
      sc.rx_probes.push_back(r);
    }
  }

  if (auto m = root.get("metrics")) {
    m->only({"enabled", "quantization_bits", "subarray_fractions", "realizations", "periodic_stride", "blockage",
             "cross_section_z_m", "tube_fwhm", "reference_z_m", "max_exported_slices"});
    MetricSettings& ms = sc.metrics;
    for (const Node& e : m->at("enabled").items()) {
      const std::string name = e.string();
      const auto& known = metric_names();
      if (std::find(known.begin(), known.end(), name) == known.end()) e.fail("unknown metric \"" + name + "\"");
      if (!ms.has(name)) ms.enabled.push_back(name);
    }
    if (auto v = m->get("quantization_bits")) {
      ms.quantization_bits.clear();
      for (const Node& b : v->items()) {
        const std::int64_t q = b.integer();
        if (q < 0 || q > 30) b.fail("bit depth must be in 0..30 (0 = continuous)");
        ms.quantization_bits.push_back(static_cast<int>(q));
      }
    }
    if (auto v = m->get("subarray_fractions")) {
      ms.subarray_fractions = v->numbers();
      for (double f : ms.subarray_fractions) {
        if (!(f > 0.0 && f <= 1.0)) v->fail("fractions must lie in (0, 1]");
      }
    }
    if (auto v = m->get("realizations")) ms.realizations = v->count(1);
    if (auto v = m->get("periodic_stride")) ms.periodic_stride = v->count(1);
    if (auto v = m->get("blockage")) {
      v->only({"rx", "widths_m", "z_m"});
      BlockageSweep b;
      b.rx = v->at("rx").string();
      b.widths_m = v->at("widths_m").numbers();
      b.z_m = v->at("z_m").numbers();
      if (b.widths_m.empty() || b.z_m.empty()) v->fail("widths_m and z_m must be non-empty");
      for (double w : b.widths_m) {
        if (!(w > 0.0)) v->at("widths_m").fail("widths must be positive");
      }
      ms.blockage = b;
    }
    if (auto v = m->get("cross_section_z_m")) ms.cross_section_z_m = v->positive();
    if (auto v = m->get("tube_fwhm")) ms.tube_fwhm = v->positive();
    if (auto v = m->get("reference_z_m")) ms.reference_z_m = v->positive();
    if (auto v = m->get("max_exported_slices")) ms.max_exported_slices = v->count();
  }

  if (auto v = root.get("seed")) {
    const std::int64_t s = v->integer();
    if (s < 0) v->fail("seed must be non-negative");
    sc.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = root.get("memory_cap_bytes")) sc.domain.memory_cap_bytes = v->count(1);
  if (auto v = root.get("output_dir")) sc.output_dir = v->string();
  if (auto v = root.get("precision")) sc.reduced = v->choice<bool>({{"full", false}, {"reduced", true}});
  if (auto v = root.get("sweep")) {
    v->only({"pointer", "values"});
    SweepSettings sw;
    sw.pointer = v->at("pointer").string();
    try {
      const json::json_pointer ptr(sw.pointer);
      if (!doc.contains(ptr)) v->at("pointer").fail("does not name an existing key");
    } catch (const json::exception& e) {
      v->at("pointer").fail(std::string("not a JSON pointer: ") + e.what());
    }
    if (sw.pointer.rfind("/sweep", 0) == 0) v->at("pointer").fail("cannot sweep the sweep block");
    const auto vals = v->at("values").items();
    if (vals.empty()) v->at("values").fail("needs at least one value");
    for (const Node& x : vals) sw.values.push_back(x.raw().dump());
    sc.sweep = sw;
  }

  // Cross-field checks.
  const MetricSettings& ms = sc.metrics;
  const auto need_probes = [&](const char* metric) {
    if (ms.has(metric) && sc.rx_probes.empty()) root.at("metrics").fail(std::string(metric) + " needs rx_probes");
  };
  need_probes("rx_power");
  if (ms.has("blockage_sweep")) {
    if (!ms.blockage) root.at("metrics").fail("blockage_sweep needs a \"blockage\" block");
    const RxProbe& rx = sc.probe(ms.blockage->rx);
    for (double z : ms.blockage->z_m) {
      if (!(z > 0.0 && z < rx.z_m)) root.at("metrics").at("blockage").at("z_m").fail("blocker planes must lie in (0, z_rx)");
    }
  }
  if (ms.has("frequency_sweep") || ms.has("quantization") || ms.has("subarray")) {
    for (std::size_t i = 0; i < sc.sources.size(); ++i) {
      const SourceConfig& s = sc.sources[i];
      const bool ok = (s.kind == SourceKind::footprint || s.kind == SourceKind::array) && s.beams.size() == 1 &&
                      s.beams[0].kind == TrajectoryKind::parabolic && !s.beams[0].mirror;
      if (!ok) {
        throw ValidationError(sources.path() + "/" + std::to_string(i),
                              "frequency_sweep, quantization and subarray need single-beam parabolic sources");
      }
      if (ms.has("frequency_sweep") && s.kind != SourceKind::footprint)
        throw ValidationError(sources.path() + "/" + std::to_string(i) + "/kind", "frequency_sweep needs footprint sources");
      if ((ms.has("quantization") || ms.has("subarray")) && sc.three_d) root.at("mode").fail("array efficiency metrics are 2D only");
    }
  }
  sc.config_json = doc.dump(2);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("/", "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

void apply_reduced_resolution(Scenario& sc) {
  sc.reduced = true;
  sc.domain.step_wavelengths = std::max(sc.domain.step_wavelengths, 0.5);
  constexpr std::size_t kMaxPlanes = 12;
  if (sc.z_list_m.size() > kMaxPlanes) {
    std::vector<double> z;
    const std::size_t n = sc.z_list_m.size();
    for (std::size_t i = 0; i < kMaxPlanes; ++i) z.push_back(sc.z_list_m[i * (n - 1) / (kMaxPlanes - 1)]);
    sc.z_list_m = std::move(z);
  }
  sc.metrics.realizations = std::min<std::size_t>(sc.metrics.realizations, 8);
  sc.metrics.max_exported_slices = std::min<std::size_t>(sc.metrics.max_exported_slices, 3);
  if (sc.metrics.blockage && sc.metrics.blockage->z_m.size() > 6) {
    auto& z = sc.metrics.blockage->z_m;
    std::vector<double> kept;
    for (std::size_t i = 0; i < 6; ++i) kept.push_back(z[i * (z.size() - 1) / 5]);
    z = std::move(kept);
  }
}

}  // namespace bendbeam
