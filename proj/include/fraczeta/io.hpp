#ifndef FRACZETA_IO_HPP
#define FRACZETA_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fraczeta/decimation.hpp"
#include "fraczeta/error.hpp"
#include "fraczeta/model.hpp"
#include "fraczeta/oscillation.hpp"
#include "fraczeta/partition.hpp"
#include "fraczeta/poles.hpp"
#include "fraczeta/spectrum.hpp"
#include "fraczeta/zeta.hpp"

namespace fraczeta {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// number formatting

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, ptr);
}

/// Real from a JSON number or a string: "2.5", "5/3" or "log(a)/log(b)".
inline double parse_real(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw ConfigError(field + ": expected a number or expression string");
  const std::string text = v.get<std::string>();
  static const std::regex log_ratio(R"(\s*log\(\s*([0-9.eE+-]+)\s*\)\s*/\s*log\(\s*([0-9.eE+-]+)\s*\)\s*)");
  std::smatch m;
  if (std::regex_match(text, m, log_ratio)) {
    const double a = std::stod(m[1].str());
    const double b = std::stod(m[2].str());
    if (!(a > 0.0) || !(b > 0.0) || b == 1.0) throw ConfigError(field + ": invalid log ratio '" + text + "'");
    return std::log(a) / std::log(b);
  }
  if (text.find('/') != std::string::npos) {
    try {
      return Rational::parse(text).value();
    } catch (const ConfigError&) {
      throw ConfigError(field + ": cannot parse '" + text + "'");
    }
  }
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(field + ": cannot parse '" + text + "'");
  }
  return x;
}

inline Rational parse_rational(const json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational{v.get<std::int64_t>(), 1};
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const ConfigError&) {
    }
  }
  throw ConfigError(field + ": expected an integer or \"p/q\"");
}

// ---------------------------------------------------------------------------
// run configuration

struct SpectrumSpec {
  std::string source = "none";  // interval | toy | decimation | none
  std::int64_t count = 0;       // interval: M
  int levels = 0;               // decimation: generation depth; toy: K
};

struct GridSpec {
  double re_lo = 0.2;
  double re_hi = 3.0;
  double re_step = 0.1;
  double im_lo = -10.0;
  double im_hi = 10.0;
  double im_step = 0.5;
};

struct RunConfig {
  FractalModel model;
  std::optional<DecimationConfig> decimation;
  SpectrumSpec spectrum;
  ContinuationSettings continuation;
  double partition_t_lo = 1e-4;
  double partition_t_hi = 1.0;
  int partition_points = 200;
  std::pair<double, double> weyl_window{1e-3, 4e-3};
  int n_max = 8;
  GridSpec grid;
  double gamma = 0.0;
  Region pole_region{0.5, 1.5, -2.0, 2.0};
  double tail_t_max = 20.0;
};

namespace detail {

inline void check_keys(const json& obj, const std::string& block, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(block + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) throw ConfigError(block + "." + key + ": unknown field");
  }
}

// Largest K for which N^K and τ^K stay representable with margin.
inline int toy_depth(int N, double tau) {
  const int by_mult = static_cast<int>(std::floor(62.0 * std::log(2.0) / std::log(static_cast<double>(N))));
  const int by_value = static_cast<int>(std::floor(14.0 / std::log10(tau)));
  return std::max(1, std::min({by_mult, by_value, 18}));
}

}  // namespace detail

/// Built-in configurations: "interval", "gasket", "toy", "toy(N,τ)", "carpet".
inline RunConfig preset_config(const std::string& name) {
  static const std::regex toy_re(R"(toy\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  std::smatch m;
  RunConfig c;
  if (name == "interval") {
    c.model = presets::interval();
    c.spectrum = {"interval", 10000, 0};
    c.continuation.t_min = 2.5e-4;
    c.partition_t_lo = 1e-4;
    c.weyl_window = {1e-3, 4e-3};
    c.pole_region = {0.5, 1.5, -2.0, 2.0};
  } else if (name == "gasket") {
    c.model = presets::gasket();
    c.decimation = gasket_decimation();
    c.spectrum = {"decimation", 0, 11};
    c.continuation.t_min = std::pow(5.0, -9);
    c.partition_t_lo = std::pow(5.0, -9);
    c.weyl_window = {std::pow(5.0, -8), std::pow(5.0, -7)};
    c.grid.re_lo = 0.2;
    c.pole_region = {0.5, 2.0, -9.0, 9.0};
  } else if (name == "toy" || std::regex_match(name, m, toy_re)) {
    const int N = name == "toy" ? 3 : std::stoi(m[1].str());
    const std::int64_t tau = name == "toy" ? 5 : std::stoll(m[2].str());
    c.model = presets::toy(N, tau);
    const int K = detail::toy_depth(N, static_cast<double>(tau));
    c.spectrum = {"toy", 0, K};
    c.continuation.t_min = 4000.0 * std::pow(static_cast<double>(tau), -K);
    c.partition_t_lo = c.continuation.t_min;
    c.weyl_window = {c.continuation.t_min * c.model.tau, c.continuation.t_min * c.model.tau * c.model.tau};
    c.pole_region = {c.model.d_S - 0.5, c.model.d_S + 0.5, -10.0, 10.0};
  } else if (name == "carpet") {
    c.model = presets::carpet();
    c.spectrum = {"none", 0, 0};
    c.pole_region = {-1.0, 2.0, -10.0, 10.0};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  c.continuation.n_max = c.n_max;
  c.continuation.tail_t_max = c.tail_t_max;
  return c;
}

inline FractalModel parse_model(const json& j) {
  detail::check_keys(j, "model", {"name", "N", "rho_F", "d_w", "d_boundary", "d_k"});
  for (const char* key : {"N", "rho_F", "d_w"}) {
    if (!j.contains(key)) throw ConfigError(std::string("model.") + key + ": missing");
  }
  const std::string name = j.value("name", std::string("custom"));
  if (!j.at("N").is_number_integer()) throw ConfigError("model.N: expected an integer");
  const int N = j.at("N").get<int>();
  const double d_w = parse_real(j.at("d_w"), "model.d_w");
  const double d_b = j.contains("d_boundary") ? parse_real(j.at("d_boundary"), "model.d_boundary") : 0.0;
  std::vector<double> d_k;
  if (j.contains("d_k")) {
    if (!j.at("d_k").is_array()) throw ConfigError("model.d_k: expected an array");
    for (std::size_t i = 0; i < j.at("d_k").size(); ++i) {
      d_k.push_back(parse_real(j.at("d_k")[i], "model.d_k[" + std::to_string(i) + "]"));
    }
  }
  const json& rho = j.at("rho_F");
  try {
    if (rho.is_number_integer() || (rho.is_string() && rho.get<std::string>().find("log") == std::string::npos &&
                                    rho.get<std::string>().find('/') != std::string::npos)) {
      return make_model(name, N, parse_rational(rho, "model.rho_F"), d_w, d_b, d_k);
    }
    return make_model(name, N, parse_real(rho, "model.rho_F"), d_w, d_b, d_k);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

inline DecimationConfig parse_decimation(const json& j) {
  detail::check_keys(j, "decimation",
                     {"polynomial", "renorm_factor", "branch_rule", "exceptional_set", "initial_level",
                      "initial_spectrum", "branch_factors", "births", "convergence_tolerance", "max_levels"});
  DecimationConfig c;
  for (std::size_t i = 0; i < j.at("polynomial").size(); ++i) {
    c.polynomial_coeffs.push_back(parse_rational(j.at("polynomial")[i], "decimation.polynomial"));
  }
  c.renorm_factor = parse_rational(j.at("renorm_factor"), "decimation.renorm_factor");
  c.branch_rule = j.value("branch_rule", std::string("smallest"));
  for (const auto& v : j.value("exceptional_set", json::array())) {
    c.exceptional_set.push_back(parse_rational(v, "decimation.exceptional_set"));
  }
  c.initial_level = j.value("initial_level", 1);
  for (const auto& pair : j.at("initial_spectrum")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ConfigError("decimation.initial_spectrum: entries are [value, multiplicity]");
    }
    c.initial_spectrum.emplace_back(parse_rational(pair[0], "decimation.initial_spectrum"),
                                    pair[1].get<std::int64_t>());
  }
  c.branch_factors = j.value("branch_factors", std::vector<std::int64_t>{});
  for (const auto& b : j.value("births", json::array())) {
    detail::check_keys(b, "decimation.births", {"value", "from_level", "coef", "base", "shift", "add", "div"});
    BirthRule r;
    r.value = parse_rational(b.at("value"), "decimation.births.value");
    r.from_level = b.value("from_level", 2);
    r.coef = b.value("coef", std::int64_t{1});
    r.base = b.value("base", std::int64_t{1});
    r.shift = b.value("shift", 0);
    r.add = b.value("add", std::int64_t{0});
    r.div = b.value("div", std::int64_t{1});
    c.births.push_back(r);
  }
  c.convergence_tolerance = j.value("convergence_tolerance", 1e-12);
  c.max_levels = j.value("max_levels", 200);
  return c;
}

inline std::pair<double, double> parse_window(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(field + ": expected [t_lo, t_hi]");
  const double lo = parse_real(j[0], field);
  const double hi = parse_real(j[1], field);
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigError(field + ": need 0 < t_lo < t_hi");
  return {lo, hi};
}

/// Re-checks every invariant, including the model's.
inline void validate_config(const RunConfig& c) {
  try {
    validate_model(c.model);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (c.decimation) validate_decimation(*c.decimation, c.model);
  if (c.spectrum.source == "decimation" && !c.decimation) {
    throw ConfigError("spectrum.source: decimation requires a decimation block");
  }
  if (c.spectrum.source == "interval" && c.spectrum.count < 1) throw ConfigError("spectrum.count: must be >= 1");
  if ((c.spectrum.source == "decimation" || c.spectrum.source == "toy") && c.spectrum.levels < 1) {
    throw ConfigError("spectrum.levels: must be >= 1");
  }
  if (c.spectrum.source != "none" && !(c.continuation.t_min > 0.0 && c.continuation.t_min < 1.0)) {
    throw ConfigError("continuation.t_min: must lie in (0, 1)");
  }
  if (c.n_max < 0) throw ConfigError("continuation.n_max: must be >= 0");
  if (!(c.tail_t_max > 1.0)) throw ConfigError("continuation.tail_t_max: must exceed 1");
  if (c.partition_points < 2) throw ConfigError("partition.points: must be >= 2");
  if (!(c.partition_t_lo > 0.0) || !(c.partition_t_hi > c.partition_t_lo)) {
    throw ConfigError("partition.window: need 0 < t_lo < t_hi");
  }
  if (!(c.weyl_window.first > 0.0) || !(c.weyl_window.second > c.weyl_window.first)) {
    throw ConfigError("weyl.window: need 0 < t_lo < t_hi");
  }
  if (!(c.gamma >= 0.0)) throw ConfigError("gamma: must be >= 0");
  if (!(c.grid.re_step > 0.0) || !(c.grid.im_step > 0.0)) throw ConfigError("zeta_grid: steps must be positive");
  if (!(c.grid.re_hi >= c.grid.re_lo) || !(c.grid.im_hi >= c.grid.im_lo)) throw ConfigError("zeta_grid: empty range");
  if (!(c.pole_region.re_hi > c.pole_region.re_lo) || !(c.pole_region.im_hi >= c.pole_region.im_lo)) {
    throw ConfigError("poles.region: empty rectangle");
  }
}

/// Applies a JSON document (a preset name plus overrides) and validates it.
inline RunConfig config_from_json(const json& j) {
  detail::check_keys(j, "config",
                     {"preset", "model", "decimation", "spectrum", "continuation", "partition", "weyl", "zeta_grid",
                      "gamma", "poles"});
  RunConfig c = preset_config(j.value("preset", std::string("interval")));
  if (j.contains("model")) {
    c.model = parse_model(j.at("model"));
    if (!j.contains("preset")) c.spectrum = {"none", 0, 0};
  }
  if (j.contains("decimation")) c.decimation = parse_decimation(j.at("decimation"));
  if (j.contains("spectrum")) {
    const auto& s = j.at("spectrum");
    detail::check_keys(s, "spectrum", {"source", "count", "levels"});
    c.spectrum.source = s.value("source", c.spectrum.source);
    c.spectrum.count = s.value("count", c.spectrum.count);
    c.spectrum.levels = s.value("levels", c.spectrum.levels);
    if (c.spectrum.source != "interval" && c.spectrum.source != "toy" && c.spectrum.source != "decimation" &&
        c.spectrum.source != "none") {
      throw ConfigError("spectrum.source: must be interval, toy, decimation or none");
    }
  }
  if (j.contains("continuation")) {
    const auto& s = j.at("continuation");
    detail::check_keys(s, "continuation", {"mode", "t_min", "fit_t_lo", "n_max", "tail_t_max", "panel_width"});
    if (s.contains("mode")) c.continuation.mode = parse_mode(s.at("mode").get<std::string>());
    if (s.contains("t_min")) c.continuation.t_min = parse_real(s.at("t_min"), "continuation.t_min");
    if (s.contains("fit_t_lo")) c.continuation.fit_t_lo = parse_real(s.at("fit_t_lo"), "continuation.fit_t_lo");
    if (s.contains("n_max")) c.n_max = s.at("n_max").get<int>();
    if (s.contains("tail_t_max")) c.tail_t_max = parse_real(s.at("tail_t_max"), "continuation.tail_t_max");
    if (s.contains("panel_width")) c.continuation.panel_width = parse_real(s.at("panel_width"), "continuation.panel_width");
    c.continuation.n_max = c.n_max;
    c.continuation.tail_t_max = c.tail_t_max;
  }
  if (j.contains("partition")) {
    const auto& s = j.at("partition");
    detail::check_keys(s, "partition", {"window", "points"});
    if (s.contains("window")) std::tie(c.partition_t_lo, c.partition_t_hi) = parse_window(s.at("window"), "partition.window");
    c.partition_points = s.value("points", c.partition_points);
  }
  if (j.contains("weyl")) {
    const auto& s = j.at("weyl");
    detail::check_keys(s, "weyl", {"window"});
    if (s.contains("window")) c.weyl_window = parse_window(s.at("window"), "weyl.window");
  }
  if (j.contains("zeta_grid")) {
    const auto& s = j.at("zeta_grid");
    detail::check_keys(s, "zeta_grid", {"re", "im"});
    auto axis = [&](const char* key, double& lo, double& hi, double& step) {
      if (!s.contains(key)) return;
      const auto& a = s.at(key);
      if (!a.is_array() || a.size() != 3) throw ConfigError(std::string("zeta_grid.") + key + ": expected [lo, hi, step]");
      lo = parse_real(a[0], "zeta_grid");
      hi = parse_real(a[1], "zeta_grid");
      step = parse_real(a[2], "zeta_grid");
    };
    axis("re", c.grid.re_lo, c.grid.re_hi, c.grid.re_step);
    axis("im", c.grid.im_lo, c.grid.im_hi, c.grid.im_step);
  }
  if (j.contains("gamma")) c.gamma = parse_real(j.at("gamma"), "gamma");
  if (j.contains("poles")) {
    const auto& s = j.at("poles");
    detail::check_keys(s, "poles", {"region"});
    const auto& r = s.at("region");
    if (!r.is_array() || r.size() != 4) throw ConfigError("poles.region: expected [re_lo, re_hi, im_lo, im_hi]");
    c.pole_region = {parse_real(r[0], "poles.region"), parse_real(r[1], "poles.region"),
                     parse_real(r[2], "poles.region"), parse_real(r[3], "poles.region")};
  }
  validate_config(c);
  return c;
}

/// Loads a JSON config file, or a preset when `path` names one and no such
/// file exists. Parse errors report line and column.
inline RunConfig load_config(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    try {
      RunConfig c = preset_config(path);
      validate_config(c);
      return c;
    } catch (const ConfigError&) {
      throw ConfigError("config '" + path + "': no such file or preset");
    }
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config '" + path + "': cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config '" + path + "': parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col));
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

/// Spectrum described by the config; throws ConfigError for "none".
inline SpectrumBatch build_spectrum(const RunConfig& c) {
  if (c.spectrum.source == "interval") return interval_spectrum(c.spectrum.count);
  if (c.spectrum.source == "toy") return toy_geometric_spectrum(c.model, c.spectrum.levels);
  if (c.spectrum.source == "decimation") {
    return fractal_spectrum_complete(c.spectrum.levels, *c.decimation, c.model).batch;
  }
  throw ConfigError("model '" + c.model.name + "' has no spectrum source");
}

// ---------------------------------------------------------------------------
// artifacts

/// Files written by one command. Unless commit() is called, the destructor
/// removes every file so a failed run leaves no partial artifacts.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }
  ArtifactSet(const ArtifactSet&) = delete;
  ArtifactSet& operator=(const ArtifactSet&) = delete;
  ~ArtifactSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }

  /// Writes `content` to dir/name through a temporary file and a rename.
  std::filesystem::path write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write '" + tmp.string() + "'");
      out << content;
      if (!out.flush()) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      throw Error("cannot move artifact into place at '" + path.string() + "'");
    }
    written_.push_back(path);
    return path;
  }

  void commit() { committed_ = true; }
  [[nodiscard]] const std::vector<std::filesystem::path>& files() const { return written_; }
  [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

inline std::string spectrum_csv(const SpectrumBatch& b) {
  std::string out = "index,value,multiplicity\n";
  for (std::size_t i = 0; i < b.pairs.size(); ++i) {
    out += std::to_string(i) + "," + format_number(b.pairs[i].value) + "," + std::to_string(b.pairs[i].multiplicity) + "\n";
  }
  return out;
}

/// Sidecar with the tail bound that certifies the spectrum CSV.
inline std::string spectrum_meta_json(const SpectrumBatch& b) {
  json j;
  j["model"] = b.model ? b.model->name : "";
  j["pairs"] = b.pairs.size();
  j["total_multiplicity"] = b.total_multiplicity();
  j["lambda_min"] = b.lambda_min;
  j["cutoff"] = b.cutoff;
  j["tail_exponent"] = b.tail_exponent;
  j["tail_constant"] = b.tail_constant;
  double step = 0.0;
  for (double s : b.convergence_steps) step = std::max(step, s);
  j["max_convergence_step"] = step;
  return j.dump(2) + "\n";
}

inline std::string trace_csv(const std::vector<PartitionSample>& samples) {
  std::string out = "t,Z,truncation_error\n";
  for (const auto& s : samples) {
    out += format_number(s.t) + "," + format_number(s.value) + "," + format_number(s.truncation_error) + "\n";
  }
  return out;
}

inline std::string weyl_csv(const std::vector<PartitionSample>& samples, double exponent) {
  std::string out = "t,W,truncation_error\n";
  for (const auto& s : samples) {
    const double f = std::pow(s.t, exponent);
    out += format_number(s.t) + "," + format_number(s.value * f) + "," + format_number(s.truncation_error * f) + "\n";
  }
  return out;
}

inline json profile_json(const OscillationProfile& p) {
  json j;
  j["k_index"] = p.k_index;
  j["exponent"] = p.exponent;
  j["period"] = p.period;
  j["fit_window"] = {p.t_lo, p.t_hi};
  j["fit_residual"] = p.fit_residual;
  j["contamination"] = p.contamination;
  j["samples"] = p.samples;
  j["warnings"] = p.warnings;
  json coeffs = json::array();
  for (int n = -p.n_max; n <= p.n_max; ++n) {
    coeffs.push_back({{"n", n}, {"re", p.g(n).real()}, {"im", p.g(n).imag()}});
  }
  j["coefficients"] = coeffs;
  return j;
}

inline std::string profiles_json(const std::vector<OscillationProfile>& ps) {
  json j = json::array();
  for (const auto& p : ps) j.push_back(profile_json(p));
  return j.dump(2) + "\n";
}

/// Values on the grid rectangle. Cells whose centre lies within half a step
/// of a lattice pole are skipped.
inline std::vector<ZetaPoint> zeta_grid(const SpectralZeta& zeta, const FractalModel& model, const GridSpec& g,
                                        double gamma) {
  const int nr = static_cast<int>(std::floor((g.re_hi - g.re_lo) / g.re_step + 1e-9)) + 1;
  const int ni = static_cast<int>(std::floor((g.im_hi - g.im_lo) / g.im_step + 1e-9)) + 1;
  const double clearance = 0.5 * std::min(g.re_step, g.im_step);
  const Region box{g.re_lo - clearance, g.re_hi + clearance, g.im_lo - clearance, g.im_hi + clearance};
  const auto poles = predicted_poles(model, box, gamma, ContinuationMode::expbounds);
  std::vector<ZetaPoint> out;
  for (int a = 0; a < nr; ++a) {
    for (int b = 0; b < ni; ++b) {
      const cplx s(g.re_lo + a * g.re_step, g.im_lo + b * g.im_step);
      bool near = false;
      for (const auto& p : poles) near = near || std::abs(s - p.position) < clearance;
      if (!near) out.push_back(zeta(s, gamma));
    }
  }
  return out;
}

inline std::string zeta_csv(const std::vector<ZetaPoint>& pts) {
  std::string out = "Re_s,Im_s,gamma,Re_zeta,Im_zeta,error_bound,method\n";
  for (const auto& z : pts) {
    out += format_number(z.s.real()) + "," + format_number(z.s.imag()) + "," + format_number(z.gamma) + "," +
           format_number(z.value.real()) + "," + format_number(z.value.imag()) + "," +
           format_number(z.error_bound) + "," + to_string(z.method) + "\n";
  }
  return out;
}

struct PoleReport {
  std::vector<PoleEstimate> predicted;
  std::vector<PoleEstimate> located;
};

/// Predicted poles (with residues from the fitted towers when available) and,
/// given an engine, the poles located by contour integration.
inline PoleReport build_pole_report(const FractalModel& model, const MellinContinuation* engine, const Region& region,
                                    double gamma, ContinuationMode mode) {
  PoleReport r;
  r.predicted = predicted_poles(model, region, gamma, mode);
  if (engine == nullptr) return r;
  for (auto& p : r.predicted) {
    if (p.m != 0 || p.k_index >= static_cast<int>(engine->profiles().size())) continue;
    const auto est = residue_from_oscillation(engine->profiles()[static_cast<std::size_t>(p.k_index)], model, p.n);
    p.residue = est.residue;
    p.residue_vanishes = est.residue_vanishes;
  }
  r.located = locate_poles(*engine, region, gamma);
  return r;
}

inline json pole_json(const PoleEstimate& p) {
  json j;
  j["position"] = {p.position.real(), p.position.imag()};
  j["m"] = p.m;
  j["n"] = p.n;
  j["k_index"] = p.k_index;
  j["residue"] = p.residue ? json{p.residue->real(), p.residue->imag()} : json(nullptr);
  j["residue_vanishes"] = p.residue_vanishes;
  j["source"] = to_string(p.source);
  j["match_distance"] = std::isnan(p.match_distance) ? json(nullptr) : json(p.match_distance);
  return j;
}

inline PoleEstimate pole_from_json(const json& j) {
  PoleEstimate p;
  p.position = {j.at("position")[0].get<double>(), j.at("position")[1].get<double>()};
  p.m = j.at("m").get<int>();
  p.n = j.at("n").get<int>();
  p.k_index = j.at("k_index").get<int>();
  if (!j.at("residue").is_null()) p.residue = cplx(j.at("residue")[0].get<double>(), j.at("residue")[1].get<double>());
  p.residue_vanishes = j.value("residue_vanishes", false);
  const auto src = j.at("source").get<std::string>();
  if (src != "predicted" && src != "located") throw ConfigError("pole source must be predicted or located");
  p.source = src == "predicted" ? PoleSource::predicted : PoleSource::located;
  if (!j.at("match_distance").is_null()) p.match_distance = j.at("match_distance").get<double>();
  return p;
}

inline std::string poles_json(const PoleReport& r) {
  json j;
  j["predicted"] = json::array();
  j["located"] = json::array();
  for (const auto& p : r.predicted) j["predicted"].push_back(pole_json(p));
  for (const auto& p : r.located) j["located"].push_back(pole_json(p));
  return j.dump(2) + "\n";
}

inline PoleReport load_poles_json(const std::string& text) {
  const json j = json::parse(text);
  PoleReport r;
  for (const auto& p : j.at("predicted")) r.predicted.push_back(pole_from_json(p));
  for (const auto& p : j.at("located")) r.located.push_back(pole_from_json(p));
  return r;
}

}  // namespace fraczeta

#endif  // FRACZETA_IO_HPP
