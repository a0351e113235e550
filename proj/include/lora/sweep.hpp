#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lora/montecarlo.hpp"
#include "lora/params.hpp"

namespace lora {

enum class Method {
  kMc,
  kExact,
  kIntegral,
  kUpper,
  kLower,
  kUpperExp,
  kLowerExp,
  kUpperRayleigh,
  kLowerRayleigh,
};

std::string_view method_name(Method method);
std::optional<Method> method_from_name(std::string_view name);

/// Configuration error carrying the offending field name, so the CLI can
/// report it verbatim.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& detail);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Channel preset normalized to unit tap power |mu_h|^2 + sigma_h2 = 1.
struct ChannelPreset {
  cplx mu_h{0.0, 0.0};
  double sigma_h2 = 1.0;
  // Reported K-factor. from_k_factor records the requested value here so
  // row labels round-trip it exactly; NaN means derive it from the stored
  // tap moments, whose ratio carries the quantization of sqrt().
  double k_label = std::numeric_limits<double>::quiet_NaN();

  static ChannelPreset from_k_factor(double k_factor);
  /// Rescales an explicit (mu_h, sigma_h2) pair to unit power.
  static ChannelPreset from_components(cplx mu_h, double sigma_h2);

  double k_factor() const;
};

struct GridSpec {
  double start_db = 0.0;
  double stop_db = 0.0;
  double step_db = 1.0;

  std::vector<double> points() const;
};

struct SweepConfig {
  std::vector<int> sf_list;
  std::vector<ChannelPreset> presets;
  GridSpec ebn0_db;
  std::vector<Method> methods;
  McConfig mc;
  std::string output_path;
  std::string plot_path;  // empty disables the figure

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

struct ErrorCurveRow {
  Method method = Method::kMc;
  int sf = 0;
  double k_factor = 0.0;
  double ebn0_db = 0.0;
  /// NaN when the cell was skipped (status != "ok"); serialized empty.
  double ser = 0.0;
  double ber = 0.0;
  /// Populated only for mc rows.
  std::optional<double> std_error;
  std::optional<std::uint64_t> trials;
  std::string status = "ok";
};

struct ErrorCurve {
  std::vector<ErrorCurveRow> rows;
};

bool operator==(const ErrorCurveRow& a, const ErrorCurveRow& b);
inline bool operator==(const ErrorCurve& a, const ErrorCurve& b) { return a.rows == b.rows; }

/// Evaluates every (method, sf, preset, grid point) cell. Cells that refuse
/// a regime get a "skipped:..." status instead of numbers. Rows come back
/// sorted by (method name, sf, k_factor, ebn0_db).
ErrorCurve run_sweep(const SweepConfig& config);

std::string to_csv(const ErrorCurve& curve);
void write_csv(const ErrorCurve& curve, const std::string& path);

/// Inverse of to_csv; throws std::runtime_error on malformed input.
ErrorCurve curve_from_csv(const std::string& text);

/// Self-contained SVG: log-scaled BER axis over [1e-6, 1], linear Eb/N0
/// axis, one polyline per (method, sf, k_factor) group with at least two
/// in-range points, point markers always. Throws std::invalid_argument on
/// an empty curve.
std::string to_svg(const ErrorCurve& curve);
void emit_plot(const ErrorCurve& curve, const std::string& path);

/// Flat key = value format, one [preset] section per channel preset.
SweepConfig parse_config_file(const std::string& path);
SweepConfig parse_config_text(const std::string& text);

}  // namespace lora
