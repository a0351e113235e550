#include "lora/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "lora/analytic_ser.hpp"
#include "lora/channel.hpp"
#include "lora/link_budget.hpp"
#include "lora/union_bounds.hpp"

namespace lora {

namespace {

constexpr struct {
  Method method;
  std::string_view name;
} kMethodNames[] = {
    {Method::kMc, "mc"},
    {Method::kExact, "exact"},
    {Method::kIntegral, "integral"},
    {Method::kUpper, "upper"},
    {Method::kLower, "lower"},
    {Method::kUpperExp, "upper_exp"},
    {Method::kLowerExp, "lower_exp"},
    {Method::kUpperRayleigh, "upper_rayleigh"},
    {Method::kLowerRayleigh, "lower_rayleigh"},
};

bool is_rayleigh_only(Method method) {
  return method == Method::kUpperRayleigh || method == Method::kLowerRayleigh;
}

}  // namespace

std::string_view method_name(Method method) {
  for (const auto& entry : kMethodNames) {
    if (entry.method == method) return entry.name;
  }
  return "unknown";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (const auto& entry : kMethodNames) {
    if (entry.name == name) return entry.method;
  }
  return std::nullopt;
}

ConfigError::ConfigError(std::string field, const std::string& detail)
    : std::runtime_error("config error: " + field + ": " + detail), field_(std::move(field)) {}

ChannelPreset ChannelPreset::from_k_factor(double k_factor) {
  if (std::isnan(k_factor) || k_factor < 0.0) {
    throw ConfigError("k_factor", "must be >= 0");
  }
  if (std::isinf(k_factor)) return {cplx(1.0, 0.0), 0.0, k_factor};
  return {cplx(std::sqrt(k_factor / (1.0 + k_factor)), 0.0), 1.0 / (1.0 + k_factor), k_factor};
}

ChannelPreset ChannelPreset::from_components(cplx mu_h, double sigma_h2) {
  if (!std::isfinite(mu_h.real()) || !std::isfinite(mu_h.imag())) {
    throw ConfigError("mu_h", "must be finite");
  }
  if (std::isnan(sigma_h2) || sigma_h2 < 0.0) {
    throw ConfigError("sigma_h2", "must be >= 0");
  }
  const double power = std::norm(mu_h) + sigma_h2;
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw ConfigError("sigma_h2", "preset tap power |mu_h|^2 + sigma_h2 must be positive");
  }
  return {mu_h / std::sqrt(power), sigma_h2 / power};
}

double ChannelPreset::k_factor() const {
  if (!std::isnan(k_label)) return k_label;
  if (sigma_h2 == 0.0) return std::numeric_limits<double>::infinity();
  return std::norm(mu_h) / sigma_h2;
}

std::vector<double> GridSpec::points() const {
  const double span = stop_db - start_db;
  const auto count = static_cast<std::size_t>(std::floor(span / step_db + 1e-9)) + 1;
  std::vector<double> pts(count);
  for (std::size_t i = 0; i < count; ++i) {
    pts[i] = start_db + static_cast<double>(i) * step_db;
  }
  return pts;
}

void SweepConfig::validate() const {
  if (sf_list.empty()) throw ConfigError("sf_list", "must name at least one spreading factor");
  for (int sf : sf_list) {
    if (sf < 1 || sf > 16) {
      throw ConfigError("sf_list", "spreading factors must lie in [1, 16]");
    }
  }
  if (presets.empty()) throw ConfigError("presets", "must define at least one channel preset");
  if (methods.empty()) throw ConfigError("methods", "must name at least one method");
  if (!(ebn0_db.step_db > 0.0) || !std::isfinite(ebn0_db.step_db)) {
    throw ConfigError("ebn0_db", "step must be > 0");
  }
  if (!std::isfinite(ebn0_db.start_db) || !std::isfinite(ebn0_db.stop_db) ||
      ebn0_db.start_db > ebn0_db.stop_db) {
    throw ConfigError("ebn0_db", "require start <= stop");
  }
  if ((ebn0_db.stop_db - ebn0_db.start_db) / ebn0_db.step_db > 1e6) {
    throw ConfigError("ebn0_db", "grid would exceed 1e6 points");
  }
  // Beyond 1000 dB the squared symbol energy overflows a double and the
  // metric statistics stop being representable.
  if (ebn0_db.start_db < -1000.0 || ebn0_db.stop_db > 1000.0) {
    throw ConfigError("ebn0_db", "grid must stay within [-1000, 1000] dB");
  }
  for (Method method : methods) {
    if (!is_rayleigh_only(method)) continue;
    for (const auto& preset : presets) {
      if (std::norm(preset.mu_h) != 0.0) {
        throw ConfigError("methods",
                          std::string(method_name(method)) + " requires mu_h = 0 presets");
      }
    }
  }
  if (mc.trials == 0) throw ConfigError("trials", "must be >= 1");
  if (mc.batch_size == 0) throw ConfigError("batch_size", "must be >= 1");
  if (mc.parallel_workers == 0) throw ConfigError("parallel_workers", "must be >= 1");
}

bool operator==(const ErrorCurveRow& a, const ErrorCurveRow& b) {
  const auto same = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.method == b.method && a.sf == b.sf && same(a.k_factor, b.k_factor) &&
         same(a.ebn0_db, b.ebn0_db) && same(a.ser, b.ser) && same(a.ber, b.ber) &&
         a.std_error.has_value() == b.std_error.has_value() &&
         (!a.std_error || same(*a.std_error, *b.std_error)) && a.trials == b.trials &&
         a.status == b.status;
}

namespace {

ErrorCurveRow eval_cell(const SweepConfig& config, Method method, int sf,
                        const ChannelPreset& preset, double ebn0_db) {
  ErrorCurveRow row;
  row.method = method;
  row.sf = sf;
  row.k_factor = preset.k_factor();
  row.ebn0_db = ebn0_db;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  const auto skip = [&](std::string status) {
    row.ser = nan;
    row.ber = nan;
    row.status = std::move(status);
    return row;
  };

  const ChannelParams channel(preset.mu_h, preset.sigma_h2);
  const LinkBudget budget = LinkBudget::from_ebn0_db(sf, channel, ebn0_db);

  switch (method) {
    case Method::kMc: {
      const McResult mc = simulate_ser(budget, config.mc);
      row.ser = mc.ser_hat;
      row.std_error = mc.std_error;
      row.trials = mc.trials_run;
      break;
    }
    case Method::kExact: {
      try {
        const ExactSerResult exact = ser_exact_rician(budget);
        if (exact.degraded) return skip("skipped:precision");
        row.ser = exact.ser;
      } catch (const std::domain_error&) {
        return skip("skipped:precision");
      }
      break;
    }
    case Method::kIntegral: {
      const IntegrationResult quad = ser_numeric_integration_full(budget);
      if (!quad.converged) return skip("skipped:quadrature-budget");
      row.ser = quad.ser;
      break;
    }
    case Method::kUpper:
      row.ser = ser_upper(budget).value;
      break;
    case Method::kLower:
      row.ser = ser_lower(budget).value;
      break;
    case Method::kUpperExp:
    case Method::kLowerExp: {
      try {
        row.ser = method == Method::kUpperExp ? ser_upper_exp(budget).value
                                              : ser_lower_exp(budget).value;
      } catch (const std::domain_error&) {
        return skip("skipped:domain");
      }
      break;
    }
    case Method::kUpperRayleigh:
      row.ser = ser_upper_rayleigh(budget.params(), preset.sigma_h2, budget.es_n0()).value;
      break;
    case Method::kLowerRayleigh:
      row.ser = ser_lower_rayleigh(budget.params(), preset.sigma_h2, budget.es_n0()).value;
      break;
  }
  row.ber = ber_from_ser(budget.params(), row.ser);
  row.status = "ok";
  return row;
}

}  // namespace

ErrorCurve run_sweep(const SweepConfig& config) {
  config.validate();
  const std::vector<double> grid = config.ebn0_db.points();

  struct Cell {
    Method method;
    int sf;
    const ChannelPreset* preset;
    double db;
  };
  std::vector<Cell> cells;
  cells.reserve(config.methods.size() * config.sf_list.size() * config.presets.size() *
                grid.size());
  for (Method method : config.methods) {
    for (int sf : config.sf_list) {
      for (const auto& preset : config.presets) {
        for (double db : grid) {
          cells.push_back({method, sf, &preset, db});
        }
      }
    }
  }

  ErrorCurve curve;
  curve.rows.resize(cells.size());
  std::vector<std::size_t> analytic;
  std::vector<std::size_t> simulated;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    (cells[i].method == Method::kMc ? simulated : analytic).push_back(i);
  }

  // Analytic cells are cheap and independent: fan them out over the worker
  // pool. Simulated cells run one at a time and parallelize internally so
  // their batch waves keep the full pool busy.
  const auto eval_into = [&](std::size_t index) {
    const Cell& cell = cells[index];
    curve.rows[index] = eval_cell(config, cell.method, cell.sf, *cell.preset, cell.db);
  };
  const unsigned workers = std::max(1u, config.mc.parallel_workers);
  if (workers == 1 || analytic.size() < 2) {
    for (std::size_t index : analytic) eval_into(index);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const auto work = [&] {
      try {
        for (std::size_t j = next.fetch_add(1); j < analytic.size(); j = next.fetch_add(1)) {
          if (failed.load(std::memory_order_relaxed)) return;
          eval_into(analytic[j]);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    };
    std::vector<std::thread> pool;
    const unsigned n_threads = static_cast<unsigned>(
        std::min<std::size_t>(workers, analytic.size()));
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  for (std::size_t index : simulated) eval_into(index);

  std::stable_sort(curve.rows.begin(), curve.rows.end(),
                   [](const ErrorCurveRow& a, const ErrorCurveRow& b) {
                     return std::make_tuple(method_name(a.method), a.sf, a.k_factor, a.ebn0_db) <
                            std::make_tuple(method_name(b.method), b.sf, b.k_factor, b.ebn0_db);
                   });
  return curve;
}

namespace {

std::string format_double(double value) {
  char buffer[64];
  const auto res =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  return std::string(buffer, res.ptr);
}

double parse_double_field(std::string_view text, const char* what) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    throw std::runtime_error(std::string("csv: malformed ") + what + " value '" +
                             std::string(text) + "'");
  }
  return value;
}

constexpr std::string_view kCsvHeader = "method,sf,k_factor,ebn0_db,ser,ber,stderr,trials,status";

}  // namespace

std::string to_csv(const ErrorCurve& curve) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const auto& row : curve.rows) {
    out += method_name(row.method);
    out.push_back(',');
    out += std::to_string(row.sf);
    out.push_back(',');
    out += format_double(row.k_factor);
    out.push_back(',');
    out += format_double(row.ebn0_db);
    out.push_back(',');
    if (!std::isnan(row.ser)) out += format_double(row.ser);
    out.push_back(',');
    if (!std::isnan(row.ber)) out += format_double(row.ber);
    out.push_back(',');
    if (row.std_error) out += format_double(*row.std_error);
    out.push_back(',');
    if (row.trials) out += std::to_string(*row.trials);
    out.push_back(',');
    out += row.status;
    out.push_back('\n');
  }
  return out;
}

void write_csv(const ErrorCurve& curve, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("write_csv: cannot open '" + path + "'");
  const std::string text = to_csv(curve);
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

ErrorCurve curve_from_csv(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  if (!std::getline(stream, line) || line != kCsvHeader) {
    throw std::runtime_error("csv: missing or wrong header");
  }
  ErrorCurve curve;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view view = line;
    while (true) {
      const auto comma = view.find(',');
      fields.push_back(view.substr(0, comma));
      if (comma == std::string_view::npos) break;
      view.remove_prefix(comma + 1);
    }
    if (fields.size() != 9) throw std::runtime_error("csv: expected 9 fields per row");

    ErrorCurveRow row;
    const auto method = method_from_name(fields[0]);
    if (!method) throw std::runtime_error("csv: unknown method '" + std::string(fields[0]) + "'");
    row.method = *method;
    row.sf = static_cast<int>(parse_double_field(fields[1], "sf"));
    row.k_factor = parse_double_field(fields[2], "k_factor");
    row.ebn0_db = parse_double_field(fields[3], "ebn0_db");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.ser = fields[4].empty() ? nan : parse_double_field(fields[4], "ser");
    row.ber = fields[5].empty() ? nan : parse_double_field(fields[5], "ber");
    if (!fields[6].empty()) row.std_error = parse_double_field(fields[6], "stderr");
    if (!fields[7].empty()) {
      row.trials = static_cast<std::uint64_t>(parse_double_field(fields[7], "trials"));
    }
    row.status = std::string(fields[8]);
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

namespace {

struct PlotGroup {
  Method method;
  int sf;
  double k_factor;
  std::vector<std::pair<double, double>> points;  // (ebn0_db, ber)
};

std::string format_coord(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

std::string format_label(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", v);
  return buffer;
}

}  // namespace

std::string to_svg(const ErrorCurve& curve) {
  if (curve.rows.empty()) throw std::invalid_argument("to_svg: empty curve");

  // Group rows by (method, sf, k_factor), preserving row order.
  std::vector<PlotGroup> groups;
  for (const auto& row : curve.rows) {
    if (row.status != "ok" || !std::isfinite(row.ber)) continue;
    PlotGroup* group = nullptr;
    for (auto& g : groups) {
      if (g.method == row.method && g.sf == row.sf && g.k_factor == row.k_factor) {
        group = &g;
        break;
      }
    }
    if (group == nullptr) {
      groups.push_back({row.method, row.sf, row.k_factor, {}});
      group = &groups.back();
    }
    group->points.emplace_back(row.ebn0_db, row.ber);
  }

  double db_min = std::numeric_limits<double>::infinity();
  double db_max = -std::numeric_limits<double>::infinity();
  for (const auto& row : curve.rows) {
    db_min = std::min(db_min, row.ebn0_db);
    db_max = std::max(db_max, row.ebn0_db);
  }
  if (!std::isfinite(db_min)) {
    db_min = 0.0;
    db_max = 1.0;
  }
  if (db_max - db_min < 1e-9) {
    db_min -= 1.0;
    db_max += 1.0;
  }

  constexpr double kLeft = 70.0, kRight = 660.0, kTop = 30.0, kBottom = 570.0;
  constexpr double kWidth = 900.0, kHeight = 620.0;
  constexpr double kLogFloor = -6.0;  // BER axis spans [1e-6, 1]
  const auto x_of = [&](double db) {
    return kLeft + (db - db_min) / (db_max - db_min) * (kRight - kLeft);
  };
  const auto y_of = [&](double ber) {
    const double l = std::log10(ber);
    return kTop + (0.0 - l) / (0.0 - kLogFloor) * (kBottom - kTop);
  };
  const auto in_range = [&](double ber) { return ber >= 1e-6 && ber <= 1.0; };

  static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
                                             "#bcbd22", "#7f7f7f"};
  constexpr int kPaletteSize = 10;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_label(kWidth) +
         "\" height=\"" + format_label(kHeight) + "\" viewBox=\"0 0 " + format_label(kWidth) +
         " " + format_label(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Decade gridlines and y labels.
  for (int dec = 0; dec >= static_cast<int>(kLogFloor); --dec) {
    const double y = y_of(std::pow(10.0, dec));
    svg += "<line x1=\"" + format_coord(kLeft) + "\" y1=\"" + format_coord(y) + "\" x2=\"" +
           format_coord(kRight) + "\" y2=\"" + format_coord(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + format_coord(kLeft - 8.0) + "\" y=\"" + format_coord(y + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" +
           std::to_string(dec) + "</text>\n";
  }
  // X ticks: pick a step that yields at most ~9 ticks.
  double x_step = 1.0;
  for (double candidate : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    x_step = candidate;
    if ((db_max - db_min) / candidate <= 9.0) break;
  }
  const double first_tick = std::ceil(db_min / x_step) * x_step;
  for (double t = first_tick; t <= db_max + 1e-9; t += x_step) {
    const double x = x_of(t);
    svg += "<line x1=\"" + format_coord(x) + "\" y1=\"" + format_coord(kTop) + "\" x2=\"" +
           format_coord(x) + "\" y2=\"" + format_coord(kBottom) +
           "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + format_coord(x) + "\" y=\"" + format_coord(kBottom + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           format_label(t) + "</text>\n";
  }
  svg += "<rect x=\"" + format_coord(kLeft) + "\" y=\"" + format_coord(kTop) + "\" width=\"" +
         format_coord(kRight - kLeft) + "\" height=\"" + format_coord(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + format_coord((kLeft + kRight) / 2.0) + "\" y=\"" +
         format_coord(kBottom + 38.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">Eb/N0 "
         "(dB)</text>\n";
  svg += "<text x=\"18\" y=\"" + format_coord((kTop + kBottom) / 2.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "transform=\"rotate(-90 18 " +
         format_coord((kTop + kBottom) / 2.0) + ")\">BER</text>\n";

  int color_index = 0;
  double legend_y = kTop + 10.0;
  for (const auto& group : groups) {
    const char* color = kPalette[color_index % kPaletteSize];
    ++color_index;

    std::vector<std::pair<double, double>> visible;
    for (const auto& [db, ber] : group.points) {
      if (in_range(ber)) visible.emplace_back(db, ber);
    }
    if (visible.size() >= 2) {
      svg += "<polyline fill=\"none\" stroke=\"";
      svg += color;
      svg += "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [db, ber] : visible) {
        svg += format_coord(x_of(db)) + "," + format_coord(y_of(ber)) + " ";
      }
      svg += "\"/>\n";
    }
    for (const auto& [db, ber] : visible) {
      svg += "<circle cx=\"" + format_coord(x_of(db)) + "\" cy=\"" + format_coord(y_of(ber)) +
             "\" r=\"2.5\" fill=\"";
      svg += color;
      svg += "\"/>\n";
    }

    std::string label = std::string(method_name(group.method)) + " sf=" +
                        std::to_string(group.sf) + " K=" + format_label(group.k_factor);
    svg += "<line x1=\"" + format_coord(kRight + 12.0) + "\" y1=\"" + format_coord(legend_y) +
           "\" x2=\"" + format_coord(kRight + 36.0) + "\" y2=\"" + format_coord(legend_y) +
           "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + format_coord(kRight + 42.0) + "\" y=\"" + format_coord(legend_y + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + label + "</text>\n";
    legend_y += 18.0;
  }

  svg += "</svg>\n";
  return svg;
}

void emit_plot(const ErrorCurve& curve, const std::string& path) {
  const std::string svg = to_svg(curve);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("emit_plot: cannot open '" + path + "'");
  file.write(svg.data(), static_cast<std::streamsize>(svg.size()));
  if (!file) throw std::runtime_error("emit_plot: write failed for '" + path + "'");
}

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() &&
         (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = text.find(sep);
    parts.push_back(trim(text.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return parts;
}

double parse_config_double(std::string_view value, const std::string& field) {
  const std::string_view text = trim(value);
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double parsed = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError(field, "expected a number, got '" + std::string(text) + "'");
  }
  return parsed;
}

std::uint64_t parse_config_u64(std::string_view value, const std::string& field) {
  const std::string_view text = trim(value);
  std::uint64_t parsed = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError(field, "expected a nonnegative integer, got '" + std::string(text) + "'");
  }
  return parsed;
}

GridSpec parse_grid(std::string_view value, const std::string& field) {
  const auto parts = split(value, ':');
  if (parts.size() != 3) throw ConfigError(field, "expected start:stop:step");
  GridSpec grid;
  grid.start_db = parse_config_double(parts[0], field);
  grid.stop_db = parse_config_double(parts[1], field);
  grid.step_db = parse_config_double(parts[2], field);
  return grid;
}

std::vector<Method> parse_methods(std::string_view value) {
  std::vector<Method> methods;
  for (const auto part : split(value, ',')) {
    if (part.empty()) continue;
    const auto method = method_from_name(part);
    if (!method) throw ConfigError("methods", "unknown method '" + std::string(part) + "'");
    methods.push_back(*method);
  }
  return methods;
}

// Keys for a [preset] section, gathered before normalization.
struct PresetDraft {
  std::optional<double> k_factor;
  std::optional<double> mu_re, mu_im, sigma_h2;

  ChannelPreset build() const {
    if (k_factor) {
      if (mu_re || mu_im || sigma_h2) {
        throw ConfigError("k_factor", "preset mixes k_factor with explicit mu_h/sigma_h2");
      }
      return ChannelPreset::from_k_factor(*k_factor);
    }
    if (!mu_re && !mu_im && !sigma_h2) {
      throw ConfigError("presets", "preset section defines no channel");
    }
    return ChannelPreset::from_components(cplx(mu_re.value_or(0.0), mu_im.value_or(0.0)),
                                          sigma_h2.value_or(0.0));
  }
};

}  // namespace

SweepConfig parse_config_text(const std::string& text) {
  SweepConfig config;
  std::vector<PresetDraft> drafts;
  PresetDraft* current = nullptr;

  std::istringstream stream(text);
  std::string raw_line;
  while (std::getline(stream, raw_line)) {
    const std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    if (line == "[preset]") {
      drafts.emplace_back();
      current = &drafts.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config", "expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    if (current != nullptr) {
      if (key == "k_factor") {
        current->k_factor = parse_config_double(value, key);
      } else if (key == "mu_re") {
        current->mu_re = parse_config_double(value, key);
      } else if (key == "mu_im") {
        current->mu_im = parse_config_double(value, key);
      } else if (key == "sigma_h2") {
        current->sigma_h2 = parse_config_double(value, key);
      } else {
        throw ConfigError(key, "unknown preset key");
      }
      continue;
    }
    if (key == "sf_list") {
      for (const auto part : split(value, ',')) {
        if (part.empty()) continue;
        config.sf_list.push_back(static_cast<int>(parse_config_double(part, key)));
      }
    } else if (key == "ebn0_db") {
      config.ebn0_db = parse_grid(value, key);
    } else if (key == "methods") {
      config.methods = parse_methods(value);
    } else if (key == "trials") {
      config.mc.trials = parse_config_u64(value, key);
    } else if (key == "seed") {
      config.mc.seed = parse_config_u64(value, key);
    } else if (key == "batch_size") {
      config.mc.batch_size = static_cast<std::uint32_t>(parse_config_u64(value, key));
    } else if (key == "target_errors") {
      const std::uint64_t target = parse_config_u64(value, key);
      if (target > 0) config.mc.target_errors = target;
    } else if (key == "parallel_workers") {
      config.mc.parallel_workers = static_cast<unsigned>(parse_config_u64(value, key));
    } else if (key == "output_path") {
      config.output_path = std::string(value);
    } else if (key == "plot_path") {
      config.plot_path = std::string(value);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  for (const auto& draft : drafts) {
    config.presets.push_back(draft.build());
  }
  return config;
}

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace lora
