// Command-line front end: assemble a SweepConfig from a config file and/or
// flags, run the sweep, and emit CSV (and optionally an SVG figure).

#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lora/sweep.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"LoRa symbol/bit error rate sweep over Rician block fading"};

  std::string config_path;
  std::vector<int> sf_list;
  std::vector<double> k_factors;
  double mu_re = 0.0, mu_im = 0.0, sigma2 = 0.0;
  std::string ebn0_spec;
  std::string methods_spec;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t batch_size = 0;
  std::uint64_t target_errors = 0;
  unsigned workers = 0;
  std::string out_path;
  std::string plot_path;

  app.add_option("--config", config_path, "Config file (flags override its keys)");
  app.add_option("--sf", sf_list, "Spreading factor(s)");
  app.add_option("--k-factor", k_factors, "Rician K-factor preset(s)");
  const auto* mu_re_opt = app.add_option("--mu-re", mu_re, "Explicit preset: Re(mu_h)");
  const auto* mu_im_opt = app.add_option("--mu-im", mu_im, "Explicit preset: Im(mu_h)");
  const auto* sigma2_opt = app.add_option("--sigma2", sigma2, "Explicit preset: sigma_h2");
  app.add_option("--ebn0", ebn0_spec, "Eb/N0 grid as start:stop:step in dB");
  app.add_option("--methods", methods_spec,
                 "Comma-separated subset of mc,exact,integral,upper,lower,upper_exp,"
                 "lower_exp,upper_rayleigh,lower_rayleigh");
  const auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials per point");
  const auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
  const auto* batch_opt = app.add_option("--batch-size", batch_size, "Trials per RNG substream");
  const auto* target_opt =
      app.add_option("--target-errors", target_errors, "Early-stop error target (0 disables)");
  const auto* workers_opt = app.add_option("--workers", workers, "Parallel workers");
  app.add_option("--out", out_path, "Output CSV path");
  app.add_option("--plot", plot_path, "Optional SVG figure path");

  CLI11_PARSE(app, argc, argv);

  lora::SweepConfig config;
  if (!config_path.empty()) {
    config = lora::parse_config_file(config_path);
  }
  if (!sf_list.empty()) config.sf_list = sf_list;
  if (!ebn0_spec.empty()) {
    lora::SweepConfig grid_holder = lora::parse_config_text("ebn0_db = " + ebn0_spec + "\n");
    config.ebn0_db = grid_holder.ebn0_db;
  }
  if (!methods_spec.empty()) {
    lora::SweepConfig methods_holder =
        lora::parse_config_text("methods = " + methods_spec + "\n");
    config.methods = methods_holder.methods;
  }
  const bool explicit_preset = *mu_re_opt || *mu_im_opt || *sigma2_opt;
  if (!k_factors.empty() || explicit_preset) {
    config.presets.clear();
    for (double k : k_factors) {
      config.presets.push_back(lora::ChannelPreset::from_k_factor(k));
    }
    if (explicit_preset) {
      config.presets.push_back(
          lora::ChannelPreset::from_components(lora::cplx(mu_re, mu_im), sigma2));
    }
  }
  if (*trials_opt) config.mc.trials = trials;
  if (*seed_opt) config.mc.seed = seed;
  if (*batch_opt) config.mc.batch_size = static_cast<std::uint32_t>(batch_size);
  if (*target_opt) {
    config.mc.target_errors =
        target_errors > 0 ? std::optional<std::uint64_t>(target_errors) : std::nullopt;
  }
  if (*workers_opt) config.mc.parallel_workers = workers;
  if (!out_path.empty()) config.output_path = out_path;
  if (!plot_path.empty()) config.plot_path = plot_path;

  if (config.output_path.empty()) {
    std::fprintf(stderr, "config error: output_path: required (--out or config key)\n");
    return 1;
  }

  lora::ErrorCurve curve;
  try {
    config.validate();
    curve = lora::run_sweep(config);
  } catch (const lora::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }

  try {
    lora::write_csv(curve, config.output_path);
    if (!config.plot_path.empty()) {
      lora::emit_plot(curve, config.plot_path);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  }

  std::map<std::string, std::size_t> by_status;
  for (const auto& row : curve.rows) ++by_status[row.status];
  std::printf("wrote %zu rows to %s\n", curve.rows.size(), config.output_path.c_str());
  for (const auto& [status, count] : by_status) {
    std::printf("  %-28s %zu\n", status.c_str(), count);
  }
  if (!config.plot_path.empty()) {
    std::printf("wrote figure to %s\n", config.plot_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
