#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "impmatch/config.hpp"
#include "impmatch/errors.hpp"
#include "impmatch/io.hpp"
#include "svg.hpp"

namespace impmatch::cli {
namespace {

namespace fs = std::filesystem;

PipelineConfig load_config(const std::string& path) {
  if (path.empty()) {
    PipelineConfig cfg;
    cfg.validate();
    return cfg;
  }
  return parse_config(io::read_file(path));
}

template <typename Writer>
void write_with(const fs::path& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  io::write_file(path, os.str());
}

BodeMagnitude read_bode_file(const fs::path& path) {
  std::istringstream in(io::read_file(path));
  return io::read_bode(in);
}

int cmd_sweep(const std::string& config_path, std::uint64_t seed, const std::string& out_path) {
  const auto cfg = load_config(config_path);
  const auto ts = simulate_sweep(cfg.params, cfg.gains, cfg.chirp, cfg.sim, seed);
  write_with(out_path, [&](std::ostream& os) { io::write_time_series(os, ts); });
  return kExitOk;
}

int cmd_estimate(const std::string& config_path, const std::string& in_path,
                 std::optional<double> window, std::optional<double> overlap,
                 const std::string& out_path) {
  const auto cfg = load_config(config_path);
  WelchOptions options = cfg.welch;
  if (window) options.window_seconds = *window;
  if (overlap) options.overlap_fraction = *overlap;
  std::istringstream in(io::read_file(in_path));
  const auto ts = io::read_time_series(in);
  const auto bode = estimate_frf(ts, options);
  write_with(out_path, [&](std::ostream& os) { io::write_bode(os, bode); });
  return kExitOk;
}

int cmd_bode(const std::string& config_path, const std::string& out_path) {
  const auto cfg = load_config(config_path);
  const auto grid = log_spaced(cfg.bode_grid.f_min, cfg.bode_grid.f_max, cfg.bode_grid.points);
  const auto bode = analytic_bode(cfg.params, cfg.gains, grid, cfg.sim.velocity_feedforward);
  write_with(out_path, [&](std::ostream& os) { io::write_bode(os, bode); });
  return kExitOk;
}

int cmd_match(const std::string& config_path, const std::string& reference_path,
              std::uint64_t seed, unsigned workers, const std::string& out_dir) {
  const auto cfg = load_config(config_path);
  const auto reference = read_bode_file(reference_path);

  MatchOptions options;
  options.mode = cfg.mode;
  options.sweep = {cfg.chirp, cfg.sim, cfg.welch, seed};
  options.workers = workers;
  const auto result = grid_match(reference, cfg.params, cfg.grid, cfg.band, options);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const fs::path dir(out_dir);

  write_with(dir / "surface.csv", [&](std::ostream& os) { io::write_surface(os, result); });
  io::write_file(dir / "summary.json", match_summary_json(result, cfg.mode));
  io::write_file(dir / "heatmap.svg", heatmap_svg(result));

  BodeMagnitude matched;
  if (cfg.mode == MatchMode::kAnalytic) {
    matched = analytic_bode(cfg.params, result.best_gains, reference.frequencies,
                            cfg.sim.velocity_feedforward);
  } else {
    matched = estimate_frf(simulate_sweep(cfg.params, result.best_gains, cfg.chirp, cfg.sim, seed),
                           cfg.welch);
  }
  io::write_file(dir / "bode_overlay.svg",
                 bode_overlay_svg(reference, matched, cfg.band, result.best_gains));
  return kExitOk;
}

struct RangeArgs {
  std::vector<std::string> summaries;
  std::string config;
  std::optional<double> step_kp, step_kd, margin;
  std::optional<double> kp_nominal, kd_nominal, kp_half, kd_half;
  std::string out;
};

int cmd_ranges(const RangeArgs& a, std::ostream& err) {
  const auto cfg = load_config(a.config);
  if (a.summaries.size() < 2) {
    throw ValidationError("ranges: need at least two match summaries");
  }
  std::vector<PDGains> matched;
  for (const auto& path : a.summaries) matched.push_back(best_gains_from_summary(io::read_file(path)));

  const RangeStep step{a.step_kp.value_or(cfg.range_step.kp), a.step_kd.value_or(cfg.range_step.kd)};
  const double margin = a.margin.value_or(cfg.margin_factor);
  auto ranges = derive_ranges(matched, step, margin, a.kp_nominal, a.kd_nominal);
  // Explicit half-widths pin a published range so its coverage can be checked.
  if (a.kp_half) ranges.kp.half_range = *a.kp_half;
  if (a.kd_half) ranges.kd.half_range = *a.kd_half;
  if ((a.kp_half && !(*a.kp_half >= 0.0)) || (a.kd_half && !(*a.kd_half >= 0.0))) {
    throw ValidationError("ranges: half-range overrides must be non-negative");
  }

  const auto gaps = coverage_gaps(matched, ranges);
  for (const auto& g : gaps) {
    err << "warning: entry " << g.index << " (" << a.summaries[g.index] << ") " << g.component
        << " = " << g.value << " outside [" << g.lower << ", " << g.upper << "]\n";
  }
  io::write_file(a.out, ranges_json(ranges, gaps));
  return kExitOk;
}

int cmd_widen(const std::string& in_path, const std::string& out_path, bool self_test,
              std::uint64_t seed, std::ostream& err) {
  std::istringstream in(io::read_file(in_path));
  const auto layer = io::read_layer(in);
  const auto widened = widen_input_layer(layer);

  if (self_test) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> scale(-1e6, 1e6);
    std::vector<double> x(layer.inputs());
    for (int trial = 0; trial < 1000; ++trial) {
      for (auto& v : x) v = normal(rng);
      auto xw = x;
      xw.push_back(scale(rng));
      if (layer.pre_activations(x) != widened.pre_activations(xw)) {
        err << "self-test: widened layer changed pre-activations at trial " << trial << '\n';
        return kExitNumeric;
      }
    }
  }
  write_with(out_path, [&](std::ostream& os) { io::write_layer(os, widened); });
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-domain PD gain matching for geared joints"};
  app.name("impmatch");
  app.require_subcommand(1);

  std::string config;
  std::uint64_t seed = 0;
  std::string out_path;
  auto add_common = [&](CLI::App* sub, bool out_required = true) {
    sub->add_option("--config", config, "Pipeline config JSON");
    sub->add_option("--seed", seed, "Random seed");
    auto* o = sub->add_option("--out", out_path, "Output path");
    if (out_required) o->required();
  };

  auto* sweep = app.add_subcommand("sweep", "Simulate a chirp sweep and write a time-series CSV");
  add_common(sweep);

  std::string in_path;
  std::optional<double> window, overlap;
  auto* estimate = app.add_subcommand("estimate", "Welch FRF magnitude from a time-series CSV");
  add_common(estimate);
  estimate->add_option("--in", in_path, "Time-series CSV")->required();
  estimate->add_option("--window", window, "Segment length (s)");
  estimate->add_option("--overlap", overlap, "Segment overlap fraction");

  auto* bode = app.add_subcommand("bode", "Closed-form Bode magnitude on a log grid");
  add_common(bode);

  std::string reference;
  unsigned workers = 1;
  auto* match = app.add_subcommand("match", "Grid-search gains against a reference Bode CSV");
  add_common(match);
  match->add_option("--reference", reference, "Reference Bode CSV")->required();
  match->add_option("--workers", workers, "Worker threads (0 = all cores)");

  RangeArgs ranges_args;
  auto* ranges = app.add_subcommand("ranges", "Randomization ranges from match summaries");
  add_common(ranges);
  ranges->add_option("summaries", ranges_args.summaries, "Match summary JSON files")->required();
  ranges->add_option("--step-kp", ranges_args.step_kp, "Kp rounding step");
  ranges->add_option("--step-kd", ranges_args.step_kd, "Kd rounding step");
  ranges->add_option("--margin", ranges_args.margin, "Margin factor (>= 1)");
  ranges->add_option("--kp-nominal", ranges_args.kp_nominal, "Override Kp nominal");
  ranges->add_option("--kd-nominal", ranges_args.kd_nominal, "Override Kd nominal");
  ranges->add_option("--kp-half-range", ranges_args.kp_half, "Override Kp half-range");
  ranges->add_option("--kd-half-range", ranges_args.kd_half, "Override Kd half-range");

  bool self_test = false;
  auto* widen = app.add_subcommand("widen", "Append a zero-weight input to a first layer");
  add_common(widen);
  widen->add_option("--in", in_path, "Weight interchange file")->required();
  widen->add_flag("--self-test", self_test, "Check preservation on random inputs");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(config, seed, out_path);
    if (estimate->parsed()) return cmd_estimate(config, in_path, window, overlap, out_path);
    if (bode->parsed()) return cmd_bode(config, out_path);
    if (match->parsed()) return cmd_match(config, reference, seed, workers, out_path);
    if (ranges->parsed()) {
      ranges_args.config = config;
      ranges_args.out = out_path;
      return cmd_ranges(ranges_args, err);
    }
    if (widen->parsed()) return cmd_widen(in_path, out_path, self_test, seed, err);
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::logic_error& e) {
    // ValidationError, out_of_range and domain_error.
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitValidation;
}

}  // namespace impmatch::cli
