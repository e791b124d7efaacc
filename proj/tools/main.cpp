#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/svg.hpp"
#include "app/tables.hpp"
#include "bettitest/complex.hpp"
#include "bettitest/parallel.hpp"

using namespace bettitest;
using namespace bettitest::app;

namespace {

/// A preset name, or a path to a JSON distribution spec.
DistributionSpec load_distribution(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) {
    std::ifstream in(arg);
    auto spec = nlohmann::json::parse(in).get<DistributionSpec>();
    spec.validate();
    return spec;
  }
  return preset(arg);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

/// Writes via `emit` to `path`, or to stdout when path is empty.
template <typename F>
void emit_to(const std::string& path, F&& emit) {
  if (path.empty()) {
    emit(std::cout);
  } else {
    auto out = open_output(path);
    emit(out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Betti-number hypothesis tests for point clouds"};
  app.require_subcommand(1);
  app.fallthrough();
  std::size_t threads = default_thread_count();
  app.add_option("--threads", threads, "Worker threads for replications")->check(CLI::PositiveNumber);

  // sample
  auto* cmd_sample = app.add_subcommand("sample", "Draw a point cloud and write it as CSV");
  std::string dist;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string out_path;
  cmd_sample->add_option("--dist", dist, "Preset name or JSON spec file")->required();
  cmd_sample->add_option("-n", n, "Number of points")->required()->check(CLI::PositiveNumber);
  cmd_sample->add_option("--seed", seed, "Random seed");
  cmd_sample->add_option("-o,--out", out_path, "Output CSV (default stdout)");

  // betti
  auto* cmd_betti = app.add_subcommand("betti", "Betti numbers of the Rips complex of a CSV point cloud");
  std::string input;
  std::optional<double> epsilon;
  std::string regime_name = "critical";
  std::optional<std::size_t> max_dim;
  std::string scale = "per_point_norm";
  bool header = false;
  std::string json_path;
  cmd_betti->add_option("input", input, "CSV file, one point per row")->required();
  auto* eps_opt = cmd_betti->add_option("--epsilon", epsilon, "Ball radius")->check(CLI::NonNegativeNumber);
  cmd_betti->add_option("--regime", regime_name, "critical or supercritical (radius from n)")->excludes(eps_opt);
  cmd_betti->add_option("--max-dim", max_dim, "Top simplex dimension; prints beta_0..beta_{max-dim - 1}")
      ->check(CLI::PositiveNumber);
  cmd_betti->add_option("--scale", scale, "per_point_norm, none or max_norm");
  cmd_betti->add_flag("--header", header, "Skip a header row");
  cmd_betti->add_option("--json", json_path, "Also write a JSON report");

  // test-one / test-two
  std::string null_dist, x_path, y_path, quantile = "one_minus_half_alpha";
  std::vector<std::int64_t> hypothesis;
  double alpha = 0.05;
  std::size_t reps = 100;
  auto add_test_options = [&](CLI::App* c) {
    c->add_option("--null", null_dist, "Null distribution: preset name or JSON spec file")->required();
    c->add_option("--regime", regime_name, "critical or supercritical");
    c->add_option("--alpha", alpha, "Level in (0, 1)");
    c->add_option("--r", reps, "Null replications")->check(CLI::PositiveNumber);
    c->add_option("--seed", seed, "Random seed");
    c->add_option("--scale", scale, "per_point_norm, none or max_norm");
    c->add_option("--quantile", quantile, "one_minus_half_alpha or one_minus_alpha");
    c->add_flag("--header", header, "Skip a header row in the input CSVs");
    c->add_option("-o,--out", out_path, "JSON report (default stdout)");
  };
  auto* cmd_one = app.add_subcommand("test-one", "One-sample test against hypothesized Betti numbers");
  cmd_one->add_option("--input", x_path, "CSV point cloud")->required();
  cmd_one->add_option("--hyp", hypothesis, "Hypothesized Betti numbers, comma separated")
      ->required()
      ->delimiter(',');
  add_test_options(cmd_one);
  auto* cmd_two = app.add_subcommand("test-two", "Two-sample test of equal Betti numbers");
  cmd_two->add_option("--x", x_path, "First CSV point cloud")->required();
  cmd_two->add_option("--y", y_path, "Second CSV point cloud")->required();
  add_test_options(cmd_two);

  // config driven
  std::string config_path, plot_path;
  auto* cmd_power = app.add_subcommand("power", "Power curve of the Betti test from a JSON config");
  auto* cmd_baselines = app.add_subcommand("baselines", "Power curves of the permutation baselines");
  for (auto* c : {cmd_power, cmd_baselines}) {
    c->add_option("config", config_path, "Experiment config (JSON)")->required();
    c->add_option("-o,--out", out_path, "CSV output (default: config output.csv, else stdout)");
    c->add_option("--plot", plot_path, "SVG line chart of power against n");
  }
  auto* cmd_a2 = app.add_subcommand("check-a2", "Fraction of disconnected Rips complexes per n");
  cmd_a2->add_option("config", config_path, "Experiment config (JSON)")->required();
  cmd_a2->add_option("-o,--out", out_path, "CSV output (default: config output.csv, else stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_sample->parsed()) {
      const auto pc = sample(load_distribution(dist), n, seed);
      emit_to(out_path, [&](std::ostream& os) { write_point_cloud(os, pc); });
    } else if (cmd_betti->parsed()) {
      const auto pc = load_point_cloud(input, CsvOptions{header});
      const std::size_t top = max_dim.value_or(pc.dim());
      const double eps = epsilon ? *epsilon : ThresholdRule{parse_regime(regime_name), pc.dim()}.epsilon(pc.size());
      const auto scaled = apply_scaling(pc, parse_scaling_mode(scale));
      const auto betti = betti_numbers(build_rips(pairwise_distances(scaled), eps, top), top);
      for (std::size_t i = 0; i < betti.size(); ++i) std::cout << (i ? " " : "") << betti[i];
      std::cout << '\n';
      if (!json_path.empty()) {
        nlohmann::json j{{"n", pc.size()},   {"dim", pc.dim()},         {"epsilon", eps},
                         {"max_dim", top},   {"scaling", scale},        {"betti", betti}};
        open_output(json_path) << j.dump(2) << '\n';
      }
    } else if (cmd_one->parsed() || cmd_two->parsed()) {
      const auto null = sampler_for(load_distribution(null_dist));
      TestOptions options;
      options.scaling = parse_scaling_mode(scale);
      options.quantile = parse_quantile_mode(quantile);
      options.threads = threads;
      const auto x = load_point_cloud(x_path, CsvOptions{header});
      const ThresholdRule rule{parse_regime(regime_name), x.dim()};
      TestReport report;
      if (cmd_one->parsed()) {
        report = one_sample_test(x, hypothesis, rule, alpha, reps, seed, null, options);
      } else {
        const auto y = load_point_cloud(y_path, CsvOptions{header});
        if (y.dim() != x.dim()) throw LengthMismatch(x.dim(), y.dim());
        report = two_sample_test(x, y, rule, alpha, reps, seed, null, options);
      }
      emit_to(out_path, [&](std::ostream& os) { os << nlohmann::json(report).dump(2) << '\n'; });
    } else if (cmd_power->parsed() || cmd_baselines->parsed()) {
      const auto config = load_config(config_path);
      std::vector<Method> methods = config.methods;
      if (cmd_baselines->parsed()) methods = {Method::robinson, Method::landscape, Method::permutation};
      const auto rows = run_power(config, methods, threads);
      emit_to(out_path.empty() ? config.csv_path : out_path, [&](std::ostream& os) { write_power_csv(os, rows); });
      const auto svg = plot_path.empty() ? config.svg_path : plot_path;
      if (!svg.empty()) {
        auto os = open_output(svg);
        write_power_svg(os, rows, config.scenario + " (" + to_string(config.regime) + ")");
      }
    } else if (cmd_a2->parsed()) {
      const auto config = load_config(config_path);
      const auto rows = run_check_a2(config, threads);
      emit_to(out_path.empty() ? config.csv_path : out_path,
              [&](std::ostream& os) { write_disconnection_csv(os, rows); });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
