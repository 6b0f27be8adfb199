#include <iostream>

#include <CLI11.hpp>

#include "mix/cli/config.hpp"
#include "mix/cli/pipeline.hpp"
#include "mix/error.hpp"

namespace {

mix::cli::RunConfig prepare(const std::string& path, const std::vector<std::string>& overrides) {
  mix::cli::RunConfig cfg = path.empty() ? mix::cli::RunConfig{} : mix::cli::load_config(path);
  for (const auto& o : overrides) mix::cli::apply_override(cfg, o);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact diagonalization and induced-interaction analysis of trapped Bose-Fermi mixtures"};
  app.require_subcommand(1);

  std::string run_config, run_stages, run_out;
  std::vector<std::string> run_sets;
  auto* run = app.add_subcommand("run", "Run the analysis pipeline");
  run->add_option("config", run_config, "key = value configuration file")->check(CLI::ExistingFile);
  run->add_option("--set", run_sets, "Override a key (key=value)")->take_all();
  run->add_option("--stages", run_stages, "Comma-separated stage list");
  run->add_option("--out", run_out, "Output directory");

  std::string sweep_config, sweep_out;
  std::vector<std::string> sweep_sets, sweep_vary;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("config", sweep_config, "Template configuration file")->check(CLI::ExistingFile);
  sweep->add_option("--vary", sweep_vary, "Range key=a,b,c (repeatable; cartesian product)")->required();
  sweep->add_option("--set", sweep_sets, "Override a key (key=value)")->take_all();
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--jobs", jobs, "Parallel sweep points")->check(CLI::PositiveNumber);

  std::string check_dir;
  auto* check = app.add_subcommand("check", "Re-verify invariants on a run directory");
  check->add_option("run-dir", check_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      mix::cli::RunConfig cfg = prepare(run_config, run_sets);
      if (!run_stages.empty()) mix::cli::set_value(cfg, "stages", run_stages);
      if (!run_out.empty()) cfg.output_dir = run_out;
      const auto outcome = mix::cli::run(cfg, cfg.output_dir);
      std::cout << "completed:";
      for (const auto& s : outcome.completed) std::cout << ' ' << s;
      std::cout << "\n";
      if (!outcome.success) {
        std::cerr << "stage " << outcome.failed_stage << " failed: " << outcome.error << "\n";
        return 1;
      }
      const auto& s = outcome.summary;
      if (s.contains("solve")) {
        std::cout << "E = " << s["solve"]["energy"].get<double>() << "  E_kin = " << s["solve"]["E_kin"].get<double>()
                  << "  E_int = " << s["solve"]["E_int"].get<double>() << "\n";
      }
      if (s.contains("verdict")) std::cout << "entanglement: " << s["verdict"].get<std::string>() << "\n";
      std::cout << "results in " << cfg.output_dir << "\n";
      return 0;
    }
    if (*sweep) {
      mix::cli::RunConfig cfg = prepare(sweep_config, sweep_sets);
      if (!sweep_out.empty()) cfg.output_dir = sweep_out;
      std::vector<mix::cli::SweepAxis> axes;
      for (const auto& v : sweep_vary) axes.push_back(mix::cli::parse_axis(v));
      const auto outcome = mix::cli::sweep(cfg, axes, cfg.output_dir, jobs);
      std::cout << outcome.points << " points, " << outcome.failures << " failed; table in " << cfg.output_dir
                << "/sweep.csv\n";
      return outcome.failures == 0 ? 0 : 1;
    }
    if (*check) {
      bool ok = true;
      for (const auto& item : mix::cli::check_run(check_dir)) {
        std::cout << (item.pass ? "PASS  " : "FAIL  ") << item.name << "  (" << item.detail << ")\n";
        ok = ok && item.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const mix::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
