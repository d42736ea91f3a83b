#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "menuabc/config.hpp"
#include "menuabc/study.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::int64_t seed = -1;
  std::int64_t workers = -1;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool config_required) {
  auto* config = cmd->add_option("--config", opts.config_path, "Run configuration JSON");
  if (config_required) config->required();
  cmd->add_option("--seed", opts.seed, "Override the master seed");
  cmd->add_option("--workers", opts.workers, "Override the worker count");
  cmd->add_option("--out", opts.out_dir, "Override the output directory");
}

menuabc::RunConfig load(const CommonOptions& opts) {
  menuabc::RunConfig cfg = menuabc::load_config(opts.config_path);
  if (opts.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.workers > 0) cfg.budgets.workers = static_cast<std::size_t>(opts.workers);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Likelihood-free (BOLFI) inference for a computationally rational "
               "menu-search model"};
  app.require_subcommand(1);

  CommonOptions simulate_opts, infer_opts, reject_opts;
  std::string report_dir;

  auto* simulate =
      app.add_subcommand("simulate", "Train and simulate at the configured ground truth");
  add_common(simulate, simulate_opts, true);

  auto* infer = app.add_subcommand("infer", "Run the BOLFI inference loop");
  add_common(infer, infer_opts, true);

  auto* reject = app.add_subcommand("reject", "Run the rejection-ABC baseline");
  add_common(reject, reject_opts, true);

  auto* report = app.add_subcommand("report", "Rebuild report.csv from run artifacts");
  report->add_option("--out", report_dir, "Run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return menuabc::run_simulate(load(simulate_opts));
    if (infer->parsed()) return menuabc::run_infer(load(infer_opts));
    if (reject->parsed()) return menuabc::run_reject(load(reject_opts));
    if (report->parsed()) return menuabc::run_report(report_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
