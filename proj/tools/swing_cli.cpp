#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swing/checkpoint.hpp"
#include "swing/config.hpp"
#include "swing/csv.hpp"
#include "swing/ls.hpp"
#include "swing/trainer.hpp"
#include "swing/valuation.hpp"

namespace fs = std::filesystem;
using namespace swing;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string contract_preset;
  std::string model_preset;
  std::vector<std::string> overrides;
  std::string output_dir;  // overrides config when set
  std::string config_id;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--preset", o.contract_preset,
                  "contract preset: base, contract1..3, benchmark, penalty");
  cmd->add_option("--model-preset", o.model_preset, "model preset: one-factor, three-factor");
  cmd->add_option("--set", o.overrides, "override, e.g. training.iterations=50")
      ->take_all();
  cmd->add_option("--output", o.output_dir, "output directory");
  cmd->add_option("--id", o.config_id, "run identifier for artifact names");
}

// file < presets < --set < direct flags, so later sources win.
ExperimentConfig resolve_config(const CommonOpts& o) {
  ExperimentConfig cfg;
  std::string text = "{}";
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::runtime_error("cannot read config file: " + o.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  cfg = config_from_json(text);
  if (!o.model_preset.empty()) cfg.apply_model_preset(o.model_preset);
  if (!o.contract_preset.empty()) cfg.apply_contract_preset(o.contract_preset);
  if (!o.overrides.empty()) {
    std::string t = config_to_json(cfg);
    for (const auto& ov : o.overrides) apply_override(t, ov);
    cfg = config_from_json(t);
  }
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  if (!o.config_id.empty()) cfg.config_id = o.config_id;
  return cfg;
}

void echo_effective_config(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  save_config(cfg, (fs::path(cfg.output_dir) / (cfg.config_id + "_config.json")).string());
}

std::string itos64(std::int64_t v) { return std::to_string(v); }

CsvTable price_table() {
  CsvTable t;
  t.comments = {"swing-price-table-v1"};
  t.header = {"config_id", "scheme", "price",    "stderr", "ci_low",
              "ci_high",   "M",      "seed",     "wall_seconds"};
  return t;
}

void add_price_row(CsvTable& t, const std::string& id, const std::string& scheme,
                   const ValuationResult& r) {
  t.add_row({id, scheme, format_double(r.price), format_double(r.std_error),
             format_double(r.ci_low), format_double(r.ci_high), itos64(r.paths),
             std::to_string(r.seed), format_double(r.wall_seconds)});
  std::printf("%-10s %-5s price %.6f  stderr %.6f  ci [%.6f, %.6f]  M=%lld\n", id.c_str(),
              scheme.c_str(), r.price, r.std_error, r.ci_low, r.ci_high,
              static_cast<long long>(r.paths));
}

CsvTable train_log_table() {
  CsvTable t;
  t.comments = {"swing-train-log-v1"};
  t.header = {"iteration",  "date_index", "loss_mean", "loss_min",       "loss_max",
              "w_mean",     "w_min",      "w_max",     "w_sum",          "global_loss",
              "grad_norm_mean", "snapshot_price", "ci_low", "ci_high"};
  return t;
}

void add_log_rows(CsvTable& t, const std::vector<TrainLogRow>& log) {
  for (const auto& r : log)
    t.add_row({std::to_string(r.iteration), std::to_string(r.date), format_double(r.loss_mean),
               format_double(r.loss_min), format_double(r.loss_max), format_double(r.w_mean),
               format_double(r.w_min), format_double(r.w_max), format_double(r.w_sum),
               format_double(r.global_loss), format_double(r.grad_norm_mean),
               format_double(r.snapshot_price), format_double(r.snapshot_ci_low),
               format_double(r.snapshot_ci_high)});
}

// Trains one non-LS scheme, saves its checkpoint and log, returns the policy.
NetPolicy train_one(const ExperimentConfig& cfg, const std::string& scheme) {
  ExperimentConfig run = cfg;
  run.schemes = {scheme};
  run.training.scheme = parse_scheme(scheme);
  const FactorModel model = run.build_model();
  const ContractSpec spec = run.build_contract();
  std::printf("training %s (%s mode)...\n", scheme.c_str(),
              run.training.mode == TrainMode::Sequential ? "sequential" : "sweep");
  TrainResult res = train_policy(model, spec, run.training);
  const fs::path dir = fs::path(run.output_dir) / (run.config_id + "_" + scheme);
  save_checkpoint(dir.string(), run, res.policy);
  CsvTable log = train_log_table();
  add_log_rows(log, res.log);
  log.write((fs::path(run.output_dir) / (run.config_id + "_" + scheme + "_train_log.csv"))
                .string());
  return std::move(res.policy);
}

int cmd_validate(const CommonOpts& o) {
  ExperimentConfig cfg = resolve_config(o);
  const auto findings = cfg.validate();
  if (findings.empty()) {
    std::printf("config ok: %s\n", cfg.config_id.c_str());
    return 0;
  }
  std::fprintf(stderr, "invalid config (%zu findings):\n", findings.size());
  for (const auto& f : findings) std::fprintf(stderr, "  - %s\n", f.c_str());
  return 1;
}

int cmd_train(const CommonOpts& o) {
  ExperimentConfig cfg = resolve_config(o);
  cfg.ensure_valid();
  echo_effective_config(cfg);
  for (const auto& scheme : cfg.schemes) {
    if (scheme == "LS") {
      std::fprintf(stderr, "note: LS is regression-fitted, not trained; use compare\n");
      continue;
    }
    train_one(cfg, scheme);
  }
  return 0;
}

int cmd_price(const CommonOpts& o, const std::string& checkpoint_dir, std::int64_t M_override,
              std::uint64_t seed_override, bool seed_set) {
  Checkpoint ck = load_checkpoint(checkpoint_dir);
  ExperimentConfig cfg = ck.config;
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  if (!o.config_id.empty()) cfg.config_id = o.config_id;
  const std::int64_t M = M_override > 0 ? M_override : cfg.valuation_paths;
  const std::uint64_t seed = seed_set ? seed_override : cfg.valuation_seed;
  const FactorModel model = cfg.build_model();
  const ContractSpec spec = cfg.build_contract();
  QGrid grid(spec.volume);
  ValuationResult r = evaluate_policy(ck.policy, model, spec, grid, M, seed);
  fs::create_directories(cfg.output_dir);
  CsvTable t = price_table();
  const std::string scheme = cfg.schemes.empty() ? "SMAG" : cfg.schemes.front();
  add_price_row(t, cfg.config_id, scheme, r);
  t.write((fs::path(cfg.output_dir) / (cfg.config_id + "_price.csv")).string());
  return 0;
}

int cmd_compare(const CommonOpts& o) {
  ExperimentConfig cfg = resolve_config(o);
  cfg.ensure_valid();
  echo_effective_config(cfg);
  const FactorModel model = cfg.build_model();
  const ContractSpec spec = cfg.build_contract();
  QGrid grid(spec.volume);
  CsvTable t = price_table();
  for (const auto& scheme : cfg.schemes) {
    if (scheme == "LS") {
      LSBasis basis{cfg.ls_degree, cfg.ls_include_spot};
      std::printf("fitting LS (%lld paths)...\n", static_cast<long long>(cfg.ls_paths));
      LSFitResult fit = fit_ls(model, spec, cfg.ls_paths, basis, cfg.training.seed);
      for (const auto& w : fit.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      ValuationResult r =
          evaluate_policy(fit.policy, model, spec, grid, cfg.valuation_paths, cfg.valuation_seed);
      add_price_row(t, cfg.config_id, "LS", r);
      continue;
    }
    NetPolicy policy = train_one(cfg, scheme);
    ValuationResult r =
        evaluate_policy(policy, model, spec, grid, cfg.valuation_paths, cfg.valuation_seed);
    add_price_row(t, cfg.config_id, scheme, r);
  }
  t.write((fs::path(cfg.output_dir) / (cfg.config_id + "_prices.csv")).string());
  return 0;
}

int cmd_curve(const CommonOpts& o) {
  ExperimentConfig cfg = resolve_config(o);
  cfg.training.mode = TrainMode::Sweep;  // curves are per-sweep snapshots
  cfg.ensure_valid();
  echo_effective_config(cfg);
  CsvTable t;
  t.comments = {"swing-learning-curve-v1"};
  t.header = {"iteration", "scheme", "price", "ci_low", "ci_high"};
  for (const auto& scheme : cfg.schemes) {
    if (scheme == "LS") {
      std::fprintf(stderr, "note: LS has no learning curve; skipping\n");
      continue;
    }
    ExperimentConfig run = cfg;
    run.schemes = {scheme};
    run.training.scheme = parse_scheme(scheme);
    const FactorModel model = run.build_model();
    const ContractSpec spec = run.build_contract();
    std::printf("training %s (sweep mode, %d sweeps)...\n", scheme.c_str(), run.training.sweeps);
    TrainResult res = train_policy(model, spec, run.training);
    save_checkpoint((fs::path(run.output_dir) / (run.config_id + "_" + scheme)).string(), run,
                    res.policy);
    for (const auto& row : res.log)
      if (row.date == -1)
        t.add_row({std::to_string(row.iteration), scheme, format_double(row.snapshot_price),
                   format_double(row.snapshot_ci_low), format_double(row.snapshot_ci_high)});
  }
  t.write((fs::path(cfg.output_dir) / (cfg.config_id + "_curve.csv")).string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swing contract pricing: multitask backward training, LS baseline, valuation"};
  app.require_subcommand(1);

  CommonOpts vo, to, co, uo, po;
  std::string checkpoint_dir;
  std::int64_t price_M = 0;
  std::uint64_t price_seed = 0;

  CLI::App* validate = app.add_subcommand("validate", "check a config, list all violations");
  add_common(validate, vo);

  CLI::App* train = app.add_subcommand("train", "train checkpoints for each scheme");
  add_common(train, to);

  CLI::App* price = app.add_subcommand("price", "value a trained checkpoint");
  add_common(price, po);
  price->add_option("--checkpoint", checkpoint_dir, "checkpoint directory")->required();
  price->add_option("-M,--paths", price_M, "valuation paths (overrides config)");
  CLI::Option* seed_opt = price->add_option("--seed", price_seed, "valuation seed");

  CLI::App* compare = app.add_subcommand("compare", "price every scheme incl. LS, one CSV");
  add_common(compare, co);

  CLI::App* curve = app.add_subcommand("curve", "sweep-mode learning curves per scheme");
  add_common(curve, uo);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(vo);
    if (train->parsed()) return cmd_train(to);
    if (price->parsed())
      return cmd_price(po, checkpoint_dir, price_M, price_seed, seed_opt->count() > 0);
    if (compare->parsed()) return cmd_compare(co);
    if (curve->parsed()) return cmd_curve(uo);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
