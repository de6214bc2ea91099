#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swing/contracts.hpp"
#include "swing/market_model.hpp"
#include "swing/trainer.hpp"

namespace swing {

// Full experiment description: market model, contract, training, valuation
// and baseline settings, plus which schemes to run. Serializes to JSON with
// nested sections; named presets cover the standard configurations.
struct ExperimentConfig {
  // model section
  int d = 1;
  std::vector<double> alpha{4.0};
  std::vector<double> sigma{0.7};
  double rho_offdiag = 0.0;        // pairwise correlation unless rho_flat given
  std::vector<double> rho_flat;    // optional d*d row-major correlation matrix
  double forward_price = 20.0;     // flat curve F(0, t_k)
  std::vector<double> forward_curve;  // optional, n+1 values, overrides flat
  double horizon_years = 1.0;      // T; uniform grid t_k = k T / n
  std::vector<double> time_grid;   // optional custom grid, n+1 entries
  int n = 30;

  // contract section
  std::string contract_kind = "take_or_pay";  // or "penalty"
  double strike = 20.0;
  int q_min = 0, q_max = 1;
  int Q_min = 20, Q_max = 25;         // firm bounds (take_or_pay)
  double A = 1.0, B = 1.0;            // penalty slopes
  double Q_A = 20.0, Q_B = 25.0;      // penalty thresholds

  TrainConfig training;

  // valuation section
  std::int64_t valuation_paths = 2'000'000;
  std::uint64_t valuation_seed = 0;

  // ls section
  std::int64_t ls_paths = 100'000;
  int ls_degree = 2;
  bool ls_include_spot = true;

  std::vector<std::string> schemes{"SMAG"};  // subset of SMAG, EW, UW, LS
  std::string output_dir = "out";
  std::string config_id = "run";

  // Contract presets: base, contract1, contract2, contract3, benchmark,
  // penalty. Model presets: one-factor, three-factor.
  void apply_contract_preset(const std::string& name);
  void apply_model_preset(const std::string& name);

  std::vector<std::string> validate() const;
  void ensure_valid() const;

  FactorModel build_model() const;
  ContractSpec build_contract() const;
};

std::string config_to_json(const ExperimentConfig& cfg);             // pretty-printed
ExperimentConfig config_from_json(const std::string& text);          // throws on bad input
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

// "section.key=value" override applied on top of a config's JSON form.
// Values parse as JSON scalars when possible, else as strings.
void apply_override(std::string& json_text, const std::string& assignment);

}  // namespace swing
