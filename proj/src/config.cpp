#include "swing/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace swing {

using nlohmann::json;

void ExperimentConfig::apply_contract_preset(const std::string& name) {
  if (name == "base" || name == "contract1" || name == "contract2" || name == "contract3") {
    contract_kind = "take_or_pay";
    strike = 20.0;
    q_min = 0;
    q_max = 1;
    Q_min = 20;
    Q_max = 25;
    n = 30;
    forward_price = 20.0;
    if (name == "contract1") strike = 19.0;
    if (name == "contract2") Q_min = 15;
    if (name == "contract3") Q_min = 0;
    return;
  }
  if (name == "benchmark") {
    contract_kind = "take_or_pay";
    strike = 20.0;
    q_min = 0;
    q_max = 6;
    Q_min = 140;
    Q_max = 200;
    n = 365;
    forward_price = 20.0;
    return;
  }
  if (name == "penalty") {
    contract_kind = "penalty";
    strike = 20.0;
    q_min = 0;
    q_max = 1;
    n = 30;
    forward_price = 20.0;
    A = 1.0;
    B = 1.0;
    Q_A = 20.0;
    Q_B = 25.0;
    return;
  }
  throw std::invalid_argument("unknown contract preset: " + name);
}

void ExperimentConfig::apply_model_preset(const std::string& name) {
  if (name == "one-factor") {
    d = 1;
    alpha = {4.0};
    sigma = {0.7};
    rho_offdiag = 0.0;
    rho_flat.clear();
    return;
  }
  if (name == "three-factor") {
    d = 3;
    alpha = {3.0, 3.0, 3.0};
    sigma = {0.25, 0.25, 0.25};
    rho_offdiag = 0.3;
    rho_flat.clear();
    return;
  }
  throw std::invalid_argument("unknown model preset: " + name);
}

FactorModel ExperimentConfig::build_model() const {
  FactorModel m;
  m.d = d;
  m.alpha = Eigen::Map<const Eigen::VectorXd>(alpha.data(), Eigen::Index(alpha.size()));
  m.sigma = Eigen::Map<const Eigen::VectorXd>(sigma.data(), Eigen::Index(sigma.size()));
  if (!rho_flat.empty()) {
    if (rho_flat.size() != std::size_t(d) * std::size_t(d))
      throw std::invalid_argument("rho must have d*d entries");
    m.rho = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>(rho_flat.data(), d, d);
  } else {
    m.rho = Eigen::MatrixXd::Constant(d, d, rho_offdiag);
    m.rho.diagonal().setOnes();
  }
  if (!time_grid.empty()) {
    m.time_grid = time_grid;
  } else {
    m.time_grid.resize(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k)
      m.time_grid[std::size_t(k)] = horizon_years * double(k) / double(n);
  }
  if (!forward_curve.empty()) {
    m.forward = forward_curve;
  } else {
    m.forward.assign(m.time_grid.size(), forward_price);
  }
  return m;
}

ContractSpec ExperimentConfig::build_contract() const {
  ContractSpec c;
  if (contract_kind == "take_or_pay")
    c.kind = ContractKind::TakeOrPay;
  else if (contract_kind == "penalty")
    c.kind = ContractKind::Penalty;
  else
    throw std::invalid_argument("unknown contract kind: " + contract_kind);
  c.strike = strike;
  c.A = A;
  c.B = B;
  c.Q_A = Q_A;
  c.Q_B = Q_B;
  c.volume = VolumeConstraints{q_min, q_max, Q_min, Q_max, n,
                               c.kind == ContractKind::TakeOrPay};
  return c;
}

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> v;
  if (d < 1) v.push_back("model.d must be >= 1");
  if (alpha.size() != std::size_t(d)) v.push_back("model.alpha needs d entries");
  if (sigma.size() != std::size_t(d)) v.push_back("model.sigma needs d entries");
  if (!rho_flat.empty() && rho_flat.size() != std::size_t(d) * std::size_t(d))
    v.push_back("model.rho needs d*d entries");
  if (n < 1) v.push_back("model.n must be >= 1");
  if (!(horizon_years > 0) && time_grid.empty())
    v.push_back("model.T must be > 0");
  if (!time_grid.empty() && time_grid.size() != std::size_t(n) + 1)
    v.push_back("model.time_grid needs n+1 entries");
  if (!forward_curve.empty() && forward_curve.size() != std::size_t(n) + 1)
    v.push_back("model.forward_curve needs n+1 entries");
  if (contract_kind != "take_or_pay" && contract_kind != "penalty")
    v.push_back("contract.kind must be take_or_pay or penalty");
  if (v.empty()) {
    // Deep checks only once shapes are sane.
    for (const auto& s : build_model().validate()) v.push_back("model: " + s);
    for (const auto& s : build_contract().validate()) v.push_back("contract: " + s);
  }
  for (const auto& s : training.validate()) v.push_back("training: " + s);
  if (valuation_paths < 2) v.push_back("valuation.paths must be >= 2");
  if (ls_paths < 1) v.push_back("ls.paths must be >= 1");
  if (ls_degree < 0 || ls_degree > 2) v.push_back("ls.degree must be 0, 1 or 2");
  if (schemes.empty()) v.push_back("schemes must name at least one of SMAG, EW, UW, LS");
  const std::set<std::string> known{"SMAG", "EW", "UW", "LS"};
  for (const auto& s : schemes)
    if (!known.count(s)) v.push_back("unknown scheme: " + s);
  if (output_dir.empty()) v.push_back("output_dir must not be empty");
  if (config_id.empty()) v.push_back("config_id must not be empty");
  return v;
}

void ExperimentConfig::ensure_valid() const {
  auto v = validate();
  if (v.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& s : v) msg += "\n  - " + s;
  throw std::invalid_argument(msg);
}

namespace {

std::string mode_name(TrainMode m) { return m == TrainMode::Sequential ? "sequential" : "sweep"; }

TrainMode parse_mode(const std::string& s) {
  if (s == "sequential") return TrainMode::Sequential;
  if (s == "sweep") return TrainMode::Sweep;
  throw std::invalid_argument("training.mode must be sequential or sweep");
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["model"] = {{"d", c.d},
                {"alpha", c.alpha},
                {"sigma", c.sigma},
                {"rho_offdiag", c.rho_offdiag},
                {"forward_price", c.forward_price},
                {"T", c.horizon_years},
                {"n", c.n}};
  if (!c.rho_flat.empty()) j["model"]["rho"] = c.rho_flat;
  if (!c.forward_curve.empty()) j["model"]["forward_curve"] = c.forward_curve;
  if (!c.time_grid.empty()) j["model"]["time_grid"] = c.time_grid;
  j["contract"] = {{"kind", c.contract_kind}, {"strike", c.strike}, {"q_min", c.q_min},
                   {"q_max", c.q_max},        {"Q_min", c.Q_min},   {"Q_max", c.Q_max},
                   {"A", c.A},                {"B", c.B},           {"Q_A", c.Q_A},
                   {"Q_B", c.Q_B}};
  j["training"] = {{"iterations", c.training.iterations},
                   {"sweeps", c.training.sweeps},
                   {"batch_size", c.training.batch_size},
                   {"net_lr", c.training.net_lr},
                   {"weight_lr", c.training.weight_lr},
                   {"alpha", c.training.alpha},
                   {"beta", c.training.beta},
                   {"seed", c.training.seed},
                   {"mode", mode_name(c.training.mode)},
                   {"validation_paths", c.training.validation_paths},
                   {"width", c.training.width}};
  j["valuation"] = {{"paths", c.valuation_paths}, {"seed", c.valuation_seed}};
  j["ls"] = {{"paths", c.ls_paths}, {"degree", c.ls_degree}, {"include_spot", c.ls_include_spot}};
  j["schemes"] = c.schemes;
  j["output_dir"] = c.output_dir;
  j["config_id"] = c.config_id;
  return j.dump(2) + "\n";
}

namespace {

// Typos in --set overrides would otherwise vanish silently.
void reject_unknown_keys(const json& obj, const char* section,
                         std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument(std::string("unknown config key: ") + section + "." + it.key());
  }
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  reject_unknown_keys(j, "<top>",
                      {"presets", "model", "contract", "training", "valuation", "ls", "schemes",
                       "output_dir", "config_id"});
  ExperimentConfig c;
  // Presets first so explicit fields override them.
  if (j.contains("presets")) {
    const auto& p = j["presets"];
    reject_unknown_keys(p, "presets", {"model", "contract"});
    if (p.contains("model")) c.apply_model_preset(p["model"].get<std::string>());
    if (p.contains("contract")) c.apply_contract_preset(p["contract"].get<std::string>());
  }
  if (j.contains("model")) {
    const auto& m = j["model"];
    reject_unknown_keys(m, "model",
                        {"d", "alpha", "sigma", "rho_offdiag", "rho", "forward_price",
                         "forward_curve", "T", "time_grid", "n"});
    c.d = m.value("d", c.d);
    if (m.contains("alpha")) c.alpha = m["alpha"].get<std::vector<double>>();
    if (m.contains("sigma")) c.sigma = m["sigma"].get<std::vector<double>>();
    c.rho_offdiag = m.value("rho_offdiag", c.rho_offdiag);
    if (m.contains("rho")) c.rho_flat = m["rho"].get<std::vector<double>>();
    c.forward_price = m.value("forward_price", c.forward_price);
    if (m.contains("forward_curve"))
      c.forward_curve = m["forward_curve"].get<std::vector<double>>();
    c.horizon_years = m.value("T", c.horizon_years);
    if (m.contains("time_grid")) c.time_grid = m["time_grid"].get<std::vector<double>>();
    c.n = m.value("n", c.n);
  }
  if (j.contains("contract")) {
    const auto& t = j["contract"];
    reject_unknown_keys(
        t, "contract",
        {"kind", "strike", "q_min", "q_max", "Q_min", "Q_max", "A", "B", "Q_A", "Q_B"});
    c.contract_kind = t.value("kind", c.contract_kind);
    c.strike = t.value("strike", c.strike);
    c.q_min = t.value("q_min", c.q_min);
    c.q_max = t.value("q_max", c.q_max);
    c.Q_min = t.value("Q_min", c.Q_min);
    c.Q_max = t.value("Q_max", c.Q_max);
    c.A = t.value("A", c.A);
    c.B = t.value("B", c.B);
    c.Q_A = t.value("Q_A", c.Q_A);
    c.Q_B = t.value("Q_B", c.Q_B);
  }
  if (j.contains("training")) {
    const auto& t = j["training"];
    reject_unknown_keys(t, "training",
                        {"iterations", "sweeps", "batch_size", "net_lr", "weight_lr", "alpha",
                         "beta", "seed", "mode", "validation_paths", "width"});
    c.training.iterations = t.value("iterations", c.training.iterations);
    c.training.sweeps = t.value("sweeps", c.training.sweeps);
    c.training.batch_size = t.value("batch_size", c.training.batch_size);
    c.training.net_lr = t.value("net_lr", c.training.net_lr);
    c.training.weight_lr = t.value("weight_lr", c.training.weight_lr);
    c.training.alpha = t.value("alpha", c.training.alpha);
    c.training.beta = t.value("beta", c.training.beta);
    c.training.seed = t.value("seed", c.training.seed);
    if (t.contains("mode")) c.training.mode = parse_mode(t["mode"].get<std::string>());
    c.training.validation_paths = t.value("validation_paths", c.training.validation_paths);
    c.training.width = t.value("width", c.training.width);
  }
  if (j.contains("valuation")) {
    reject_unknown_keys(j["valuation"], "valuation", {"paths", "seed"});
    c.valuation_paths = j["valuation"].value("paths", c.valuation_paths);
    c.valuation_seed = j["valuation"].value("seed", c.valuation_seed);
  }
  if (j.contains("ls")) {
    reject_unknown_keys(j["ls"], "ls", {"paths", "degree", "include_spot"});
    c.ls_paths = j["ls"].value("paths", c.ls_paths);
    c.ls_degree = j["ls"].value("degree", c.ls_degree);
    c.ls_include_spot = j["ls"].value("include_spot", c.ls_include_spot);
  }
  if (j.contains("schemes")) c.schemes = j["schemes"].get<std::vector<std::string>>();
  c.output_dir = j.value("output_dir", c.output_dir);
  c.config_id = j.value("config_id", c.config_id);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << config_to_json(cfg);
}

void apply_override(std::string& json_text, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must look like section.key=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json j = json::parse(json_text);
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw std::invalid_argument("bad override path: " + path);
    if (dot == std::string::npos) {
      json parsed;
      try {
        parsed = json::parse(value);
      } catch (const json::parse_error&) {
        parsed = value;  // plain string
      }
      (*node)[key] = parsed;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
  json_text = j.dump(2) + "\n";
}

}  // namespace swing
