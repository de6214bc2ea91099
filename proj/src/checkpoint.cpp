#include "swing/checkpoint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace swing {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'S', 'W', 'N', 'E', 'T', '0', '1', '\0'};

std::string net_filename(int date) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "net_%04d.bin", date);
  return buf;
}

void write_net(const fs::path& path, const MultitaskNet& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint file: " + path.string());
  const Eigen::VectorXd params = net.pack();
  const Eigen::VectorXd stats = net.pack_running_stats();
  const std::int32_t kind = net.kind() == MultitaskNet::Kind::Multitask ? 0 : 1;
  const std::int32_t d = net.input_dim(), tasks = net.task_count(), width = net.width();
  const std::int64_t np = params.size(), ns = stats.size();
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&kind), sizeof kind);
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&tasks), sizeof tasks);
  out.write(reinterpret_cast<const char*>(&width), sizeof width);
  out.write(reinterpret_cast<const char*>(&np), sizeof np);
  out.write(reinterpret_cast<const char*>(&ns), sizeof ns);
  out.write(reinterpret_cast<const char*>(params.data()), np * std::int64_t(sizeof(double)));
  out.write(reinterpret_cast<const char*>(stats.data()), ns * std::int64_t(sizeof(double)));
  if (!out) throw std::runtime_error("short write on checkpoint file: " + path.string());
}

MultitaskNet read_net(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint file: " + path.string());
  char magic[8];
  std::int32_t kind = 0, d = 0, tasks = 0, width = 0;
  std::int64_t np = 0, ns = 0;
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("bad checkpoint magic in " + path.string());
  in.read(reinterpret_cast<char*>(&kind), sizeof kind);
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  in.read(reinterpret_cast<char*>(&tasks), sizeof tasks);
  in.read(reinterpret_cast<char*>(&width), sizeof width);
  in.read(reinterpret_cast<char*>(&np), sizeof np);
  in.read(reinterpret_cast<char*>(&ns), sizeof ns);
  if (!in) throw std::runtime_error("truncated checkpoint header in " + path.string());
  MultitaskNet net(kind == 0 ? MultitaskNet::Kind::Multitask : MultitaskNet::Kind::Scalar, d,
                   tasks, width);
  if (np != net.param_count())
    throw std::runtime_error("checkpoint parameter count mismatch in " + path.string());
  Eigen::VectorXd params(np), stats(ns);
  in.read(reinterpret_cast<char*>(params.data()), np * std::int64_t(sizeof(double)));
  in.read(reinterpret_cast<char*>(stats.data()), ns * std::int64_t(sizeof(double)));
  if (!in) throw std::runtime_error("truncated checkpoint payload in " + path.string());
  net.unpack(params);
  net.unpack_running_stats(stats);
  return net;
}

}  // namespace

void save_checkpoint(const std::string& dir, const ExperimentConfig& config,
                     const NetPolicy& policy) {
  fs::create_directories(dir);
  json manifest;
  manifest["format_version"] = 1;
  manifest["config"] = json::parse(config_to_json(config));
  json nets = json::array();
  for (int k = 0; k < policy.dates(); ++k) {
    if (!policy.nets[std::size_t(k)].has_value()) continue;
    const MultitaskNet& net = *policy.nets[std::size_t(k)];
    const std::string file = net_filename(k);
    write_net(fs::path(dir) / file, net);
    nets.push_back({{"date", k},
                    {"kind", net.kind() == MultitaskNet::Kind::Multitask ? "multitask" : "scalar"},
                    {"tasks", net.task_count()},
                    {"file", file}});
  }
  manifest["nets"] = nets;
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& dir) {
  const fs::path mpath = fs::path(dir) / "manifest.json";
  std::ifstream in(mpath);
  if (!in) throw std::runtime_error("no checkpoint manifest at " + mpath.string());
  json manifest = json::parse(in);
  if (manifest.value("format_version", 0) != 1)
    throw std::runtime_error("unsupported checkpoint format version in " + mpath.string());
  ExperimentConfig config = config_from_json(manifest["config"].dump());
  ContractSpec spec = config.build_contract();
  spec.ensure_valid();
  Checkpoint ck{config, NetPolicy(QGrid(spec.volume), spec.volume)};
  for (const auto& entry : manifest["nets"]) {
    const int date = entry["date"].get<int>();
    if (date < 0 || date >= ck.policy.dates())
      throw std::runtime_error("checkpoint date out of range: " + std::to_string(date));
    MultitaskNet net = read_net(fs::path(dir) / entry["file"].get<std::string>());
    const auto& levels = ck.policy.grid().nontrivial_levels(date);
    if (net.task_count() != int(levels.size()))
      throw std::runtime_error("checkpoint head count disagrees with constraints at date " +
                               std::to_string(date));
    ck.policy.nets[std::size_t(date)].emplace(std::move(net));
  }
  return ck;
}

}  // namespace swing
