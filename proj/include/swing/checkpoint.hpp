#pragma once

#include <string>

#include "swing/config.hpp"
#include "swing/policy.hpp"

namespace swing {

struct Checkpoint {
  ExperimentConfig config;
  NetPolicy policy;
};

// Writes manifest.json (format version, effective config, per-date file list)
// plus one binary parameter file per trained date. Round-trips bit-exactly.
void save_checkpoint(const std::string& dir, const ExperimentConfig& config,
                     const NetPolicy& policy);

Checkpoint load_checkpoint(const std::string& dir);

}  // namespace swing
