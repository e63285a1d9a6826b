#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ttosc/system.hpp"

// JSON config document and its resolution into a concrete SystemConfig.
// The document stores counts, distribution bounds and solver/training knobs;
// service parameters are drawn once from the config seed unless listed
// explicitly, so the same file always resolves to the same system.

namespace ttosc {

struct ServiceOverride {
  int data_size = 1;
  double task_mbits = 8.0;
  double task_gcycles = 0.5;
};

struct ConfigDoc {
  int cells = 5;
  int services = 20;
  int slots_per_frame = 10;
  int frames_per_episode = 20;
  std::uint64_t seed = 1;

  // Per-service draw bounds (used when explicit_services is empty).
  double task_mbits_min = 4.0, task_mbits_max = 16.0;
  double task_gcycles_min = 0.1, task_gcycles_max = 1.0;
  int data_size_min = 1, data_size_max = 4;
  std::vector<ServiceOverride> explicit_services;

  int storage_units = 8;
  double compute_gcps = 20.0;
  double inter_es_mbps = 1000.0;
  double cloud_mbps = 100.0;
  double cloud_task_gcps = 10.0;

  WorkloadParams workload;
  SolverSettings solver;
  TrainingConfig training;
};

ConfigDoc default_config();

std::string config_to_json(const ConfigDoc& doc);
ConfigDoc config_from_json(const std::string& text);
ConfigDoc load_config_file(const std::string& path);
void save_config_file(const ConfigDoc& doc, const std::string& path);

// Draws service specs from the seed, builds the network matrices and
// validates the result. Throws ConfigError on inconsistent documents.
SystemConfig resolve_config(const ConfigDoc& doc);

}  // namespace ttosc
